use thiserror::Error;

use crate::complex::SurfaceKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("face list is not a manifold triangulation: {0}")]
    NonManifold(String),
    #[error("face list is not orientable")]
    NonOrientable,
    #[error("operation needs a {expected} complex, got {found:?}")]
    WrongSurfaceKind {
        expected: &'static str,
        found: SurfaceKind,
    },
    #[error("face list repeats vertices within a face; quotient complexes need lift data")]
    LiftsRequired,
    #[error("vertex {0} is not incident to the given cell")]
    NotIncident(usize),
    #[error("vertex {0} lies on the boundary")]
    BoundaryVertex(usize),
    #[error("data does not match the complex: {0}")]
    MismatchedComplex(String),
    #[error("non-finite input")]
    NonFinite,
    #[error("angles ({0}, {1}, {2}) do not form a triangle")]
    NotATriangle(f64, f64, f64),
    #[error("not a valid angle structure: {0}")]
    InvalidAngleStructure(String),
    #[error("no positive angle vector satisfies the affine constraints")]
    Infeasible,
    #[error("face {0} is degenerate")]
    DegenerateFace(usize),
    #[error("edge {0} is a boundary edge")]
    BoundaryEdge(usize),
    #[error("angle vector violates positivity or interior vertex sums")]
    NotInA0,
    #[error("query point lies on a triangulation edge")]
    PointOnEdge,
    #[error("query point lies outside the triangulated region")]
    PointOutside,
    #[error("argument outside the admissible range: {0}")]
    OutOfRange(String),
    #[error("point maps through the north pole")]
    AtNorthPole,
    #[error("spherical triangle is degenerate")]
    DegenerateTriangle,
    #[error("vertex {vertex} is not at the north pole (off by {dist:.3e})")]
    VertexNotAtPole { vertex: usize, dist: f64 },
    #[error("not Delaunay: edge {edge} has defect {defect:.6e}")]
    NotDelaunay { edge: usize, defect: f64 },
    #[error("planar input is not strictly Delaunay, lift would not be convex")]
    NotStrictlyDelaunay,
    #[error("edge ({0}, {1}) degenerates under projection")]
    DegenerateEdge(usize, usize),
    #[error("the two realizations have opposite orientations")]
    OrientationMismatch,
    #[error("solver failed at sample t = {t}")]
    SolverFailure { t: f64 },
    #[error("normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("the origin is not strictly inside the polyhedron")]
    OriginNotInside,
    #[error("input realization is not strictly Delaunay")]
    NotDelaunayInput,
    #[error("sweep inconclusive: {0}")]
    InconclusiveSweep(String),
    #[error("random instance generation gave up: {0}")]
    GenerationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
