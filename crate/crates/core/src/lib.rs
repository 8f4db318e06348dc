//! Deformation spaces of Delaunay triangulations.
//!
//! The pieces, roughly bottom up:
//!
//! - [`complex`]: oriented triangulated surfaces (disk, sphere, torus) as
//!   pure combinatorics, with torus faces carrying lattice lifts.
//! - [`angles`]: angle structures on a complex and the edge invariant that
//!   classifies them up to fiber.
//! - [`lobachevsky`]: the Lobachevsky function and the concave volume
//!   energy whose maximizer singles out one structure per fiber.
//! - [`varopt`]: the fiber solver (LP feasibility + reduced Newton).
//! - [`layout`]: planar realizations, Delaunay defects, development of an
//!   angle structure into the plane.
//! - [`sphere`]: inscribed triangulations, stereographic transfer, poses.
//! - [`morph`]: Delaunay-preserving paths between realizations.
//! - [`disconnection`]: sweep certificates that two deformation spaces with
//!   fixed boundary data can be disconnected.
//! - [`gen`]: seeded random instances; [`io`]: file formats and exporters.
//!
//! Everything is deterministic: no hash-order iteration feeds any output,
//! and random generation is seeded explicitly.

pub mod angles;
pub mod complex;
pub mod disconnection;
pub mod error;
pub mod gen;
pub mod geom;
pub mod io;
pub mod layout;
mod linalg;
pub mod lobachevsky;
pub mod morph;
mod par;
pub mod sphere;
pub mod varopt;

pub use angles::{edge_invariant, equilateral, in_a0, in_fiber, AngleStructure, EdgeInvariant};
pub use complex::{build_complex, build_torus_complex, remove_open_star, SurfaceKind, TriComplex};
pub use disconnection::{
    rectangle_sweep, torus_sweep, RectangleFamily, SeparatorPoint, SweepReport, TorusFamily,
    TorusTriangulation, Verdict, Witness,
};
pub use error::{Error, Result};
pub use io::{
    export_heatmap_svg, export_obj, export_svg, from_json, load_realization, save_realization,
    to_json, RealizedTriangulation, SvgOptions,
};
pub use layout::{develop, in_ae, Development, PlanarTriangulation};
pub use lobachevsky::{energy, face_volume, lobachevsky, EnergyReport};
pub use morph::{morph_polygon, morph_sphere, morph_sphere_origin, MorphPath, MorphSample, Realization};
pub use sphere::{
    lift_to_sphere, normalize_pose, project_to_plane, stereo, stereo_inv, Rotation,
    SphericalTriangulation,
};
pub use varopt::{
    fiber_dimension, fiber_directions, find_feasible, maximize, maximize_warm, FiberProblem,
    FiberSolver, SolveResult, SolveStatus,
};
