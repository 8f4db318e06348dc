//! Angle structures and their edge invariants.
//!
//! An angle structure assigns a positive angle to every corner so that each
//! face sums to pi. The edge invariant collapses it to one number per edge
//! (sum of the one or two opposite corner angles) plus one per boundary
//! vertex (its total corner angle). Fibers of this map are where all the
//! variational machinery lives: along a fiber, face sums, boundary data and
//! interior vertex angle sums are all pinned, because the interior sum at v
//! can be rewritten from the invariant alone:
//!
//!   sum of corner angles at v = (corners at v) * pi - sum over incident
//!   edges of (multiplicity of v in e) * invariant(e)
//!
//! where a loop edge at v counts twice.

use serde::{Deserialize, Serialize};

use crate::complex::{corner_linear, SurfaceKind, TriComplex};
use crate::error::{Error, Result};

/// Default tolerance on affine constraints (face sums, invariant matching).
pub const TOL_AFFINE: f64 = 1e-9;

/// Corner angles in corner-linear order: index 3*face + slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleStructure(pub Vec<f64>);

impl AngleStructure {
    pub fn corner(&self, f: usize, s: usize) -> f64 {
        self.0[3 * f + s]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Positive corners, every face summing to pi within tol.
    pub fn is_valid(&self, t: &TriComplex, tol: f64) -> bool {
        if self.0.len() != 3 * t.face_count() {
            return false;
        }
        if !self.0.iter().all(|&x| x.is_finite() && x > 0.0) {
            return false;
        }
        (0..t.face_count()).all(|f| {
            let s = self.corner(f, 0) + self.corner(f, 1) + self.corner(f, 2);
            (s - std::f64::consts::PI).abs() <= tol
        })
    }
}

/// Image of an angle structure under the invariant map, kept in two blocks:
/// `edges` in complex edge order, then `boundary_vertices` in ascending
/// vertex order. Solvers see the concatenation in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeInvariant {
    pub edges: Vec<f64>,
    pub boundary_vertices: Vec<f64>,
}

impl EdgeInvariant {
    pub fn len(&self) -> usize {
        self.edges.len() + self.boundary_vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn concat(&self) -> Vec<f64> {
        let mut v = self.edges.clone();
        v.extend_from_slice(&self.boundary_vertices);
        v
    }

    pub fn max_abs_diff(&self, other: &EdgeInvariant) -> f64 {
        self.edges
            .iter()
            .chain(&self.boundary_vertices)
            .zip(other.edges.iter().chain(&other.boundary_vertices))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Interpolates entrywise; the invariant map is affine, so this is the
    /// invariant of any corresponding interpolation upstairs.
    pub fn lerp(&self, other: &EdgeInvariant, t: f64) -> EdgeInvariant {
        let mix = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
        };
        EdgeInvariant {
            edges: mix(&self.edges, &other.edges),
            boundary_vertices: mix(&self.boundary_vertices, &other.boundary_vertices),
        }
    }
}

pub fn edge_invariant(t: &TriComplex, theta: &AngleStructure) -> Result<EdgeInvariant> {
    if theta.len() != 3 * t.face_count() {
        return Err(Error::MismatchedComplex(format!(
            "{} corner angles for {} faces",
            theta.len(),
            t.face_count()
        )));
    }
    let edges = (0..t.edge_count())
        .map(|e| {
            t.opposite_corners(e)
                .iter()
                .map(|&c| theta.0[corner_linear(c)])
                .sum()
        })
        .collect();
    let boundary_vertices = t
        .boundary_vertices()
        .iter()
        .map(|&v| {
            t.corners_around(v)
                .iter()
                .map(|&c| theta.0[corner_linear(c)])
                .sum()
        })
        .collect();
    Ok(EdgeInvariant {
        edges,
        boundary_vertices,
    })
}

/// True iff theta is a valid angle structure whose invariant matches alpha
/// to tol in every coordinate.
pub fn in_fiber(t: &TriComplex, theta: &AngleStructure, alpha: &EdgeInvariant, tol: f64) -> bool {
    if alpha.edges.len() != t.edge_count()
        || alpha.boundary_vertices.len() != t.boundary_vertices().len()
    {
        return false;
    }
    if !theta.is_valid(t, tol) {
        return false;
    }
    let got = edge_invariant(t, theta).expect("length checked");
    got.max_abs_diff(alpha) <= tol
}

/// True iff theta is a valid angle structure, its invariant lies in the open
/// cube (0, pi) coordinatewise, and every interior vertex angle sum is 2*pi
/// within tol. These are exactly the invariant-level constraints a flat
/// metric would impose, minus the holonomy/closing conditions.
pub fn in_a0(t: &TriComplex, theta: &AngleStructure, tol: f64) -> bool {
    if !theta.is_valid(t, tol) {
        return false;
    }
    let alpha = edge_invariant(t, theta).expect("length checked");
    if !alpha
        .edges
        .iter()
        .chain(&alpha.boundary_vertices)
        .all(|&a| a > 0.0 && a < std::f64::consts::PI)
    {
        return false;
    }
    t.interior_vertices().iter().all(|&v| {
        let s: f64 = t
            .corners_around(v)
            .iter()
            .map(|&c| theta.0[corner_linear(c)])
            .sum();
        (s - 2.0 * std::f64::consts::PI).abs() <= tol
    })
}

/// Angle sum at interior vertex v determined by the invariant alone.
pub fn vertex_angle_sum_from_alpha(t: &TriComplex, alpha: &EdgeInvariant, v: usize) -> Result<f64> {
    if t.is_boundary_vertex(v) {
        return Err(Error::BoundaryVertex(v));
    }
    if alpha.edges.len() != t.edge_count() {
        return Err(Error::MismatchedComplex(format!(
            "{} edge invariants for {} edges",
            alpha.edges.len(),
            t.edge_count()
        )));
    }
    let corners = t.degree(v) as f64;
    let mut s = corners * std::f64::consts::PI;
    for e in 0..t.edge_count() {
        let mult = t.end_multiplicity(e, v);
        if mult > 0 {
            s -= mult as f64 * alpha.edges[e];
        }
    }
    Ok(s)
}

/// Equilateral structure: every corner pi/3. An angle structure for any
/// complex; lies in A0 exactly when every interior vertex has degree 6.
pub fn equilateral(t: &TriComplex) -> AngleStructure {
    AngleStructure(vec![std::f64::consts::FRAC_PI_3; 3 * t.face_count()])
}

pub fn surface_of(t: &TriComplex) -> SurfaceKind {
    t.surface()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::*;
    use crate::complex::{build_complex, build_torus_complex};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn perturbed_structure(t: &TriComplex, rng: &mut ChaCha8Rng) -> AngleStructure {
        // Random positive angles with exact face sums: sample a simplex point
        // per face, scaled to pi, bounded away from 0.
        let mut v = Vec::with_capacity(3 * t.face_count());
        for _ in 0..t.face_count() {
            let a: f64 = rng.gen_range(0.2..1.0);
            let b: f64 = rng.gen_range(0.2..1.0);
            let c: f64 = rng.gen_range(0.2..1.0);
            let s = a + b + c;
            v.extend_from_slice(&[PI * a / s, PI * b / s, PI * c / s]);
        }
        AngleStructure(v)
    }

    #[test]
    fn invariant_blocks_have_the_right_shape() {
        let t = build_complex(wheel_faces()).unwrap();
        let theta = equilateral(&t);
        assert!(theta.is_valid(&t, 1e-12));
        let alpha = edge_invariant(&t, &theta).unwrap();
        assert_eq!(alpha.edges.len(), 12);
        assert_eq!(alpha.boundary_vertices.len(), 6);
        // Spokes see two opposite pi/3 corners, rim edges one.
        for e in 0..t.edge_count() {
            let expect = if t.is_boundary_edge(e) { PI / 3.0 } else { 2.0 * PI / 3.0 };
            assert!((alpha.edges[e] - expect).abs() < 1e-12);
        }
        for &b in &alpha.boundary_vertices {
            assert!((b - 2.0 * PI / 3.0).abs() < 1e-12);
        }
        assert!(in_fiber(&t, &theta, &alpha, TOL_AFFINE));
        assert!(in_a0(&t, &theta, TOL_AFFINE));
    }

    #[test]
    fn invariant_is_affine_in_theta() {
        let t = build_complex(octahedron_faces()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let th1 = perturbed_structure(&t, &mut rng);
            let th2 = perturbed_structure(&t, &mut rng);
            let s: f64 = rng.gen_range(0.0..1.0);
            let mix = AngleStructure(
                th1.0
                    .iter()
                    .zip(&th2.0)
                    .map(|(a, b)| (1.0 - s) * a + s * b)
                    .collect(),
            );
            let a1 = edge_invariant(&t, &th1).unwrap();
            let a2 = edge_invariant(&t, &th2).unwrap();
            let am = edge_invariant(&t, &mix).unwrap();
            let lin = a1.lerp(&a2, s);
            assert!(am.max_abs_diff(&lin) < 1e-12);
        }
    }

    #[test]
    fn fibers_are_convex() {
        // On the wheel, adding +eps/-eps to the two rim corners of every face
        // is a kernel direction of the invariant map: face sums and boundary
        // vertex sums cancel locally, and the two opposite corners of each
        // spoke pick up opposite signs. So theta and theta + d share a fiber.
        let t = build_complex(wheel_faces()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let base = perturbed_structure(&t, &mut rng);
            let alpha = edge_invariant(&t, &base).unwrap();
            let eps = 0.9 * base.0.iter().cloned().fold(f64::INFINITY, f64::min);
            let mut other = base.clone();
            for f in 0..6 {
                other.0[3 * f + 1] += eps;
                other.0[3 * f + 2] -= eps;
            }
            assert!(in_fiber(&t, &other, &alpha, 1e-9), "kernel direction left the fiber");
            for s in [0.25, 0.5, 0.75] {
                let mix = AngleStructure(
                    base.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| (1.0 - s) * a + s * b)
                        .collect(),
                );
                assert!(in_fiber(&t, &mix, &alpha, 1e-9));
            }
        }
    }

    #[test]
    fn interior_sum_identity() {
        // On any complex the interior vertex angle sum must be recoverable
        // from the invariant alone.
        let zig_faces = vec![[0usize, 0, 1], [0, 1, 1], [1, 1, 0], [1, 0, 0]];
        let zig_lifts = vec![
            [[1, 0], [-1, 0], [0, 0]],
            [[0, 0], [-1, 0], [1, 0]],
            [[1, 0], [0, 1], [-1, -1]],
            [[1, 1], [-1, 0], [0, -1]],
        ];
        let complexes = vec![
            build_complex(octahedron_faces()).unwrap(),
            build_complex(wheel_faces()).unwrap(),
            build_complex(moebius_kantor_torus()).unwrap(),
            build_torus_complex(zig_faces, zig_lifts).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for t in &complexes {
            for _ in 0..20 {
                let theta = perturbed_structure(t, &mut rng);
                let alpha = edge_invariant(t, &theta).unwrap();
                for v in t.interior_vertices() {
                    let direct: f64 = t
                        .corners_around(v)
                        .iter()
                        .map(|&c| theta.0[corner_linear(c)])
                        .sum();
                    let derived = vertex_angle_sum_from_alpha(t, &alpha, v).unwrap();
                    assert!(
                        (direct - derived).abs() < 1e-12,
                        "identity fails at v={v}: {direct} vs {derived}"
                    );
                }
            }
        }
    }

    #[test]
    fn boundary_vertex_is_rejected() {
        let t = build_complex(wheel_faces()).unwrap();
        let theta = equilateral(&t);
        let alpha = edge_invariant(&t, &theta).unwrap();
        assert!(matches!(
            vertex_angle_sum_from_alpha(&t, &alpha, 1),
            Err(Error::BoundaryVertex(1))
        ));
    }

    #[test]
    fn invalid_structures_fail_the_predicates() {
        let t = build_complex(wheel_faces()).unwrap();
        let mut theta = equilateral(&t);
        let alpha = edge_invariant(&t, &theta).unwrap();
        theta.0[0] += 1e-3; // face sum off
        assert!(!theta.is_valid(&t, TOL_AFFINE));
        assert!(!in_fiber(&t, &theta, &alpha, TOL_AFFINE));
        assert!(!in_a0(&t, &theta, TOL_AFFINE));
        let mut neg = equilateral(&t);
        neg.0[3] = -neg.0[3];
        neg.0[4] += 2.0 * std::f64::consts::FRAC_PI_3;
        assert!(!neg.is_valid(&t, TOL_AFFINE));
        assert!(matches!(
            edge_invariant(&t, &AngleStructure(vec![1.0; 5])),
            Err(Error::MismatchedComplex(_))
        ));
    }
}
