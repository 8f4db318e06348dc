//! Random strictly Delaunay instances for tests, demos, and sweeps.
//!
//! Points are drawn in the unit disk, triangulated by incremental insertion,
//! and the result is accepted only when it clears genericity gates: pairwise
//! separation, a floor on every Delaunay defect, non-sliver faces, and a
//! strictly convex hull. Rejected draws advance to a derived seed, so every
//! instance is a pure function of (n, seed).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::complex::build_complex;
use crate::error::{Error, Result};
use crate::geom::*;
use crate::layout::{power_of_point, PlanarTriangulation};
use crate::sphere::{lift_to_sphere, SphericalTriangulation};

/// The project-wide deterministic generator.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Defect floor a generated instance must clear on every inner edge. Far
/// above the strictness margin so downstream perturbations stay Delaunay.
pub const GEN_MIN_DEFECT: f64 = 1e-3;

/// Pairwise separation of generated points, in units of 1/sqrt(n).
const SEPARATION: f64 = 0.7;

/// Hull corners must turn by at least this much (no straight or reflex
/// boundary vertices, so boundary angle sums stay strictly inside (0, pi)).
const HULL_ANGLE_GAP: f64 = 1e-2;

/// Face area floor, as a fraction of diameter squared.
const AREA_FRAC: f64 = 1e-6;

/// Delaunay triangulation of a planar point set by incremental insertion
/// into a super triangle. Returns counterclockwise faces indexing into
/// `points`. Near-degenerate sets can fail validation downstream; callers
/// that need robustness should gate and redraw.
pub fn delaunay_faces(points: &[Vec2]) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("{n} points cannot form a face")));
    }
    let spread = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let big = 64.0 * spread;
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.push([-big, -big]);
    pts.push([big, -big]);
    pts.push([0.0, big]);

    let mut tris: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    for p in 0..n {
        let q = pts[p];
        let mut bad = Vec::new();
        for (i, t) in tris.iter().enumerate() {
            let [a, b, c] = t.map(|v| pts[v]);
            if power_of_point(q, a, b, c)? < 0.0 {
                bad.push(i);
            }
        }
        if bad.is_empty() {
            return Err(Error::InvalidInput(format!(
                "point {p} lands in no circumcircle; duplicate or degenerate input"
            )));
        }
        // Directed cavity boundary: edges of bad triangles whose reverse is
        // not itself a bad-triangle edge. Refilling from those keeps faces
        // counterclockwise.
        let mut dir_edges = Vec::new();
        for &i in &bad {
            let [a, b, c] = tris[i];
            dir_edges.extend_from_slice(&[(a, b), (b, c), (c, a)]);
        }
        let mut fresh = Vec::new();
        for &(u, w) in &dir_edges {
            if !dir_edges.contains(&(w, u)) {
                fresh.push([u, w, p]);
            }
        }
        for &i in bad.iter().rev() {
            tris.swap_remove(i);
        }
        tris.extend(fresh);
    }
    tris.retain(|t| t.iter().all(|&v| v < n));

    let mut seen = vec![false; n];
    for t in &tris {
        for &v in t {
            seen[v] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidInput(
            "a point is in no face; degenerate input".into(),
        ));
    }
    Ok(tris)
}

/// n points in the unit disk with pairwise separation SEPARATION / sqrt(n),
/// by dart throwing. None when the draw stalls.
fn separated_points(n: usize, r: &mut ChaCha8Rng) -> Option<Vec<Vec2>> {
    let sep2 = (SEPARATION / (n as f64).sqrt()).powi(2);
    let mut pts: Vec<Vec2> = Vec::with_capacity(n);
    for _ in 0..400 * n {
        let rad = r.gen_range(0.0..1.0_f64).sqrt();
        let ang = r.gen_range(0.0..std::f64::consts::TAU);
        let p = [rad * ang.cos(), rad * ang.sin()];
        if pts.iter().all(|q| dist2(p, *q).powi(2) >= sep2) {
            pts.push(p);
            if pts.len() == n {
                return Some(pts);
            }
        }
    }
    None
}

fn gates_pass(tri: &PlanarTriangulation) -> bool {
    if tri.min_defect() < GEN_MIN_DEFECT {
        return false;
    }
    let diam2 = tri.diameter().powi(2);
    for face in tri.complex.faces() {
        let [a, b, c] = face.map(|v| tri.positions[v]);
        if cross2(sub2(b, a), sub2(c, a)) < 2.0 * AREA_FRAC * diam2 {
            return false;
        }
    }
    let theta = tri.angles();
    for &v in tri.complex.boundary_vertices() {
        let sum: f64 = tri
            .complex
            .corners_around(v)
            .iter()
            .map(|&(f, s)| theta.corner(f, s))
            .sum();
        if !(HULL_ANGLE_GAP..=std::f64::consts::PI - HULL_ANGLE_GAP).contains(&sum) {
            return false;
        }
    }
    true
}

/// A random strictly Delaunay triangulation of n points in the unit disk,
/// deterministic in (n, seed). Every inner edge clears GEN_MIN_DEFECT and
/// the hull is strictly convex, so the instance is safely inside the open
/// Delaunay region.
pub fn random_delaunay_disk(n: usize, seed: u64) -> Result<PlanarTriangulation> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("{n} points cannot form a face")));
    }
    for attempt in 0..200u64 {
        let mut r = rng(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let Some(pts) = separated_points(n, &mut r) else {
            continue;
        };
        let Ok(faces) = delaunay_faces(&pts) else {
            continue;
        };
        let Ok(complex) = build_complex(faces) else {
            continue;
        };
        let Ok(tri) = PlanarTriangulation::new(complex, pts) else {
            continue;
        };
        if gates_pass(&tri) {
            return Ok(tri);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no admissible disk instance with {n} points from seed {seed}"
    )))
}

/// A random strictly Delaunay inscribed triangulation containing the origin:
/// the lift of a random disk instance. The pole vertex has the highest
/// index, so the instance has n + 1 vertices.
pub fn random_sphere(n: usize, seed: u64) -> Result<SphericalTriangulation> {
    for attempt in 0..50u64 {
        let inner = seed.wrapping_add(attempt.wrapping_mul(0x517c_c1b7_2722_0a95));
        let Ok(tri) = random_delaunay_disk(n, inner) else {
            continue;
        };
        let Ok(lift) = lift_to_sphere(&tri) else {
            continue;
        };
        if lift.is_delaunay() && lift.origin_inside() {
            return Ok(lift);
        }
    }
    Err(Error::GenerationFailed(format!(
        "no admissible sphere instance with {n} points from seed {seed}"
    )))
}
