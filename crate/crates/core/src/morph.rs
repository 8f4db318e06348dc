//! Delaunay-preserving paths between realizations of one complex.
//!
//! The deformation space is parameterized by the edge invariant, so a path
//! is built by interpolating invariants on a straight line, solving for the
//! unique energy-maximizing angle structure at each sample, and developing
//! it back into the plane (or lifting it back to the sphere). Each sample is
//! certified independently: the path object records the minimum Delaunay
//! defect and the solver residual per sample rather than trusting a
//! continuity argument.
//!
//! The planar stage pins down the similarity freedom of a development by
//! interpolating an anchor frame (an edge's base point, direction, and
//! length) between the two inputs, so endpoint samples land on the inputs
//! themselves. The sphere variants normalize both inputs to a common pose,
//! morph the stereographic projections, lift samples back, and rotate along
//! the shortest arc between the two recorded poses.

use crate::angles::AngleStructure;
use crate::complex::TriComplex;
use crate::error::{Error, Result};
use crate::geom::*;
use crate::layout::{
    develop, fiber_rescale, fiber_rescale_inv, map_by_similarity, PlanarTriangulation,
};
use crate::sphere::{
    normalize_pose, project_to_plane, stereo_inv, Rotation, SphericalTriangulation,
};
use crate::varopt::{FiberSolver, SolveStatus};

/// One realization along a path.
#[derive(Debug, Clone)]
pub enum Realization {
    Planar(PlanarTriangulation),
    Spherical(SphericalTriangulation),
}

/// One certified sample: parameter, realization, worst Delaunay defect, and
/// the solver's first-order residual at that sample.
#[derive(Debug, Clone)]
pub struct MorphSample {
    pub t: f64,
    pub realization: Realization,
    pub min_defect: f64,
    pub solver_residual: f64,
}

/// A sampled path in a deformation space. Valid when every sample's minimum
/// defect is positive: then each sample is a strictly Delaunay realization
/// and the path witnesses that its endpoints share a connected component.
#[derive(Debug, Clone)]
pub struct MorphPath {
    pub samples: Vec<MorphSample>,
}

impl MorphPath {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The worst defect over the whole path.
    pub fn min_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.min_defect)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn planar(&self, i: usize) -> Option<&PlanarTriangulation> {
        match &self.samples[i].realization {
            Realization::Planar(p) => Some(p),
            Realization::Spherical(_) => None,
        }
    }

    pub fn spherical(&self, i: usize) -> Option<&SphericalTriangulation> {
        match &self.samples[i].realization {
            Realization::Spherical(s) => Some(s),
            Realization::Planar(_) => None,
        }
    }
}

/// Anchor frame of an edge in a realization: base point, direction angle,
/// and length. Interpolating frames pins the similarity of each sample.
#[derive(Debug, Clone, Copy)]
struct Frame {
    base: Vec2,
    angle: f64,
    len: f64,
}

fn frame_of(positions: &[Vec2], anchor: (usize, usize)) -> Frame {
    let base = positions[anchor.0];
    let v = sub2(positions[anchor.1], base);
    Frame {
        base,
        angle: v[1].atan2(v[0]),
        len: norm2(v),
    }
}

/// Shortest signed angular difference b - a in (-pi, pi].
fn angle_diff(a: f64, b: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut d = (b - a) % TAU;
    if d <= -PI {
        d += TAU;
    } else if d > PI {
        d -= TAU;
    }
    d
}

fn lerp_frame(a: Frame, b: Frame, t: f64) -> Frame {
    Frame {
        base: add2(scale2(1.0 - t, a.base), scale2(t, b.base)),
        angle: a.angle + t * angle_diff(a.angle, b.angle),
        len: (1.0 - t) * a.len + t * b.len,
    }
}

fn check_pair_planar(
    a: &PlanarTriangulation,
    b: &PlanarTriangulation,
    anchor: (usize, usize),
    n_samples: usize,
) -> Result<()> {
    if a.complex.faces() != b.complex.faces() {
        return Err(Error::MismatchedComplex(
            "the two realizations live on different complexes".into(),
        ));
    }
    if !a.is_delaunay() || !b.is_delaunay() {
        return Err(Error::NotDelaunayInput);
    }
    if a.complex.edge_between(anchor.0, anchor.1).is_none() {
        return Err(Error::InvalidInput(format!(
            "anchor ({}, {}) is not an edge",
            anchor.0, anchor.1
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidInput(
            "a path needs at least its two endpoints".into(),
        ));
    }
    Ok(())
}

/// Straight-line morph between two strictly Delaunay realizations of one
/// disk complex. Invariants interpolate linearly, each sample solves for
/// its energy maximizer (warm started from the previous sample) and is
/// developed into the interpolated anchor frame. Endpoints reproduce the
/// inputs; every sample of an admissible pair stays strictly Delaunay.
pub fn morph_polygon(
    a: &PlanarTriangulation,
    b: &PlanarTriangulation,
    anchor: (usize, usize),
    n_samples: usize,
) -> Result<MorphPath> {
    check_pair_planar(a, b, anchor, n_samples)?;
    let alpha_a = a.invariant();
    let alpha_b = b.invariant();
    let fa = frame_of(&a.positions, anchor);
    let fb = frame_of(&b.positions, anchor);

    let solver = FiberSolver::new(&a.complex);
    let mut warm: Option<AngleStructure> = None;
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let t = k as f64 / (n_samples - 1) as f64;
        let alpha = alpha_a.lerp(&alpha_b, t);
        let sol = solver.solve(&alpha, warm.as_ref())?;
        if sol.status != SolveStatus::Converged {
            return Err(Error::SolverFailure { t });
        }
        let dev = develop(&a.complex, &sol.theta)?;
        let f = lerp_frame(fa, fb, t);
        let dst_head = add2(f.base, [f.len * f.angle.cos(), f.len * f.angle.sin()]);
        let positions = map_by_similarity(
            &dev.positions,
            (dev.positions[anchor.0], dev.positions[anchor.1]),
            (f.base, dst_head),
        )?;
        let tri = PlanarTriangulation::new(a.complex.clone(), positions)?;
        let min_defect = tri.min_defect();
        warm = Some(sol.theta);
        samples.push(MorphSample {
            t,
            realization: Realization::Planar(tri),
            min_defect,
            solver_residual: sol.kkt_residual.max(sol.constraint_residual),
        });
    }
    Ok(MorphPath { samples })
}

/// Data shared by the two sphere morphs: both inputs normalized to put v0
/// at the pole, projected, and the vertex correspondence inverted.
struct SphereStage {
    pa: PlanarTriangulation,
    pb: PlanarTriangulation,
    /// Original vertex -> planar vertex (v0 slot unused).
    inv: Vec<usize>,
    ra: Rotation,
    rb: Rotation,
    ga: Rotation,
    gb: Rotation,
}

fn sphere_stage(
    a: &SphericalTriangulation,
    b: &SphericalTriangulation,
    v0: usize,
) -> Result<SphereStage> {
    if a.complex.faces() != b.complex.faces() {
        return Err(Error::MismatchedComplex(
            "the two realizations live on different complexes".into(),
        ));
    }
    if !a.is_delaunay() || !b.is_delaunay() {
        return Err(Error::NotDelaunayInput);
    }
    if a.signed_volume() * b.signed_volume() < 0.0 {
        return Err(Error::OrientationMismatch);
    }
    let (na, ga) = normalize_pose(a, v0)?;
    let (nb, gb) = normalize_pose(b, v0)?;
    let (pa, map) = project_to_plane(&na, v0)?;
    let (pb, _) = project_to_plane(&nb, v0)?;
    let mut inv = vec![usize::MAX; a.complex.vertex_count()];
    for (planar, &orig) in map.iter().enumerate() {
        inv[orig] = planar;
    }
    Ok(SphereStage {
        pa,
        pb,
        inv,
        ra: ga.transpose(),
        rb: gb.transpose(),
        ga,
        gb,
    })
}

/// Lifts one planar sample back onto the original complex: v0 returns to the
/// pole, everything else through inverse stereographic projection, and the
/// whole sphere is turned by the interpolated pose.
fn lift_sample(
    stage: &SphereStage,
    complex: &TriComplex,
    v0: usize,
    planar: &PlanarTriangulation,
    t: f64,
) -> Result<SphericalTriangulation> {
    let rot = stage.ra.slerp(&stage.rb, t);
    let mut positions = vec![[0.0_f64; 3]; complex.vertex_count()];
    for v in 0..complex.vertex_count() {
        let p = if v == v0 {
            [0.0, 0.0, 1.0]
        } else {
            stereo_inv(planar.positions[stage.inv[v]])
        };
        positions[v] = rot.apply(p);
    }
    SphericalTriangulation::new(complex.clone(), positions)
}

fn spherify(path: MorphPath, stage: &SphereStage, complex: &TriComplex, v0: usize) -> Result<MorphPath> {
    let mut samples = Vec::with_capacity(path.samples.len());
    for s in path.samples {
        let Realization::Planar(planar) = &s.realization else {
            unreachable!("planar stage emits planar samples");
        };
        let sph = lift_sample(stage, complex, v0, planar, s.t)?;
        let min_defect = sph.min_defect();
        samples.push(MorphSample {
            t: s.t,
            realization: Realization::Spherical(sph),
            min_defect,
            solver_residual: s.solver_residual,
        });
    }
    Ok(MorphPath { samples })
}

/// Morph between two strictly Delaunay inscribed triangulations of one
/// sphere complex. Both are normalized to put v0 at the pole, their
/// projections are morphed in the plane with `anchor` (an edge of the
/// complex away from v0) pinning the similarity, each sample is lifted
/// back, and the pose interpolates from the first input's to the second's
/// along the shortest rotation arc. Returns the path and the two recorded
/// normalizing rotations.
pub fn morph_sphere(
    a: &SphericalTriangulation,
    b: &SphericalTriangulation,
    v0: usize,
    anchor: (usize, usize),
    n_samples: usize,
) -> Result<(MorphPath, Rotation, Rotation)> {
    let stage = sphere_stage(a, b, v0)?;
    if anchor.0 == v0 || anchor.1 == v0 {
        return Err(Error::NotIncident(v0));
    }
    let planar_anchor = (stage.inv[anchor.0], stage.inv[anchor.1]);
    let planar_path = morph_polygon(&stage.pa, &stage.pb, planar_anchor, n_samples)?;
    let path = spherify(planar_path, &stage, &a.complex, v0)?;
    Ok((path, stage.ga, stage.gb))
}

/// Barycentric coordinates of q in the triangle (a, b, c).
fn barycentric(q: Vec2, a: Vec2, b: Vec2, c: Vec2) -> [f64; 3] {
    let total = cross2(sub2(b, a), sub2(c, a));
    [
        cross2(sub2(c, b), sub2(q, b)) / total,
        cross2(sub2(a, c), sub2(q, c)) / total,
        cross2(sub2(b, a), sub2(q, a)) / total,
    ]
}

/// Origin data of one projected input: the face containing the planar
/// origin, the origin's barycentric coordinates there, and the scale
/// parameter r in (0, 1) that encodes how close the lifted polyhedron's
/// face through that point comes to the sphere center.
struct OriginDatum {
    face: usize,
    bary: [f64; 3],
    r: f64,
}

fn origin_datum(p: &PlanarTriangulation) -> Result<OriginDatum> {
    let face = p.locate_face([0.0, 0.0]).map_err(|e| match e {
        Error::PointOutside => Error::OriginNotInside,
        other => other,
    })?;
    let [a, b, c] = p.complex.face(face).map(|v| p.positions[v]);
    let bary = barycentric([0.0, 0.0], a, b, c);
    let r = fiber_rescale(p.diameter(), p.max_scale([0.0, 0.0])?)?;
    Ok(OriginDatum { face, bary, r })
}

/// Morph between two strictly Delaunay inscribed triangulations that both
/// strictly contain the origin, staying origin-containing throughout. The
/// planar stage interpolates, on top of the invariant, the preimage of the
/// plane's origin (barycentrically) and the scale parameter r rather than a
/// raw anchor frame; since r < 1 exactly when the binding face plane has
/// not yet reached the sphere center, every reconstructed sample keeps the
/// origin strictly inside.
pub fn morph_sphere_origin(
    a: &SphericalTriangulation,
    b: &SphericalTriangulation,
    v0: usize,
    anchor: (usize, usize),
    n_samples: usize,
) -> Result<MorphPath> {
    if !a.origin_inside() || !b.origin_inside() {
        return Err(Error::OriginNotInside);
    }
    let stage = sphere_stage(a, b, v0)?;
    if anchor.0 == v0 || anchor.1 == v0 {
        return Err(Error::NotIncident(v0));
    }
    let (ai, aj) = (stage.inv[anchor.0], stage.inv[anchor.1]);
    check_pair_planar(&stage.pa, &stage.pb, (ai, aj), n_samples)?;

    let da = origin_datum(&stage.pa)?;
    let db = origin_datum(&stage.pb)?;
    let alpha_a = stage.pa.invariant();
    let alpha_b = stage.pb.invariant();
    let beta_a = frame_of(&stage.pa.positions, (ai, aj)).angle;
    let dbeta = angle_diff(beta_a, frame_of(&stage.pb.positions, (ai, aj)).angle);

    let solver = FiberSolver::new(&stage.pa.complex);
    let mut warm: Option<AngleStructure> = None;
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let t = k as f64 / (n_samples - 1) as f64;
        let alpha = alpha_a.lerp(&alpha_b, t);
        let sol = solver.solve(&alpha, warm.as_ref())?;
        if sol.status != SolveStatus::Converged {
            return Err(Error::SolverFailure { t });
        }
        let dev = develop(&stage.pa.complex, &sol.theta)?;
        let dev_tri = PlanarTriangulation::new(stage.pa.complex.clone(), dev.positions)?;

        // Interpolated origin preimage, evaluated in the development frame.
        let eval = |d: &OriginDatum| {
            let [pa, pb, pc] = dev_tri.complex.face(d.face).map(|v| dev_tri.positions[v]);
            add2(
                add2(scale2(d.bary[0], pa), scale2(d.bary[1], pb)),
                scale2(d.bary[2], pc),
            )
        };
        let q = add2(scale2(1.0 - t, eval(&da)), scale2(t, eval(&db)));

        // Interpolated scale, reconstructed through the per-sample bound so
        // r < 1 keeps the origin strictly inside after lifting.
        let d_max = dev_tri.max_scale(q)?;
        let r = (1.0 - t) * da.r + t * db.r;
        let d_target = fiber_rescale_inv(r, d_max)?;
        let s = d_target / dev_tri.diameter();

        let beta_dev = frame_of(&dev_tri.positions, (ai, aj)).angle;
        let turn = beta_a + t * dbeta - beta_dev;
        let (sin_t, cos_t) = turn.sin_cos();
        let positions: Vec<Vec2> = dev_tri
            .positions
            .iter()
            .map(|&p| {
                let v = sub2(p, q);
                [
                    s * (cos_t * v[0] - sin_t * v[1]),
                    s * (sin_t * v[0] + cos_t * v[1]),
                ]
            })
            .collect();
        let tri = PlanarTriangulation::new(stage.pa.complex.clone(), positions)?;
        let sph = lift_sample(&stage, &a.complex, v0, &tri, t)?;
        let min_defect = sph.min_defect();
        warm = Some(sol.theta);
        samples.push(MorphSample {
            t,
            realization: Realization::Spherical(sph),
            min_defect,
            solver_residual: sol.kkt_residual.max(sol.constraint_residual),
        });
    }
    Ok(MorphPath { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use crate::complex::fixtures::octahedron_faces;
    use crate::gen::{random_delaunay_disk, rng};
    use crate::sphere::lift_to_sphere;
    use rand::prelude::*;

    fn square_with_center(cx: f64, cy: f64) -> PlanarTriangulation {
        let faces = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
        let positions = vec![
            [-1.0, -1.0],
            [1.0, -1.0],
            [1.0, 1.0],
            [-1.0, 1.0],
            [cx, cy],
        ];
        PlanarTriangulation::new(build_complex(faces).unwrap(), positions).unwrap()
    }

    fn octahedron() -> SphericalTriangulation {
        // Fixture convention: 0..3 equatorial square, 4 top, 5 bottom.
        let positions = vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        SphericalTriangulation::new(build_complex(octahedron_faces()).unwrap(), positions)
            .unwrap()
    }

    /// A nearby strictly Delaunay realization of the same complex, made by
    /// jiggling vertices. Deterministic; panics if no jiggle keeps the
    /// Delaunay margin (does not happen for the seeds used here).
    fn jiggled(tri: &PlanarTriangulation, scale: f64, seed: u64) -> PlanarTriangulation {
        for attempt in 0..50 {
            let mut r = rng(seed + 31 * attempt);
            let positions: Vec<Vec2> = tri
                .positions
                .iter()
                .map(|&p| {
                    [
                        p[0] + r.gen_range(-scale..scale),
                        p[1] + r.gen_range(-scale..scale),
                    ]
                })
                .collect();
            if let Ok(cand) = PlanarTriangulation::new(tri.complex.clone(), positions) {
                if cand.is_delaunay() {
                    return cand;
                }
            }
        }
        panic!("no Delaunay jiggle found");
    }

    #[test]
    fn constant_pair_gives_a_constant_path() {
        let a = square_with_center(0.1, 0.05);
        let path = morph_polygon(&a, &a, (0, 1), 5).unwrap();
        assert_eq!(path.len(), 5);
        for k in 0..5 {
            let p = path.planar(k).unwrap();
            for (x, y) in p.positions.iter().zip(&a.positions) {
                assert!(dist2(*x, *y) < 1e-7, "sample {k} moved");
            }
        }
    }

    #[test]
    fn center_vertex_travels_between_its_two_placements() {
        let a = square_with_center(-0.2, 0.0);
        let b = square_with_center(0.2, 0.0);
        let path = morph_polygon(&a, &b, (0, 1), 21).unwrap();
        assert!(path.min_defect() > 0.0, "path leaves the Delaunay region");
        // Endpoints reproduce the inputs.
        let first = path.planar(0).unwrap();
        let last = path.planar(20).unwrap();
        for v in 0..5 {
            assert!(dist2(first.positions[v], a.positions[v]) < 1e-6);
            assert!(dist2(last.positions[v], b.positions[v]) < 1e-6);
        }
        // The center travels monotonically from its first placement to its
        // second. Only the anchor edge is pinned, so the curve need not be
        // the straight segment between them.
        let mut prev = f64::NEG_INFINITY;
        for k in 0..21 {
            let c = path.planar(k).unwrap().positions[4];
            assert!(c[0] > prev - 1e-9, "center x went backwards at {k}");
            prev = c[0];
        }
    }

    #[test]
    fn random_pairs_stay_strictly_delaunay() {
        let a = random_delaunay_disk(12, 77).unwrap();
        let b = jiggled(&a, 0.03, 5);
        let path = morph_polygon(&a, &b, (0, 1), 25);
        let path = match path {
            Ok(p) => p,
            Err(Error::InvalidInput(_)) => {
                // (0, 1) need not be an edge of this instance; pick one.
                let e = &a.complex.edges()[0];
                morph_polygon(&a, &b, e.ends, 25).unwrap()
            }
            Err(e) => panic!("{e}"),
        };
        assert!(path.min_defect() > 0.0);
        for s in &path.samples {
            assert!(s.solver_residual < 1e-9);
        }
    }

    #[test]
    fn reversal_gives_the_same_path_backwards() {
        let a = square_with_center(-0.2, 0.1);
        let b = square_with_center(0.15, -0.05);
        let fwd = morph_polygon(&a, &b, (0, 1), 9).unwrap();
        let back = morph_polygon(&b, &a, (0, 1), 9).unwrap();
        for k in 0..9 {
            let f = fwd.planar(k).unwrap();
            let r = back.planar(8 - k).unwrap();
            for v in 0..5 {
                assert!(
                    dist2(f.positions[v], r.positions[v]) < 1e-8,
                    "reversal mismatch at sample {k}"
                );
            }
        }
    }

    #[test]
    fn refining_the_grid_keeps_shared_samples() {
        let a = square_with_center(-0.2, 0.1);
        let b = square_with_center(0.15, -0.05);
        let coarse = morph_polygon(&a, &b, (0, 1), 5).unwrap();
        let fine = morph_polygon(&a, &b, (0, 1), 9).unwrap();
        for k in 0..5 {
            let c = coarse.planar(k).unwrap();
            let f = fine.planar(2 * k).unwrap();
            for v in 0..5 {
                assert!(dist2(c.positions[v], f.positions[v]) < 1e-10);
            }
        }
    }

    #[test]
    fn rotated_input_morphs_by_pure_rotation() {
        let a = octahedron();
        let g = Rotation::about_axis([0.3, -0.5, 0.8], 0.9);
        let b = a.rotated(&g);
        let (path, _, _) = morph_sphere(&a, &b, 0, (1, 2), 9).unwrap();
        assert!(path.min_defect() > 0.0);
        // Endpoints reproduce the inputs.
        let first = path.spherical(0).unwrap();
        let last = path.spherical(8).unwrap();
        for v in 0..6 {
            assert!(dist3(first.positions[v], a.positions[v]) < 1e-6);
            assert!(dist3(last.positions[v], b.positions[v]) < 1e-6);
        }
        // A rotation pair has constant projections, so every sample is the
        // first one turned rigidly: pairwise distances are preserved.
        for k in 1..9 {
            let s = path.spherical(k).unwrap();
            for v in 0..6 {
                for w in (v + 1)..6 {
                    let d0 = dist3(first.positions[v], first.positions[w]);
                    let dk = dist3(s.positions[v], s.positions[w]);
                    assert!((d0 - dk).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn perturbed_octahedron_connects_to_the_round_one() {
        let a = octahedron();
        let mut r = rng(11);
        let positions: Vec<Vec3> = a
            .positions
            .iter()
            .map(|&p| {
                normalize3([
                    p[0] + r.gen_range(-0.05..0.05),
                    p[1] + r.gen_range(-0.05..0.05),
                    p[2] + r.gen_range(-0.05..0.05),
                ])
            })
            .collect();
        let b = SphericalTriangulation::new(a.complex.clone(), positions).unwrap();
        assert!(b.is_delaunay(), "jittered octahedron left the region");
        let (path, _, _) = morph_sphere(&a, &b, 0, (1, 2), 15).unwrap();
        assert!(path.min_defect() > 0.0);
    }

    #[test]
    fn scale_only_origin_morph_keeps_the_origin_inside() {
        let base = random_delaunay_disk(10, 3).unwrap();
        let a = lift_to_sphere(&base).unwrap();
        assert!(a.origin_inside());
        let scaled = PlanarTriangulation::new(
            base.complex.clone(),
            base.positions.iter().map(|&p| scale2(0.55, p)).collect(),
        )
        .unwrap();
        let b = lift_to_sphere(&scaled).unwrap();
        assert!(b.origin_inside());
        let v0 = a.complex.vertex_count() - 1;
        let e = a.complex.edges()[0].ends;
        let path = morph_sphere_origin(&a, &b, v0, e, 21).unwrap();
        assert!(path.min_defect() > 0.0);
        for (k, s) in path.samples.iter().enumerate() {
            let sph = path.spherical(k).unwrap();
            assert!(sph.origin_inside(), "origin escaped at t = {}", s.t);
        }
        // Endpoints reproduce the inputs.
        let first = path.spherical(0).unwrap();
        let last = path.spherical(20).unwrap();
        for v in 0..a.complex.vertex_count() {
            assert!(dist3(first.positions[v], a.positions[v]) < 1e-6);
            assert!(dist3(last.positions[v], b.positions[v]) < 1e-6);
        }
    }

    #[test]
    fn origin_morph_rejects_an_outside_origin() {
        let base = random_delaunay_disk(10, 3).unwrap();
        // Shift far sideways: the hull no longer surrounds the origin.
        let shifted = PlanarTriangulation::new(
            base.complex.clone(),
            base.positions
                .iter()
                .map(|&p| add2(p, [5.0, 0.0]))
                .collect(),
        )
        .unwrap();
        let a = lift_to_sphere(&base).unwrap();
        let b = lift_to_sphere(&shifted).unwrap();
        assert!(!b.origin_inside());
        let v0 = a.complex.vertex_count() - 1;
        let e = a.complex.edges()[0].ends;
        match morph_sphere_origin(&a, &b, v0, e, 5) {
            Err(Error::OriginNotInside) => {}
            other => panic!("expected OriginNotInside, got {other:?}"),
        }
    }
}
