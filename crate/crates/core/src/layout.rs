//! Planar realizations: positioned triangulations, the Delaunay predicate,
//! and development of an angle structure into the plane.
//!
//! Development answers the realizability question constructively. Faces are
//! laid out one at a time across shared edges, each placement forced by two
//! already-placed corners and the law of sines. Every face keeps its own copy
//! of its three corner positions; the structure is realizable exactly when
//! all copies of every edge agree, and the largest disagreement is the
//! closure error.

use serde::{Deserialize, Serialize};

use crate::angles::{edge_invariant, AngleStructure, EdgeInvariant, TOL_AFFINE};
use crate::complex::{SurfaceKind, TriComplex};
use crate::error::{Error, Result};
use crate::geom::*;

use std::collections::VecDeque;
use std::f64::consts::PI;

/// Relative closure tolerance: a development counts as closed when the worst
/// edge disagreement is below this times the developed diameter.
pub const TOL_DEV: f64 = 1e-7;

/// Strictness margin for the Delaunay predicate.
pub const DELAUNAY_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanarTriangulation {
    pub complex: TriComplex,
    pub positions: Vec<Vec2>,
}

impl PlanarTriangulation {
    /// Positions must be finite and every face positively oriented.
    pub fn new(complex: TriComplex, positions: Vec<Vec2>) -> Result<PlanarTriangulation> {
        if positions.len() != complex.vertex_count() {
            return Err(Error::MismatchedComplex(format!(
                "{} positions for {} vertices",
                positions.len(),
                complex.vertex_count()
            )));
        }
        if positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (f, face) in complex.faces().iter().enumerate() {
            let [a, b, c] = face.map(|v| positions[v]);
            if cross2(sub2(b, a), sub2(c, a)) <= 0.0 {
                return Err(Error::DegenerateFace(f));
            }
        }
        Ok(PlanarTriangulation { complex, positions })
    }

    pub fn angles(&self) -> AngleStructure {
        angles_from_positions(&self.complex, &self.positions)
    }

    pub fn invariant(&self) -> EdgeInvariant {
        let theta = self.angles();
        edge_invariant(&self.complex, &theta).expect("angles of a realization have matching shape")
    }

    /// Max pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        diameter_of(&self.positions)
    }

    /// pi minus the sum of the angles opposite edge e. Positive means the
    /// local Delaunay condition holds strictly, negative means it fails.
    pub fn delaunay_defect(&self, e: usize) -> Result<f64> {
        if self.complex.is_boundary_edge(e) {
            return Err(Error::BoundaryEdge(e));
        }
        let mut sum = 0.0;
        for (f, s) in self.complex.opposite_corners(e) {
            let face = self.complex.face(f);
            let p = self.positions[face[s]];
            let q = self.positions[face[(s + 1) % 3]];
            let r = self.positions[face[(s + 2) % 3]];
            sum += corner_angle2(p, q, r);
        }
        Ok(PI - sum)
    }

    /// Smallest inner-edge defect, or +inf when every edge is on the boundary.
    pub fn min_defect(&self) -> f64 {
        self.complex
            .inner_edges()
            .map(|e| self.delaunay_defect(e).expect("inner edge"))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_delaunay(&self) -> bool {
        self.min_defect() > DELAUNAY_MARGIN
    }

    /// Face strictly containing q, by sign of the three edge crossings.
    pub fn locate_face(&self, q: Vec2) -> Result<usize> {
        let eps = 1e-12 * self.diameter().powi(2).max(f64::MIN_POSITIVE);
        let mut on_edge = false;
        for (f, face) in self.complex.faces().iter().enumerate() {
            let [a, b, c] = face.map(|v| self.positions[v]);
            let s0 = cross2(sub2(b, a), sub2(q, a));
            let s1 = cross2(sub2(c, b), sub2(q, b));
            let s2 = cross2(sub2(a, c), sub2(q, c));
            let min = s0.min(s1).min(s2);
            if min > eps {
                return Ok(f);
            }
            if min > -eps {
                on_edge = true;
            }
        }
        if on_edge {
            Err(Error::PointOnEdge)
        } else {
            Err(Error::PointOutside)
        }
    }

    /// Dimensionless reach of the interior point q: how far the lifted
    /// realization can be rescaled before q's face stops being local, as
    /// (-power)^(-1/2) of q against the containing circumcircle, normalized
    /// by the diameter.
    pub fn max_scale(&self, q: Vec2) -> Result<f64> {
        let f = self.locate_face(q)?;
        let [a, b, c] = self.complex.face(f).map(|v| self.positions[v]);
        let p = power_of_point(q, a, b, c)?;
        if p >= 0.0 {
            return Err(Error::PointOutside);
        }
        Ok(self.diameter() / (-p).sqrt())
    }
}

/// Corner angles measured from positions. No orientation check: callers that
/// need validity go through `PlanarTriangulation::new`.
pub fn angles_from_positions(t: &TriComplex, positions: &[Vec2]) -> AngleStructure {
    let mut v = Vec::with_capacity(3 * t.face_count());
    for face in t.faces() {
        let [a, b, c] = face.map(|w| positions[w]);
        v.push(corner_angle2(a, b, c));
        v.push(corner_angle2(b, c, a));
        v.push(corner_angle2(c, a, b));
    }
    AngleStructure(v)
}

pub fn diameter_of(positions: &[Vec2]) -> f64 {
    let mut d = 0.0_f64;
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            d = d.max(dist2(positions[i], positions[j]));
        }
    }
    d
}

/// Circumcircle of a nondegenerate triangle: (center, radius squared).
pub fn circumcircle(a: Vec2, b: Vec2, c: Vec2) -> Result<(Vec2, f64)> {
    let d = 2.0 * cross2(sub2(b, a), sub2(c, a));
    let scale = dist2(a, b).max(dist2(b, c)).max(dist2(c, a));
    if !d.is_finite() || d.abs() <= 1e-14 * scale * scale {
        return Err(Error::DegenerateTriangle);
    }
    let na = dot2(a, a);
    let nb = dot2(b, b);
    let nc = dot2(c, c);
    let ux = (na * (b[1] - c[1]) + nb * (c[1] - a[1]) + nc * (a[1] - b[1])) / d;
    let uy = (na * (c[0] - b[0]) + nb * (a[0] - c[0]) + nc * (b[0] - a[0])) / d;
    let center = [ux, uy];
    Ok((center, dist2(a, center).powi(2)))
}

/// Power of q with respect to the circumcircle of (a, b, c): negative
/// strictly inside, zero on the circle. Computed from the incircle
/// determinant, which stays accurate when the circumcenter is far away.
pub fn power_of_point(q: Vec2, a: Vec2, b: Vec2, c: Vec2) -> Result<f64> {
    let orient = cross2(sub2(b, a), sub2(c, a));
    let scale = dist2(a, b).max(dist2(b, c)).max(dist2(c, a));
    if orient.abs() <= 1e-14 * scale * scale {
        return Err(Error::DegenerateTriangle);
    }
    let row = |p: Vec2| {
        let d = sub2(p, q);
        [d[0], d[1], dot2(d, d)]
    };
    Ok(-det3(row(a), row(b), row(c)) / orient)
}

/// A development: per-vertex positions (from the first face that places the
/// vertex), per-face corner copies, and the worst copy disagreement.
#[derive(Debug, Clone)]
pub struct Development {
    pub positions: Vec<Vec2>,
    pub face_positions: Vec<[Vec2; 3]>,
    pub closure_error: f64,
    pub diameter: f64,
}

/// Lays the faces of a disk complex out in the plane according to theta,
/// starting from face 0 with its first edge on the unit x axis.
pub fn develop(t: &TriComplex, theta: &AngleStructure) -> Result<Development> {
    if t.surface() != SurfaceKind::Disk {
        return Err(Error::WrongSurfaceKind {
            expected: "disk",
            found: t.surface(),
        });
    }
    if !theta.is_valid(t, TOL_AFFINE) {
        return Err(Error::InvalidAngleStructure(
            "development needs positive corners with straight face sums".into(),
        ));
    }

    let nf = t.face_count();
    let mut face_positions = vec![[[f64::NAN; 2]; 3]; nf];
    let mut placed = vec![false; nf];

    // Third corner from two placed ones: rotate the placed side by the corner
    // angle at its tail, scale by the law of sines.
    let place_third = |pos: &mut [Vec2; 3], s: usize, f: usize| {
        let p0 = pos[s];
        let p1 = pos[(s + 1) % 3];
        let a0 = theta.corner(f, s);
        let a1 = theta.corner(f, (s + 1) % 3);
        let a2 = theta.corner(f, (s + 2) % 3);
        let dir = rotate2(sub2(p1, p0), a0);
        pos[(s + 2) % 3] = add2(p0, scale2(a1.sin() / a2.sin(), dir));
    };

    face_positions[0][0] = [0.0, 0.0];
    face_positions[0][1] = [1.0, 0.0];
    place_third(&mut face_positions[0], 0, 0);
    placed[0] = true;

    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for s in 0..3 {
            let Some((g, gs)) = t.side_partner(f, s) else {
                continue;
            };
            if placed[g] {
                continue;
            }
            // Partner side runs opposite: g's corner gs is f's side head.
            debug_assert_eq!(t.face(g)[gs], t.face(f)[(s + 1) % 3]);
            debug_assert_eq!(t.face(g)[(gs + 1) % 3], t.face(f)[s]);
            let mut pos = [[f64::NAN; 2]; 3];
            pos[gs] = face_positions[f][(s + 1) % 3];
            pos[(gs + 1) % 3] = face_positions[f][s];
            place_third(&mut pos, gs, g);
            face_positions[g] = pos;
            placed[g] = true;
            queue.push_back(g);
        }
    }
    debug_assert!(placed.iter().all(|&p| p));

    // Vertex positions from the first copy in face order.
    let mut positions = vec![[f64::NAN; 2]; t.vertex_count()];
    for (f, face) in t.faces().iter().enumerate() {
        for s in 0..3 {
            let v = face[s];
            if positions[v][0].is_nan() {
                positions[v] = face_positions[f][s];
            }
        }
    }

    let mut closure_error = 0.0_f64;
    for e in t.inner_edges() {
        let sides = &t.edges()[e].sides;
        let (f, s) = sides[0];
        let (g, gs) = sides[1];
        closure_error = closure_error
            .max(dist2(face_positions[f][s], face_positions[g][(gs + 1) % 3]))
            .max(dist2(face_positions[f][(s + 1) % 3], face_positions[g][gs]));
    }

    let diameter = diameter_of(&positions);
    if !diameter.is_finite() || diameter == 0.0 {
        return Err(Error::NonFinite);
    }
    Ok(Development {
        positions,
        face_positions,
        closure_error,
        diameter,
    })
}

/// Whether theta develops into a closed planar figure (relative tolerance
/// TOL_DEV). This is the realizability side of the invariant picture.
pub fn in_ae(t: &TriComplex, theta: &AngleStructure) -> Result<bool> {
    let dev = develop(t, theta)?;
    Ok(dev.closure_error <= TOL_DEV * dev.diameter)
}

/// The orientation-preserving similarity sending src0 -> dst0, src1 -> dst1,
/// applied to every point.
pub(crate) fn map_by_similarity(
    points: &[Vec2],
    src: (Vec2, Vec2),
    dst: (Vec2, Vec2),
) -> Result<Vec<Vec2>> {
    let s = sub2(src.1, src.0);
    let d = sub2(dst.1, dst.0);
    let s2 = dot2(s, s);
    if s2 == 0.0 || (d[0] == 0.0 && d[1] == 0.0) {
        return Err(Error::NormalizationFailure(
            "anchor endpoints coincide".into(),
        ));
    }
    // Complex division d / s.
    let re = (d[0] * s[0] + d[1] * s[1]) / s2;
    let im = (d[1] * s[0] - d[0] * s[1]) / s2;
    Ok(points
        .iter()
        .map(|p| {
            let v = sub2(*p, src.0);
            add2(
                dst.0,
                [re * v[0] - im * v[1], im * v[0] + re * v[1]],
            )
        })
        .collect())
}

/// Monotone [0, 1] parameterization of a scale value d in [0, d_max].
/// An overshoot within one part in 1e9 (e.g. from a tan/atan round trip)
/// is clamped rather than rejected.
pub fn fiber_rescale(d: f64, d_max: f64) -> Result<f64> {
    if !(d_max > 0.0) || d < 0.0 || d > d_max * (1.0 + 1e-9) {
        return Err(Error::OutOfRange(format!("scale {d} not in [0, {d_max}]")));
    }
    Ok(d.min(d_max).atan() / d_max.atan())
}

/// Inverse of `fiber_rescale`: the scale at parameter r in [0, 1].
pub fn fiber_rescale_inv(r: f64, d_max: f64) -> Result<f64> {
    if !(d_max > 0.0) || !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange(format!("parameter {r} not in [0, 1]")));
    }
    Ok((r * d_max.atan()).tan())
}
