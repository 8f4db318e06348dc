//! Triangulations inscribed in the unit sphere, stereographic transfer to
//! and from the plane, and rotations for interpolating between poses.
//!
//! A sphere triangulation is a sphere complex with all vertices on the unit
//! sphere. Geodesic faces carry intrinsic corner angles (between great-circle
//! tangents); their face sums exceed pi by the spherical area, so they are
//! not angle structures, and the Delaunay defect of an edge uses the
//! six-angle combination b + c + b' + c' - a - a' instead of the planar
//! pi - a - a'. The same data read with straight faces is the inscribed
//! polyhedron, where being locally convex across an edge is the plane-side
//! predicate `delaunay_determinant`; the two tests agree in sign.
//!
//! Stereographic projection is from the north pole (0, 0, 1) to the plane
//! z = 0. It sends circles to circles and cocircular quadruples to coplanar
//! ones, which is why the local Delaunay property transfers exactly.

use serde::{Deserialize, Serialize};

use crate::angles::AngleStructure;
use crate::complex::{build_complex, remove_open_star, SurfaceKind, TriComplex};
use crate::error::{Error, Result};
use crate::geom::*;
use crate::layout::PlanarTriangulation;

use std::f64::consts::PI;

/// How close to the north pole a projected point may be.
const POLE_EPS: f64 = 1e-15;
/// How far a vertex may sit from the unit sphere.
const UNIT_TOL: f64 = 1e-9;

/// Stereographic projection from the north pole.
pub fn stereo(p: Vec3) -> Result<Vec2> {
    let denom = 1.0 - p[2];
    if denom <= POLE_EPS {
        return Err(Error::AtNorthPole);
    }
    Ok([p[0] / denom, p[1] / denom])
}

/// Inverse stereographic projection; the result is exactly unit length up to
/// rounding.
pub fn stereo_inv(q: Vec2) -> Vec3 {
    let n = q[0] * q[0] + q[1] * q[1];
    let s = 1.0 / (n + 1.0);
    [2.0 * q[0] * s, 2.0 * q[1] * s, (n - 1.0) * s]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphericalTriangulation {
    pub complex: TriComplex,
    pub positions: Vec<Vec3>,
}

impl SphericalTriangulation {
    /// All vertices must lie on the unit sphere.
    pub fn new(complex: TriComplex, positions: Vec<Vec3>) -> Result<SphericalTriangulation> {
        if complex.surface() != SurfaceKind::Sphere {
            return Err(Error::WrongSurfaceKind {
                expected: "sphere",
                found: complex.surface(),
            });
        }
        if positions.len() != complex.vertex_count() {
            return Err(Error::MismatchedComplex(format!(
                "{} positions for {} vertices",
                positions.len(),
                complex.vertex_count()
            )));
        }
        for p in &positions {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite);
            }
            if (norm3(*p) - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidInput(format!(
                    "vertex off the unit sphere by {:.3e}",
                    (norm3(*p) - 1.0).abs()
                )));
            }
        }
        Ok(SphericalTriangulation { complex, positions })
    }

    /// Intrinsic corner angles of the geodesic faces. Each face sums to pi
    /// plus its spherical area, so this is not a valid angle structure; it
    /// exists for the spherical Delaunay test.
    pub fn spherical_angles(&self) -> AngleStructure {
        let mut v = Vec::with_capacity(3 * self.complex.face_count());
        for face in self.complex.faces() {
            let [a, b, c] = face.map(|w| self.positions[w]);
            v.push(spherical_corner_angle(a, b, c));
            v.push(spherical_corner_angle(b, c, a));
            v.push(spherical_corner_angle(c, a, b));
        }
        AngleStructure(v)
    }

    /// Six-angle Delaunay margin of an inner edge: the sum of the four
    /// angles adjacent to e minus the two opposite it. Positive iff the
    /// inscribed polyhedron is locally convex across the edge.
    pub fn delaunay_defect(&self, e: usize) -> Result<f64> {
        if self.complex.is_boundary_edge(e) {
            return Err(Error::BoundaryEdge(e));
        }
        let mut total = 0.0;
        for (f, s) in self.complex.opposite_corners(e) {
            let face = self.complex.face(f);
            let p = self.positions[face[s]];
            let q = self.positions[face[(s + 1) % 3]];
            let r = self.positions[face[(s + 2) % 3]];
            let opposite = spherical_corner_angle(p, q, r);
            let adj1 = spherical_corner_angle(q, r, p);
            let adj2 = spherical_corner_angle(r, p, q);
            total += adj1 + adj2 - opposite;
        }
        Ok(total)
    }

    pub fn min_defect(&self) -> f64 {
        self.complex
            .inner_edges()
            .map(|e| self.delaunay_defect(e).expect("inner edge"))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_delaunay(&self) -> bool {
        self.min_defect() > crate::layout::DELAUNAY_MARGIN
    }

    /// Signed volume enclosed by the faces (positive for outward faces).
    pub fn signed_volume(&self) -> f64 {
        self.complex
            .faces()
            .iter()
            .map(|face| {
                let [a, b, c] = face.map(|w| self.positions[w]);
                det3(a, b, c) / 6.0
            })
            .sum()
    }

    /// Whether the origin sees every face with the same strict orientation,
    /// i.e. lies inside the star-shaped polyhedron.
    pub fn origin_inside(&self) -> bool {
        let mut sign = 0.0_f64;
        for face in self.complex.faces() {
            let [a, b, c] = face.map(|w| self.positions[w]);
            let d = det3(a, b, c);
            if d == 0.0 {
                return false;
            }
            if sign == 0.0 {
                sign = d.signum();
            } else if d.signum() != sign {
                return false;
            }
        }
        true
    }

    pub fn rotated(&self, g: &Rotation) -> SphericalTriangulation {
        SphericalTriangulation {
            complex: self.complex.clone(),
            positions: self.positions.iter().map(|p| g.apply(*p)).collect(),
        }
    }
}

/// Intrinsic angle at a between the great-circle arcs toward b and c:
/// the angle between the tangent projections of b and c at a.
pub fn spherical_corner_angle(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let u = sub3(b, scale3(dot3(a, b), a));
    let w = sub3(c, scale3(dot3(a, c), a));
    norm3(cross3(u, w)).atan2(dot3(u, w))
}

/// Side of the plane through (a, b, c) that d falls on, signed so that
/// positive means d is strictly on the origin side: for unit vectors this is
/// the empty-circumcap (strict Delaunay) condition for d against the
/// circumcircle of (a, b, c).
pub fn delaunay_determinant(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> f64 {
    let n = cross3(sub3(b, a), sub3(c, a));
    -dot3(n, a).signum() * dot3(n, sub3(d, a))
}

/// Lifts a planar triangulation to the sphere: vertices through inverse
/// stereographic projection, plus a new vertex at the north pole joined to
/// the boundary by a fan. Vertex indices are preserved; the pole gets the
/// next index.
pub fn lift_to_sphere(tri: &PlanarTriangulation) -> Result<SphericalTriangulation> {
    if tri.complex.surface() != SurfaceKind::Disk {
        return Err(Error::WrongSurfaceKind {
            expected: "disk",
            found: tri.complex.surface(),
        });
    }
    let pole = tri.complex.vertex_count();
    let mut positions: Vec<Vec3> = tri.positions.iter().map(|&q| stereo_inv(q)).collect();
    positions.push([0.0, 0.0, 1.0]);

    let mut faces: Vec<[usize; 3]> = tri.complex.faces().to_vec();
    for f in 0..tri.complex.face_count() {
        for s in 0..3 {
            if tri.complex.side_partner(f, s).is_none() {
                let face = tri.complex.face(f);
                let (u, w) = (face[s], face[(s + 1) % 3]);
                faces.push([w, u, pole]);
            }
        }
    }
    let complex = build_complex(faces)?;
    let lifted = SphericalTriangulation::new(complex, positions)?;
    if lifted.signed_volume() < 0.0 {
        let flipped: Vec<[usize; 3]> = lifted
            .complex
            .faces()
            .iter()
            .map(|&[a, b, c]| [a, c, b])
            .collect();
        return SphericalTriangulation::new(build_complex(flipped)?, lifted.positions);
    }
    Ok(lifted)
}

/// Projects a sphere triangulation to the plane through the vertex `pole`,
/// which must sit at the north pole; its star is removed and the rest maps
/// by stereographic projection. Returns the planar triangulation and the
/// map from its vertex ids to the original ones.
pub fn project_to_plane(
    tri: &SphericalTriangulation,
    pole: usize,
) -> Result<(PlanarTriangulation, Vec<usize>)> {
    let dist = dist3(tri.positions[pole], [0.0, 0.0, 1.0]);
    if dist > UNIT_TOL {
        return Err(Error::VertexNotAtPole { vertex: pole, dist });
    }
    let (t0, map) = remove_open_star(&tri.complex, pole)?;
    let mut positions = Vec::with_capacity(t0.vertex_count());
    for &orig in &map {
        positions.push(stereo(tri.positions[orig])?);
    }
    // Outward sphere faces can project with either handedness; pick the one
    // that makes faces counterclockwise.
    let mut area = 0.0;
    for face in t0.faces() {
        let [a, b, c] = face.map(|v| positions[v]);
        area += cross2(sub2(b, a), sub2(c, a));
    }
    let planar = if area < 0.0 {
        let flipped: Vec<[usize; 3]> = t0.faces().iter().map(|&[a, b, c]| [a, c, b]).collect();
        PlanarTriangulation::new(build_complex(flipped)?, positions)?
    } else {
        PlanarTriangulation::new(t0, positions)?
    };
    Ok((planar, map))
}

/// A rotation of 3-space, stored as the matrix that acts on column vectors.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Rotation {
    pub m: [[f64; 3]; 3],
}

impl Rotation {
    pub fn identity() -> Rotation {
        Rotation {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn apply(&self, p: Vec3) -> Vec3 {
        [
            dot3(self.m[0], p),
            dot3(self.m[1], p),
            dot3(self.m[2], p),
        ]
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Rotation { m }
    }

    pub fn transpose(&self) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[j][i];
            }
        }
        Rotation { m }
    }

    /// Rotation about a unit axis by an angle (Rodrigues).
    pub fn about_axis(axis: Vec3, angle: f64) -> Rotation {
        let [x, y, z] = normalize3(axis);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// Unit quaternion (w, x, y, z) for this rotation.
    pub fn to_quaternion(&self) -> [f64; 4] {
        let m = &self.m;
        let tr = m[0][0] + m[1][1] + m[2][2];
        let q = if tr > 0.0 {
            let s = (tr + 1.0).sqrt() * 2.0;
            [
                0.25 * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            ]
        } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
            let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
            [
                (m[2][1] - m[1][2]) / s,
                0.25 * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            ]
        } else if m[1][1] >= m[2][2] {
            let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
            [
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                0.25 * s,
                (m[1][2] + m[2][1]) / s,
            ]
        } else {
            let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
            [
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                0.25 * s,
            ]
        };
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        [q[0] / n, q[1] / n, q[2] / n, q[3] / n]
    }

    pub fn from_quaternion(q: [f64; 4]) -> Rotation {
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        let [w, x, y, z] = [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
        Rotation {
            m: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        }
    }

    /// Shortest-arc spherical interpolation: t = 0 gives self, t = 1 gives
    /// other, and the angular speed is constant.
    pub fn slerp(&self, other: &Rotation, t: f64) -> Rotation {
        let qa = self.to_quaternion();
        let mut qb = other.to_quaternion();
        let mut dot: f64 = qa.iter().zip(&qb).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            for x in &mut qb {
                *x = -*x;
            }
            dot = -dot;
        }
        let q = if dot > 1.0 - 1e-12 {
            // Nearly identical: linear blend is exact enough.
            [
                qa[0] + t * (qb[0] - qa[0]),
                qa[1] + t * (qb[1] - qa[1]),
                qa[2] + t * (qb[2] - qa[2]),
                qa[3] + t * (qb[3] - qa[3]),
            ]
        } else {
            let omega = dot.clamp(-1.0, 1.0).acos();
            let so = omega.sin();
            let ca = ((1.0 - t) * omega).sin() / so;
            let cb = (t * omega).sin() / so;
            [
                ca * qa[0] + cb * qb[0],
                ca * qa[1] + cb * qb[1],
                ca * qa[2] + cb * qb[2],
                ca * qa[3] + cb * qb[3],
            ]
        };
        Rotation::from_quaternion(q)
    }
}

/// The rotation taking p (unit) to the north pole.
pub fn rotation_to_pole(p: Vec3) -> Rotation {
    let z = [0.0, 0.0, 1.0];
    let axis = cross3(p, z);
    let n = norm3(axis);
    if n < 1e-12 {
        if p[2] > 0.0 {
            return Rotation::identity();
        }
        return Rotation::about_axis([1.0, 0.0, 0.0], PI);
    }
    let angle = n.atan2(dot3(p, z));
    Rotation::about_axis(axis, angle)
}

/// Canonical pose: vertex v at the north pole and its first link neighbor at
/// azimuth zero. Returns the rotation g and the rotated triangulation;
/// `g.apply` maps old positions to new ones.
pub fn normalize_pose(
    tri: &SphericalTriangulation,
    v: usize,
) -> Result<(SphericalTriangulation, Rotation)> {
    if v >= tri.complex.vertex_count() {
        return Err(Error::NotIncident(v));
    }
    let r1 = rotation_to_pole(tri.positions[v]);
    let (f, s) = tri.complex.corners_around(v)[0];
    let w = tri.complex.face(f)[(s + 1) % 3];
    let pw = r1.apply(tri.positions[w]);
    if pw[0].hypot(pw[1]) < 1e-12 {
        return Err(Error::NormalizationFailure(format!(
            "link vertex {w} lands on the rotation axis"
        )));
    }
    let r2 = Rotation::about_axis([0.0, 0.0, 1.0], -pw[1].atan2(pw[0]));
    let g = r2.compose(&r1);
    Ok((tri.rotated(&g), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
        loop {
            let p = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = norm3(p);
            if n > 1e-3 && n < 1.0 {
                return scale3(1.0 / n, p);
            }
        }
    }

    fn octahedron() -> SphericalTriangulation {
        let t = build_complex(crate::complex::fixtures::octahedron_faces()).unwrap();
        let positions = vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        SphericalTriangulation::new(t, positions).unwrap()
    }

    fn square_fan_planar() -> PlanarTriangulation {
        let faces = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
        let t = build_complex(faces).unwrap();
        let positions = vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
        ];
        PlanarTriangulation::new(t, positions).unwrap()
    }

    #[test]
    fn stereo_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let p = random_unit(&mut rng);
            if 1.0 - p[2] < 1e-3 {
                continue;
            }
            let q = stereo(p).unwrap();
            let back = stereo_inv(q);
            assert!(dist3(p, back) <= 1e-12, "round trip error {}", dist3(p, back));
            assert!((norm3(back) - 1.0).abs() <= 1e-14);
        }
        for _ in 0..300 {
            let q = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let back = stereo(stereo_inv(q)).unwrap();
            assert!(dist2(q, back) <= 1e-16_f64.max(1e-12 * norm2(q)));
        }
        assert!(matches!(stereo([0.0, 0.0, 1.0]), Err(Error::AtNorthPole)));
    }

    #[test]
    fn circles_map_to_circles() {
        // A latitude circle pushed around by a random rotation still projects
        // to a planar circle: check every sample against the circle through
        // the first three.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = Rotation::about_axis(random_unit(&mut rng), rng.gen_range(0.1..3.0));
            let lat: f64 = rng.gen_range(-1.2..1.2);
            let (zs, zc) = (lat.sin(), lat.cos());
            let pts: Vec<Vec2> = (0..24)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / 24.0;
                    g.apply([zc * a.cos(), zc * a.sin(), zs])
                })
                .filter(|p| 1.0 - p[2] > 1e-3)
                .map(|p| stereo(p).unwrap())
                .collect();
            if pts.len() < 5 {
                continue;
            }
            let (center, r2) = crate::layout::circumcircle(pts[0], pts[1], pts[2]).unwrap();
            let r = r2.sqrt();
            for p in &pts {
                assert!(
                    (dist2(*p, center) - r).abs() <= 1e-9 * r.max(1.0),
                    "point off circle by {}",
                    (dist2(*p, center) - r).abs()
                );
            }
        }
    }

    #[test]
    fn octahedron_angles_and_defects() {
        let oct = octahedron();
        let theta = oct.spherical_angles();
        for &x in theta.as_slice() {
            assert!((x - PI / 2.0).abs() <= 1e-15, "intrinsic angle {x}");
        }
        // Every edge: four adjacent right angles minus two opposite ones.
        for e in 0..oct.complex.edge_count() {
            let d = oct.delaunay_defect(e).unwrap();
            assert!((d - PI).abs() <= 1e-14);
        }
        assert!(oct.is_delaunay());
        assert!(oct.origin_inside());
        assert!(oct.signed_volume() > 0.0);
    }

    #[test]
    fn face_sums_carry_the_spherical_area() {
        // Girard: angle sum minus pi equals the triangle's area, checked
        // against the solid-angle formula tan(area/2) = det / (1 + dots).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut tested = 0;
        for _ in 0..500 {
            let a = random_unit(&mut rng);
            let b = random_unit(&mut rng);
            let c = random_unit(&mut rng);
            let det = det3(a, b, c);
            if det < 1e-3 {
                continue; // want positively oriented, non-flat triples
            }
            let excess = spherical_corner_angle(a, b, c)
                + spherical_corner_angle(b, c, a)
                + spherical_corner_angle(c, a, b)
                - PI;
            let denom = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
            let area = 2.0 * det.atan2(denom);
            let area = if area < 0.0 { area + 4.0 * PI } else { area };
            assert!(
                (excess - area).abs() <= 1e-10,
                "excess {excess} vs area {area}"
            );
            tested += 1;
        }
        assert!(tested > 200, "only {tested} usable samples");

        // A tiny triangle is nearly flat: excess below 1e-5 at diameter 1e-3.
        let p = normalize3([0.3, -0.5, 0.8]);
        let e1 = normalize3(cross3(p, [0.0, 0.0, 1.0]));
        let e2 = normalize3(cross3(p, e1));
        let off = |u: f64, v: f64| normalize3(add3(p, add3(scale3(u, e1), scale3(v, e2))));
        let (ta, tb, tc) = (off(0.0, 0.0), off(1e-3, 0.0), off(0.0, 1e-3));
        let sum = spherical_corner_angle(ta, tb, tc)
            + spherical_corner_angle(tb, tc, ta)
            + spherical_corner_angle(tc, ta, tb);
        assert!((sum - PI).abs() < 1e-5, "tiny-triangle excess {}", sum - PI);
    }

    #[test]
    fn planar_spherical_and_determinant_predicates_agree() {
        // A proper planar quad (two counterclockwise faces over a shared
        // edge) is lifted through the inverse projection; the planar defect,
        // the six-angle spherical defect, and the plane-side determinant must
        // then agree in sign whenever all are away from zero.
        //
        // The sign transfer needs the origin strictly inside both lifted face
        // planes, the situation of faces of an inscribed polyhedron that
        // contains the sphere center. Without it the circumcap of a lifted
        // face can be the major cap, and "outside the circumcircle" lands on
        // the wrong side of the plane. Planar counterclockwise faces lift
        // with inward orientation, so inside means a negative determinant.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut tested = 0;
        for _ in 0..40000 {
            let span: f64 = rng.gen_range(0.2..4.0);
            let b = [rng.gen_range(-span..span), rng.gen_range(-span..span)];
            let c = [rng.gen_range(-span..span), rng.gen_range(-span..span)];
            let a = [rng.gen_range(-span..span), rng.gen_range(-span..span)];
            let d = [rng.gen_range(-span..span), rng.gen_range(-span..span)];
            // Faces (a, b, c) and (d, c, b): both must be counterclockwise.
            if cross2(sub2(b, a), sub2(c, a)) < 1e-3
                || cross2(sub2(c, d), sub2(b, d)) < 1e-3
            {
                continue;
            }
            let planar = PI - corner_angle2(a, b, c) - corner_angle2(d, c, b);
            let (la, lb, lc, ld) = (stereo_inv(a), stereo_inv(b), stereo_inv(c), stereo_inv(d));
            if det3(la, lb, lc) > -1e-3 || det3(ld, lc, lb) > -1e-3 {
                continue;
            }
            let spherical = spherical_corner_angle(lb, lc, la)
                + spherical_corner_angle(lc, la, lb)
                + spherical_corner_angle(lc, lb, ld)
                + spherical_corner_angle(lb, ld, lc)
                - spherical_corner_angle(la, lb, lc)
                - spherical_corner_angle(ld, lc, lb);
            let det = delaunay_determinant(la, lb, lc, ld);
            if planar.abs() < 1e-8 || spherical.abs() < 1e-8 || det.abs() < 1e-8 {
                continue;
            }
            assert_eq!(planar > 0.0, spherical > 0.0, "planar {planar} vs eq2 {spherical}");
            assert_eq!(planar > 0.0, det > 0.0, "planar {planar} vs det {det}");
            tested += 1;
        }
        assert!(tested > 1000, "only {tested} usable samples");
    }

    #[test]
    fn great_circles_project_with_unit_power() {
        // A great circle lies in a plane through the origin; its projected
        // circle always has power -1 at the origin of the plane.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let mut tested = 0;
        for _ in 0..100 {
            let u = random_unit(&mut rng);
            if u[2].abs() < 0.05 {
                continue; // circle nearly through the pole: projects huge
            }
            let e1 = normalize3(cross3(u, [0.0, 0.0, 1.0]));
            let e2 = normalize3(cross3(u, e1));
            let pt = |t: f64| add3(scale3(t.cos(), e1), scale3(t.sin(), e2));
            let q: Vec<Vec2> = [0.3, 2.1, 4.4]
                .iter()
                .map(|&t| stereo(pt(t)).unwrap())
                .collect();
            let power =
                crate::layout::power_of_point([0.0, 0.0], q[0], q[1], q[2]).unwrap();
            assert!((power + 1.0).abs() <= 1e-12, "power {power}");
            tested += 1;
        }
        assert!(tested > 50);
    }

    #[test]
    fn lift_then_project_restores_the_plane() {
        let tri = square_fan_planar();
        let lifted = lift_to_sphere(&tri).unwrap();
        assert_eq!(lifted.complex.surface(), SurfaceKind::Sphere);
        assert_eq!(lifted.complex.vertex_count(), 6);
        assert!(lifted.signed_volume() > 0.0);

        let pole = 5;
        let (back, map) = project_to_plane(&lifted, pole).unwrap();
        assert_eq!(back.complex.face_count(), tri.complex.face_count());
        // Vertex map is a permutation of the original ids; positions match.
        for (new_id, &orig) in map.iter().enumerate() {
            assert!(orig < 5);
            let err = dist2(back.positions[new_id], tri.positions[orig]);
            assert!(err <= 1e-9, "vertex {orig} off by {err}");
        }
        let wrong = project_to_plane(&lifted, 2);
        assert!(matches!(wrong, Err(Error::VertexNotAtPole { .. })));
    }

    #[test]
    fn lift_preserves_the_delaunay_sign() {
        let tri = square_fan_planar();
        assert!(tri.is_delaunay());
        let lifted = lift_to_sphere(&tri).unwrap();
        for e in tri.complex.inner_edges().collect::<Vec<_>>() {
            let (u, w) = tri.complex.edges()[e].ends;
            let le = lifted.complex.edge_between(u, w).unwrap();
            let up = tri.delaunay_defect(e).unwrap();
            let down = lifted.delaunay_defect(le).unwrap();
            assert!(up > 0.0 && down > 0.0, "lifted defect {down} for {up}");
        }

        // A non-Delaunay edge stays non-Delaunay after the lift.
        let t2 = build_complex(vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let bad = PlanarTriangulation::new(
            t2,
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.1, 0.15]],
        )
        .unwrap();
        let e = bad.complex.edge_between(0, 2).unwrap();
        assert!(bad.delaunay_defect(e).unwrap() < 0.0);
        let lifted_bad = lift_to_sphere(&bad).unwrap();
        let le = lifted_bad.complex.edge_between(0, 2).unwrap();
        assert!(lifted_bad.delaunay_defect(le).unwrap() < 0.0);
    }

    #[test]
    fn rotations_are_orthogonal_and_slerp_interpolates() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let a = Rotation::about_axis(random_unit(&mut rng), rng.gen_range(-3.0..3.0));
            let b = Rotation::about_axis(random_unit(&mut rng), rng.gen_range(-3.0..3.0));
            // Orthogonality: g g^T = id.
            let gt = a.compose(&a.transpose());
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((gt.m[i][j] - want).abs() <= 1e-12);
                }
            }
            // Quaternion round trip.
            let q = a.to_quaternion();
            let a2 = Rotation::from_quaternion(q);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((a.m[i][j] - a2.m[i][j]).abs() <= 1e-12);
                }
            }
            // Endpoints and midpoint of the slerp.
            let s0 = a.slerp(&b, 0.0);
            let s1 = a.slerp(&b, 1.0);
            let p = random_unit(&mut rng);
            assert!(dist3(s0.apply(p), a.apply(p)) <= 1e-12);
            assert!(dist3(s1.apply(p), b.apply(p)) <= 1e-12);
            // Midpoint: equal angular distance to both ends.
            let mid = a.slerp(&b, 0.5);
            let d0 = rotation_angle(&mid.compose(&a.transpose()));
            let d1 = rotation_angle(&mid.compose(&b.transpose()));
            assert!((d0 - d1).abs() <= 1e-9, "{d0} vs {d1}");
        }
    }

    fn rotation_angle(g: &Rotation) -> f64 {
        let tr = g.m[0][0] + g.m[1][1] + g.m[2][2];
        ((tr - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }

    #[test]
    fn normalize_pose_puts_vertex_at_pole() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g0 = Rotation::about_axis(random_unit(&mut rng), 1.3);
        let oct = octahedron().rotated(&g0);
        for v in 0..6 {
            let (posed, g) = normalize_pose(&oct, v).unwrap();
            assert!(dist3(posed.positions[v], [0.0, 0.0, 1.0]) <= 1e-12);
            let (f, s) = posed.complex.corners_around(v)[0];
            let w = posed.complex.face(f)[(s + 1) % 3];
            let pw = posed.positions[w];
            assert!(pw[1].abs() <= 1e-12 && pw[0] > 0.0, "azimuth not zeroed");
            // g reproduces the pose.
            for (p, q) in oct.positions.iter().zip(&posed.positions) {
                assert!(dist3(g.apply(*p), *q) <= 1e-12);
            }
        }
    }

    #[test]
    fn antipodal_normalization() {
        let oct = octahedron();
        // Vertex 5 sits at the south pole exactly.
        let (posed, _) = normalize_pose(&oct, 5).unwrap();
        assert!(dist3(posed.positions[5], [0.0, 0.0, 1.0]) <= 1e-15);
    }
}
