//! Sweep certificates that a deformation space with pinned boundary data
//! can be disconnected.
//!
//! Two families are swept. A flat rectangle with six fixed boundary
//! vertices and two free interior vertices A and B, where the region of
//! strictly Delaunay placements falls apart into components separated by
//! the vertical bisector: any continuous motion from one witness to the
//! other would have to drag A or B across the bisector line, and every such
//! crossing configuration violates some edge. And a flat torus with one
//! fixed and one free vertex, where the bisector of the long horizontal
//! edge class plays the same role.
//!
//! A sweep evaluates the full defect landscape on a nested corner grid
//! (resolution n reuses every point of resolution n/2), flood fills the
//! strict region, certifies every separator configuration as degenerate or
//! violating below -margin, and reports one best witness per component.
//! The verdict is Pass only when the component count is at least two and
//! agrees across the two resolutions; anything weaker is reported as
//! Inconclusive rather than a failure, since parameters, not the claim,
//! may be at fault.

use serde::{Deserialize, Serialize};

use crate::angles::AngleStructure;
use crate::complex::{build_complex, build_torus_complex, Lift, SurfaceKind, TriComplex};
use crate::error::{Error, Result};
use crate::geom::*;
use crate::layout::PlanarTriangulation;
use crate::par::map_indexed;

use std::f64::consts::PI;

/// Default strictness margin for separator certificates.
pub const SWEEP_MARGIN: f64 = 1e-6;

/// A face of either family degenerates when its doubled area drops to this.
const VALIDITY_EPS: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Rectangle family.

const BL: usize = 0;
const BR: usize = 1;
const MR: usize = 2;
const TR: usize = 3;
const TL: usize = 4;
const ML: usize = 5;
/// The free interior vertices.
pub const RECT_A: usize = 6;
pub const RECT_B: usize = 7;

/// The pinned combinatorics: a double fan on the rectangle [0, W] x [0, 1]
/// with boundary vertices at the four corners and the two side midpoints.
/// A is joined to the bottom corners and both midpoints, B to the top
/// corners and both midpoints, and the edge AB is flanked by the midpoints.
pub const RECT_FACES: [[usize; 3]; 8] = [
    [BL, BR, RECT_A],
    [BL, RECT_A, ML],
    [BR, MR, RECT_A],
    [MR, TR, RECT_B],
    [MR, RECT_B, RECT_A],
    [TR, TL, RECT_B],
    [TL, ML, RECT_B],
    [ML, RECT_A, RECT_B],
];

/// The nine interior edges as (endpoints, apexes of the two flanking
/// faces). The edge's defect is pi minus the two apex angles.
pub const RECT_EDGES: [((usize, usize), (usize, usize)); 9] = [
    ((RECT_A, BL), (BR, ML)),
    ((RECT_A, BR), (BL, MR)),
    ((RECT_A, ML), (BL, RECT_B)),
    ((RECT_A, MR), (BR, RECT_B)),
    ((RECT_A, RECT_B), (ML, MR)),
    ((RECT_B, ML), (RECT_A, TL)),
    ((RECT_B, MR), (TR, RECT_A)),
    ((RECT_B, TL), (ML, TR)),
    ((RECT_B, TR), (MR, TL)),
];

/// Fraction of the width treated as "close to a vertical wall" when
/// scanning for witnesses.
const WALL_BAND: f64 = 0.15;

/// The rectangle family: fixed combinatorics and boundary, free A and B.
#[derive(Debug, Clone)]
pub struct RectangleFamily {
    pub width: f64,
    complex: TriComplex,
}

impl RectangleFamily {
    pub fn new(width: f64) -> Result<RectangleFamily> {
        if !(width > 1.0) || !width.is_finite() {
            return Err(Error::OutOfRange(format!(
                "rectangle width {width} must exceed 1"
            )));
        }
        Ok(RectangleFamily {
            width,
            complex: build_complex(RECT_FACES.to_vec())?,
        })
    }

    pub fn complex(&self) -> &TriComplex {
        &self.complex
    }

    fn positions(&self, a: Vec2, b: Vec2) -> [Vec2; 8] {
        let w = self.width;
        [
            [0.0, 0.0],
            [w, 0.0],
            [w, 0.5],
            [w, 1.0],
            [0.0, 1.0],
            [0.0, 0.5],
            a,
            b,
        ]
    }

    /// All eight faces positively oriented.
    pub fn is_valid(&self, a: Vec2, b: Vec2) -> bool {
        let pos = self.positions(a, b);
        RECT_FACES.iter().all(|&[u, v, w]| {
            cross2(sub2(pos[v], pos[u]), sub2(pos[w], pos[u])) > VALIDITY_EPS
        })
    }

    /// The nine interior-edge defects, in RECT_EDGES order.
    pub fn defects(&self, a: Vec2, b: Vec2) -> [f64; 9] {
        let pos = self.positions(a, b);
        RECT_EDGES.map(|((u, v), (p, q))| {
            PI - corner_angle2(pos[p], pos[u], pos[v]) - corner_angle2(pos[q], pos[u], pos[v])
        })
    }

    /// Minimum defect and its edge, or None when the configuration is
    /// degenerate.
    pub fn min_defect(&self, a: Vec2, b: Vec2) -> Option<(f64, (usize, usize))> {
        if !self.is_valid(a, b) {
            return None;
        }
        let d = self.defects(a, b);
        let mut best = 0usize;
        for k in 1..9 {
            if d[k] < d[best] {
                best = k;
            }
        }
        Some((d[best], RECT_EDGES[best].0))
    }

    /// The configuration as a full planar triangulation.
    pub fn realize(&self, a: Vec2, b: Vec2) -> Result<PlanarTriangulation> {
        PlanarTriangulation::new(self.complex.clone(), self.positions(a, b).to_vec())
    }
}

// ---------------------------------------------------------------------------
// Torus family.

/// Faces of the two-vertex zigzag torus type: vertex 0 fixed on the lattice
/// rows, vertex 1 free between them.
pub const TORUS_FACES: [[usize; 3]; 4] = [[0, 0, 1], [0, 1, 1], [1, 1, 0], [1, 0, 0]];

/// Per-side deck translations (from each side's tail lift to its head
/// lift); rows sum to zero.
pub const TORUS_LIFTS: [[Lift; 3]; 4] = [
    [[1, 0], [-1, 0], [0, 0]],
    [[0, 0], [-1, 0], [1, 0]],
    [[1, 0], [0, 1], [-1, -1]],
    [[1, 1], [-1, 0], [0, -1]],
];

/// A geodesic triangulation of a flat torus: lattice basis rows, a quotient
/// complex with per-side deck translations, and one position per vertex in
/// the fundamental domain. The geodesic representative of side (f, s) is
/// the segment between the lifted copies of its endpoints, so all metric
/// quantities are computed in the universal cover.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorusTriangulation {
    pub lattice: [[f64; 2]; 2],
    pub complex: TriComplex,
    pub positions: Vec<Vec2>,
}

impl TorusTriangulation {
    pub fn new(
        lattice: [[f64; 2]; 2],
        complex: TriComplex,
        positions: Vec<Vec2>,
    ) -> Result<TorusTriangulation> {
        if complex.surface() != SurfaceKind::Torus {
            return Err(Error::WrongSurfaceKind {
                expected: "torus",
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
        if positions.iter().flatten().any(|x| !x.is_finite())
            || lattice.iter().flatten().any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let t = TorusTriangulation {
            lattice,
            complex,
            positions,
        };
        for f in 0..t.complex.face_count() {
            let [a, b, c] = t.face_corners_lifted(f);
            if cross2(sub2(b, a), sub2(c, a)) <= 0.0 {
                return Err(Error::DegenerateFace(f));
            }
        }
        Ok(t)
    }

    fn translate(&self, p: Vec2, m: Lift) -> Vec2 {
        [
            p[0] + m[0] as f64 * self.lattice[0][0] + m[1] as f64 * self.lattice[1][0],
            p[1] + m[0] as f64 * self.lattice[0][1] + m[1] as f64 * self.lattice[1][1],
        ]
    }

    /// One lifted copy of face f in the universal cover: slot 0 at its
    /// stored position, the rest following the side translations.
    pub fn face_corners_lifted(&self, f: usize) -> [Vec2; 3] {
        let face = self.complex.face(f);
        let m0 = self.complex.side_lift(f, 0);
        let m1 = self.complex.side_lift(f, 1);
        [
            self.positions[face[0]],
            self.translate(self.positions[face[1]], m0),
            self.translate(self.positions[face[2]], [m0[0] + m1[0], m0[1] + m1[1]]),
        ]
    }

    /// Corner angles of every face, measured in the universal cover.
    pub fn angles(&self) -> AngleStructure {
        let mut v = Vec::with_capacity(3 * self.complex.face_count());
        for f in 0..self.complex.face_count() {
            let [a, b, c] = self.face_corners_lifted(f);
            v.push(corner_angle2(a, b, c));
            v.push(corner_angle2(b, c, a));
            v.push(corner_angle2(c, a, b));
        }
        AngleStructure(v)
    }

    /// The six-angle Delaunay defect of edge class e. For flat triangles it
    /// collapses to twice (pi minus the two opposite angles), and angles
    /// are translation invariant, so no alignment of the two lifted copies
    /// is needed.
    pub fn delaunay_defect(&self, e: usize) -> Result<f64> {
        let corners = self.complex.opposite_corners(e);
        if corners.len() != 2 {
            return Err(Error::BoundaryEdge(e));
        }
        let mut sum = 0.0;
        for (f, s) in corners {
            let p = self.face_corners_lifted(f);
            sum += corner_angle2(p[s], p[(s + 1) % 3], p[(s + 2) % 3]);
        }
        Ok(2.0 * (PI - sum))
    }

    /// Defects of all edge classes, in canonical edge order.
    pub fn defects(&self) -> Vec<f64> {
        (0..self.complex.edge_count())
            .map(|e| self.delaunay_defect(e).expect("torus edges are interior"))
            .collect()
    }

    pub fn min_defect(&self) -> f64 {
        self.defects().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_delaunay(&self) -> bool {
        self.min_defect() > crate::layout::DELAUNAY_MARGIN
    }
}

/// The torus family: lattice rows (1, 0) and (0, h), vertex 0 fixed at the
/// origin, vertex 1 free in the open strip between consecutive rows.
#[derive(Debug, Clone)]
pub struct TorusFamily {
    pub height: f64,
    complex: TriComplex,
}

impl TorusFamily {
    pub fn new(height: f64) -> Result<TorusFamily> {
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::OutOfRange(format!(
                "torus height {height} must be positive"
            )));
        }
        Ok(TorusFamily {
            height,
            complex: build_torus_complex(TORUS_FACES.to_vec(), TORUS_LIFTS.to_vec())?,
        })
    }

    pub fn complex(&self) -> &TriComplex {
        &self.complex
    }

    pub fn lattice(&self) -> [[f64; 2]; 2] {
        [[1.0, 0.0], [0.0, self.height]]
    }

    fn corners_lifted(&self, b: Vec2, f: usize) -> [Vec2; 3] {
        // Inlined face_corners_lifted for the fixed lattice; vertex 0 at
        // the origin, vertex 1 at b.
        let pos = |v: usize, m: Lift| -> Vec2 {
            let p: Vec2 = if v == 0 { [0.0, 0.0] } else { b };
            [p[0] + m[0] as f64, p[1] + m[1] as f64 * self.height]
        };
        let face = self.complex.face(f);
        let m0 = self.complex.side_lift(f, 0);
        let m1 = self.complex.side_lift(f, 1);
        [
            pos(face[0], [0, 0]),
            pos(face[1], m0),
            pos(face[2], [m0[0] + m1[0], m0[1] + m1[1]]),
        ]
    }

    /// All four faces positively oriented; holds exactly on the open strip
    /// 0 < y < h (up to the degeneracy epsilon).
    pub fn is_valid(&self, b: Vec2) -> bool {
        (0..4).all(|f| {
            let [p, q, r] = self.corners_lifted(b, f);
            cross2(sub2(q, p), sub2(r, p)) > VALIDITY_EPS * self.height
        })
    }

    /// Defects of the six edge classes in canonical order, or None when
    /// the configuration is degenerate.
    pub fn defects(&self, b: Vec2) -> Option<[f64; 6]> {
        if !self.is_valid(b) {
            return None;
        }
        let mut angle_sum = [0.0_f64; 6];
        for f in 0..4 {
            let p = self.corners_lifted(b, f);
            for s in 0..3 {
                // The corner at slot (s + 2) is opposite side s.
                let o = (s + 2) % 3;
                angle_sum[self.complex.side_edge(f, s)] +=
                    corner_angle2(p[o], p[(o + 1) % 3], p[(o + 2) % 3]);
            }
        }
        Some(angle_sum.map(|a| 2.0 * (PI - a)))
    }

    /// Minimum defect and its edge class, or None when degenerate.
    pub fn min_defect(&self, b: Vec2) -> Option<(f64, usize)> {
        let d = self.defects(b)?;
        let mut best = 0;
        for k in 1..6 {
            if d[k] < d[best] {
                best = k;
            }
        }
        Some((d[best], best))
    }

    /// The configuration as a full torus triangulation.
    pub fn realize(&self, b: Vec2) -> Result<TorusTriangulation> {
        TorusTriangulation::new(self.lattice(), self.complex.clone(), vec![[0.0, 0.0], b])
    }
}

// ---------------------------------------------------------------------------
// Sweep reports.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Inconclusive(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// One certified point on the separator: either no valid configuration
/// exists there (degenerate) or every admissible configuration violates
/// some edge, and the recorded defect is the weakest such violation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparatorPoint {
    pub case: String,
    pub point: [f64; 2],
    pub degenerate: bool,
    pub weakest_defect: Option<f64>,
    pub worst_edge: Option<(usize, usize)>,
}

/// Best strictly Delaunay configuration of one mask component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub component: usize,
    /// Rectangle: [ax, ay, bx, by]; torus: [bx, by].
    pub coords: Vec<f64>,
    pub margin: f64,
}

/// Everything a sweep measured. `defect_grid[i][j]` is the minimum defect
/// of the configuration at (xs[i], ys[j]), None where degenerate; the
/// strict mask is defect > 0. The component count is confirmed on the
/// doubled grid, which reuses every point of the requested one.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: String,
    pub grid_n: usize,
    pub margin: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub defect_grid: Vec<Vec<Option<f64>>>,
    pub component_count: usize,
    pub component_sizes: Vec<usize>,
    pub refined_grid_n: usize,
    pub refined_component_count: usize,
    pub stable: bool,
    pub witnesses: Vec<Witness>,
    pub separator: Vec<SeparatorPoint>,
    pub verdict: Verdict,
}

/// 4-neighbor flood fill without wraparound. Returns per-cell labels
/// (0 = outside the mask) and component sizes, largest first; labels are
/// renumbered so that label k + 1 has the k-th largest size.
fn components(mask: &[Vec<bool>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let nx = mask.len();
    let ny = if nx == 0 { 0 } else { mask[0].len() };
    let mut label = vec![vec![0usize; ny]; nx];
    let mut sizes = Vec::new();
    for i0 in 0..nx {
        for j0 in 0..ny {
            if !mask[i0][j0] || label[i0][j0] != 0 {
                continue;
            }
            let id = sizes.len() + 1;
            let mut size = 0usize;
            let mut stack = vec![(i0, j0)];
            label[i0][j0] = id;
            while let Some((i, j)) = stack.pop() {
                size += 1;
                let mut push = |a: usize, b: usize, label: &mut Vec<Vec<usize>>| {
                    if mask[a][b] && label[a][b] == 0 {
                        label[a][b] = id;
                        stack.push((a, b));
                    }
                };
                if i > 0 {
                    push(i - 1, j, &mut label);
                }
                if i + 1 < nx {
                    push(i + 1, j, &mut label);
                }
                if j > 0 {
                    push(i, j - 1, &mut label);
                }
                if j + 1 < ny {
                    push(i, j + 1, &mut label);
                }
            }
            sizes.push(size);
        }
    }
    // Renumber by size, ties by first appearance, deterministically.
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&k| (usize::MAX - sizes[k], k));
    let mut rename = vec![0usize; sizes.len() + 1];
    for (new, &old) in order.iter().enumerate() {
        rename[old + 1] = new + 1;
    }
    for row in &mut label {
        for l in row {
            *l = rename[*l];
        }
    }
    let sorted: Vec<usize> = order.iter().map(|&k| sizes[k]).collect();
    (label, sorted)
}

/// Best in-mask configuration per component, as (i, j, defect), indexed by
/// component label - 1.
fn component_argmax(
    label: &[Vec<usize>],
    grid: &[Vec<Option<f64>>],
    count: usize,
) -> Vec<(usize, usize, f64)> {
    let mut best = vec![(0usize, 0usize, f64::NEG_INFINITY); count];
    for (i, row) in label.iter().enumerate() {
        for (j, &l) in row.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let d = grid[i][j].expect("labeled cell is valid");
            if d > best[l - 1].2 {
                best[l - 1] = (i, j, d);
            }
        }
    }
    best
}

fn mask_of(grid: &[Vec<Option<f64>>]) -> Vec<Vec<bool>> {
    grid.iter()
        .map(|row| row.iter().map(|d| matches!(d, Some(x) if *x > 0.0)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Rectangle sweep.

/// Strict interior corner grid i/n for i in 1..n, scaled to (0, len).
fn corner_axis(n: usize, len: f64) -> Vec<f64> {
    (1..n).map(|i| len * i as f64 / n as f64).collect()
}

/// The point-reflected slice mask: A at the grid point, B at its image
/// under (x, y) -> (W - x, 1 - y), which is the family's swap symmetry.
fn rect_slice_grid(fam: &RectangleFamily, n: usize) -> (Vec<f64>, Vec<f64>, Vec<Vec<Option<f64>>>) {
    let xs = corner_axis(n, fam.width);
    let ys = corner_axis(n, 1.0);
    let grid = map_indexed(xs.len(), |i| {
        let x = xs[i];
        ys.iter()
            .map(|&y| {
                fam.min_defect([x, y], [fam.width - x, 1.0 - y])
                    .map(|(d, _)| d)
            })
            .collect::<Vec<_>>()
    });
    (xs, ys, grid)
}

/// Best strictly Delaunay reflected pair with A in the left wall band.
fn rect_witness_scan(fam: &RectangleFamily) -> Option<(Vec2, Vec2, f64)> {
    const M: usize = 32;
    let mut best: Option<(Vec2, Vec2, f64)> = None;
    for k in 1..=M {
        let x = WALL_BAND * fam.width * k as f64 / (M + 1) as f64;
        for j in 1..=M {
            let y = j as f64 / (M + 1) as f64;
            let a = [x, y];
            let b = [fam.width - x, 1.0 - y];
            if let Some((d, _)) = fam.min_defect(a, b) {
                if d > best.map_or(0.0, |(_, _, m)| m) {
                    best = Some((a, b, d));
                }
            }
        }
    }
    best
}

/// One separator case for the rectangle: `bis` on the bisector, the other
/// free vertex confined to the two witness columns. Returns the separator
/// rows for this case.
fn rect_separator_case(
    fam: &RectangleFamily,
    case: &str,
    a_on_bisector: bool,
    columns: [f64; 2],
    n: usize,
) -> Vec<SeparatorPoint> {
    let ys = corner_axis(n, 1.0);
    map_indexed(ys.len(), |jy| {
        let bis = [fam.width / 2.0, ys[jy]];
        let mut weakest: Option<(f64, (usize, usize))> = None;
        for &cx in &columns {
            for &oy in &ys {
                let other = [cx, oy];
                let (a, b) = if a_on_bisector { (bis, other) } else { (other, bis) };
                if let Some((d, e)) = fam.min_defect(a, b) {
                    if weakest.map_or(true, |(w, _)| d > w) {
                        weakest = Some((d, e));
                    }
                }
            }
        }
        SeparatorPoint {
            case: case.to_string(),
            point: bis,
            degenerate: weakest.is_none(),
            weakest_defect: weakest.map(|(d, _)| d),
            worst_edge: weakest.map(|(_, e)| e),
        }
    })
}

/// Sweeps the rectangle family of the given width: witness scan in the
/// wall bands, exhaustive bisector certification against the witness
/// columns, and a two-resolution flood fill of the point-reflected slice.
pub fn rectangle_sweep(width: f64, grid_n: usize) -> Result<SweepReport> {
    rectangle_sweep_with_margin(width, grid_n, SWEEP_MARGIN)
}

pub fn rectangle_sweep_with_margin(width: f64, grid_n: usize, margin: f64) -> Result<SweepReport> {
    if grid_n < 50 {
        return Err(Error::OutOfRange(format!("grid {grid_n} below 50")));
    }
    if !(margin > 0.0) {
        return Err(Error::OutOfRange(format!("margin {margin} must be positive")));
    }
    let fam = RectangleFamily::new(width)?;

    let witness_pair = rect_witness_scan(&fam);
    let witness_ok = witness_pair.map_or(false, |(_, _, m)| m > margin);

    let mut separator = Vec::new();
    let mut separator_ok = true;
    if let Some((wa, wb, _)) = witness_pair {
        // A crossing the bisector while B sits on either witness column,
        // and the mirrored case.
        let cols_b = [wb[0], width - wb[0]];
        let cols_a = [wa[0], width - wa[0]];
        separator.extend(rect_separator_case(&fam, "A on bisector", true, cols_b, grid_n));
        separator.extend(rect_separator_case(&fam, "B on bisector", false, cols_a, grid_n));
        separator_ok = separator
            .iter()
            .all(|p| p.degenerate || p.weakest_defect.unwrap() < -margin);
    }

    let (xs, ys, grid) = rect_slice_grid(&fam, grid_n);
    let (label, sizes) = components(&mask_of(&grid));
    let refined_n = 2 * grid_n;
    let (_, _, refined_grid) = rect_slice_grid(&fam, refined_n);
    let (_, refined_sizes) = components(&mask_of(&refined_grid));
    let stable = sizes.len() == refined_sizes.len();

    let witnesses: Vec<Witness> = component_argmax(&label, &grid, sizes.len())
        .into_iter()
        .enumerate()
        .map(|(c, (i, j, d))| Witness {
            component: c + 1,
            coords: vec![xs[i], ys[j], width - xs[i], 1.0 - ys[j]],
            margin: d,
        })
        .collect();

    let verdict = if !witness_ok {
        Verdict::Inconclusive("no strict witness pair in the wall bands".into())
    } else if !separator_ok {
        Verdict::Inconclusive(
            "a bisector configuration stays Delaunay against the witness columns".into(),
        )
    } else if sizes.len() < 2 || refined_sizes.len() < 2 {
        Verdict::Inconclusive("the strict region looks connected".into())
    } else if !stable {
        Verdict::Inconclusive("component count changed under refinement".into())
    } else {
        Verdict::Pass
    };

    Ok(SweepReport {
        family: format!("rectangle width={width}"),
        grid_n,
        margin,
        xs,
        ys,
        defect_grid: grid,
        component_count: sizes.len(),
        component_sizes: sizes,
        refined_grid_n: refined_n,
        refined_component_count: refined_sizes.len(),
        stable,
        witnesses,
        separator,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Torus sweep.

/// Corner grid over the fundamental domain: x_i = i/n, y_j = j h/n for
/// i, j in 0..n. Row j = 0 is degenerate (B on the lattice row through the
/// fixed vertex); column i = 0 is the exact cocircularity wall.
fn torus_grid(fam: &TorusFamily, n: usize) -> (Vec<f64>, Vec<f64>, Vec<Vec<Option<f64>>>) {
    let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..n).map(|j| fam.height * j as f64 / n as f64).collect();
    let grid = map_indexed(n, |i| {
        let x = xs[i];
        ys.iter()
            .map(|&y| fam.min_defect([x, y]).map(|(d, _)| d))
            .collect::<Vec<_>>()
    });
    (xs, ys, grid)
}

/// Sweeps the free vertex of the torus family over the fundamental domain:
/// two-resolution flood fill of the strict region plus certification that
/// every configuration on the bisector column x = 1/2 is degenerate or
/// violating, which blocks any horizontal loop of the free vertex.
pub fn torus_sweep(height: f64, grid_n: usize) -> Result<SweepReport> {
    torus_sweep_with_margin(height, grid_n, SWEEP_MARGIN)
}

pub fn torus_sweep_with_margin(height: f64, grid_n: usize, margin: f64) -> Result<SweepReport> {
    if grid_n < 50 {
        return Err(Error::OutOfRange(format!("grid {grid_n} below 50")));
    }
    if grid_n % 2 != 0 {
        return Err(Error::OutOfRange(format!(
            "grid {grid_n} must be even so the bisector column lies on it"
        )));
    }
    if !(margin > 0.0) {
        return Err(Error::OutOfRange(format!("margin {margin} must be positive")));
    }
    let fam = TorusFamily::new(height)?;

    let (xs, ys, grid) = torus_grid(&fam, grid_n);
    let (label, sizes) = components(&mask_of(&grid));
    let refined_n = 2 * grid_n;
    let (_, _, refined_grid) = torus_grid(&fam, refined_n);
    let (_, refined_sizes) = components(&mask_of(&refined_grid));
    let stable = sizes.len() == refined_sizes.len();

    let separator: Vec<SeparatorPoint> = (0..grid_n)
        .map(|j| {
            let b = [0.5, ys[j]];
            match fam.min_defect(b) {
                None => SeparatorPoint {
                    case: "bisector column".into(),
                    point: b,
                    degenerate: true,
                    weakest_defect: None,
                    worst_edge: None,
                },
                Some((d, e)) => SeparatorPoint {
                    case: "bisector column".into(),
                    point: b,
                    degenerate: false,
                    weakest_defect: Some(d),
                    worst_edge: Some(fam.complex.edges()[e].ends),
                },
            }
        })
        .collect();
    let separator_ok = separator
        .iter()
        .all(|p| p.degenerate || p.weakest_defect.unwrap() < -margin);

    let witnesses: Vec<Witness> = component_argmax(&label, &grid, sizes.len())
        .into_iter()
        .enumerate()
        .map(|(c, (i, j, d))| Witness {
            component: c + 1,
            coords: vec![xs[i], ys[j]],
            margin: d,
        })
        .collect();

    let verdict = if !separator_ok {
        Verdict::Inconclusive("a bisector configuration is not blocked".into())
    } else if sizes.len() < 2 || refined_sizes.len() < 2 {
        Verdict::Inconclusive("the strict region looks connected".into())
    } else if !stable {
        Verdict::Inconclusive("component count changed under refinement".into())
    } else {
        Verdict::Pass
    };

    Ok(SweepReport {
        family: format!("torus height={height}"),
        grid_n,
        margin,
        xs,
        ys,
        defect_grid: grid,
        component_count: sizes.len(),
        component_sizes: sizes,
        refined_grid_n: refined_n,
        refined_component_count: refined_sizes.len(),
        stable,
        witnesses,
        separator,
        verdict,
    })
}
