//! Fiber optimization: recovering the distinguished angle structure over an
//! edge invariant by maximizing the concave volume energy.
//!
//! The affine constraints on theta in R^{3F} are collected in one matrix M:
//! face sums (= pi), edge invariants and boundary vertex sums (= target).
//! A fiber is the intersection of M theta = b with the open positive
//! orthant. The energy is strictly concave along every direction that moves
//! a corner, so on a nonempty fiber the maximizer exists, is unique, and is
//! found by Newton steps restricted to the null space of M:
//!
//!   Z^T diag(cot theta) Z  d = Z^T grad,   step = Z d,
//!
//! with a fraction-to-boundary rule (never lose more than 99% of a corner)
//! and Armijo backtracking. The reduced Hessian is positive definite on the
//! fiber by concavity; if rounding spoils that, the step falls back to the
//! projected gradient.
//!
//! Feasibility is a small LP: maximize the minimum corner angle, i.e.
//! maximize t subject to M(x + t 1) = b, x >= 0, t >= 0. A positive optimum
//! hands the Newton stage a strictly interior start; a nonpositive one
//! certifies the fiber is empty.

use serde::{Deserialize, Serialize};

use crate::angles::{AngleStructure, EdgeInvariant};
use crate::complex::{corner_linear, SurfaceKind, TriComplex};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, min_norm_solve, nullspace, qr_pivot, Mat, Qr};
use crate::lobachevsky::energy_unchecked;

use std::f64::consts::PI;

pub const DEFAULT_KKT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 200;
const FEAS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub theta: AngleStructure,
    /// Max norm of the reduced gradient Z^T grad E at theta.
    pub kkt_residual: f64,
    /// Max norm of M theta - b.
    pub constraint_residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
}

/// The constraint matrix and its factorizations, reusable across targets on
/// the same complex (the matrix depends only on the combinatorics).
pub(crate) struct ConstraintSystem {
    pub m: Mat,
    pub z: Mat,
    qr_mt: Qr,
    face_count: usize,
}

impl ConstraintSystem {
    pub fn build(t: &TriComplex) -> ConstraintSystem {
        let n = 3 * t.face_count();
        let rows = t.face_count() + t.edge_count() + t.boundary_vertices().len();
        let mut m = Mat::zeros(rows, n);
        for f in 0..t.face_count() {
            for s in 0..3 {
                m.set(f, 3 * f + s, 1.0);
            }
        }
        for e in 0..t.edge_count() {
            for c in t.opposite_corners(e) {
                m.add(t.face_count() + e, corner_linear(c), 1.0);
            }
        }
        for (i, &v) in t.boundary_vertices().iter().enumerate() {
            for &c in t.corners_around(v) {
                m.add(t.face_count() + t.edge_count() + i, corner_linear(c), 1.0);
            }
        }
        let qr_mt = qr_pivot(&m.transpose());
        let z = qr_mt.q.col_slice(qr_mt.rank, n);
        ConstraintSystem {
            m,
            z,
            qr_mt,
            face_count: t.face_count(),
        }
    }

    pub fn rhs(&self, alpha: &EdgeInvariant) -> Vec<f64> {
        let mut b = vec![PI; self.face_count];
        b.extend_from_slice(&alpha.edges);
        b.extend_from_slice(&alpha.boundary_vertices);
        b
    }

    pub fn residual(&self, theta: &[f64], b: &[f64]) -> Vec<f64> {
        self.m
            .matvec(theta)
            .iter()
            .zip(b)
            .map(|(mt, bi)| bi - mt)
            .collect()
    }

    pub fn residual_norm(&self, theta: &[f64], b: &[f64]) -> f64 {
        self.residual(theta, b)
            .iter()
            .fold(0.0, |a, r| a.max(r.abs()))
    }

    /// Least-squares snap back onto the affine fiber. Returns None if the
    /// correction would push a corner to zero or negative.
    pub fn polish(&self, theta: &[f64], b: &[f64]) -> Option<Vec<f64>> {
        let delta = min_norm_solve(&self.qr_mt, &self.residual(theta, b));
        let out: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + d).collect();
        if out.iter().all(|&x| x > 0.0) {
            Some(out)
        } else {
            None
        }
    }
}

/// Kernel of the full constraint map: directions along which face sums and
/// the whole invariant are constant. Used to sample fiber pairs in tests.
pub(crate) fn constraint_nullspace(t: &TriComplex) -> Mat {
    nullspace(&ConstraintSystem::build(t).m)
}

/// One fiber problem: a complex, a target invariant, and solver knobs.
#[derive(Clone)]
pub struct FiberProblem {
    pub complex: TriComplex,
    pub target: EdgeInvariant,
    pub kkt_tol: f64,
    pub max_iter: usize,
}

impl FiberProblem {
    pub fn new(t: &TriComplex, target: EdgeInvariant) -> Result<FiberProblem> {
        check_shape(t, &target)?;
        Ok(FiberProblem {
            complex: t.clone(),
            target,
            kkt_tol: DEFAULT_KKT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        })
    }

    pub fn solve(&self) -> Result<SolveResult> {
        FiberSolver::new(&self.complex).solve_with(&self.target, None, self.kkt_tol, self.max_iter)
    }

    pub fn solve_from(&self, start: &AngleStructure) -> Result<SolveResult> {
        FiberSolver::new(&self.complex).solve_with(
            &self.target,
            Some(start),
            self.kkt_tol,
            self.max_iter,
        )
    }
}

fn check_shape(t: &TriComplex, alpha: &EdgeInvariant) -> Result<()> {
    if alpha.edges.len() != t.edge_count()
        || alpha.boundary_vertices.len() != t.boundary_vertices().len()
    {
        return Err(Error::MismatchedComplex(format!(
            "target has {}+{} entries, complex has {} edges and {} boundary vertices",
            alpha.edges.len(),
            alpha.boundary_vertices.len(),
            t.edge_count(),
            t.boundary_vertices().len()
        )));
    }
    Ok(())
}

/// Repeated-solve handle: builds the constraint factorizations once. A morph
/// solves hundreds of targets on one complex, all sharing this.
pub struct FiberSolver<'a> {
    t: &'a TriComplex,
    sys: ConstraintSystem,
}

impl<'a> FiberSolver<'a> {
    pub fn new(t: &'a TriComplex) -> FiberSolver<'a> {
        FiberSolver {
            t,
            sys: ConstraintSystem::build(t),
        }
    }

    pub fn feasible(&self, alpha: &EdgeInvariant) -> Result<AngleStructure> {
        check_shape(self.t, alpha)?;
        let b = self.sys.rhs(alpha);
        self.feasible_inner(&b)
    }

    fn feasible_inner(&self, b: &[f64]) -> Result<AngleStructure> {
        let theta = lp_max_min_angle(&self.sys.m, b).ok_or(Error::Infeasible)?;
        let theta = self.sys.polish(&theta, b).unwrap_or(theta);
        if self.sys.residual_norm(&theta, b) > FEAS_TOL {
            return Err(Error::Infeasible);
        }
        Ok(AngleStructure(theta))
    }

    pub fn solve(&self, alpha: &EdgeInvariant, warm: Option<&AngleStructure>) -> Result<SolveResult> {
        self.solve_with(alpha, warm, DEFAULT_KKT_TOL, DEFAULT_MAX_ITER)
    }

    pub fn solve_with(
        &self,
        alpha: &EdgeInvariant,
        warm: Option<&AngleStructure>,
        kkt_tol: f64,
        max_iter: usize,
    ) -> Result<SolveResult> {
        check_shape(self.t, alpha)?;
        let b = self.sys.rhs(alpha);

        // A warm start is projected back onto the new fiber; if the
        // projection leaves the positive orthant the start is discarded.
        let start = warm
            .filter(|th| th.len() == 3 * self.t.face_count())
            .and_then(|th| self.sys.polish(th.as_slice(), &b))
            .filter(|th| self.sys.residual_norm(th, &b) <= FEAS_TOL);
        let theta0 = match start {
            Some(th) => AngleStructure(th),
            None => self.feasible_inner(&b)?,
        };

        // The energy maximizer is only meaningful for targets strictly
        // inside (0, pi); outside that range report the feasible point
        // without iterating.
        let in_range = alpha
            .edges
            .iter()
            .chain(&alpha.boundary_vertices)
            .all(|&a| a > 0.0 && a < PI);
        if !in_range {
            let g = energy_unchecked(theta0.as_slice()).gradient;
            let rg = self.sys.z.tr_matvec(&g);
            return Ok(SolveResult {
                kkt_residual: rg.iter().fold(0.0, |a, x| a.max(x.abs())),
                constraint_residual: self.sys.residual_norm(theta0.as_slice(), &b),
                theta: theta0,
                iterations: 0,
                status: SolveStatus::IterationLimit,
            });
        }

        let (theta, iterations, status) = self.newton(theta0.0, kkt_tol, max_iter);
        let theta = self.sys.polish(&theta, &b).unwrap_or(theta);
        let g = energy_unchecked(&theta).gradient;
        let rg = self.sys.z.tr_matvec(&g);
        Ok(SolveResult {
            kkt_residual: rg.iter().fold(0.0, |a, x| a.max(x.abs())),
            constraint_residual: self.sys.residual_norm(&theta, &b),
            theta: AngleStructure(theta),
            iterations,
            status,
        })
    }

    fn newton(
        &self,
        mut theta: Vec<f64>,
        kkt_tol: f64,
        max_iter: usize,
    ) -> (Vec<f64>, usize, SolveStatus) {
        let z = &self.sys.z;
        let k = z.cols;
        for it in 0..=max_iter {
            let rep = energy_unchecked(&theta);
            let rg = z.tr_matvec(&rep.gradient);
            let kkt = rg.iter().fold(0.0, |a: f64, x| a.max(x.abs()));
            if kkt <= kkt_tol {
                return (theta, it, SolveStatus::Converged);
            }
            if it == max_iter {
                break;
            }

            // Reduced Hessian of -E is Z^T diag(cot theta) Z.
            let cot: Vec<f64> = rep.hessian_diag.iter().map(|h| -h).collect();
            let mut c = Mat::zeros(k, k);
            for p in 0..k {
                for q in 0..=p {
                    let mut s = 0.0;
                    for i in 0..z.rows {
                        s += z.at(i, p) * cot[i] * z.at(i, q);
                    }
                    c.set(p, q, s);
                    c.set(q, p, s);
                }
            }
            let mut d = match cholesky(&c) {
                Some(l) => cholesky_solve(&l, &rg),
                None => rg.clone(),
            };
            let mut step = z.matvec(&d);
            let mut slope: f64 = rep.gradient.iter().zip(&step).map(|(a, b)| a * b).sum();
            if !slope.is_finite() || slope <= 0.0 {
                d = rg.clone();
                step = z.matvec(&d);
                slope = rep.gradient.iter().zip(&step).map(|(a, b)| a * b).sum();
            }

            // Keep at least 1% of every corner.
            let mut s = 1.0_f64;
            for (x, dx) in theta.iter().zip(&step) {
                if *dx < 0.0 {
                    s = s.min(0.99 * x / -dx);
                }
            }
            // Armijo backtracking on the (to-be-maximized) energy.
            let mut accepted = false;
            for _ in 0..70 {
                let cand: Vec<f64> = theta.iter().zip(&step).map(|(x, dx)| x + s * dx).collect();
                let val = energy_unchecked(&cand).value;
                if val >= rep.value + 1e-4 * s * slope {
                    theta = cand;
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            if !accepted {
                return (theta, it, SolveStatus::IterationLimit);
            }
        }
        (theta, max_iter, SolveStatus::IterationLimit)
    }
}

/// Strictly positive point of the fiber with the minimum angle maximized,
/// or Infeasible if no strictly positive point exists.
pub fn find_feasible(t: &TriComplex, alpha: &EdgeInvariant) -> Result<AngleStructure> {
    FiberSolver::new(t).feasible(alpha)
}

/// An orthonormal basis of the in-fiber directions: corner vectors along
/// which every face sum and every invariant entry stays constant. Each basis
/// vector has length 3|F|; the list may be empty (rigid fibers).
pub fn fiber_directions(t: &TriComplex) -> Vec<Vec<f64>> {
    let z = constraint_nullspace(t);
    (0..z.cols)
        .map(|j| (0..z.rows).map(|i| z.at(i, j)).collect())
        .collect()
}

/// The energy maximizer over the fiber of alpha.
pub fn maximize(t: &TriComplex, alpha: &EdgeInvariant) -> Result<SolveResult> {
    FiberProblem::new(t, alpha.clone())?.solve()
}

/// Same, warm started; the start is projected onto the fiber first.
pub fn maximize_warm(
    t: &TriComplex,
    alpha: &EdgeInvariant,
    start: &AngleStructure,
) -> Result<SolveResult> {
    FiberProblem::new(t, alpha.clone())?.solve_from(start)
}

/// Dimension of the image of the invariant map restricted to angle
/// structures with 2 pi interior vertex sums, on a disk complex. Equals
/// 2|V| - 4 when every such structure is realizable.
pub fn fiber_dimension(t: &TriComplex) -> Result<usize> {
    if t.surface() != SurfaceKind::Disk {
        return Err(Error::WrongSurfaceKind {
            expected: "disk",
            found: t.surface(),
        });
    }
    let n = 3 * t.face_count();
    let interior = t.interior_vertices();
    let mut bmat = Mat::zeros(t.face_count() + interior.len(), n);
    for f in 0..t.face_count() {
        for s in 0..3 {
            bmat.set(f, 3 * f + s, 1.0);
        }
    }
    for (i, &v) in interior.iter().enumerate() {
        for &c in t.corners_around(v) {
            bmat.add(t.face_count() + i, corner_linear(c), 1.0);
        }
    }
    let zb = nullspace(&bmat);

    let rows = t.edge_count() + t.boundary_vertices().len();
    let mut ma = Mat::zeros(rows, n);
    for e in 0..t.edge_count() {
        for c in t.opposite_corners(e) {
            ma.add(e, corner_linear(c), 1.0);
        }
    }
    for (i, &v) in t.boundary_vertices().iter().enumerate() {
        for &c in t.corners_around(v) {
            ma.add(t.edge_count() + i, corner_linear(c), 1.0);
        }
    }
    // Rank of M_alpha restricted to the tangent space of the constrained set.
    let mut g = Mat::zeros(rows, zb.cols);
    for i in 0..rows {
        for j in 0..zb.cols {
            let mut s = 0.0;
            for l in 0..n {
                s += ma.at(i, l) * zb.at(l, j);
            }
            g.set(i, j, s);
        }
    }
    Ok(crate::linalg::rank(&g))
}

// ---------------------------------------------------------------------------
// Phase-1/phase-2 simplex, full tableau, Bland's rule. Sizes are tiny
// (hundreds of columns), so clarity beats sparsity here.

fn lp_max_min_angle(m: &Mat, b: &[f64]) -> Option<Vec<f64>> {
    let (r, n) = (m.rows, m.cols);
    let nstruct = n + 1; // x variables plus t
    let ncols = nstruct + r; // plus artificials
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut basis: Vec<usize> = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = vec![0.0; ncols + 1];
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut tcol = 0.0;
        for j in 0..n {
            row[j] = flip * m.at(i, j);
            tcol += m.at(i, j);
        }
        row[n] = flip * tcol;
        row[nstruct + i] = 1.0;
        row[ncols] = flip * b[i];
        rows.push(row);
        basis.push(nstruct + i);
    }

    let pivot_tol = 1e-9;
    let iterate = |rows: &mut Vec<Vec<f64>>,
                       basis: &mut Vec<usize>,
                       cost: &dyn Fn(usize) -> f64,
                       allow: &dyn Fn(usize) -> bool|
     -> bool {
        for _round in 0..20_000 {
            // Reduced costs c_j - c_B B^-1 A_j, computed from the tableau.
            let mut entering = None;
            for j in 0..ncols {
                if !allow(j) || basis.contains(&j) {
                    continue;
                }
                let mut red = cost(j);
                for (i, row) in rows.iter().enumerate() {
                    red -= cost(basis[i]) * row[j];
                }
                if red < -pivot_tol {
                    entering = Some(j);
                    break; // Bland: first improving index
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for (i, row) in rows.iter().enumerate() {
                if row[j] > pivot_tol {
                    let ratio = row[ncols] / row[j];
                    if ratio < best - 1e-12
                        || (ratio < best + 1e-12
                            && leave.is_some_and(|l| basis[i] < basis[l]))
                    {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(i) = leave else { return false }; // unbounded
            pivot(rows, basis, i, j, ncols);
        }
        false
    };

    // Phase 1: drive artificial variables to zero.
    let art_cost = |j: usize| if j >= nstruct { 1.0 } else { 0.0 };
    if !iterate(&mut rows, &mut basis, &art_cost, &|_| true) {
        return None;
    }
    let infeas: f64 = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| basis[*i] >= nstruct)
        .map(|(_, row)| row[ncols])
        .sum();
    if infeas > 1e-8 {
        return None;
    }
    // Pivot leftover artificials out, or drop their (redundant) rows.
    let mut i = 0;
    while i < rows.len() {
        if basis[i] >= nstruct {
            let j = (0..nstruct).find(|&j| rows[i][j].abs() > pivot_tol);
            match j {
                Some(j) => pivot(&mut rows, &mut basis, i, j, ncols),
                None => {
                    rows.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase 2: maximize t (minimize -t), artificials barred.
    let t_cost = |j: usize| if j == n { -1.0 } else { 0.0 };
    if !iterate(&mut rows, &mut basis, &t_cost, &|j| j < nstruct) {
        return None;
    }

    let mut x = vec![0.0; nstruct];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nstruct {
            x[bv] = rows[i][ncols];
        }
    }
    let t = x[n];
    if t <= 1e-12 {
        return None;
    }
    Some((0..n).map(|j| x[j] + t).collect())
}

fn pivot(rows: &mut [Vec<f64>], basis: &mut [usize], i: usize, j: usize, ncols: usize) {
    let p = rows[i][j];
    for v in rows[i].iter_mut() {
        *v /= p;
    }
    for i2 in 0..rows.len() {
        if i2 == i {
            continue;
        }
        let f = rows[i2][j];
        if f == 0.0 {
            continue;
        }
        for col in 0..=ncols {
            let upd = rows[i][col] * f;
            rows[i2][col] -= upd;
        }
    }
    basis[i] = j;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::{edge_invariant, in_fiber};
    use crate::complex::fixtures::*;
    use crate::complex::build_complex;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn wheel_target(rng: &mut ChaCha8Rng) -> (TriComplex, EdgeInvariant, AngleStructure) {
        // Invariant of a known angle structure, so the fiber is nonempty and
        // the target stays comfortably inside (0, pi).
        let t = build_complex(wheel_faces()).unwrap();
        let mut v = Vec::new();
        for _ in 0..t.face_count() {
            let a: f64 = rng.gen_range(0.85..1.15);
            let b: f64 = rng.gen_range(0.85..1.15);
            let c: f64 = rng.gen_range(0.85..1.15);
            let s = a + b + c;
            v.extend_from_slice(&[PI * a / s, PI * b / s, PI * c / s]);
        }
        let theta = AngleStructure(v);
        let alpha = edge_invariant(&t, &theta).unwrap();
        (t, alpha, theta)
    }

    #[test]
    fn single_triangle_is_forced() {
        // Boundary data pins every corner: the fiber is one point.
        let t = build_complex(vec![[0, 1, 2]]).unwrap();
        // Corners: vertex 0 = pi/2, vertex 1 = pi/3, vertex 2 = pi/6.
        // Edges sorted: (0,1) sees corner 2, (0,2) sees 1, (1,2) sees 0.
        let alpha = EdgeInvariant {
            edges: vec![PI / 6.0, PI / 3.0, PI / 2.0],
            boundary_vertices: vec![PI / 2.0, PI / 3.0, PI / 6.0],
        };
        let res = maximize(&t, &alpha).unwrap();
        assert_eq!(res.status, SolveStatus::Converged);
        let want = [PI / 2.0, PI / 3.0, PI / 6.0];
        for (got, want) in res.theta.0.iter().zip(want) {
            assert!((got - want).abs() <= 1e-8, "{got} vs {want}");
        }
        assert!(res.constraint_residual <= 1e-10);
    }

    #[test]
    fn symmetric_wheel_goes_equilateral() {
        let t = build_complex(wheel_faces()).unwrap();
        let alpha = EdgeInvariant {
            edges: (0..t.edge_count())
                .map(|e| {
                    if t.is_boundary_edge(e) {
                        PI / 3.0
                    } else {
                        2.0 * PI / 3.0
                    }
                })
                .collect(),
            boundary_vertices: vec![2.0 * PI / 3.0; 6],
        };
        let res = maximize(&t, &alpha).unwrap();
        assert_eq!(res.status, SolveStatus::Converged);
        for &x in res.theta.as_slice() {
            assert!((x - PI / 3.0).abs() <= 1e-8);
        }
        assert!(res.kkt_residual <= 1e-10);
    }

    #[test]
    fn feasible_point_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let (t, alpha, _) = wheel_target(&mut rng);
            let th = find_feasible(&t, &alpha).unwrap();
            assert!(th.0.iter().all(|&x| x > 0.0));
            assert!(in_fiber(&t, &th, &alpha, 1e-9));
        }
    }

    #[test]
    fn two_starts_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..10 {
            let (t, alpha, witness) = wheel_target(&mut rng);
            let problem = FiberProblem::new(&t, alpha.clone()).unwrap();
            let cold = problem.solve().unwrap();
            assert_eq!(cold.status, SolveStatus::Converged, "round {round}");
            // Second start: the witness structure itself, which generally is
            // not the maximizer.
            let warm = problem.solve_from(&witness).unwrap();
            assert_eq!(warm.status, SolveStatus::Converged);
            let diff = cold
                .theta
                .0
                .iter()
                .zip(&warm.theta.0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-8, "round {round}: maximizers differ by {diff}");
            // The maximizer dominates the witness in energy.
            let e_star = energy_unchecked(cold.theta.as_slice()).value;
            let e_wit = energy_unchecked(witness.as_slice()).value;
            assert!(e_star >= e_wit - 1e-12);
        }
    }

    #[test]
    fn energy_is_concave_on_fiber_segments() {
        // Pair theta +- s d with d in the kernel of the constraint map.
        let t = build_complex(wheel_faces()).unwrap();
        let z = constraint_nullspace(&t);
        assert!(z.cols >= 1, "wheel fiber should have positive dimension");
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let (_, _, theta) = wheel_target(&mut rng);
            let coeff: Vec<f64> = (0..z.cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let d = z.matvec(&coeff);
            let dmax = d.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
            if dmax < 1e-12 {
                continue;
            }
            let tmin = theta.0.iter().cloned().fold(f64::INFINITY, f64::min);
            let s = 0.5 * tmin / dmax;
            let a: Vec<f64> = theta.0.iter().zip(&d).map(|(x, dx)| x + s * dx).collect();
            let b: Vec<f64> = theta.0.iter().zip(&d).map(|(x, dx)| x - s * dx).collect();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
            let ea = energy_unchecked(&a).value;
            let eb = energy_unchecked(&b).value;
            let em = energy_unchecked(&mid).value;
            assert!(
                em >= 0.5 * (ea + eb) - 1e-12,
                "midpoint concavity violated: {em} vs {}",
                0.5 * (ea + eb)
            );
        }
    }

    #[test]
    fn infeasible_target_is_reported() {
        let t = build_complex(vec![[0, 1, 2]]).unwrap();
        // Boundary sums force all corners to pi/2, contradicting the face sum.
        let alpha = EdgeInvariant {
            edges: vec![PI / 2.0, PI / 2.0, PI / 2.0],
            boundary_vertices: vec![PI / 2.0, PI / 2.0, PI / 2.0],
        };
        assert!(matches!(maximize(&t, &alpha), Err(Error::Infeasible)));
    }

    #[test]
    fn out_of_range_target_stops_immediately() {
        let t = build_complex(wheel_faces()).unwrap();
        // Feasible fiber, but one target entry sits at pi.
        let mut alpha = EdgeInvariant {
            edges: (0..t.edge_count())
                .map(|e| {
                    if t.is_boundary_edge(e) {
                        PI / 3.0
                    } else {
                        2.0 * PI / 3.0
                    }
                })
                .collect(),
            boundary_vertices: vec![2.0 * PI / 3.0; 6],
        };
        // Bump one spoke to pi and compensate nothing: pick the invariant of
        // a structure with a straight angle to stay feasible.
        let spoke = (0..t.edge_count()).find(|&e| !t.is_boundary_edge(e)).unwrap();
        alpha.edges[spoke] = PI;
        match maximize(&t, &alpha) {
            Ok(res) => {
                assert_eq!(res.status, SolveStatus::IterationLimit);
                assert_eq!(res.iterations, 0);
            }
            Err(Error::Infeasible) => {} // also acceptable: fiber may be empty
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn fiber_dimension_matches_vertex_count() {
        let tri = build_complex(vec![[0, 1, 2]]).unwrap();
        assert_eq!(fiber_dimension(&tri).unwrap(), 2); // 2*3 - 4

        let wheel = build_complex(wheel_faces()).unwrap();
        assert_eq!(fiber_dimension(&wheel).unwrap(), 10); // 2*7 - 4

        let oct = build_complex(octahedron_faces()).unwrap();
        let (t0, _) = crate::complex::remove_open_star(&oct, 0).unwrap();
        assert_eq!(fiber_dimension(&t0).unwrap(), 6); // 2*5 - 4

        let ico = build_complex(icosahedron_faces()).unwrap();
        let (i0, _) = crate::complex::remove_open_star(&ico, 3).unwrap();
        assert_eq!(fiber_dimension(&i0).unwrap(), 18); // 2*11 - 4

        assert!(matches!(
            fiber_dimension(&oct),
            Err(Error::WrongSurfaceKind { .. })
        ));
    }
}
