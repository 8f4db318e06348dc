//! Dense linear algebra for the fiber solver.
//!
//! Everything the solver needs reduces to Householder QR with column
//! pivoting (null spaces, ranks, minimum-norm solutions of wide systems)
//! plus Cholesky for the reduced Newton system. Problem sizes are a few
//! hundred, so plain row-major dense code is the right tool; pivot order is
//! deterministic (largest remaining column norm, lowest index on ties) so
//! downstream results are reproducible bit for bit.

#[derive(Debug, Clone)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.cols + j] += v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// self^T x.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * xi;
            }
        }
        out
    }

    /// Columns lo..hi as a new matrix.
    pub fn col_slice(&self, lo: usize, hi: usize) -> Mat {
        let mut m = Mat::zeros(self.rows, hi - lo);
        for i in 0..self.rows {
            for j in lo..hi {
                m.set(i, j - lo, self.at(i, j));
            }
        }
        m
    }
}

pub(crate) struct Qr {
    /// Full square orthogonal factor.
    pub q: Mat,
    /// Upper trapezoidal, same shape as the input.
    pub r: Mat,
    /// Column permutation: column j of A*P is column perm[j] of A.
    pub perm: Vec<usize>,
    pub rank: usize,
}

/// Householder QR with column pivoting: A * P = Q * R. Rank is decided
/// against the largest diagonal with a dimension-scaled epsilon.
pub(crate) fn qr_pivot(a: &Mat) -> Qr {
    let (m, n) = (a.rows, a.cols);
    let mut r = a.clone();
    let mut q = Mat::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);

    for k in 0..steps {
        // Pivot: largest remaining column norm, lowest index on ties.
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..n {
            let norm: f64 = (k..m).map(|i| r.at(i, j) * r.at(i, j)).sum();
            if norm > best_norm * (1.0 + 1e-14) {
                best_norm = norm;
                best = j;
            }
        }
        if best != k {
            for i in 0..m {
                let t = r.at(i, k);
                r.set(i, k, r.at(i, best));
                r.set(i, best, t);
            }
            perm.swap(k, best);
        }

        let norm = (k..m).map(|i| r.at(i, k) * r.at(i, k)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        // Householder vector v = x + sign(x0) ||x|| e1.
        let alpha = if r.at(k, k) >= 0.0 { norm } else { -norm };
        let mut v: Vec<f64> = (k..m).map(|i| r.at(i, k)).collect();
        v[0] += alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        // Reflect R's trailing columns.
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * r.at(i, j)).sum();
            let c = 2.0 * dot / vtv;
            for i in k..m {
                r.add(i, j, -c * v[i - k]);
            }
        }
        // Accumulate Q = H_0 H_1 ... applied from the right.
        for i in 0..m {
            let dot: f64 = (k..m).map(|l| v[l - k] * q.at(i, l)).sum();
            let c = 2.0 * dot / vtv;
            for l in k..m {
                q.add(i, l, -c * v[l - k]);
            }
        }
    }
    // Zero the subdiagonal explicitly; reflections leave roundoff there.
    for i in 0..m {
        for j in 0..i.min(n) {
            r.set(i, j, 0.0);
        }
    }
    let scale = r.at(0, 0).abs().max(1e-300);
    let tol = scale * (m.max(n) as f64) * f64::EPSILON * 8.0;
    let mut rank = 0;
    for k in 0..steps {
        if r.at(k, k).abs() > tol {
            rank = k + 1;
        } else {
            break;
        }
    }
    Qr { q, r, perm, rank }
}

/// Orthonormal basis of the null space of `a` (columns of the result).
pub(crate) fn nullspace(a: &Mat) -> Mat {
    let qr = qr_pivot(&a.transpose());
    qr.q.col_slice(qr.rank, a.cols)
}

/// Rank of `a`.
pub(crate) fn rank(a: &Mat) -> usize {
    qr_pivot(a).rank
}

/// Minimum-norm solution of the consistent wide system A x = b, given the
/// pivoted QR of A^T. Inconsistent components of b are projected out.
pub(crate) fn min_norm_solve(qr_at: &Qr, b: &[f64]) -> Vec<f64> {
    let r = qr_at.rank;
    let n = qr_at.q.rows; // unknowns
    // A = P R^T Q^T, so R^T_r y = (P^T b)_r and x = Q_r y.
    let mut pb = vec![0.0; r];
    for i in 0..r {
        pb[i] = b[qr_at.perm[i]];
    }
    // Forward substitution with the transposed upper factor.
    let mut y = vec![0.0; r];
    for i in 0..r {
        let mut s = pb[i];
        for j in 0..i {
            s -= qr_at.r.at(j, i) * y[j];
        }
        y[i] = s / qr_at.r.at(i, i);
    }
    let mut x = vec![0.0; n];
    for (j, &yj) in y.iter().enumerate() {
        for i in 0..n {
            x[i] += qr_at.q.at(i, j) * yj;
        }
    }
    x
}

/// Cholesky factor (lower) of a symmetric positive definite matrix, or None
/// if a pivot drops below a scale-relative floor.
pub(crate) fn cholesky(c: &Mat) -> Option<Mat> {
    let n = c.rows;
    debug_assert_eq!(c.cols, n);
    let scale = (0..n).map(|i| c.at(i, i).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let floor = scale * n as f64 * f64::EPSILON * 16.0;
    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = c.at(i, j);
            for k in 0..j {
                s -= l.at(i, k) * l.at(j, k);
            }
            if i == j {
                if s <= floor {
                    return None;
                }
                l.set(i, i, s.sqrt());
            } else {
                l.set(i, j, s / l.at(j, j));
            }
        }
    }
    Some(l)
}

/// Solves L L^T x = b.
pub(crate) fn cholesky_solve(l: &Mat, b: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= l.at(i, j) * y[j];
        }
        y[i] = s / l.at(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in i + 1..n {
            s -= l.at(j, i) * x[j];
        }
        x[i] = s / l.at(i, i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zeros(rows, cols);
        for v in m.a.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        m
    }

    fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
        v.into_iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    #[test]
    fn qr_reconstructs_and_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(m, n) in &[(5, 5), (8, 3), (3, 8), (20, 13)] {
            let a = random_mat(&mut rng, m, n);
            let qr = qr_pivot(&a);
            assert_eq!(qr.rank, m.min(n));
            // Q Q^T = I.
            for i in 0..m {
                for j in 0..m {
                    let dot: f64 = (0..m).map(|k| qr.q.at(i, k) * qr.q.at(j, k)).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
            // Q R = A P.
            for i in 0..m {
                for j in 0..n {
                    let dot: f64 = (0..m).map(|k| qr.q.at(i, k) * qr.r.at(k, j)).sum();
                    assert!((dot - a.at(i, qr.perm[j])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rank_detects_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // 7x5 product of 7x3 and 3x5 has rank 3.
        let b = random_mat(&mut rng, 7, 3);
        let c = random_mat(&mut rng, 3, 5);
        let mut a = Mat::zeros(7, 5);
        for i in 0..7 {
            for j in 0..5 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += b.at(i, k) * c.at(k, j);
                }
                a.set(i, j, s);
            }
        }
        assert_eq!(rank(&a), 3);
    }

    #[test]
    fn nullspace_annihilates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_mat(&mut rng, 4, 2);
        let c = random_mat(&mut rng, 2, 9);
        let mut a = Mat::zeros(4, 9);
        for i in 0..4 {
            for j in 0..9 {
                let mut s = 0.0;
                for k in 0..2 {
                    s += b.at(i, k) * c.at(k, j);
                }
                a.set(i, j, s);
            }
        }
        let z = nullspace(&a);
        assert_eq!(z.cols, 7);
        for j in 0..z.cols {
            let col: Vec<f64> = (0..9).map(|i| z.at(i, j)).collect();
            assert!(max_abs(a.matvec(&col)) < 1e-12);
            // Orthonormal columns.
            for j2 in 0..=j {
                let dot: f64 = (0..9).map(|i| z.at(i, j) * z.at(i, j2)).sum();
                let want = if j == j2 { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn min_norm_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_mat(&mut rng, 3, 8);
        let qr_at = qr_pivot(&a.transpose());
        let b = vec![1.0, -2.0, 0.5];
        let x = min_norm_solve(&qr_at, &b);
        assert!(max_abs(a.matvec(&x).iter().zip(&b).map(|(p, q)| p - q)) < 1e-12);
        // Minimum norm: orthogonal to the null space.
        let z = nullspace(&a);
        for j in 0..z.cols {
            let dot: f64 = (0..8).map(|i| z.at(i, j) * x[i]).sum();
            assert!(dot.abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_mat(&mut rng, 6, 6);
        // C = G G^T + I is SPD.
        let mut c = Mat::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in 0..6 {
                    s += g.at(i, k) * g.at(j, k);
                }
                c.set(i, j, s);
            }
        }
        let l = cholesky(&c).unwrap();
        let b: Vec<f64> = (0..6).map(|i| (i as f64) - 2.5).collect();
        let x = cholesky_solve(&l, &b);
        assert!(max_abs(c.matvec(&x).iter().zip(&b).map(|(p, q)| p - q)) < 1e-10);
        // Indefinite input is refused.
        let mut ind = Mat::identity(3);
        ind.set(2, 2, -1.0);
        assert!(cholesky(&ind).is_none());
    }
}
