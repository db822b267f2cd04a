//! Householder QR, with and without greedy column pivoting.

use super::matrix::{dot, Matrix};
use super::sign_of_largest;
use crate::error::{Error, Result};

/// Thin QR factors: `A P = Q R` with `Q` m×r orthonormal, `R` r×n upper
/// triangular and `r = min(m, n)`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: Matrix,
    /// Column permutation: column `j` of `A P` is column `perm[j]` of `A`.
    pub perm: Option<Vec<usize>>,
}

impl QrFactors {
    /// `Q R` (equal to `A P`).
    pub fn reconstruct(&self) -> Matrix {
        self.q.matmul(&self.r).expect("conformant factors")
    }

    /// Numerical rank: count of `|R_ii| > tol * |R_00|`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        let r = self.r.rows().min(self.r.cols());
        if r == 0 {
            return 0;
        }
        let lead = self.r[(0, 0)].abs();
        (0..r).filter(|&i| self.r[(i, i)].abs() > tol * lead).count()
    }
}

/// Thin Householder QR of a tall matrix.
pub fn householder_qr(a: &Matrix) -> Result<QrFactors> {
    if a.rows() < a.cols() {
        return Err(Error::InvalidArgument(format!(
            "householder_qr needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(factor(a, false))
}

/// Column-pivoted Householder QR. At step `k` the remaining column with the
/// largest residual norm is moved to position `k` (lowest index on ties), so
/// `|R_00| >= |R_11| >= ...`.
pub fn column_pivoted_qr(a: &Matrix) -> QrFactors {
    factor(a, true)
}

fn factor(a: &Matrix, pivot: bool) -> QrFactors {
    let (m, n) = a.shape();
    let r = m.min(n);
    // column-major working copy
    let mut cols: Vec<Vec<f64>> = a.columns();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(r);

    for k in 0..r {
        if pivot {
            let mut best = k;
            let mut best_norm = -1.0;
            for (j, col) in cols.iter().enumerate().skip(k) {
                let norm = dot(&col[k..], &col[k..]);
                if norm > best_norm {
                    best_norm = norm;
                    best = j;
                }
            }
            cols.swap(k, best);
            perm.swap(k, best);
        }

        let x = &cols[k][k..];
        let norm_x = dot(x, x).sqrt();
        let mut v = x.to_vec();
        if norm_x > 0.0 {
            let alpha = if x[0] >= 0.0 { -norm_x } else { norm_x };
            v[0] -= alpha;
            let norm_v = dot(&v, &v).sqrt();
            if norm_v > 0.0 {
                v.iter_mut().for_each(|e| *e /= norm_v);
            }
            cols[k][k] = alpha;
            cols[k][k + 1..].iter_mut().for_each(|e| *e = 0.0);
            for col in cols.iter_mut().skip(k + 1) {
                apply_reflector(&v, &mut col[k..]);
            }
        } else {
            v.iter_mut().for_each(|e| *e = 0.0);
        }
        reflectors.push(v);
    }

    let mut q_cols: Vec<Vec<f64>> = (0..r)
        .map(|j| {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            e
        })
        .collect();
    for (k, v) in reflectors.iter().enumerate().rev() {
        for col in q_cols.iter_mut() {
            apply_reflector(v, &mut col[k..]);
        }
    }

    let mut rmat = Matrix::from_fn(r, n, |i, j| if i <= j { cols[j][i] } else { 0.0 });
    for (j, col) in q_cols.iter_mut().enumerate() {
        if sign_of_largest(col) < 0.0 {
            col.iter_mut().for_each(|e| *e = -*e);
            rmat.row_mut(j).iter_mut().for_each(|e| *e = -*e);
        }
    }
    QrFactors {
        q: Matrix::from_columns(m, &q_cols),
        r: rmat,
        perm: pivot.then_some(perm),
    }
}

#[inline]
fn apply_reflector(v: &[f64], x: &mut [f64]) {
    let s = 2.0 * dot(v, x);
    if s != 0.0 {
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi -= s * vi;
        }
    }
}

/// Solves `R x = b` for upper-triangular `R` (n×n leading block).
pub fn back_substitute(r: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = r.cols();
    if r.rows() < n || b.len() < n {
        return Err(Error::DimensionMismatch(format!(
            "back substitution with {}x{} R and rhs of length {}",
            r.rows(),
            n,
            b.len()
        )));
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let diag = r[(i, i)];
        if diag == 0.0 {
            return Err(Error::RankDeficient(format!("zero pivot at R[{i},{i}]")));
        }
        let tail: f64 = (i + 1..n).map(|j| r[(i, j)] * x[j]).sum();
        x[i] = (b[i] - tail) / diag;
    }
    Ok(x)
}
