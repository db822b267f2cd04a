use crate::error::{Error, Result};
use crate::linalg::{dot, gaussian_matrix, Matrix};
use crate::rng::Seed;

use super::decomp::project;

/// Orthonormality tolerance for bases handed to [`projection_error`].
pub const BASIS_TOL: f64 = 1e-10;

/// `‖A − Q Qᵀ A‖_F`. An empty basis (zero columns) yields `‖A‖_F`.
pub fn projection_error(a: &Matrix, basis: &Matrix) -> Result<f64> {
    if basis.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, matrix has {}",
            basis.rows(),
            a.rows()
        )));
    }
    if basis.cols() == 0 {
        return Ok(a.frobenius_norm());
    }
    let deviation = basis.orthonormality_defect();
    if deviation > BASIS_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(a.sub(&project(a, basis)?)?.frobenius_norm())
}

/// Width bound for the fixed-precision problem derived from the JL lemma:
/// `k > 24 n³ ln(n) / (3 ε⁴ n − 2 ε⁶)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPrecisionBound {
    /// The real-valued right-hand side.
    pub bound: f64,
    /// Smallest integer strictly above `bound`, saturating at `u64::MAX`.
    pub min_rank: u64,
    /// `true` when the bound is at least `n`, i.e. it says nothing useful.
    pub vacuous: bool,
}

pub fn fixed_precision_bound(n: usize, epsilon: f64) -> Result<FixedPrecisionBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let nf = n as f64;
    let e2 = epsilon * epsilon;
    let e4 = e2 * e2;
    let leading = 3.0 * e4 * nf;
    let denominator = leading - 2.0 * e4 * e2;
    // differences within rounding of the leading term are indistinguishable from zero
    if !(denominator > 16.0 * f64::EPSILON * leading) {
        return Err(Error::InvalidArgument(format!(
            "3ε⁴n − 2ε⁶ = {denominator:e} is not positive (need 0 < ε² < 1.5n and ε⁴ representable)"
        )));
    }
    let bound = 24.0 * nf.powi(3) * nf.ln() / denominator;
    if !bound.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bound overflows for n={n}, epsilon={epsilon:e}"
        )));
    }
    let min_rank = (bound.floor() + 1.0) as u64;
    Ok(FixedPrecisionBound {
        bound,
        min_rank,
        vacuous: bound >= nf,
    })
}

/// Result of [`adaptive_rank`].
#[derive(Debug, Clone)]
pub struct AdaptiveBasis {
    /// m×k, orthonormal columns.
    pub basis: Matrix,
    pub rank: usize,
    pub achieved_error: f64,
    /// `false` when the loop stopped at full width without reaching ε.
    pub converged: bool,
}

pub const DEFAULT_BLOCK: usize = 8;

/// Grows a randomized range basis `step` columns at a time until
/// `‖A − Q Qᵀ A‖_F ≤ epsilon`, or the basis reaches `min(m, n)` columns.
///
/// Block `b` is sketched with `seed.derive(b)`. New directions are
/// orthogonalized twice against the accumulated basis (classical
/// Gram–Schmidt with re-orthogonalization); directions that vanish after
/// projection are dropped.
pub fn adaptive_rank(a: &Matrix, epsilon: f64, step: usize, seed: Seed) -> Result<AdaptiveBasis> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if step == 0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let (m, n) = a.shape();
    let max_rank = m.min(n);
    let scale = a.frobenius_norm();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut error = scale;
    let mut block = 0u64;
    while error > epsilon && columns.len() < max_rank {
        let width = step.min(max_rank - columns.len());
        let y = a.matmul(&gaussian_matrix(n, width, seed.derive(block)))?;
        block += 1;
        let before = columns.len();
        for j in 0..width {
            let mut c = y.column(j);
            let original = dot(&c, &c).sqrt();
            for _ in 0..2 {
                for q in &columns {
                    let r = dot(q, &c);
                    c.iter_mut().zip(q).for_each(|(x, qi)| *x -= r * qi);
                }
            }
            let norm = dot(&c, &c).sqrt();
            if norm <= 1e-12 * original.max(f64::MIN_POSITIVE) || norm == 0.0 {
                continue;
            }
            c.iter_mut().for_each(|x| *x /= norm);
            columns.push(c);
            if columns.len() == max_rank {
                break;
            }
        }
        let basis = Matrix::from_columns(m, &columns);
        error = projection_error(a, &basis)?;
        if columns.len() == before {
            // the sketch found no new directions; A is captured to rounding
            break;
        }
    }
    let rank = columns.len();
    Ok(AdaptiveBasis {
        basis: Matrix::from_columns(m, &columns),
        rank,
        achieved_error: error,
        converged: error <= epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::householder_qr;

    #[test]
    fn projection_error_examples() {
        let a = Matrix::gaussian(6, 4, Seed(1));
        let empty = Matrix::zeros(6, 0);
        assert_eq!(projection_error(&a, &empty).unwrap(), a.frobenius_norm());

        let q = householder_qr(&a).unwrap().q;
        assert!(projection_error(&a, &q).unwrap() < 1e-10);

        let e1 = Matrix::from_rows(&[vec![1.0], vec![0.0]]).unwrap();
        assert!((projection_error(&Matrix::identity(2), &e1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn oblique_basis_rejected() {
        let b = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            projection_error(&Matrix::identity(2), &b),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn bound_example_is_vacuous() {
        let b = fixed_precision_bound(1000, 0.5).unwrap();
        // 24e9 ln(1000) / 187.46875
        let expect = 24e9 * 1000f64.ln() / 187.468_75;
        assert!((b.bound - expect).abs() < 1e-6 * expect);
        assert!((b.bound - 8.843e8).abs() < 1e6);
        assert!(b.vacuous);
        assert_eq!(b.min_rank, b.bound.floor() as u64 + 1);
    }

    #[test]
    fn bound_rejects_degenerate_denominator() {
        // ε² = 1.5 n makes the denominator vanish
        assert!(fixed_precision_bound(2, 3f64.sqrt()).is_err());
        assert!(fixed_precision_bound(10, 1e-80).is_err());
        assert!(fixed_precision_bound(10, 0.0).is_err());
        assert!(fixed_precision_bound(10, 100.0).is_err());
    }

    #[test]
    fn bound_monotone_in_epsilon() {
        let mut last = f64::INFINITY;
        for eps in [0.1, 0.2, 0.5, 1.0, 2.0] {
            let b = fixed_precision_bound(1000, eps).unwrap().bound;
            assert!(b <= last);
            last = b;
        }
    }

    #[test]
    fn adaptive_exact_rank_three() {
        let l = gaussian_matrix(40, 3, Seed(3));
        let r = gaussian_matrix(3, 25, Seed(4));
        let a = l.matmul(&r).unwrap();
        let res = adaptive_rank(&a, 1e-8, 2, Seed(5)).unwrap();
        assert!(res.rank == 3 || res.rank == 4, "rank {}", res.rank);
        assert!(res.achieved_error <= 1e-8);
        assert!(res.basis.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn adaptive_large_epsilon_returns_empty() {
        let a = Matrix::gaussian(10, 5, Seed(6));
        let res = adaptive_rank(&a, a.frobenius_norm() + 1.0, 3, Seed(7)).unwrap();
        assert_eq!(res.rank, 0);
        assert_eq!(res.basis.cols(), 0);
    }

    #[test]
    fn adaptive_postcondition() {
        let a = Matrix::gaussian(30, 12, Seed(8));
        for eps in [1e-3, 1.0, 5.0, 10.0] {
            let res = adaptive_rank(&a, eps, DEFAULT_BLOCK, Seed(9)).unwrap();
            assert!(res.achieved_error <= eps || res.rank == 12);
            assert!((projection_error(&a, &res.basis).unwrap() - res.achieved_error).abs() < 1e-12);
        }
    }
}
