//! Dense linear algebra kernels written from scratch: the [`Matrix`] type,
//! Householder QR (plain and column-pivoted), Golub–Kahan SVD and the
//! symmetric eigensolver.
//!
//! Every orthonormal factor follows one sign convention: the
//! largest-magnitude entry of each column is nonnegative (first such entry on
//! ties), which makes factorizations reproducible and comparable.

pub mod eig;
pub mod matrix;
pub mod qr;
pub mod svd;

pub use eig::{sym_eig, EigFactors};
pub use matrix::{dot, frobenius_norm, gaussian_matrix, norm2, Matrix};
pub use qr::{back_substitute, column_pivoted_qr, householder_qr, QrFactors};
pub use svd::{svd, SvdFactors};

use crate::error::{Error, Result};

/// `+1.0` if the largest-magnitude entry is nonnegative, else `-1.0`.
pub(crate) fn sign_of_largest(v: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for &x in v {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    if best < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Principal angles (radians, ascending) between the column spaces of two
/// matrices with orthonormal columns.
pub fn principal_angles(a: &Matrix, b: &Matrix) -> Result<Vec<f64>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "bases live in R^{} and R^{}",
            a.rows(),
            b.rows()
        )));
    }
    let overlap = a.transpose_mul(b)?;
    let f = svd(&overlap)?;
    Ok(f.s.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect())
}
