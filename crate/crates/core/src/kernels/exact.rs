use crate::error::{Error, Result};
use crate::linalg::eig::check_symmetric;
use crate::linalg::Matrix;

/// An exactly evaluated kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `exp(−γ ‖x − y‖²)`
    Rbf { gamma: f64 },
    /// `(xᵀy + coef0)^degree`
    Polynomial { degree: u32, coef0: f64 },
    /// `xᵀy`
    Linear,
}

impl KernelSpec {
    pub fn rbf(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
        }
        Ok(KernelSpec::Rbf { gamma })
    }

    pub fn polynomial(degree: u32, coef0: f64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("polynomial degree must be >= 1".into()));
        }
        Ok(KernelSpec::Polynomial { degree, coef0 })
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Rbf { gamma } => {
                let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * sq).exp()
            }
            KernelSpec::Polynomial { degree, coef0 } => {
                let d: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                (d + coef0).powi(degree as i32)
            }
            KernelSpec::Linear => x.iter().zip(y).map(|(a, b)| a * b).sum(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            KernelSpec::Rbf { gamma } => format!("rbf(gamma={gamma})"),
            KernelSpec::Polynomial { degree, coef0 } => {
                format!("polynomial(degree={degree}, coef0={coef0})")
            }
            KernelSpec::Linear => "linear".to_string(),
        }
    }
}

/// `K[i][j] = k(x_i, y_j)` over the rows of `x` and `y`.
///
/// RBF distances are accumulated from coordinate differences, so the result
/// is invariant to translating both point sets.
pub fn exact_kernel_matrix(x: &Matrix, y: &Matrix, spec: &KernelSpec) -> Result<Matrix> {
    if x.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "points of dimension {} and {}",
            x.cols(),
            y.cols()
        )));
    }
    Ok(Matrix::from_fn(x.rows(), y.rows(), |i, j| {
        spec.evaluate(x.row(i), y.row(j))
    }))
}

/// Double centering `K − 1ₙK − K1ₙ + 1ₙK1ₙ`, with `1ₙ` the n×n matrix of `1/n`.
pub fn center_kernel_matrix(k: &Matrix) -> Result<Matrix> {
    check_symmetric(k)?;
    let n = k.rows();
    if n == 0 {
        return Ok(k.clone());
    }
    let row_means = k.row_means();
    let col_means = k.column_means();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    Ok(Matrix::from_fn(n, n, |i, j| {
        k[(i, j)] - row_means[i] - col_means[j] + grand
    }))
}
