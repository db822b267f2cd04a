use crate::error::{Error, Result};
use crate::kernels::center_kernel_matrix;
use crate::linalg::{sym_eig, Matrix};

/// Principal components of a data set.
#[derive(Debug, Clone)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// d×k, orthonormal columns ordered by decreasing variance.
    pub components: Matrix,
    pub explained_variance: Vec<f64>,
}

/// Subtracts the column means: returns `(A₀, means)`.
pub fn center_columns(x: &Matrix) -> (Matrix, Vec<f64>) {
    let means = x.column_means();
    let centered = Matrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] - means[j]);
    (centered, means)
}

/// PCA of the rows of `x` (n×d) via the eigendecomposition of `(1/n) A₀ᵀA₀`.
pub fn pca_fit(x: &Matrix, k: usize) -> Result<PcaModel> {
    let (n, d) = x.shape();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("PCA needs at least two points, got {n}")));
    }
    if k == 0 || k > n.min(d) {
        return Err(Error::InvalidArgument(format!(
            "component count {k} outside 1..={}",
            n.min(d)
        )));
    }
    let (a0, mean) = center_columns(x);
    let cov = a0.transpose_mul(&a0)?.scale(1.0 / n as f64);
    let eig = sym_eig(&cov)?;
    Ok(PcaModel {
        mean,
        components: eig.vectors.leading_columns(k),
        explained_variance: eig.values[..k].iter().map(|v| v.max(0.0)).collect(),
    })
}

/// `(X − mean) · components`.
pub fn pca_transform(model: &PcaModel, x: &Matrix) -> Result<Matrix> {
    if x.cols() != model.mean.len() {
        return Err(Error::DimensionMismatch(format!(
            "data has {} columns, model expects {}",
            x.cols(),
            model.mean.len()
        )));
    }
    let centered = Matrix::from_fn(x.rows(), x.cols(), |i, j| x[(i, j)] - model.mean[j]);
    centered.matmul(&model.components)
}

/// Kernel PCA output.
#[derive(Debug, Clone)]
pub struct KpcaEmbedding {
    /// n×k; column `j` is eigenvector `j` of the centered Gram scaled by `√λ_j`.
    pub embedding: Matrix,
    pub eigenvalues: Vec<f64>,
    /// Set when fewer than `k` eigenvalues are positive; the surplus columns
    /// are zero.
    pub zero_filled: bool,
}

/// Relative threshold below which an eigenvalue of the centered Gram counts as zero.
const POSITIVE_EIGENVALUE_TOL: f64 = 1e-10;

/// Embeds the points behind Gram matrix `k` in the top-`components`
/// directions of the centered feature space.
pub fn kernel_pca(k: &Matrix, components: usize) -> Result<KpcaEmbedding> {
    let n = k.rows();
    if components == 0 || components > n {
        return Err(Error::InvalidArgument(format!(
            "component count {components} outside 1..={n}"
        )));
    }
    let centered = center_kernel_matrix(k)?;
    let eig = sym_eig(&centered)?;
    let top = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let bottom = eig.values.last().copied().unwrap_or(0.0);
    if bottom < -1e-8 * top.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "Gram matrix is not positive semidefinite (eigenvalue {bottom:e})"
        )));
    }
    let cutoff = POSITIVE_EIGENVALUE_TOL * top;
    let mut embedding = Matrix::zeros(n, components);
    let mut zero_filled = false;
    for j in 0..components {
        let lambda = eig.values[j];
        if lambda <= cutoff || lambda <= 0.0 {
            zero_filled = true;
            continue;
        }
        let scale = lambda.sqrt();
        for i in 0..n {
            embedding[(i, j)] = eig.vectors[(i, j)] * scale;
        }
    }
    Ok(KpcaEmbedding {
        embedding,
        eigenvalues: eig.values[..components].to_vec(),
        zero_filled,
    })
}
