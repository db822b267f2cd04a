use crate::error::{Error, Result};
use crate::factor::{projection_error, randomized_svd, truncated_svd, RsvdConfig};
use crate::linalg::Matrix;
use crate::rng::Seed;

/// How the left singular vectors of the centered image matrix are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenfaceMethod {
    Deterministic,
    Randomized {
        power: usize,
        oversampling: usize,
        seed: Seed,
    },
}

impl EigenfaceMethod {
    pub fn randomized(seed: Seed) -> Self {
        EigenfaceMethod::Randomized {
            power: 1,
            oversampling: RsvdConfig::DEFAULT_OVERSAMPLING,
            seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EigenfaceMethod::Deterministic => "deterministic",
            EigenfaceMethod::Randomized { .. } => "randomized",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenfaces {
    pub mean_face: Vec<f64>,
    /// pixels×k, orthonormal columns.
    pub basis: Matrix,
    pub singular_values: Vec<f64>,
}

/// Subtracts the mean column (the mean face) from every image column.
pub fn center_images(images: &Matrix) -> (Matrix, Vec<f64>) {
    let mean = images.row_means();
    let centered = Matrix::from_fn(images.rows(), images.cols(), |i, j| images[(i, j)] - mean[i]);
    (centered, mean)
}

/// Leading `k` eigenfaces of `images` (pixels × n_images, one image per column).
pub fn eigenfaces(images: &Matrix, k: usize, method: EigenfaceMethod) -> Result<Eigenfaces> {
    let (pixels, n) = images.shape();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least two images, got {n}")));
    }
    if k == 0 || k > n.min(pixels) {
        return Err(Error::InvalidArgument(format!(
            "basis size {k} outside 1..={}",
            n.min(pixels)
        )));
    }
    let (centered, mean_face) = center_images(images);
    if centered.max_abs() == 0.0 {
        return Err(Error::DegenerateData(
            "all images are identical, so the centered matrix is zero".into(),
        ));
    }
    let factors = match method {
        EigenfaceMethod::Deterministic => truncated_svd(&centered, k)?,
        EigenfaceMethod::Randomized { power, oversampling, seed } => {
            let cfg = RsvdConfig::new(k, seed).power(power).oversampling(oversampling);
            randomized_svd(&centered, &cfg)?
        }
    };
    Ok(Eigenfaces {
        mean_face,
        basis: factors.u,
        singular_values: factors.s,
    })
}

/// `‖A₀ − U_k U_kᵀ A₀‖_F` for every `k` in `ks`, using nested prefixes of
/// one basis.
pub fn reconstruction_errors(centered: &Matrix, basis: &Matrix, ks: &[usize]) -> Result<Vec<f64>> {
    ks.iter()
        .map(|&k| {
            if k > basis.cols() {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} exceeds the {} available basis vectors",
                    basis.cols()
                )));
            }
            projection_error(centered, &basis.leading_columns(k))
        })
        .collect()
}
