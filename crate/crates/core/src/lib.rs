//! Randomized numerical linear algebra.
//!
//! * [`linalg`]: dense matrix type and from-scratch QR, SVD and symmetric
//!   eigensolvers, plus seeded Gaussian matrices.
//! * [`sketch`]: Johnson–Lindenstrauss bounds and Gaussian random projection.
//! * [`factor`]: randomized and deterministic low-rank factorizations (SVD,
//!   RSVD, ID, RID), fixed-precision rank selection and error metrics.
//! * [`kernels`]: exact kernels, random Fourier features and the
//!   parameter-range feature sampler.
//! * [`models`]: PCA, kernel PCA, SMO kernel SVM with one-vs-one multiclass
//!   and grid search, least squares and eigenfaces.
//!
//! All randomness is derived from a [`Seed`]; identical seeds reproduce
//! bit-identical results, including under parallel execution.

pub mod error;
pub mod factor;
pub mod kernels;
pub mod linalg;
pub mod models;
pub mod rng;
pub mod sketch;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rng::Seed;
