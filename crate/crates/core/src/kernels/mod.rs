//! Exact shift-invariant kernels, random Fourier feature approximations and
//! kernel-matrix centering.

mod exact;
pub mod rff;
pub mod source;

pub use exact::{center_kernel_matrix, exact_kernel_matrix, KernelSpec};
pub use rff::{
    averaged_rbf, rff_features, rff_kernel_matrix, sample_range_rff, sample_rff, GammaSource,
    Normalization, RffMap,
};
pub use source::{GramSource, KernelParams, KernelRegistry};
