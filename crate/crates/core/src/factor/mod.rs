//! Low-rank factorizations: exact and randomized SVD, deterministic and
//! randomized interpolative decompositions, the fixed-precision rank problem
//! and the error metrics used to compare them.

mod decomp;
mod precision;
pub mod registry;

pub use decomp::{
    deterministic_id, randomized_id, randomized_svd, truncated_svd, IdResult, RsvdConfig,
};
pub use precision::{
    adaptive_rank, fixed_precision_bound, projection_error, AdaptiveBasis, FixedPrecisionBound,
    BASIS_TOL, DEFAULT_BLOCK,
};
pub use registry::{LowRankApprox, LowRankMethod, MethodRegistry};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Deterministic-vs-randomized comparison of two approximations of `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `‖det − A‖_F`
    pub absolute_deterministic: f64,
    /// `‖rand − A‖_F`
    pub absolute_random: f64,
    /// `(ar − ad) / ad`; `+∞` when `ad = 0 < ar`, `0` when both vanish.
    pub relative: f64,
    pub elapsed_det_seconds: f64,
    pub elapsed_rand_seconds: f64,
}

/// Wall-clock seconds spent producing each approximation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub deterministic_seconds: f64,
    pub random_seconds: f64,
}

/// `(ar − ad) / ad` with the zero-denominator conventions of [`ErrorReport`].
pub fn relative_error(absolute_deterministic: f64, absolute_random: f64) -> f64 {
    if absolute_deterministic > 0.0 {
        (absolute_random - absolute_deterministic) / absolute_deterministic
    } else if absolute_random > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

pub fn compare_decompositions(
    a: &Matrix,
    det_approx: &Matrix,
    rand_approx: &Matrix,
    timings: Timings,
) -> Result<ErrorReport> {
    if det_approx.shape() != a.shape() || rand_approx.shape() != a.shape() {
        return Err(Error::DimensionMismatch(format!(
            "A is {:?}, deterministic approximation {:?}, randomized {:?}",
            a.shape(),
            det_approx.shape(),
            rand_approx.shape()
        )));
    }
    let ad = det_approx.sub(a)?.frobenius_norm();
    let ar = rand_approx.sub(a)?.frobenius_norm();
    Ok(ErrorReport {
        absolute_deterministic: ad,
        absolute_random: ar,
        relative: relative_error(ad, ar),
        elapsed_det_seconds: timings.deterministic_seconds,
        elapsed_rand_seconds: timings.random_seconds,
    })
}
