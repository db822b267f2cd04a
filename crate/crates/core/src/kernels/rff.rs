//! Random Fourier features for the RBF kernel, and the parameter-range
//! variant that averages features over kernels with `γ ~ Uniform[lo, hi]`.
//!
//! Seed layout: frequencies are drawn from `seed.derive(1)` (row by row,
//! group by group), phases from `seed.derive(2)` and the per-group `γ`
//! values from `seed.derive(3)`. Because the frequency and phase streams do
//! not depend on the number of groups, a degenerate range `lo = hi = γ₀`
//! reproduces `sample_rff(d, m·q, γ₀)` bit for bit.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Seed;

const FREQUENCY_STREAM: u64 = 1;
const PHASE_STREAM: u64 = 2;
const GAMMA_STREAM: u64 = 3;

/// How feature inner products are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `cos(Wx + b)` averaged over features. Its expectation is `K/2`
    /// off the diagonal.
    Paper,
    /// `√2 · cos(Wx + b)`: an unbiased estimate of the kernel.
    #[default]
    Corrected,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Paper => "paper",
            Normalization::Corrected => "corrected",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Normalization::Paper),
            "corrected" => Ok(Normalization::Corrected),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization '{other}' (expected paper or corrected)"
            ))),
        }
    }
}

/// The kernel parameter the frequencies were drawn for.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaSource {
    Fixed(f64),
    /// `sampled[s]` is the `γ` used for group `s`.
    Range { lo: f64, hi: f64, sampled: Vec<f64> },
}

/// A frozen feature map `z(x) = c · cos(W x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RffMap {
    /// (m·q)×d; rows `s·m .. (s+1)·m` belong to group `s`.
    pub frequencies: Matrix,
    /// Length m·q, each in `[0, 2π)`.
    pub phases: Vec<f64>,
    pub feature_count: usize,
    pub group_count: usize,
    pub gamma: GammaSource,
    pub normalization: Normalization,
}

impl RffMap {
    /// Assembles a map from explicit frequencies and phases (single group).
    pub fn from_parts(
        frequencies: Matrix,
        phases: Vec<f64>,
        gamma: f64,
        normalization: Normalization,
    ) -> Result<Self> {
        if phases.len() != frequencies.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for {} frequency rows",
                phases.len(),
                frequencies.rows()
            )));
        }
        if let Some(p) = phases.iter().find(|p| !(0.0..2.0 * PI).contains(*p)) {
            return Err(Error::InvalidArgument(format!("phase {p} outside [0, 2π)")));
        }
        Ok(RffMap {
            feature_count: frequencies.rows(),
            group_count: 1,
            frequencies,
            phases,
            gamma: GammaSource::Fixed(gamma),
            normalization,
        })
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn total_features(&self) -> usize {
        self.feature_count * self.group_count
    }

    pub fn input_dim(&self) -> usize {
        self.frequencies.cols()
    }

    pub fn describe(&self) -> String {
        let gamma = match &self.gamma {
            GammaSource::Fixed(g) => format!("gamma={g}"),
            GammaSource::Range { lo, hi, .. } => format!("gamma~U[{lo},{hi}]"),
        };
        format!(
            "rff({gamma}, m={}, q={}, mode={})",
            self.feature_count,
            self.group_count,
            self.normalization.as_str()
        )
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

fn draw_frequencies(d: usize, gammas_per_group: &[f64], m: usize, seed: Seed) -> Matrix {
    let mut stream = seed.derive(FREQUENCY_STREAM).stream();
    let mut w = Matrix::zeros(m * gammas_per_group.len(), d);
    for (s, &gamma) in gammas_per_group.iter().enumerate() {
        // N(0, 2γ I): independent coordinates with standard deviation √(2γ)
        let sd = (2.0 * gamma).sqrt();
        for i in 0..m {
            for x in w.row_mut(s * m + i) {
                *x = sd * stream.standard_normal();
            }
        }
    }
    w
}

fn draw_phases(count: usize, seed: Seed) -> Vec<f64> {
    let mut stream = seed.derive(PHASE_STREAM).stream();
    (0..count).map(|_| 2.0 * PI * stream.uniform()).collect()
}

/// `m` features for `exp(−γ‖x−y‖²)` on `R^d`: `W ~ N(0, 2γ I)`, `b ~ U[0, 2π)`.
pub fn sample_rff(d: usize, m: usize, gamma: f64, seed: Seed) -> Result<RffMap> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimension and feature count must be positive (d={d}, m={m})"
        )));
    }
    check_gamma(gamma)?;
    Ok(RffMap {
        frequencies: draw_frequencies(d, &[gamma], m, seed),
        phases: draw_phases(m, seed),
        feature_count: m,
        group_count: 1,
        gamma: GammaSource::Fixed(gamma),
        normalization: Normalization::default(),
    })
}

/// `q` groups of `m` features; group `s` uses `γ_s ~ Uniform[lo, hi]`.
/// Every feature gets its own phase.
pub fn sample_range_rff(d: usize, m: usize, q: usize, lo: f64, hi: f64, seed: Seed) -> Result<RffMap> {
    if d == 0 || m == 0 || q == 0 {
        return Err(Error::InvalidArgument(format!(
            "d, m and q must be positive (d={d}, m={m}, q={q})"
        )));
    }
    check_gamma(lo)?;
    check_gamma(hi)?;
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
    }
    let mut gamma_stream = seed.derive(GAMMA_STREAM).stream();
    let sampled: Vec<f64> = (0..q).map(|_| gamma_stream.uniform_in(lo, hi)).collect();
    Ok(RffMap {
        frequencies: draw_frequencies(d, &sampled, m, seed),
        phases: draw_phases(m * q, seed),
        feature_count: m,
        group_count: q,
        gamma: GammaSource::Range { lo, hi, sampled },
        normalization: Normalization::default(),
    })
}

/// n × (m·q) feature matrix `c · cos(X Wᵀ + b)`, `c = √2` in corrected mode.
pub fn rff_features(map: &RffMap, x: &Matrix) -> Result<Matrix> {
    if x.cols() != map.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "points of dimension {} for a map on R^{}",
            x.cols(),
            map.input_dim()
        )));
    }
    let mut z = x.mul_transpose(&map.frequencies)?;
    let c = match map.normalization {
        Normalization::Paper => 1.0,
        Normalization::Corrected => SQRT_2,
    };
    for i in 0..z.rows() {
        for (v, b) in z.row_mut(i).iter_mut().zip(&map.phases) {
            *v = c * (*v + b).cos();
        }
    }
    Ok(z)
}

/// `K̂ = Z_X Z_Yᵀ / (m·q)`.
pub fn rff_kernel_matrix(map: &RffMap, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    let zx = rff_features(map, x)?;
    let total = map.total_features() as f64;
    if std::ptr::eq(x, y) {
        return Ok(zx.mul_transpose(&zx)?.scale(1.0 / total));
    }
    let zy = rff_features(map, y)?;
    Ok(zx.mul_transpose(&zy)?.scale(1.0 / total))
}

/// `(1/(hi−lo)) ∫ exp(−γ r²) dγ` over `[lo, hi]`: the kernel that range
/// features approximate, as a function of the squared distance `r²`.
pub fn averaged_rbf(sq_dist: f64, lo: f64, hi: f64) -> f64 {
    if hi == lo {
        return (-lo * sq_dist).exp();
    }
    if sq_dist == 0.0 {
        return 1.0;
    }
    ((-lo * sq_dist).exp() - (-hi * sq_dist).exp()) / ((hi - lo) * sq_dist)
}
