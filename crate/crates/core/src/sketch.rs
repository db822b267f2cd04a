//! Johnson–Lindenstrauss dimension bounds and Gaussian random projection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{gaussian_matrix, norm2, Matrix};
use crate::rng::Seed;

/// Inputs of the JL dimension bound `k > C ln(n) / ε²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlParams {
    pub n_points: usize,
    pub epsilon: f64,
    pub constant: f64,
}

impl JlParams {
    pub const DEFAULT_CONSTANT: f64 = 24.0;

    pub fn new(n_points: usize, epsilon: f64) -> Self {
        JlParams {
            n_points,
            epsilon,
            constant: Self::DEFAULT_CONSTANT,
        }
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }
}

/// Smallest integer `k` with `k > C ln(n) / ε²` (natural log).
pub fn jl_min_dimension(params: JlParams) -> Result<usize> {
    let JlParams {
        n_points,
        epsilon,
        constant,
    } = params;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "constant must be positive, got {constant}"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least two points, got {n_points}"
        )));
    }
    let bound = constant * (n_points as f64).ln() / (epsilon * epsilon);
    Ok(bound.floor() as usize + 1)
}

/// Projects the rows of `points` (n×d) to `k` dimensions:
/// `(1/√k) · points · Rᵀ` with `R = gaussian_matrix(k, d, seed)`.
pub fn jl_project(points: &Matrix, k: usize, seed: Seed) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("target dimension must be >= 1".into()));
    }
    let r = gaussian_matrix(k, points.cols(), seed);
    Ok(points.mul_transpose(&r)?.scale(1.0 / (k as f64).sqrt()))
}

/// Per-trial squared-norm errors `‖v‖² − ‖u‖²` and their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct NormErrorStats {
    pub mean: f64,
    /// Population standard deviation (divides by the trial count).
    pub stdev: f64,
    pub samples: Vec<f64>,
    pub trial_count: usize,
}

impl NormErrorStats {
    pub fn from_samples(samples: Vec<f64>) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        NormErrorStats {
            mean,
            stdev: var.sqrt(),
            trial_count: samples.len(),
            samples,
        }
    }
}

/// Stream index of the fixed unit vector; trial `t` uses `seed.derive(t + 1)`.
const UNIT_VECTOR_STREAM: u64 = 0;

pub(crate) fn experiment_unit_vector(d: usize, seed: Seed) -> Matrix {
    let u = gaussian_matrix(1, d, seed.derive(UNIT_VECTOR_STREAM));
    let norm = norm2(u.as_slice());
    u.scale(1.0 / norm)
}

pub(crate) fn trial_seed(seed: Seed, trial: usize) -> Seed {
    seed.derive(trial as u64 + 1)
}

/// Draws one random unit vector `u ∈ R^d`, then projects it with `trials`
/// independent Gaussian maps to `R^k`, recording `‖v‖² − 1` for each.
///
/// Trials run in parallel; each uses its own derived seed, so the sample
/// vector is identical to a serial run.
pub fn norm_preservation_experiment(
    d: usize,
    k: usize,
    trials: usize,
    seed: Seed,
) -> Result<NormErrorStats> {
    if d == 0 || k == 0 || trials == 0 {
        return Err(Error::InvalidArgument(format!(
            "d, k and trials must be positive (d={d}, k={k}, trials={trials})"
        )));
    }
    let u = experiment_unit_vector(d, seed);
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| {
            let v = jl_project(&u, k, trial_seed(seed, t))?;
            let sq: f64 = v.as_slice().iter().map(|x| x * x).sum();
            Ok(sq - 1.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(NormErrorStats::from_samples(samples))
}

/// Fraction of point pairs whose squared distance after projection falls
/// outside `[(1 − ε), (1 + ε)]` times the original.
pub fn pairwise_distortion_failures(
    original: &Matrix,
    projected: &Matrix,
    epsilon: f64,
) -> Result<f64> {
    if original.rows() != projected.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} original points but {} projected",
            original.rows(),
            projected.rows()
        )));
    }
    let n = original.rows();
    let sq_dist = |m: &Matrix, i: usize, j: usize| -> f64 {
        m.row(i)
            .iter()
            .zip(m.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    };
    let mut pairs = 0usize;
    let mut failures = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let before = sq_dist(original, i, j);
            let after = sq_dist(projected, i, j);
            pairs += 1;
            if after < (1.0 - epsilon) * before || after > (1.0 + epsilon) * before {
                failures += 1;
            }
        }
    }
    Ok(if pairs == 0 {
        0.0
    } else {
        failures as f64 / pairs as f64
    })
}
