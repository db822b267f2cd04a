use crate::error::{Error, Result};
use crate::linalg::{column_pivoted_qr, gaussian_matrix, householder_qr, svd, Matrix, SvdFactors};
use crate::rng::Seed;

/// Randomized SVD parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsvdConfig {
    /// Target rank `k`.
    pub rank: usize,
    /// Number of power iterations `q`.
    pub power: usize,
    /// Extra sketch columns `ℓ`; the sketch has `k + ℓ` columns.
    pub oversampling: usize,
    pub seed: Seed,
    /// Form `(A Aᵀ)^q A Ω` with plain products instead of re-orthonormalizing
    /// between applications. Loses accuracy once `σ₁/σₖ` grows; kept for
    /// reproducing the unstabilized reference behaviour.
    pub raw_power: bool,
}

impl RsvdConfig {
    pub const DEFAULT_OVERSAMPLING: usize = 10;

    pub fn new(rank: usize, seed: Seed) -> Self {
        RsvdConfig {
            rank,
            power: 1,
            oversampling: Self::DEFAULT_OVERSAMPLING,
            seed,
            raw_power: false,
        }
    }

    pub fn power(mut self, q: usize) -> Self {
        self.power = q;
        self
    }

    pub fn oversampling(mut self, l: usize) -> Self {
        self.oversampling = l;
        self
    }

    pub fn raw_power(mut self, raw: bool) -> Self {
        self.raw_power = raw;
        self
    }
}

fn orthonormal_range(y: &Matrix) -> Result<Matrix> {
    Ok(householder_qr(y)?.q)
}

/// Orthonormal basis for the range of `(A Aᵀ)^q A Ω`, `Ω` an n×p Gaussian sketch.
pub(crate) fn sketch_range(a: &Matrix, p: usize, power: usize, raw: bool, seed: Seed) -> Result<Matrix> {
    let omega = gaussian_matrix(a.cols(), p, seed);
    let mut y = a.matmul(&omega)?;
    if raw {
        for _ in 0..power {
            y = a.matmul(&a.transpose_mul(&y)?)?;
        }
        return orthonormal_range(&y);
    }
    for _ in 0..power {
        let q = orthonormal_range(&y)?;
        let z = orthonormal_range(&a.transpose_mul(&q)?)?;
        y = a.matmul(&z)?;
    }
    orthonormal_range(&y)
}

/// Rank-`k` randomized SVD.
///
/// Sketch `Y` (with `cfg.power` power steps), `Q = qr(Y)`, `B = QᵀA`,
/// `B = Ũ Σ Vᵀ`, `U = Q Ũ`; all three factors are truncated to `k`.
/// The sketch width `k + ℓ` is capped at `min(m, n)`.
pub fn randomized_svd(a: &Matrix, cfg: &RsvdConfig) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let k = cfg.rank;
    if k == 0 || k > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 1..={} for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    let p = (k + cfg.oversampling).min(m.min(n));
    let q = sketch_range(a, p, cfg.power, cfg.raw_power, cfg.seed)?;
    let b = q.transpose_mul(a)?;
    let small = svd(&b)?;
    let u = q.matmul(&small.u)?;
    Ok(SvdFactors {
        u,
        s: small.s,
        v: small.v,
    }
    .truncate(k))
}

/// Best rank-`k` approximation from the full SVD.
pub fn truncated_svd(a: &Matrix, k: usize) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    if k == 0 || k > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 1..={} for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    Ok(svd(a)?.truncate(k))
}

/// Column-skeleton approximation `A ≈ Q_k Q_kᵀ A` where `Q_k` spans `k`
/// selected columns of `A`.
#[derive(Debug, Clone)]
pub struct IdResult {
    /// m×k, orthonormal columns.
    pub basis: Matrix,
    /// Indices into the columns of the original matrix, in pivot order.
    pub selected_columns: Vec<usize>,
    pub approximation_rank: usize,
}

impl IdResult {
    /// `Q_k Q_kᵀ A`.
    pub fn approximate(&self, a: &Matrix) -> Result<Matrix> {
        project(a, &self.basis)
    }
}

pub(crate) fn project(a: &Matrix, basis: &Matrix) -> Result<Matrix> {
    basis.matmul(&basis.transpose_mul(a)?)
}

/// Interpolative decomposition from a column-pivoted QR of all of `A`.
pub fn deterministic_id(a: &Matrix, k: usize) -> Result<IdResult> {
    let (m, n) = a.shape();
    if k == 0 || k > m.min(n) {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 1..={} for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    let f = column_pivoted_qr(a);
    let perm = f.perm.expect("pivoted");
    Ok(IdResult {
        basis: f.q.leading_columns(k),
        selected_columns: perm[..k].to_vec(),
        approximation_rank: k,
    })
}

/// Randomized interpolative decomposition: pivoted QR of `p = k + oversampling`
/// columns sampled uniformly without replacement.
pub fn randomized_id(a: &Matrix, k: usize, oversampling: usize, seed: Seed) -> Result<IdResult> {
    let (m, n) = a.shape();
    let p = k + oversampling;
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!(
            "rank {k} outside 1..={m} for a {m}x{n} matrix"
        )));
    }
    if p > n {
        return Err(Error::InvalidArgument(format!(
            "cannot sample {p} columns from {n}"
        )));
    }
    let cols = seed.stream().sample_without_replacement(n, p);
    let f = column_pivoted_qr(&a.select_columns(&cols));
    let perm = f.perm.expect("pivoted");
    Ok(IdResult {
        basis: f.q.leading_columns(k),
        selected_columns: perm[..k].iter().map(|&j| cols[j]).collect(),
        approximation_rank: k,
    })
}
