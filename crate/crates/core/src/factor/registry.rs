//! Low-rank approximation methods behind a common trait, looked up by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Seed;

use super::decomp::{deterministic_id, randomized_id, randomized_svd, truncated_svd, RsvdConfig};

/// Rank-`k` approximation of a matrix, together with the basis of its range.
#[derive(Debug, Clone)]
pub struct LowRankApprox {
    /// m×k orthonormal basis of the approximation's column space.
    pub basis: Matrix,
    /// The approximating matrix (same shape as the input).
    pub approximation: Matrix,
}

pub trait LowRankMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the output depends on `seed`.
    fn is_randomized(&self) -> bool;

    fn approximate(&self, a: &Matrix, k: usize, seed: Seed) -> Result<LowRankApprox>;
}

/// Exact truncated SVD.
#[derive(Debug, Clone, Copy, Default)]
pub struct TruncatedSvd;

impl LowRankMethod for TruncatedSvd {
    fn name(&self) -> &'static str {
        "svd"
    }

    fn is_randomized(&self) -> bool {
        false
    }

    fn approximate(&self, a: &Matrix, k: usize, _seed: Seed) -> Result<LowRankApprox> {
        let f = truncated_svd(a, k)?;
        Ok(LowRankApprox {
            approximation: f.reconstruct(),
            basis: f.u,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RandomizedSvd {
    pub power: usize,
    pub oversampling: usize,
    pub raw_power: bool,
}

impl Default for RandomizedSvd {
    fn default() -> Self {
        RandomizedSvd {
            power: 1,
            oversampling: RsvdConfig::DEFAULT_OVERSAMPLING,
            raw_power: false,
        }
    }
}

impl LowRankMethod for RandomizedSvd {
    fn name(&self) -> &'static str {
        "rsvd"
    }

    fn is_randomized(&self) -> bool {
        true
    }

    fn approximate(&self, a: &Matrix, k: usize, seed: Seed) -> Result<LowRankApprox> {
        let cfg = RsvdConfig::new(k, seed)
            .power(self.power)
            .oversampling(self.oversampling)
            .raw_power(self.raw_power);
        let f = randomized_svd(a, &cfg)?;
        Ok(LowRankApprox {
            approximation: f.reconstruct(),
            basis: f.u,
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DeterministicId;

impl LowRankMethod for DeterministicId {
    fn name(&self) -> &'static str {
        "id"
    }

    fn is_randomized(&self) -> bool {
        false
    }

    fn approximate(&self, a: &Matrix, k: usize, _seed: Seed) -> Result<LowRankApprox> {
        let id = deterministic_id(a, k)?;
        Ok(LowRankApprox {
            approximation: id.approximate(a)?,
            basis: id.basis,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RandomizedId {
    pub oversampling: usize,
}

impl Default for RandomizedId {
    fn default() -> Self {
        RandomizedId { oversampling: 10 }
    }
}

impl LowRankMethod for RandomizedId {
    fn name(&self) -> &'static str {
        "rid"
    }

    fn is_randomized(&self) -> bool {
        true
    }

    fn approximate(&self, a: &Matrix, k: usize, seed: Seed) -> Result<LowRankApprox> {
        let id = randomized_id(a, k, self.oversampling, seed)?;
        Ok(LowRankApprox {
            approximation: id.approximate(a)?,
            basis: id.basis,
        })
    }
}

/// Name → method table.
#[derive(Clone, Default)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Arc<dyn LowRankMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `svd`, `rsvd`, `id` and `rid` with the given randomized settings.
    pub fn with_settings(power: usize, oversampling: usize, raw_power: bool) -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(TruncatedSvd));
        r.register(Arc::new(RandomizedSvd {
            power,
            oversampling,
            raw_power,
        }));
        r.register(Arc::new(DeterministicId));
        r.register(Arc::new(RandomizedId { oversampling }));
        r
    }

    pub fn standard() -> Self {
        Self::with_settings(1, RsvdConfig::DEFAULT_OVERSAMPLING, false)
    }

    pub fn register(&mut self, method: Arc<dyn LowRankMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn LowRankMethod>> {
        self.methods.get(name).cloned().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown method '{name}' (available: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }
}
