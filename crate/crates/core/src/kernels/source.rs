//! Kernel (Gram) matrix sources behind one trait, built by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng::Seed;

use super::exact::{exact_kernel_matrix, KernelSpec};
use super::rff::{rff_kernel_matrix, sample_range_rff, sample_rff, Normalization, RffMap};

/// Anything that can produce `K[i][j] = k(x_i, y_j)`.
pub trait GramSource: Send + Sync {
    fn describe(&self) -> String;

    fn kernel_matrix(&self, x: &Matrix, y: &Matrix) -> Result<Matrix>;

    fn gram(&self, x: &Matrix) -> Result<Matrix> {
        self.kernel_matrix(x, x)
    }
}

impl GramSource for KernelSpec {
    fn describe(&self) -> String {
        KernelSpec::describe(self)
    }

    fn kernel_matrix(&self, x: &Matrix, y: &Matrix) -> Result<Matrix> {
        exact_kernel_matrix(x, y, self)
    }
}

impl GramSource for RffMap {
    fn describe(&self) -> String {
        RffMap::describe(self)
    }

    fn kernel_matrix(&self, x: &Matrix, y: &Matrix) -> Result<Matrix> {
        rff_kernel_matrix(self, x, y)
    }

    fn gram(&self, x: &Matrix) -> Result<Matrix> {
        rff_kernel_matrix(self, x, x)
    }
}

/// Everything a kernel factory may need. Unused fields are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    /// Input dimension (needed by the random-feature maps).
    pub dim: usize,
    pub gamma: f64,
    pub gamma_range: Option<(f64, f64)>,
    pub degree: u32,
    pub coef0: f64,
    pub features: usize,
    pub groups: usize,
    pub normalization: Normalization,
    pub seed: Seed,
}

impl KernelParams {
    pub fn new(dim: usize) -> Self {
        KernelParams {
            dim,
            gamma: 1.0,
            gamma_range: None,
            degree: 3,
            coef0: 1.0,
            features: 350,
            groups: 1,
            normalization: Normalization::default(),
            seed: Seed::default(),
        }
    }
}

pub type KernelFactory = fn(&KernelParams) -> Result<Arc<dyn GramSource>>;

/// Name → kernel factory table.
#[derive(Clone)]
pub struct KernelRegistry {
    factories: BTreeMap<&'static str, KernelFactory>,
}

impl Default for KernelRegistry {
    fn default() -> Self {
        let mut r = KernelRegistry {
            factories: BTreeMap::new(),
        };
        r.register("rbf", |p| Ok(Arc::new(KernelSpec::rbf(p.gamma)?)));
        r.register("polynomial", |p| {
            Ok(Arc::new(KernelSpec::polynomial(p.degree, p.coef0)?))
        });
        r.register("linear", |_| Ok(Arc::new(KernelSpec::Linear)));
        r.register("rff", |p| {
            let map = sample_rff(p.dim, p.features, p.gamma, p.seed)?;
            Ok(Arc::new(map.with_normalization(p.normalization)))
        });
        r.register("range-rff", |p| {
            let (lo, hi) = p.gamma_range.ok_or_else(|| {
                Error::InvalidArgument("range-rff needs a gamma range".into())
            })?;
            let map = sample_range_rff(p.dim, p.features, p.groups, lo, hi, p.seed)?;
            Ok(Arc::new(map.with_normalization(p.normalization)))
        });
        r
    }
}

impl KernelRegistry {
    pub fn register(&mut self, name: &'static str, factory: KernelFactory) {
        self.factories.insert(name, factory);
    }

    pub fn build(&self, name: &str, params: &KernelParams) -> Result<Arc<dyn GramSource>> {
        let factory = self.factories.get(name).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown kernel '{name}' (available: {})",
                self.names().join(", ")
            ))
        })?;
        factory(params)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }
}
