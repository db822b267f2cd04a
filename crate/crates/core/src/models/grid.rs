use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{exact_kernel_matrix, rff_kernel_matrix, sample_rff, KernelSpec, Normalization};
use crate::linalg::Matrix;
use crate::rng::Seed;

use super::multiclass::{accuracy, class_count, OneVsOne};
use super::svm::SvmParams;

/// How the Gram matrix for each γ is obtained and how γ values are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SearchMode {
    Deterministic,
    RandomSerial,
    RandomParallel,
}

impl SearchMode {
    pub const ALL: [SearchMode; 3] = [
        SearchMode::Deterministic,
        SearchMode::RandomSerial,
        SearchMode::RandomParallel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Deterministic => "deterministic",
            SearchMode::RandomSerial => "random-serial",
            SearchMode::RandomParallel => "random-parallel",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SearchMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown search mode '{s}' (expected deterministic, random-serial or random-parallel)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchConfig {
    pub gammas: Vec<f64>,
    pub folds: usize,
    pub modes: Vec<SearchMode>,
    /// Random Fourier feature count `m` for the random modes.
    pub features: usize,
    pub normalization: Normalization,
    pub seed: Seed,
    pub svm: SvmParams,
    /// Worker threads for `random-parallel`; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl GridSearchConfig {
    pub fn new(gammas: Vec<f64>, folds: usize, features: usize, seed: Seed) -> Self {
        Self {
            gammas,
            folds,
            modes: SearchMode::ALL.to_vec(),
            features,
            normalization: Normalization::default(),
            seed,
            svm: SvmParams::default(),
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub gamma: f64,
    pub mean_cv_accuracy: f64,
    /// Time to build the Gram matrix and run cross-validation for this γ.
    pub elapsed_seconds: f64,
    pub mode: SearchMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchReport {
    /// Grouped by mode in request order, then by γ in input order.
    pub rows: Vec<GridRow>,
    /// Wall-clock time per mode; for `random-parallel` this is less than the
    /// sum of its rows.
    pub mode_seconds: Vec<(SearchMode, f64)>,
}

impl GridSearchReport {
    pub fn rows_for(&self, mode: SearchMode) -> impl Iterator<Item = &GridRow> {
        self.rows.iter().filter(move |r| r.mode == mode)
    }

    pub fn total_seconds(&self, mode: SearchMode) -> Option<f64> {
        self.mode_seconds.iter().find(|(m, _)| *m == mode).map(|(_, s)| *s)
    }

    /// γ with the highest accuracy for `mode`; the first one wins ties.
    pub fn best_gamma(&self, mode: SearchMode) -> Option<f64> {
        let mut best: Option<&GridRow> = None;
        for row in self.rows_for(mode) {
            if best.is_none_or(|b| row.mean_cv_accuracy > b.mean_cv_accuracy) {
                best = Some(row);
            }
        }
        best.map(|r| r.gamma)
    }
}

/// Stratified fold assignment: within each class the points are shuffled
/// and dealt round-robin, continuing the deal across classes.
pub fn stratified_folds(labels: &[usize], folds: usize, seed: Seed) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 folds, got {folds}")));
    }
    let c = class_count(labels)?;
    let mut by_class = vec![Vec::new(); c];
    for (i, &l) in labels.iter().enumerate() {
        by_class[l].push(i);
    }
    let smallest = by_class.iter().map(Vec::len).min().unwrap_or(0);
    if folds > smallest {
        return Err(Error::InvalidArgument(format!(
            "{folds} folds but the smallest class has {smallest} samples"
        )));
    }
    let mut stream = seed.stream();
    let mut assignment = vec![0; labels.len()];
    let mut dealt = 0;
    for members in &mut by_class {
        stream.shuffle(members);
        for &i in members.iter() {
            assignment[i] = dealt % folds;
            dealt += 1;
        }
    }
    Ok(assignment)
}

fn cross_validate(gram: &Matrix, labels: &[usize], folds: &[usize], k: usize, svm: &SvmParams) -> Result<f64> {
    let mut total = 0.0;
    for f in 0..k {
        let train: Vec<usize> = (0..labels.len()).filter(|&i| folds[i] != f).collect();
        let test: Vec<usize> = (0..labels.len()).filter(|&i| folds[i] == f).collect();
        let train_labels: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let test_labels: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
        let model = OneVsOne::fit_precomputed(&gram.select(&train, &train), &train_labels, svm)?;
        let predicted = model.predict_precomputed(&gram.select(&test, &train))?;
        total += accuracy(&predicted, &test_labels);
    }
    Ok(total / k as f64)
}

/// Sub-seed for the random feature map of the `index`-th γ.
fn gamma_seed(seed: Seed, index: usize) -> Seed {
    seed.derive(index as u64 + 1)
}

fn evaluate(
    x: &Matrix,
    labels: &[usize],
    folds: &[usize],
    cfg: &GridSearchConfig,
    index: usize,
    mode: SearchMode,
) -> Result<GridRow> {
    let gamma = cfg.gammas[index];
    let start = Instant::now();
    let gram = match mode {
        SearchMode::Deterministic => exact_kernel_matrix(x, x, &KernelSpec::rbf(gamma)?)?,
        SearchMode::RandomSerial | SearchMode::RandomParallel => {
            let map = sample_rff(x.cols(), cfg.features, gamma, gamma_seed(cfg.seed, index))?
                .with_normalization(cfg.normalization);
            rff_kernel_matrix(&map, x, x)?
        }
    };
    let mean_cv_accuracy = cross_validate(&gram, labels, folds, cfg.folds, &cfg.svm)?;
    Ok(GridRow {
        gamma,
        mean_cv_accuracy,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        mode,
    })
}

/// Stratified k-fold cross-validated one-vs-one SVM accuracy for every γ
/// and every requested mode.
///
/// Folds come from `seed.derive(0)`; the feature map for γ number `i` comes
/// from `seed.derive(i + 1)`, so `random-parallel` reproduces
/// `random-serial` exactly.
pub fn grid_search_cv(x: &Matrix, labels: &[usize], cfg: &GridSearchConfig) -> Result<GridSearchReport> {
    if cfg.gammas.is_empty() {
        return Err(Error::InvalidArgument("gamma list is empty".into()));
    }
    if let Some(g) = cfg.gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {g}")));
    }
    if cfg.modes.is_empty() {
        return Err(Error::InvalidArgument("no search mode requested".into()));
    }
    if cfg.features == 0 && cfg.modes.iter().any(|m| *m != SearchMode::Deterministic) {
        return Err(Error::InvalidArgument("feature count must be positive".into()));
    }
    if x.rows() != labels.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points with {} labels",
            x.rows(),
            labels.len()
        )));
    }
    let folds = stratified_folds(labels, cfg.folds, cfg.seed.derive(0))?;

    let mut rows = Vec::with_capacity(cfg.gammas.len() * cfg.modes.len());
    let mut mode_seconds = Vec::with_capacity(cfg.modes.len());
    for &mode in &cfg.modes {
        let start = Instant::now();
        let batch: Vec<GridRow> = match mode {
            SearchMode::RandomParallel => {
                let run = || {
                    (0..cfg.gammas.len())
                        .into_par_iter()
                        .map(|i| evaluate(x, labels, &folds, cfg, i, mode))
                        .collect::<Result<Vec<_>>>()
                };
                match cfg.threads {
                    Some(t) => rayon::ThreadPoolBuilder::new()
                        .num_threads(t)
                        .build()
                        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                        .install(run)?,
                    None => run()?,
                }
            }
            _ => (0..cfg.gammas.len())
                .map(|i| evaluate(x, labels, &folds, cfg, i, mode))
                .collect::<Result<Vec<_>>>()?,
        };
        mode_seconds.push((mode, start.elapsed().as_secs_f64()));
        rows.extend(batch);
    }
    Ok(GridSearchReport { rows, mode_seconds })
}
