//! Experiments behind one trait, registered by name and selected at run time.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::config::Config;
use crate::error::{BenchError, Result};
use crate::report::ExperimentReport;

mod eigenfaces;
mod factor_bench;
mod jl;
mod kpca;
mod ls_bench;
mod svm_grid;

pub use eigenfaces::{bundled_faces_dir, EigenfacesExperiment};
pub use factor_bench::FactorBench;
pub use jl::JlExperiment;
pub use kpca::{radial_threshold_accuracy, KpcaExperiment};
pub use ls_bench::LsBench;
pub use svm_grid::SvmGrid;

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    /// Every configuration key the experiment understands.
    fn keys(&self) -> &'static [&'static str];

    /// Name of the first report column.
    fn sweep_name(&self) -> &'static str;

    /// Metric columns produced for `config`.
    fn columns(&self, config: &Config) -> Result<Vec<&'static str>>;

    /// Runs with an already validated configuration.
    fn execute(&self, config: &Config) -> Result<ExperimentReport>;

    fn run(&self, config: &Config) -> Result<ExperimentReport> {
        config.check_keys(self.name(), self.keys())?;
        self.execute(config)
    }
}

/// Starts a report for `experiment`, recording every configuration entry.
pub(crate) fn new_report(
    experiment: &dyn Experiment,
    config: &Config,
) -> Result<ExperimentReport> {
    let columns = experiment.columns(config)?;
    let mut report = ExperimentReport::new(
        experiment.name(),
        config.seed()?.value(),
        experiment.sweep_name(),
        &columns,
    );
    for (k, v) in config.entries() {
        if k != "seed" {
            report.param(k, v);
        }
    }
    Ok(report)
}

/// Sweep values from the list key, or the single value of `single` when set.
pub(crate) fn sweep_list(
    config: &Config,
    list_key: &str,
    single: &str,
    default: &[usize],
) -> Result<Vec<usize>> {
    match config.get_opt::<usize>(single)? {
        Some(v) => Ok(vec![v]),
        None => config.get_list(list_key, default),
    }
}

#[derive(Clone, Default)]
pub struct ExperimentRegistry {
    experiments: BTreeMap<&'static str, Arc<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(JlExperiment));
        r.register(Arc::new(FactorBench));
        r.register(Arc::new(EigenfacesExperiment));
        r.register(Arc::new(KpcaExperiment));
        r.register(Arc::new(SvmGrid));
        r.register(Arc::new(LsBench));
        r
    }

    pub fn register(&mut self, experiment: Arc<dyn Experiment>) {
        self.experiments.insert(experiment.name(), experiment);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Experiment>> {
        self.experiments.get(name).cloned().ok_or_else(|| {
            BenchError::Usage(format!(
                "unknown experiment '{name}' (available: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.experiments.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn Experiment>> {
        self.experiments.values()
    }
}

/// Looks up `name` in the standard registry and runs it.
pub fn run_experiment(name: &str, config: &Config) -> Result<ExperimentReport> {
    ExperimentRegistry::standard().get(name)?.run(config)
}
