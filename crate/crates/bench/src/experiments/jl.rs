use randproj::sketch::norm_preservation_experiment;

use super::{new_report, sweep_list, Experiment};
use crate::config::Config;
use crate::error::Result;
use crate::report::ExperimentReport;

/// Squared-norm error of Gaussian projections of a random unit vector.
pub struct JlExperiment;

impl Experiment for JlExperiment {
    fn name(&self) -> &'static str {
        "jl"
    }

    fn summary(&self) -> &'static str {
        "mean and spread of ||v||^2 - 1 for random unit vectors projected to k dimensions"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["seed", "rank", "ks", "dim", "trials"]
    }

    fn sweep_name(&self) -> &'static str {
        "k"
    }

    fn columns(&self, _config: &Config) -> Result<Vec<&'static str>> {
        Ok(vec!["mean_error", "stdev_error", "trials"])
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let dim = config.get("dim", 1000usize)?;
        let trials = config.get("trials", 10_000usize)?;
        let ks = sweep_list(config, "ks", "rank", &[10, 20, 50, 100])?;
        let mut report = new_report(self, config)?;
        for (i, &k) in ks.iter().enumerate() {
            let stats = norm_preservation_experiment(dim, k, trials, seed.derive(i as u64))?;
            report.push_row(k as f64, vec![stats.mean, stats.stdev, stats.trial_count as f64])?;
        }
        Ok(report)
    }
}
