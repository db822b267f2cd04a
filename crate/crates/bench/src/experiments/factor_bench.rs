use randproj::factor::{compare_decompositions, MethodRegistry, RsvdConfig, Timings};
use randproj::{Matrix, Seed};

use super::{new_report, sweep_list, Experiment};
use crate::config::Config;
use crate::dataset::{generate_dataset, DatasetSpec};
use crate::error::Result;
use crate::report::ExperimentReport;
use crate::timing::TimingProtocol;

/// Rank sweep comparing SVD with RSVD and ID with RID.
///
/// Errors are `‖Â − A‖_F` averaged over `trials` seeds for the randomized
/// methods; relative errors `(ar − ad)/ad` are averaged per trial. Timings
/// use the median protocol on the first seed.
pub struct FactorBench;

/// The two deterministic / randomized pairs, in column order.
const PAIRS: [(&str, &str); 2] = [("svd", "rsvd"), ("id", "rid")];

pub(crate) fn load_matrix(config: &Config, seed: Seed) -> Result<Matrix> {
    let spec = match config.path("data") {
        Some(path) => DatasetSpec::CsvFile {
            path,
            header: config.get("header", false)?,
            label_column: false,
        },
        None => DatasetSpec::LowRankPlusNoise {
            rows: config.get("rows", 400)?,
            cols: config.get("cols", 200)?,
            rank: config.get("true-rank", 20)?,
            noise: config.get("noise", 0.1)?,
        },
    };
    Ok(generate_dataset(&spec, seed)?.x)
}

impl Experiment for FactorBench {
    fn name(&self) -> &'static str {
        "factor-bench"
    }

    fn summary(&self) -> &'static str {
        "approximation error and time of SVD vs RSVD and ID vs RID over a rank sweep"
    }

    fn keys(&self) -> &'static [&'static str] {
        &[
            "seed", "data", "header", "rows", "cols", "true-rank", "noise", "rank", "ks",
            "oversampling", "power", "trials",
        ]
    }

    fn sweep_name(&self) -> &'static str {
        "k"
    }

    fn columns(&self, _config: &Config) -> Result<Vec<&'static str>> {
        Ok(vec![
            "svd_error",
            "rsvd_error",
            "rsvd_relative_error",
            "id_error",
            "rid_error",
            "rid_relative_error",
            "svd_seconds",
            "rsvd_seconds",
            "id_seconds",
            "rid_seconds",
        ])
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let a = load_matrix(config, seed.derive(0))?;
        let ks = sweep_list(config, "ks", "rank", &[5, 10, 20, 40])?;
        let trials = config.get("trials", 5usize)?.max(1);
        let methods = MethodRegistry::with_settings(
            config.get("power", 1)?,
            config.get("oversampling", RsvdConfig::DEFAULT_OVERSAMPLING)?,
            false,
        );
        let protocol = TimingProtocol::default();
        let mut report = new_report(self, config)?;
        for &k in &ks {
            let mut errors = Vec::new();
            let mut seconds = Vec::new();
            for (det_name, rand_name) in PAIRS {
                let det = methods.get(det_name)?;
                let rnd = methods.get(rand_name)?;
                let (det_approx, det_secs) =
                    protocol.measure(|| det.approximate(&a, k, seed))?;
                let (_, rand_secs) =
                    protocol.measure(|| rnd.approximate(&a, k, seed.derive(1)))?;
                let mut abs_rand = 0.0;
                let mut relative = 0.0;
                let mut abs_det = 0.0;
                for t in 0..trials {
                    let approx = rnd.approximate(&a, k, seed.derive(t as u64 + 1))?;
                    let r = compare_decompositions(
                        &a,
                        &det_approx.approximation,
                        &approx.approximation,
                        Timings::default(),
                    )?;
                    abs_det = r.absolute_deterministic;
                    abs_rand += r.absolute_random / trials as f64;
                    relative += r.relative / trials as f64;
                }
                errors.extend([abs_det, abs_rand, relative]);
                seconds.extend([det_secs, rand_secs]);
            }
            errors.extend(seconds);
            report.push_row(k as f64, errors)?;
        }
        Ok(report)
    }
}
