use randproj::kernels::Normalization;
use randproj::models::{grid_search_cv, GridSearchConfig, SearchMode};

use super::{new_report, Experiment};
use crate::config::Config;
use crate::dataset::{generate_dataset, DatasetSpec, DIGIT_SEPARATION};
use crate::error::{BenchError, Result};
use crate::report::ExperimentReport;

/// Cross-validated one-vs-one SVM accuracy over a γ grid, with the exact RBF
/// kernel and with random Fourier features (serial, and with `parallel`
/// also parallel over γ).
///
/// Each mode contributes an `<mode>_accuracy` and `<mode>_seconds` column;
/// the per-mode wall-clock totals are recorded as `total_seconds.<mode>`
/// parameters.
pub struct SvmGrid;

/// `count` values spaced geometrically over `[0.03/d, 3/d]`.
pub(crate) fn default_gammas(dim: usize, count: usize) -> Vec<f64> {
    let (lo, hi) = (0.03 / dim as f64, 3.0 / dim as f64);
    if count == 1 {
        return vec![(lo * hi).sqrt()];
    }
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

fn modes(config: &Config) -> Vec<SearchMode> {
    let mut m = vec![SearchMode::Deterministic, SearchMode::RandomSerial];
    if config.contains("parallel") {
        m.push(SearchMode::RandomParallel);
    }
    m
}

fn accuracy_column(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::Deterministic => "deterministic_accuracy",
        SearchMode::RandomSerial => "random_serial_accuracy",
        SearchMode::RandomParallel => "random_parallel_accuracy",
    }
}

fn seconds_column(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::Deterministic => "deterministic_seconds",
        SearchMode::RandomSerial => "random_serial_seconds",
        SearchMode::RandomParallel => "random_parallel_seconds",
    }
}

impl Experiment for SvmGrid {
    fn name(&self) -> &'static str {
        "svm-grid"
    }

    fn summary(&self) -> &'static str {
        "k-fold cross-validated SVM accuracy and time over a gamma grid, exact vs random features"
    }

    fn keys(&self) -> &'static [&'static str] {
        &[
            "seed", "data", "header", "gamma", "gammas", "gamma-count", "features", "mode", "folds",
            "parallel", "dim", "classes", "per-class", "separation", "box", "tol",
        ]
    }

    fn sweep_name(&self) -> &'static str {
        "gamma"
    }

    fn columns(&self, config: &Config) -> Result<Vec<&'static str>> {
        let modes = modes(config);
        Ok(modes
            .iter()
            .map(|&m| accuracy_column(m))
            .chain(modes.iter().map(|&m| seconds_column(m)))
            .collect())
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let spec = match config.path("data") {
            Some(path) => DatasetSpec::CsvFile {
                path,
                header: config.get("header", false)?,
                label_column: true,
            },
            None => DatasetSpec::GaussianBlobs {
                classes: config.get("classes", 10)?,
                per_class: config.get("per-class", 60)?,
                dim: config.get("dim", 64)?,
                separation: config.get("separation", DIGIT_SEPARATION)?,
            },
        };
        let data = generate_dataset(&spec, seed.derive(0))?;
        let labels = data.labels.expect("labelled data set");
        let gammas = match config.get_opt::<f64>("gamma")? {
            Some(g) => vec![g],
            None if config.contains("gammas") => config.get_list("gammas", &[])?,
            None => default_gammas(data.x.cols(), config.get("gamma-count", 20)?),
        };
        if gammas.is_empty() {
            return Err(BenchError::Usage("gamma list is empty".into()));
        }
        let threads = match config.get_opt::<usize>("parallel")? {
            Some(0) | None => None,
            Some(t) => Some(t),
        };
        let mut grid = GridSearchConfig::new(
            gammas.clone(),
            config.get("folds", 3)?,
            config.get("features", 350)?,
            seed.derive(1),
        );
        grid.modes = modes(config);
        grid.normalization = config.get("mode", Normalization::Paper)?;
        grid.threads = threads;
        grid.svm.box_c = config.get("box", grid.svm.box_c)?;
        grid.svm.tol = config.get("tol", grid.svm.tol)?;

        let result = grid_search_cv(&data.x, &labels, &grid)?;
        let mut report = new_report(self, config)?;
        for (mode, secs) in &result.mode_seconds {
            report.param(&format!("total_seconds.{mode}"), secs);
        }
        for (i, &gamma) in gammas.iter().enumerate() {
            let rows: Vec<_> = grid
                .modes
                .iter()
                .map(|&m| result.rows_for(m).nth(i).expect("one row per gamma and mode"))
                .map(|r| (r.mean_cv_accuracy, r.elapsed_seconds))
                .collect();
            let values = rows
                .iter()
                .map(|r| r.0)
                .chain(rows.iter().map(|r| r.1))
                .collect();
            report.push_row(gamma, values)?;
        }
        Ok(report)
    }
}
