use randproj::models::{ls_random_search, ls_solve_qr, normal_equation_residual, residual_norm};
use randproj::Matrix;

use super::{new_report, sweep_list, Experiment};
use crate::config::Config;
use crate::error::{BenchError, Result};
use crate::report::ExperimentReport;
use crate::timing::TimingProtocol;

/// Least squares by QR against the best of `k` random Gaussian guesses,
/// over a sweep of unknown counts `n` with `m = rows-per-col · n` equations.
pub struct LsBench;

impl Experiment for LsBench {
    fn name(&self) -> &'static str {
        "ls-bench"
    }

    fn summary(&self) -> &'static str {
        "residual and time of QR least squares vs random candidate search"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["seed", "rank", "dims", "rows-per-col", "candidates"]
    }

    fn sweep_name(&self) -> &'static str {
        "n"
    }

    fn columns(&self, _config: &Config) -> Result<Vec<&'static str>> {
        Ok(vec![
            "rows",
            "residual_qr",
            "residual_random",
            "normal_residual_qr",
            "qr_seconds",
            "random_seconds",
        ])
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let dims = sweep_list(config, "dims", "rank", &[5, 10, 20, 50, 100])?;
        let factor = config.get("rows-per-col", 4usize)?;
        let candidates = config.get("candidates", 1000usize)?;
        if factor == 0 {
            return Err(BenchError::Usage("rows-per-col must be positive".into()));
        }
        let protocol = TimingProtocol::default();
        let mut report = new_report(self, config)?;
        for (i, &n) in dims.iter().enumerate() {
            let m = factor * n;
            let s = seed.derive(i as u64);
            let a = Matrix::gaussian(m, n, s.derive(0));
            let b = Matrix::gaussian(m, 1, s.derive(1)).into_vec();
            let (x, qr_secs) = protocol.measure(|| ls_solve_qr(&a, &b))?;
            let (best, rand_secs) =
                protocol.measure(|| ls_random_search(&a, &b, candidates, s.derive(2)))?;
            report.push_row(
                n as f64,
                vec![
                    m as f64,
                    residual_norm(&a, &x, &b)?,
                    best.residual,
                    normal_equation_residual(&a, &x, &b)?,
                    qr_secs,
                    rand_secs,
                ],
            )?;
        }
        Ok(report)
    }
}
