use std::path::PathBuf;

use randproj::factor::RsvdConfig;
use randproj::linalg::principal_angles;
use randproj::models::{center_images, eigenfaces, reconstruction_errors, EigenfaceMethod};

use super::{new_report, sweep_list, Experiment};
use crate::config::Config;
use crate::error::{BenchError, Result};
use crate::io::load_pgm_dir;
use crate::report::ExperimentReport;
use crate::timing::TimingProtocol;

/// The bundled synthetic face images (24 images of 32×32 pixels).
pub fn bundled_faces_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets").join("faces")
}

/// Eigenface bases from the exact and the randomized SVD over a sweep of
/// basis sizes `k`.
///
/// `det_error` and `rand_error` are `‖A₀ − U_k U_kᵀ A₀‖_F` for the two
/// bases; `max_angle_degrees` is the largest principal angle between them.
pub struct EigenfacesExperiment;

impl Experiment for EigenfacesExperiment {
    fn name(&self) -> &'static str {
        "eigenfaces"
    }

    fn summary(&self) -> &'static str {
        "eigenface reconstruction error and time, exact vs randomized SVD"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["seed", "data", "rank", "ks", "power", "oversampling"]
    }

    fn sweep_name(&self) -> &'static str {
        "k"
    }

    fn columns(&self, _config: &Config) -> Result<Vec<&'static str>> {
        Ok(vec![
            "det_error",
            "rand_error",
            "max_angle_degrees",
            "det_seconds",
            "rand_seconds",
        ])
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let dir = config.path("data").unwrap_or_else(bundled_faces_dir);
        let images = load_pgm_dir(&dir)?;
        let ks = sweep_list(config, "ks", "rank", &[1, 2, 5, 10, 15, 20])?;
        let power = config.get("power", 1usize)?;
        let oversampling = config.get("oversampling", RsvdConfig::DEFAULT_OVERSAMPLING)?;
        let limit = images.cols().min(images.rows());
        if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > limit) {
            return Err(BenchError::Usage(format!(
                "basis size {k} outside 1..={limit} for {} images",
                images.cols()
            )));
        }

        let (centered, _) = center_images(&images);
        let k_max = *ks.iter().max().expect("sweep is non-empty");
        let full = eigenfaces(&images, k_max, EigenfaceMethod::Deterministic)?;
        let det_errors = reconstruction_errors(&centered, &full.basis, &ks)?;

        let protocol = TimingProtocol::default();
        let mut report = new_report(self, config)?;
        for (i, &k) in ks.iter().enumerate() {
            let method = EigenfaceMethod::Randomized {
                power,
                oversampling,
                seed: seed.derive(i as u64),
            };
            let (_, det_secs) =
                protocol.measure(|| eigenfaces(&images, k, EigenfaceMethod::Deterministic))?;
            let (rand, rand_secs) = protocol.measure(|| eigenfaces(&images, k, method))?;
            let rand_error = reconstruction_errors(&centered, &rand.basis, &[k])?[0];
            let angles = principal_angles(&full.basis.leading_columns(k), &rand.basis)?;
            let max_angle = angles.iter().cloned().fold(0.0, f64::max).to_degrees();
            report.push_row(
                k as f64,
                vec![det_errors[i], rand_error, max_angle, det_secs, rand_secs],
            )?;
        }
        Ok(report)
    }
}
