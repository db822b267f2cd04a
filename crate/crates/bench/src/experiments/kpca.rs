use randproj::kernels::{KernelParams, KernelRegistry, Normalization};
use randproj::linalg::norm2;
use randproj::models::kernel_pca;
use randproj::Matrix;

use super::{new_report, Experiment};
use crate::config::Config;
use crate::dataset::{
    generate_dataset, DatasetSpec, CIRCLE_CLOUD_STD, CIRCLE_NOISE, CIRCLE_PER_CLASS, CIRCLE_RADIUS,
};
use crate::error::{BenchError, Result};
use crate::report::ExperimentReport;

/// Two-component kernel PCA embeddings of a labelled 2-class data set for
/// the exact RBF kernel (`features = 0`) and random-feature approximations.
///
/// One row per point and `(γ, m)` pair. `radial_accuracy` is the accuracy of
/// the best threshold on the embedding radius, repeated on every row of
/// the pair.
pub struct KpcaExperiment;

/// Best accuracy of a rule `‖e_i‖ ≤ t ⇔ class 1` (or its reverse) over all
/// thresholds `t`, for labels in `{0, 1}`.
pub fn radial_threshold_accuracy(embedding: &Matrix, labels: &[usize]) -> f64 {
    let n = labels.len();
    if n == 0 {
        return 0.0;
    }
    let mut points: Vec<(f64, usize)> = (0..n).map(|i| (norm2(embedding.row(i)), labels[i])).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ones = labels.iter().filter(|&&l| l == 1).count();
    // inside = first `i` points; score = class-1 inside + class-0 outside
    let mut best = ones.max(n - ones);
    let mut ones_inside = 0;
    for i in 0..n {
        if points[i].1 == 1 {
            ones_inside += 1;
        }
        if i + 1 < n && points[i + 1].0 == points[i].0 {
            continue;
        }
        let inside = i + 1;
        let zeros_outside = (n - ones) - (inside - ones_inside);
        let correct = ones_inside + zeros_outside;
        best = best.max(correct).max(n - correct);
    }
    best as f64 / n as f64
}

impl Experiment for KpcaExperiment {
    fn name(&self) -> &'static str {
        "kpca"
    }

    fn summary(&self) -> &'static str {
        "kernel PCA embeddings of the circle-cloud data, exact RBF vs random features"
    }

    fn keys(&self) -> &'static [&'static str] {
        &[
            "seed", "data", "header", "gamma", "gammas", "gamma-range", "features", "ms", "groups",
            "mode", "per-class", "radius", "noise", "cloud-std",
        ]
    }

    fn sweep_name(&self) -> &'static str {
        "features"
    }

    fn columns(&self, _config: &Config) -> Result<Vec<&'static str>> {
        Ok(vec![
            "gamma_lo",
            "gamma_hi",
            "point",
            "label",
            "pc1",
            "pc2",
            "radial_accuracy",
        ])
    }

    fn execute(&self, config: &Config) -> Result<ExperimentReport> {
        let seed = config.seed()?;
        let spec = match config.path("data") {
            Some(path) => DatasetSpec::CsvFile {
                path,
                header: config.get("header", false)?,
                label_column: true,
            },
            None => DatasetSpec::CircleCloud {
                per_class: config.get("per-class", CIRCLE_PER_CLASS)?,
                radius: config.get("radius", CIRCLE_RADIUS)?,
                noise: config.get("noise", CIRCLE_NOISE)?,
                cloud_std: config.get("cloud-std", CIRCLE_CLOUD_STD)?,
            },
        };
        let data = generate_dataset(&spec, seed.derive(0))?;
        let labels = data.labels.expect("labelled data set");

        let range = config.get_range("gamma-range")?;
        if range.is_some() && (config.contains("gamma") || config.contains("gammas")) {
            return Err(BenchError::Usage("give either gamma(s) or gamma-range, not both".into()));
        }
        let gamma_sets: Vec<(f64, f64)> = match range {
            Some(r) => vec![r],
            None => match config.get_opt::<f64>("gamma")? {
                Some(g) => vec![(g, g)],
                None => config.get_list("gammas", &[1.0])?.into_iter().map(|g| (g, g)).collect(),
            },
        };
        let default_ms: &[usize] = if range.is_some() { &[20, 200, 2000] } else { &[0, 20, 200, 2000] };
        let ms = match config.get_opt::<usize>("features")? {
            Some(m) => vec![m],
            None => config.get_list("ms", default_ms)?,
        };
        let mut params = KernelParams::new(data.x.cols());
        params.groups = config.get("groups", 1usize)?;
        params.normalization = config.get("mode", Normalization::Paper)?;

        let kernels = KernelRegistry::default();
        let mut report = new_report(self, config)?;
        for (gi, &(lo, hi)) in gamma_sets.iter().enumerate() {
            for (mi, &m) in ms.iter().enumerate() {
                params.gamma = lo;
                params.gamma_range = range;
                params.features = m;
                params.seed = seed.derive(1 + ((gi as u64) << 32 | mi as u64));
                let name = match (m, range) {
                    (0, None) => "rbf",
                    (0, Some(_)) => {
                        return Err(BenchError::Usage(
                            "the exact kernel (features = 0) needs a single gamma".into(),
                        ))
                    }
                    (_, None) => "rff",
                    (_, Some(_)) => "range-rff",
                };
                let gram = kernels.build(name, &params)?.gram(&data.x)?;
                let embedding = kernel_pca(&gram, 2)?.embedding;
                let accuracy = radial_threshold_accuracy(&embedding, &labels);
                for (i, &label) in labels.iter().enumerate() {
                    report.push_row(
                        m as f64,
                        vec![
                            lo,
                            hi,
                            i as f64,
                            label as f64,
                            embedding[(i, 0)],
                            embedding[(i, 1)],
                            accuracy,
                        ],
                    )?;
                }
            }
        }
        Ok(report)
    }
}
