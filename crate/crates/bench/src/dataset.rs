//! Synthetic and file-backed data sets.
//!
//! Generated data sets are pure functions of `(spec, seed)`.

use std::f64::consts::TAU;
use std::path::PathBuf;

use randproj::linalg::gaussian_matrix;
use randproj::{Matrix, Seed};

use crate::error::{BenchError, Result};
use crate::io::{load_matrix_csv, load_pgm_dir};

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    /// Class 0: `per_class` points at uniform angles on a circle of
    /// `radius`, jittered radially by `N(0, noise²)`. Class 1: `per_class`
    /// points from `N(0, cloud_std² I)` in ℝ².
    CircleCloud {
        per_class: usize,
        radius: f64,
        noise: f64,
        cloud_std: f64,
    },
    /// `classes` isotropic Gaussian clusters in ℝ^dim with unit noise. The
    /// centres are i.i.d. `N(0, separation² I)`.
    GaussianBlobs {
        classes: usize,
        per_class: usize,
        dim: usize,
        separation: f64,
    },
    /// m×n matrix `U Vᵀ / √rank + noise·G` with `U` (m×rank), `V` (n×rank)
    /// and `G` (m×n) standard Gaussian.
    LowRankPlusNoise {
        rows: usize,
        cols: usize,
        rank: usize,
        noise: f64,
    },
    /// Numeric CSV; with `label_column` the last column holds integer labels.
    CsvFile {
        path: PathBuf,
        header: bool,
        label_column: bool,
    },
    /// Directory of P5 images, one column per image.
    PgmDir { path: PathBuf },
}

impl DatasetSpec {
    /// Ten Gaussian clusters standing in for handwritten digits: 60 points
    /// per class in ℝ^dim (64 by default).
    pub fn digit_blob(dim: usize) -> Self {
        DatasetSpec::GaussianBlobs {
            classes: 10,
            per_class: 60,
            dim,
            separation: DIGIT_SEPARATION,
        }
    }

    /// Circle-cloud defaults: at RBF `γ = 1` the ring and the central cloud
    /// separate radially in the first two kernel principal components.
    pub fn circle_cloud() -> Self {
        DatasetSpec::CircleCloud {
            per_class: CIRCLE_PER_CLASS,
            radius: CIRCLE_RADIUS,
            noise: CIRCLE_NOISE,
            cloud_std: CIRCLE_CLOUD_STD,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DatasetSpec::CircleCloud { .. } => "circle-cloud",
            DatasetSpec::GaussianBlobs { .. } => "gaussian-blobs",
            DatasetSpec::LowRankPlusNoise { .. } => "low-rank-plus-noise",
            DatasetSpec::CsvFile { .. } => "csv-file",
            DatasetSpec::PgmDir { .. } => "pgm-dir",
        }
    }
}

pub const CIRCLE_PER_CLASS: usize = 100;
pub const CIRCLE_RADIUS: f64 = 0.5;
pub const CIRCLE_NOISE: f64 = 0.05;
pub const CIRCLE_CLOUD_STD: f64 = 0.1;

/// Centre spread of the digit-blob preset; one-vs-one RBF classifiers reach
/// roughly 95% held-out accuracy on it at d = 64.
pub const DIGIT_SEPARATION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// One sample per row (for `PgmDir`, one image per column).
    pub x: Matrix,
    pub labels: Option<Vec<usize>>,
}

fn invalid(msg: String) -> BenchError {
    BenchError::Usage(format!("invalid dataset spec: {msg}"))
}

fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(invalid(format!("{name} must be a finite non-negative number, got {v}")));
    }
    Ok(())
}

pub fn generate_dataset(spec: &DatasetSpec, seed: Seed) -> Result<Dataset> {
    match spec {
        &DatasetSpec::CircleCloud {
            per_class,
            radius,
            noise,
            cloud_std,
        } => {
            if per_class == 0 {
                return Err(invalid("per_class must be at least 1".into()));
            }
            check_nonnegative("radius", radius)?;
            check_nonnegative("noise", noise)?;
            check_nonnegative("cloud_std", cloud_std)?;
            let mut angles = seed.derive(0).stream();
            let mut jitter = seed.derive(1).stream();
            let mut cloud = seed.derive(2).stream();
            let mut x = Matrix::zeros(2 * per_class, 2);
            for i in 0..per_class {
                let t = TAU * angles.uniform();
                let r = radius + noise * jitter.standard_normal();
                x[(i, 0)] = r * t.cos();
                x[(i, 1)] = r * t.sin();
            }
            for i in per_class..2 * per_class {
                x[(i, 0)] = cloud_std * cloud.standard_normal();
                x[(i, 1)] = cloud_std * cloud.standard_normal();
            }
            let labels = (0..2 * per_class).map(|i| usize::from(i >= per_class)).collect();
            Ok(Dataset {
                x,
                labels: Some(labels),
            })
        }
        &DatasetSpec::GaussianBlobs {
            classes,
            per_class,
            dim,
            separation,
        } => {
            if classes == 0 || per_class == 0 || dim == 0 {
                return Err(invalid("classes, per_class and dim must be positive".into()));
            }
            check_nonnegative("separation", separation)?;
            let centres = gaussian_matrix(classes, dim, seed.derive(0));
            let noise = gaussian_matrix(classes * per_class, dim, seed.derive(1));
            let x = Matrix::from_fn(classes * per_class, dim, |i, j| {
                separation * centres[(i / per_class, j)] + noise[(i, j)]
            });
            Ok(Dataset {
                x,
                labels: Some((0..classes * per_class).map(|i| i / per_class).collect()),
            })
        }
        &DatasetSpec::LowRankPlusNoise {
            rows,
            cols,
            rank,
            noise,
        } => {
            if rows == 0 || cols == 0 || rank == 0 {
                return Err(invalid("rows, cols and rank must be positive".into()));
            }
            if rank > rows.min(cols) {
                return Err(invalid(format!("rank {rank} exceeds min({rows}, {cols})")));
            }
            check_nonnegative("noise", noise)?;
            let u = gaussian_matrix(rows, rank, seed.derive(0));
            let v = gaussian_matrix(cols, rank, seed.derive(1));
            let mut a = u.mul_transpose(&v)?.scale(1.0 / (rank as f64).sqrt());
            if noise > 0.0 {
                a = a.add(&gaussian_matrix(rows, cols, seed.derive(2)).scale(noise))?;
            }
            Ok(Dataset { x: a, labels: None })
        }
        DatasetSpec::CsvFile {
            path,
            header,
            label_column,
        } => {
            let m = load_matrix_csv(path, *header)?;
            if !label_column {
                return Ok(Dataset { x: m, labels: None });
            }
            if m.cols() < 2 {
                return Err(BenchError::Data(format!(
                    "{}: need at least one feature column besides the label",
                    path.display()
                )));
            }
            let last = m.cols() - 1;
            let labels = (0..m.rows())
                .map(|i| {
                    let v = m[(i, last)];
                    if v >= 0.0 && v.fract() == 0.0 && v < u32::MAX as f64 {
                        Ok(v as usize)
                    } else {
                        Err(BenchError::Data(format!(
                            "{}: row {} has label {v}, expected a non-negative integer",
                            path.display(),
                            i + 1
                        )))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let features: Vec<usize> = (0..last).collect();
            Ok(Dataset {
                x: m.select_columns(&features),
                labels: Some(labels),
            })
        }
        DatasetSpec::PgmDir { path } => Ok(Dataset {
            x: load_pgm_dir(path)?,
            labels: None,
        }),
    }
}
