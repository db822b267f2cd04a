use crate::error::{Error, Result};
use crate::linalg::eig::check_symmetric;
use crate::linalg::Matrix;

/// Curvature floor for pairs whose kernel rows coincide.
const TAU: f64 = 1e-12;

/// Soft-margin training parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Box constraint `C`.
    pub box_c: f64,
    /// KKT tolerance on the maximal violating pair gap.
    pub tol: f64,
    /// Iteration cap; `None` means `max(10⁷, 100 n)`.
    pub max_iter: Option<usize>,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            box_c: 1.0,
            tol: 1e-3,
            max_iter: None,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<()> {
        if !(self.box_c > 0.0 && self.box_c.is_finite()) {
            return Err(Error::InvalidArgument(format!("box constraint must be positive, got {}", self.box_c)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// A trained binary classifier over a precomputed kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    /// `α`, zero outside the support vectors.
    pub dual_coefficients: Vec<f64>,
    /// Training labels, each `±1`.
    pub labels: Vec<f64>,
    pub bias: f64,
    pub support_indices: Vec<usize>,
    /// Description of the kernel that produced the training Gram matrix.
    pub gram_source: String,
    pub box_c: f64,
    pub iterations: usize,
}

impl SvmModel {
    pub fn training_size(&self) -> usize {
        self.labels.len()
    }

    pub fn with_source(mut self, description: impl Into<String>) -> Self {
        self.gram_source = description.into();
        self
    }

    /// `f(x) = Σ αᵢ yᵢ K(xᵢ, x) + bias` for every row of `k_test` (n_test × n).
    pub fn decision_function(&self, k_test: &Matrix) -> Result<Vec<f64>> {
        if k_test.cols() != self.training_size() {
            return Err(Error::DimensionMismatch(format!(
                "test kernel has {} columns, model was trained on {} points",
                k_test.cols(),
                self.training_size()
            )));
        }
        Ok((0..k_test.rows())
            .map(|r| {
                let row = k_test.row(r);
                self.support_indices
                    .iter()
                    .map(|&s| self.dual_coefficients[s] * self.labels[s] * row[s])
                    .sum::<f64>()
                    + self.bias
            })
            .collect())
    }

    /// Largest violation of the soft-margin complementarity conditions on
    /// the training Gram matrix:
    /// `α = 0 ⇒ y f ≥ 1`, `0 < α < C ⇒ y f = 1`, `α = C ⇒ y f ≤ 1`.
    pub fn kkt_violation(&self, k_train: &Matrix) -> Result<f64> {
        let f = self.decision_function(k_train)?;
        let mut worst: f64 = 0.0;
        for (i, fi) in f.iter().enumerate() {
            let margin = self.labels[i] * fi - 1.0;
            let alpha = self.dual_coefficients[i];
            let v = if alpha <= 0.0 {
                (-margin).max(0.0)
            } else if alpha >= self.box_c {
                margin.max(0.0)
            } else {
                margin.abs()
            };
            worst = worst.max(v);
        }
        Ok(worst)
    }

    /// `Σ αᵢ yᵢ`.
    pub fn equality_residual(&self) -> f64 {
        self.dual_coefficients
            .iter()
            .zip(&self.labels)
            .map(|(a, y)| a * y)
            .sum()
    }
}

fn check_labels(y: &[f64]) -> Result<()> {
    if let Some((i, v)) = y.iter().enumerate().find(|(_, &v)| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidArgument(format!("label {i} is {v}, expected +1 or -1")));
    }
    if !y.contains(&1.0) || !y.contains(&-1.0) {
        return Err(Error::InvalidArgument("both classes +1 and -1 must be present".into()));
    }
    Ok(())
}

/// Trains a soft-margin SVM on the Gram matrix `k` by SMO with
/// maximal-violating-pair working set selection.
pub fn svm_train(k: &Matrix, y: &[f64], params: &SvmParams) -> Result<SvmModel> {
    params.validate()?;
    let n = k.rows();
    if k.cols() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "Gram matrix is {}x{} with {} labels",
            k.rows(),
            k.cols(),
            y.len()
        )));
    }
    check_symmetric(k)?;
    check_labels(y)?;

    let c = params.box_c;
    let cap = params.max_iter.unwrap_or_else(|| 10_000_000usize.max(100 * n));
    let mut alpha = vec![0.0; n];
    // G = Qα − e with Q_ij = yᵢ yⱼ K_ij
    let mut grad = vec![-1.0; n];
    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iterations = 0;
    loop {
        let mut i = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > g_max {
                g_max = v;
                i = t;
            }
            if in_low(alpha[t], y[t]) && v < g_min {
                g_min = v;
                j = t;
            }
        }
        let gap = g_max - g_min;
        if i == usize::MAX || j == usize::MAX || gap < params.tol {
            break;
        }
        if iterations >= cap {
            return Err(Error::NoConvergence {
                algorithm: "SMO",
                iterations,
                residual: gap,
            });
        }
        iterations += 1;

        // step t along α_i += y_i t, α_j −= y_j t
        let curvature = (k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)]).max(TAU);
        let mut step = gap / curvature;
        let room_i = if y[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let room_j = if y[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let mut clip_i = false;
        let mut clip_j = false;
        if step >= room_i {
            step = room_i;
            clip_i = true;
        }
        if step >= room_j {
            step = room_j;
            clip_j = true;
            clip_i = clip_i && room_i == room_j;
        }

        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;
        if clip_i {
            alpha[i] = if y[i] > 0.0 { c } else { 0.0 };
        }
        if clip_j {
            alpha[j] = if y[j] > 0.0 { 0.0 } else { c };
        }

        let ki = k.row(i);
        let kj = k.row(j);
        for t in 0..n {
            grad[t] += y[t] * step * (ki[t] - kj[t]);
        }
    }

    // ρ from the free vectors, or the midpoint of the feasible interval
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        let at_upper = alpha[t] >= c;
        let at_lower = alpha[t] <= 0.0;
        if (at_upper && y[t] < 0.0) || (at_lower && y[t] > 0.0) {
            upper = upper.min(yg);
        } else if at_upper || at_lower {
            lower = lower.max(yg);
        } else {
            free_sum += yg;
            free_count += 1;
        }
    }
    let rho = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (upper + lower) / 2.0
    };

    let support_indices = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(SvmModel {
        dual_coefficients: alpha,
        labels: y.to_vec(),
        bias: -rho,
        support_indices,
        gram_source: "precomputed".to_string(),
        box_c: c,
        iterations,
    })
}

/// Sign of the decision values; an exact zero is classified as `+1`.
pub fn svm_predict(model: &SvmModel, k_test: &Matrix) -> Result<Vec<f64>> {
    Ok(model
        .decision_function(k_test)?
        .into_iter()
        .map(|f| if f >= 0.0 { 1.0 } else { -1.0 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{exact_kernel_matrix, KernelSpec};
    use crate::rng::Seed;

    fn two_clusters(n_per: usize, sep: f64, seed: Seed) -> (Matrix, Vec<f64>) {
        let noise = Matrix::gaussian(2 * n_per, 2, seed);
        let x = Matrix::from_fn(2 * n_per, 2, |i, j| {
            let centre = if i < n_per { sep } else { -sep };
            noise[(i, j)] * 0.5 + if j == 0 { centre } else { 0.0 }
        });
        let y = (0..2 * n_per).map(|i| if i < n_per { 1.0 } else { -1.0 }).collect();
        (x, y)
    }

    fn accuracy(pred: &[f64], y: &[f64]) -> f64 {
        pred.iter().zip(y).filter(|(a, b)| a == b).count() as f64 / y.len() as f64
    }

    #[test]
    fn two_point_problem() {
        let x = Matrix::from_rows(&[vec![2.0, 0.0], vec![-2.0, 0.0]]).unwrap();
        let y = [1.0, -1.0];
        let k = exact_kernel_matrix(&x, &x, &KernelSpec::Linear).unwrap();
        let model = svm_train(&k, &y, &SvmParams::default()).unwrap();
        assert_eq!(model.support_indices, vec![0, 1]);
        assert_eq!(svm_predict(&model, &k).unwrap(), y.to_vec());
        // hard-margin optimum: α = 1/8, f(x) = x₀/2
        assert!((model.dual_coefficients[0] - 0.125).abs() < 1e-9);
        assert!(model.bias.abs() < 1e-12);
    }

    #[test]
    fn separable_clusters_linear_kernel() {
        let (x, y) = two_clusters(40, 3.0, Seed(1));
        let k = exact_kernel_matrix(&x, &x, &KernelSpec::Linear).unwrap();
        let params = SvmParams::default();
        let model = svm_train(&k, &y, &params).unwrap();
        assert_eq!(accuracy(&svm_predict(&model, &k).unwrap(), &y), 1.0);
        assert!(model.equality_residual().abs() < 1e-6);
        assert!(model.dual_coefficients.iter().all(|&a| (0.0..=params.box_c).contains(&a)));
        assert!(model.kkt_violation(&k).unwrap() <= params.tol + 1e-9);
    }

    #[test]
    fn kkt_holds_on_overlapping_data() {
        for (seed, spec) in [(2, KernelSpec::Linear), (3, KernelSpec::rbf(0.5).unwrap())] {
            let (x, y) = two_clusters(50, 0.5, Seed(seed));
            let k = exact_kernel_matrix(&x, &x, &spec).unwrap();
            let params = SvmParams { box_c: 2.0, ..SvmParams::default() };
            let model = svm_train(&k, &y, &params).unwrap();
            assert!(model.kkt_violation(&k).unwrap() <= params.tol + 1e-9);
            assert!(model.equality_residual().abs() < 1e-6);
            assert!(model.dual_coefficients.iter().any(|&a| a == params.box_c));
        }
    }

    #[test]
    fn flipped_labels_flip_predictions() {
        let (x, y) = two_clusters(30, 1.0, Seed(4));
        let k = exact_kernel_matrix(&x, &x, &KernelSpec::rbf(0.3).unwrap()).unwrap();
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let f = svm_train(&k, &y, &SvmParams::default()).unwrap().decision_function(&k).unwrap();
        let g = svm_train(&k, &neg, &SvmParams::default()).unwrap().decision_function(&k).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a + b).abs() < 1e-9);
        }
    }

    #[test]
    fn non_support_points_do_not_matter() {
        let (x, y) = two_clusters(30, 3.0, Seed(5));
        let k = exact_kernel_matrix(&x, &x, &KernelSpec::Linear).unwrap();
        let model = svm_train(&k, &y, &SvmParams::default()).unwrap();
        let keep = model.support_indices.clone();
        assert!(keep.len() < 60);
        let reduced = SvmModel {
            dual_coefficients: keep.iter().map(|&i| model.dual_coefficients[i]).collect(),
            labels: keep.iter().map(|&i| y[i]).collect(),
            support_indices: (0..keep.len()).collect(),
            ..model.clone()
        };
        let test = Matrix::gaussian(7, 2, Seed(6));
        let kt = exact_kernel_matrix(&test, &x, &KernelSpec::Linear).unwrap();
        let kr = kt.select_columns(&keep);
        let a = model.decision_function(&kt).unwrap();
        let b = reduced.decision_function(&kr).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_decision_value_predicts_positive() {
        let model = SvmModel {
            dual_coefficients: vec![0.0, 0.0],
            labels: vec![1.0, -1.0],
            bias: 0.0,
            support_indices: vec![],
            gram_source: "none".into(),
            box_c: 1.0,
            iterations: 0,
        };
        assert_eq!(svm_predict(&model, &Matrix::zeros(1, 2)).unwrap(), vec![1.0]);
        assert!(svm_predict(&model, &Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let k = Matrix::identity(3);
        assert!(svm_train(&k, &[1.0, 0.0, -1.0], &SvmParams::default()).is_err());
        assert!(svm_train(&k, &[1.0, 1.0, 1.0], &SvmParams::default()).is_err());
        assert!(svm_train(&k, &[1.0, -1.0], &SvmParams::default()).is_err());
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(svm_train(&asym, &[1.0, -1.0], &SvmParams::default()).is_err());
        let bad = SvmParams { box_c: 0.0, ..SvmParams::default() };
        assert!(svm_train(&k, &[1.0, -1.0, 1.0], &bad).is_err());
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let (x, y) = two_clusters(30, 0.3, Seed(7));
        let k = exact_kernel_matrix(&x, &x, &KernelSpec::rbf(1.0).unwrap()).unwrap();
        let params = SvmParams { max_iter: Some(1), ..SvmParams::default() };
        match svm_train(&k, &y, &params) {
            Err(Error::NoConvergence { iterations, residual, .. }) => {
                assert_eq!(iterations, 1);
                assert!(residual >= params.tol);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
