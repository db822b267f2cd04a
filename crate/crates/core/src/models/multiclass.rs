use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::GramSource;
use crate::linalg::Matrix;

use super::svm::{svm_train, SvmModel, SvmParams};

/// Binary model separating `positive` (label +1) from `negative` (label −1).
#[derive(Debug, Clone)]
pub struct PairModel {
    pub positive: usize,
    pub negative: usize,
    /// Training-set indices of the points of both classes, in ascending order.
    pub members: Vec<usize>,
    pub model: SvmModel,
}

/// One-vs-one ensemble over a precomputed Gram matrix.
#[derive(Debug, Clone)]
pub struct OneVsOne {
    pub class_count: usize,
    pub training_size: usize,
    /// Ordered by `(positive, negative)` with `positive < negative`.
    pub pairs: Vec<PairModel>,
}

/// Number of classes `c = max label + 1`, rejecting empty classes.
pub fn class_count(labels: &[usize]) -> Result<usize> {
    let c = labels.iter().max().map_or(0, |&m| m + 1);
    if c < 2 {
        return Err(Error::InvalidArgument(format!("need at least two classes, found {c}")));
    }
    let mut counts = vec![0usize; c];
    labels.iter().for_each(|&l| counts[l] += 1);
    if let Some(empty) = counts.iter().position(|&n| n == 0) {
        return Err(Error::InvalidArgument(format!("class {empty} has no samples")));
    }
    Ok(c)
}

impl OneVsOne {
    /// Trains `c(c−1)/2` binary models on the class-pair sub-blocks of `gram`.
    pub fn fit_precomputed(gram: &Matrix, labels: &[usize], params: &SvmParams) -> Result<Self> {
        let n = gram.rows();
        if gram.cols() != n || labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix is {}x{} with {} labels",
                gram.rows(),
                gram.cols(),
                labels.len()
            )));
        }
        let c = class_count(labels)?;
        let mut pairs = Vec::with_capacity(c * (c - 1) / 2);
        for a in 0..c {
            for b in a + 1..c {
                let members: Vec<usize> =
                    (0..n).filter(|&i| labels[i] == a || labels[i] == b).collect();
                let y: Vec<f64> = members
                    .iter()
                    .map(|&i| if labels[i] == a { 1.0 } else { -1.0 })
                    .collect();
                let sub = gram.select(&members, &members);
                let model = svm_train(&sub, &y, params)?;
                pairs.push(PairModel {
                    positive: a,
                    negative: b,
                    members,
                    model,
                });
            }
        }
        Ok(Self {
            class_count: c,
            training_size: n,
            pairs,
        })
    }

    pub fn model_count(&self) -> usize {
        self.pairs.len()
    }

    /// Plurality vote over all pairs; a decision value of exactly zero votes
    /// for the lower class, and vote ties go to the lowest class index.
    pub fn predict_precomputed(&self, k_test: &Matrix) -> Result<Vec<usize>> {
        if k_test.cols() != self.training_size {
            return Err(Error::DimensionMismatch(format!(
                "test kernel has {} columns, ensemble was trained on {} points",
                k_test.cols(),
                self.training_size
            )));
        }
        let rows: Vec<usize> = (0..k_test.rows()).collect();
        let mut votes = vec![vec![0usize; self.class_count]; k_test.rows()];
        for pair in &self.pairs {
            let sub = k_test.select(&rows, &pair.members);
            for (r, f) in pair.model.decision_function(&sub)?.into_iter().enumerate() {
                let winner = if f >= 0.0 { pair.positive } else { pair.negative };
                votes[r][winner] += 1;
            }
        }
        Ok(votes
            .iter()
            .map(|v| {
                let best = *v.iter().max().unwrap_or(&0);
                v.iter().position(|&c| c == best).unwrap_or(0)
            })
            .collect())
    }
}

/// One-vs-one classifier that evaluates its kernel on raw points.
#[derive(Clone)]
pub struct OneVsOneClassifier {
    pub ensemble: OneVsOne,
    training_points: Matrix,
    source: Arc<dyn GramSource>,
}

impl std::fmt::Debug for OneVsOneClassifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OneVsOneClassifier")
            .field("kernel", &self.source.describe())
            .field("classes", &self.ensemble.class_count)
            .field("models", &self.ensemble.model_count())
            .finish()
    }
}

impl OneVsOneClassifier {
    pub fn fit(
        x: &Matrix,
        labels: &[usize],
        source: Arc<dyn GramSource>,
        params: &SvmParams,
    ) -> Result<Self> {
        let gram = source.gram(x)?;
        let mut ensemble = OneVsOne::fit_precomputed(&gram, labels, params)?;
        let description = source.describe();
        for pair in &mut ensemble.pairs {
            pair.model.gram_source = description.clone();
        }
        Ok(Self {
            ensemble,
            training_points: x.clone(),
            source,
        })
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        let k_test = self.source.kernel_matrix(x, &self.training_points)?;
        self.ensemble.predict_precomputed(&k_test)
    }

    pub fn kernel_description(&self) -> String {
        self.source.describe()
    }
}

/// Fraction of positions where `predicted` equals `truth`.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(a, b)| a == b).count();
    hits as f64 / truth.len() as f64
}
