use crate::error::{Error, Result};
use crate::linalg::{back_substitute, householder_qr, norm2, Matrix};
use crate::rng::Seed;

/// Relative size of the smallest `|R_ii|` below which `A` counts as rank deficient.
pub const RANK_TOL: f64 = 1e-12;

/// `‖A x − b‖₂`.
pub fn residual_norm(a: &Matrix, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = a.matvec(x)?;
    if ax.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows, b has {} entries",
            ax.len(),
            b.len()
        )));
    }
    Ok(ax.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
}

/// Least-squares solution `x = R⁻¹ Qᵀ b` from a Householder QR of `A`.
pub fn ls_solve_qr(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!("A has {m} rows, b has {} entries", b.len())));
    }
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "underdetermined system: {m} equations, {n} unknowns"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let qr = householder_qr(a)?;
    let diag: Vec<f64> = (0..n).map(|i| qr.r[(i, i)].abs()).collect();
    let largest = diag.iter().cloned().fold(0.0, f64::max);
    let (worst, smallest) = diag
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &d)| if d < acc.1 { (i, d) } else { acc });
    if !(smallest > RANK_TOL * largest) {
        return Err(Error::RankDeficient(format!(
            "|R[{worst}][{worst}]| = {smallest:e} against max |R_ii| = {largest:e}"
        )));
    }
    let qtb = qr.q.transpose_matvec(b)?;
    back_substitute(&qr.r, &qtb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSearchResult {
    pub x: Vec<f64>,
    pub residual: f64,
    /// Position of the winning candidate in the stream.
    pub index: usize,
}

/// Draws `k` standard normal candidates for `x` and keeps the one with the
/// smallest residual. Candidates come from a single stream, so a larger `k`
/// with the same seed sees a superset of candidates.
pub fn ls_random_search(a: &Matrix, b: &[f64], k: usize, seed: Seed) -> Result<RandomSearchResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("candidate count must be positive".into()));
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows, b has {} entries",
            a.rows(),
            b.len()
        )));
    }
    let mut stream = seed.stream();
    let mut candidate = vec![0.0; a.cols()];
    let mut best = RandomSearchResult {
        x: Vec::new(),
        residual: f64::INFINITY,
        index: 0,
    };
    for t in 0..k {
        stream.fill_normal(&mut candidate);
        let r = residual_norm(a, &candidate, b)?;
        if r < best.residual || t == 0 {
            best = RandomSearchResult {
                x: candidate.clone(),
                residual: r,
                index: t,
            };
        }
    }
    Ok(best)
}

/// `‖Aᵀ(A x − b)‖₂`, zero at the least-squares optimum.
pub fn normal_equation_residual(a: &Matrix, x: &[f64], b: &[f64]) -> Result<f64> {
    let mut r = a.matvec(x)?;
    r.iter_mut().zip(b).for_each(|(v, bi)| *v -= bi);
    Ok(norm2(&a.transpose_matvec(&r)?))
}
