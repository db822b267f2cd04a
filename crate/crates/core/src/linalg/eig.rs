//! Symmetric eigendecomposition: Householder tridiagonalization followed by
//! the implicit QL algorithm.

use super::matrix::Matrix;
use super::sign_of_largest;
use crate::error::{Error, Result};

/// `S = vectors · diag(values) · vectorsᵀ`, values non-increasing.
#[derive(Debug, Clone)]
pub struct EigFactors {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Asymmetry tolerance: `‖S − Sᵀ‖_F ≤ 1e-10 · max(1, ‖S‖_F)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

pub(crate) fn check_symmetric(s: &Matrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let asymmetry = s.asymmetry();
    if asymmetry > SYMMETRY_TOL * s.frobenius_norm().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

pub fn sym_eig(s: &Matrix) -> Result<EigFactors> {
    check_symmetric(s)?;
    let n = s.rows();
    if n == 0 {
        return Ok(EigFactors {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    // symmetrize exactly before reducing
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 0.5 * (s[(i, j)] + s[(j, i)])).collect())
        .collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    // QL rotates pairs of eigenvector columns; store them as rows.
    let mut vt: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    ql_implicit(&mut d, &mut e, &mut vt)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut columns: Vec<Vec<f64>> = order.iter().map(|&i| vt[i].clone()).collect();
    for col in columns.iter_mut() {
        if sign_of_largest(col) < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(EigFactors {
        values,
        vectors: Matrix::from_columns(n, &columns),
    })
}

fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for x in &d[..i] {
            scale += x.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in j + 1..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(d: &mut [f64], e: &mut [f64], vt: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let max_iter = 100 * n;
    let mut iterations = 0usize;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::NoConvergence {
                        algorithm: "sym_eig",
                        iterations: iterations - 1,
                        residual: e[l].abs(),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = vt.split_at_mut(i + 1);
                    for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let g = Matrix::gaussian(n, n, Seed(seed));
        g.add(&g.transpose()).unwrap()
    }

    fn check(s: &Matrix) -> EigFactors {
        let f = sym_eig(s).unwrap();
        let lhs = s.matmul(&f.vectors).unwrap();
        let rhs = f.vectors.matmul(&Matrix::from_diagonal(&f.values)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-8);
        assert!(f.vectors.orthonormality_defect() < 1e-12);
        assert!(f.values.windows(2).all(|w| w[0] >= w[1]));
        f
    }

    #[test]
    fn diagonal() {
        let f = check(&Matrix::from_diagonal(&[2.0, 1.0]));
        assert_eq!(f.values, vec![2.0, 1.0]);
        let f = check(&Matrix::from_diagonal(&[1.0, 2.0]));
        assert_eq!(f.values, vec![2.0, 1.0]);
    }

    #[test]
    fn swap_matrix() {
        let f = check(&Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        assert!((f.values[0] - 1.0).abs() < 1e-14);
        assert!((f.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_values() {
        let f = check(&Matrix::identity(5));
        assert!(f.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn trace_is_preserved() {
        for seed in 0..5 {
            let s = random_symmetric(25, seed);
            let f = check(&s);
            let sum: f64 = f.values.iter().sum();
            assert!((sum - s.trace()).abs() < 1e-8);
        }
    }

    #[test]
    fn asymmetric_rejected() {
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&s), Err(Error::NotSymmetric { .. })));
        assert!(sym_eig(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn one_by_one_and_zero() {
        let f = check(&Matrix::from_diagonal(&[-3.5]));
        assert_eq!(f.values, vec![-3.5]);
        let z = check(&Matrix::zeros(4, 4));
        assert!(z.values.iter().all(|&v| v == 0.0));
    }
}
