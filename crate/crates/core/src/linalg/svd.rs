//! Singular value decomposition by Householder bidiagonalization followed by
//! implicitly shifted QR sweeps on the bidiagonal (Golub–Kahan–Reinsch).

use super::matrix::Matrix;
use super::sign_of_largest;
use crate::error::{Error, Result};

/// Thin SVD `A = U diag(S) Vᵀ`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    /// Singular values, non-increasing and nonnegative.
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (x, s) in us.row_mut(i).iter_mut().zip(&self.s) {
                *x *= s;
            }
        }
        us.mul_transpose(&self.v).expect("conformant factors")
    }

    /// Keeps the leading `k` triplets.
    pub fn truncate(&self, k: usize) -> SvdFactors {
        let k = k.min(self.s.len());
        SvdFactors {
            u: self.u.leading_columns(k),
            s: self.s[..k].to_vec(),
            v: self.v.leading_columns(k),
        }
    }
}

/// Thin SVD with `min(m, n)` singular triplets.
///
/// Each column of `U` is signed so that its largest-magnitude entry is
/// nonnegative (the matching column of `V` follows).
pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    if a.rows() >= a.cols() {
        golub_kahan(a)
    } else {
        let t = golub_kahan(&a.transpose())?;
        let mut f = SvdFactors {
            u: t.v,
            s: t.s,
            v: t.u,
        };
        fix_signs(&mut f);
        Ok(f)
    }
}

fn fix_signs(f: &mut SvdFactors) {
    for j in 0..f.u.cols() {
        if sign_of_largest(&f.u.column(j)) < 0.0 {
            for i in 0..f.u.rows() {
                f.u[(i, j)] = -f.u[(i, j)];
            }
            for i in 0..f.v.rows() {
                f.v[(i, j)] = -f.v[(i, j)];
            }
        }
    }
}

fn rotate(x: &mut [f64], y: &mut [f64], cs: f64, sn: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let t = cs * *a + sn * *b;
        *b = -sn * *a + cs * *b;
        *a = t;
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert!(i < j);
    let (lo, hi) = v.split_at_mut(j);
    (&mut lo[i], &mut hi[0])
}

/// Requires `m >= n`. Works on column-major copies so that all inner loops
/// run over contiguous memory.
fn golub_kahan(mat: &Matrix) -> Result<SvdFactors> {
    let (m, n) = mat.shape();
    debug_assert!(m >= n);
    if n == 0 {
        return Ok(SvdFactors {
            u: Matrix::zeros(m, 0),
            s: Vec::new(),
            v: Matrix::zeros(0, 0),
        });
    }
    let nu = n;
    let mut a: Vec<Vec<f64>> = mat.columns();
    let mut s = vec![0.0; n];
    let mut u: Vec<Vec<f64>> = vec![vec![0.0; m]; nu];
    let mut v: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
    let mut e = vec![0.0; n];
    let mut work = vec![0.0; m];

    let nct = (m - 1).min(n);
    let nrt = (n as isize - 2).clamp(0, m as isize) as usize;

    // Reduce to bidiagonal form, storing diagonal in s and superdiagonal in e.
    for k in 0..nct.max(nrt) {
        if k < nct {
            s[k] = a[k][k..].iter().fold(0.0f64, |acc, &x| acc.hypot(x));
            if s[k] != 0.0 {
                if a[k][k] < 0.0 {
                    s[k] = -s[k];
                }
                let sk = s[k];
                a[k][k..].iter_mut().for_each(|x| *x /= sk);
                a[k][k] += 1.0;
            }
            s[k] = -s[k];
        }
        for j in k + 1..n {
            if k < nct && s[k] != 0.0 {
                let (ak, aj) = pair_mut(&mut a, k, j);
                let t: f64 = ak[k..].iter().zip(&aj[k..]).map(|(x, y)| x * y).sum();
                let t = -t / ak[k];
                for (y, x) in aj[k..].iter_mut().zip(&ak[k..]) {
                    *y += t * x;
                }
            }
            e[j] = a[j][k];
        }
        if k < nct {
            u[k][k..].copy_from_slice(&a[k][k..]);
        }
        if k < nrt {
            e[k] = e[k + 1..].iter().fold(0.0f64, |acc, &x| acc.hypot(x));
            if e[k] != 0.0 {
                if e[k + 1] < 0.0 {
                    e[k] = -e[k];
                }
                let ek = e[k];
                e[k + 1..].iter_mut().for_each(|x| *x /= ek);
                e[k + 1] += 1.0;
            }
            e[k] = -e[k];
            if k + 1 < m && e[k] != 0.0 {
                work[k + 1..].iter_mut().for_each(|w| *w = 0.0);
                for j in k + 1..n {
                    for (w, x) in work[k + 1..].iter_mut().zip(&a[j][k + 1..]) {
                        *w += e[j] * x;
                    }
                }
                for j in k + 1..n {
                    let t = -e[j] / e[k + 1];
                    for (x, w) in a[j][k + 1..].iter_mut().zip(&work[k + 1..]) {
                        *x += t * w;
                    }
                }
            }
            for i in k + 1..n {
                v[k][i] = e[i];
            }
        }
    }

    let mut p = n.min(m + 1);
    if nct < n {
        s[nct] = a[nct][nct];
    }
    if m < p {
        s[p - 1] = 0.0;
    }
    if nrt + 1 < p {
        e[nrt] = a[p - 1][nrt];
    }
    e[p - 1] = 0.0;

    // Generate U.
    for j in nct..nu {
        u[j].iter_mut().for_each(|x| *x = 0.0);
        u[j][j] = 1.0;
    }
    for k in (0..nct).rev() {
        if s[k] != 0.0 {
            for j in k + 1..nu {
                let (uk, uj) = pair_mut(&mut u, k, j);
                let t: f64 = uk[k..].iter().zip(&uj[k..]).map(|(x, y)| x * y).sum();
                let t = -t / uk[k];
                for (y, x) in uj[k..].iter_mut().zip(&uk[k..]) {
                    *y += t * x;
                }
            }
            u[k][k..].iter_mut().for_each(|x| *x = -*x);
            u[k][k] += 1.0;
            u[k][..k].iter_mut().for_each(|x| *x = 0.0);
        } else {
            u[k].iter_mut().for_each(|x| *x = 0.0);
            u[k][k] = 1.0;
        }
    }

    // Generate V.
    for k in (0..n).rev() {
        if k < nrt && e[k] != 0.0 {
            for j in k + 1..nu {
                let (vk, vj) = pair_mut(&mut v, k, j);
                let t: f64 = vk[k + 1..].iter().zip(&vj[k + 1..]).map(|(x, y)| x * y).sum();
                let t = -t / vk[k + 1];
                for (y, x) in vj[k + 1..].iter_mut().zip(&vk[k + 1..]) {
                    *y += t * x;
                }
            }
        }
        v[k].iter_mut().for_each(|x| *x = 0.0);
        v[k][k] = 1.0;
    }

    // Implicit-shift QR iterations on the bidiagonal.
    let pp = p - 1;
    let eps = f64::EPSILON;
    let tiny = 2f64.powi(-966);
    let max_iter = 100 * n;
    let mut iterations = 0usize;
    while p > 0 {
        // k: largest index with negligible e[k] (-1 if none)
        let mut k: isize = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny + eps * (s[ku].abs() + s[ku + 1].abs()) {
                e[ku] = 0.0;
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks: isize = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let t = (if ksu != p { e[ksu].abs() } else { 0.0 })
                    + (if ks != k + 1 { e[ksu - 1].abs() } else { 0.0 });
                if s[ksu].abs() <= tiny + eps * t {
                    s[ksu] = 0.0;
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            // Deflate negligible s[p-1].
            1 => {
                let mut f = e[p - 2];
                e[p - 2] = 0.0;
                for j in (k..=p - 2).rev() {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    if j != k {
                        f = -sn * e[j - 1];
                        e[j - 1] *= cs;
                    }
                    let (vj, vp) = pair_mut(&mut v, j, p - 1);
                    rotate(vj, vp, cs, sn);
                }
            }
            // Split at negligible s[k-1].
            2 => {
                let mut f = e[k - 1];
                e[k - 1] = 0.0;
                for j in k..p {
                    let t = s[j].hypot(f);
                    let cs = s[j] / t;
                    let sn = f / t;
                    s[j] = t;
                    f = -sn * e[j];
                    e[j] *= cs;
                    let (uk1, uj) = pair_mut(&mut u, k - 1, j);
                    rotate(uj, uk1, cs, sn);
                }
            }
            // One QR sweep.
            3 => {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::NoConvergence {
                        algorithm: "svd",
                        iterations: iterations - 1,
                        residual: e[..p].iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
                    });
                }
                let scale = s[p - 1]
                    .abs()
                    .max(s[p - 2].abs())
                    .max(e[p - 2].abs())
                    .max(s[k].abs())
                    .max(e[k].abs());
                let sp = s[p - 1] / scale;
                let spm1 = s[p - 2] / scale;
                let epm1 = e[p - 2] / scale;
                let sk = s[k] / scale;
                let ek = e[k] / scale;
                let b = ((spm1 + sp) * (spm1 - sp) + epm1 * epm1) / 2.0;
                let c = (sp * epm1) * (sp * epm1);
                let mut shift = 0.0;
                if b != 0.0 || c != 0.0 {
                    shift = (b * b + c).sqrt();
                    if b < 0.0 {
                        shift = -shift;
                    }
                    shift = c / (b + shift);
                }
                let mut f = (sk + sp) * (sk - sp) + shift;
                let mut g = sk * ek;
                for j in k..p - 1 {
                    let t = f.hypot(g);
                    let cs = f / t;
                    let sn = g / t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs * s[j] + sn * e[j];
                    e[j] = cs * e[j] - sn * s[j];
                    g = sn * s[j + 1];
                    s[j + 1] *= cs;
                    {
                        let (vj, vj1) = pair_mut(&mut v, j, j + 1);
                        rotate(vj, vj1, cs, sn);
                    }
                    let t = f.hypot(g);
                    let cs = f / t;
                    let sn = g / t;
                    s[j] = t;
                    f = cs * e[j] + sn * s[j + 1];
                    s[j + 1] = -sn * e[j] + cs * s[j + 1];
                    g = sn * e[j + 1];
                    e[j + 1] *= cs;
                    if j < m - 1 {
                        let (uj, uj1) = pair_mut(&mut u, j, j + 1);
                        rotate(uj, uj1, cs, sn);
                    }
                }
                e[p - 2] = f;
            }
            // Convergence of s[k].
            _ => {
                if s[k] <= 0.0 {
                    s[k] = if s[k] < 0.0 { -s[k] } else { 0.0 };
                    v[k][..=pp].iter_mut().for_each(|x| *x = -*x);
                }
                let mut k = k;
                while k < pp {
                    if s[k] >= s[k + 1] {
                        break;
                    }
                    s.swap(k, k + 1);
                    if k < n - 1 {
                        v.swap(k, k + 1);
                    }
                    if k < m - 1 {
                        u.swap(k, k + 1);
                    }
                    k += 1;
                }
                p -= 1;
            }
        }
    }

    let mut f = SvdFactors {
        u: Matrix::from_columns(m, &u),
        s,
        v: Matrix::from_columns(n, &v),
    };
    fix_signs(&mut f);
    Ok(f)
}
