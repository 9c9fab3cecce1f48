//! SVD via Householder bidiagonalization and the Golub-Kahan tridiagonal.
//!
//! A square complex matrix is reduced to real upper-bidiagonal form with
//! unitary reflectors; the perfect-shuffle dilation of the bidiagonal is a
//! symmetric tridiagonal whose eigenvalues are the signed singular values,
//! solved by the shared implicit-QL core. Reflector supports are tracked, so
//! sparse (already bi/tridiagonal) inputs cost O(n^2).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::kernel::matrix::Matrix;
use crate::kernel::tridiag::ql_implicit;

/// Singular value decomposition `A = U diag(values) V^*`, values descending.
#[derive(Debug, Clone)]
pub struct SingularValueData {
    pub values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn phase_of(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 { Complex64::new(1.0, 0.0) } else { z / n }
}

struct Bidiagonalizer {
    n: usize,
    a: Matrix,
    u: Option<Matrix>,
    v: Option<Matrix>,
}

impl Bidiagonalizer {
    /// Zero column k below the diagonal with a left reflector.
    fn left_reflect(&mut self, k: usize) {
        let n = self.n;
        let mut tail2 = 0.0;
        let mut hi = k;
        for i in k + 1..n {
            let t = self.a[(i, k)].norm_sqr();
            if t != 0.0 {
                hi = i;
            }
            tail2 += t;
        }
        if tail2 == 0.0 {
            return;
        }
        let x0 = self.a[(k, k)];
        let norm = (x0.norm_sqr() + tail2).sqrt();
        let alpha = -phase_of(x0) * norm;
        let mut u = vec![ZERO; hi + 1];
        u[k] = x0 - alpha;
        for i in k + 1..=hi {
            u[i] = self.a[(i, k)];
        }
        let s = norm * (norm + x0.norm());
        // A <- (I - uu^*/s) A on columns k.., rows k..=hi.
        self.a[(k, k)] = alpha;
        for i in k + 1..=hi {
            self.a[(i, k)] = ZERO;
        }
        for j in k + 1..n {
            let mut dot = ZERO;
            for (i, ui) in u.iter().enumerate().take(hi + 1).skip(k) {
                dot += ui.conj() * self.a[(i, j)];
            }
            dot /= s;
            if dot == ZERO {
                continue;
            }
            for (i, ui) in u.iter().enumerate().take(hi + 1).skip(k) {
                let upd = *ui * dot;
                self.a[(i, j)] -= upd;
            }
        }
        if let Some(um) = self.u.as_mut() {
            // U <- U (I - uu^*/s)
            for r in 0..n {
                let mut dot = ZERO;
                for (i, ui) in u.iter().enumerate().take(hi + 1).skip(k) {
                    dot += um[(r, i)] * *ui;
                }
                dot /= s;
                if dot == ZERO {
                    continue;
                }
                for (i, ui) in u.iter().enumerate().take(hi + 1).skip(k) {
                    let upd = dot * ui.conj();
                    um[(r, i)] -= upd;
                }
            }
        }
    }

    /// Zero row k beyond the superdiagonal with a right reflector.
    fn right_reflect(&mut self, k: usize) {
        let n = self.n;
        let mut tail2 = 0.0;
        let mut hi = k + 1;
        for j in k + 2..n {
            let t = self.a[(k, j)].norm_sqr();
            if t != 0.0 {
                hi = j;
            }
            tail2 += t;
        }
        if tail2 == 0.0 {
            return;
        }
        let r0 = self.a[(k, k + 1)];
        let norm = (r0.norm_sqr() + tail2).sqrt();
        let beta = -phase_of(r0) * norm;
        // w_j = conj(r_j) for j > k+1, w_{k+1} = conj(r_{k+1}) - conj(beta)
        let mut w = vec![ZERO; hi + 1];
        w[k + 1] = (r0 - beta).conj();
        for j in k + 2..=hi {
            w[j] = self.a[(k, j)].conj();
        }
        let s = norm * (norm + r0.norm());
        self.a[(k, k + 1)] = beta;
        for j in k + 2..=hi {
            self.a[(k, j)] = ZERO;
        }
        // Rows below: A <- A (I - ww^*/s).
        for i in k + 1..n {
            let mut dot = ZERO;
            for (j, wj) in w.iter().enumerate().take(hi + 1).skip(k + 1) {
                dot += self.a[(i, j)] * *wj;
            }
            dot /= s;
            if dot == ZERO {
                continue;
            }
            for (j, wj) in w.iter().enumerate().take(hi + 1).skip(k + 1) {
                let upd = dot * wj.conj();
                self.a[(i, j)] -= upd;
            }
        }
        if let Some(vm) = self.v.as_mut() {
            // V <- V (I - ww^*/s)
            for r in 0..n {
                let mut dot = ZERO;
                for (j, wj) in w.iter().enumerate().take(hi + 1).skip(k + 1) {
                    dot += vm[(r, j)] * *wj;
                }
                dot /= s;
                if dot == ZERO {
                    continue;
                }
                for (j, wj) in w.iter().enumerate().take(hi + 1).skip(k + 1) {
                    let upd = dot * wj.conj();
                    vm[(r, j)] -= upd;
                }
            }
        }
    }
}

/// Fill the columns listed in `slots` of `mat` with an orthonormal
/// completion, preferring the candidate vectors (modified Gram-Schmidt
/// against every already-filled column, standard basis as fallback).
fn complete_columns(mat: &mut Matrix, slots: &[usize], cand: &[Vec<Complex64>]) {
    let n = mat.rows();
    let filled: Vec<usize> = (0..mat.cols()).filter(|c| !slots.contains(c)).collect();
    let mut placed: Vec<usize> = filled;
    let mut source = 0usize;
    for &slot in slots {
        loop {
            let mut v: Vec<Complex64> = if source < cand.len() {
                cand[source].clone()
            } else {
                let k = source - cand.len();
                if k >= n {
                    break; // cannot happen for consistent inputs
                }
                let mut e = vec![ZERO; n];
                e[k] = Complex64::new(1.0, 0.0);
                e
            };
            source += 1;
            for &col in &placed {
                let mut dot = ZERO;
                for i in 0..n {
                    dot += mat[(i, col)].conj() * v[i];
                }
                for (i, item) in v.iter_mut().enumerate() {
                    *item -= dot * mat[(i, col)];
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for (i, item) in v.iter().enumerate() {
                    mat[(i, slot)] = *item / norm;
                }
                placed.push(slot);
                break;
            }
        }
    }
}

/// Square SVD. With `vectors`, `u` and `v` are unitary and
/// `A = U diag(values) V^*`; otherwise they are 0x0 placeholders.
pub fn svd(a: &Matrix, vectors: bool) -> Result<SingularValueData> {
    assert!(a.is_square(), "svd expects a square matrix");
    let n = a.rows();

    let mut bi = Bidiagonalizer {
        n,
        a: a.clone(),
        u: vectors.then(|| Matrix::identity(n)),
        v: vectors.then(|| Matrix::identity(n)),
    };
    for k in 0..n {
        bi.left_reflect(k);
        if k + 2 < n {
            bi.right_reflect(k);
        }
    }

    // Phase-normalize the bidiagonal to real nonnegative entries.
    let mut q = vec![0.0; n]; // diagonal
    let mut r = vec![0.0; n.saturating_sub(1)]; // superdiagonal
    {
        let mut psi = Complex64::new(1.0, 0.0); // right phases
        for k in 0..n {
            let qk = bi.a[(k, k)] * psi;
            let phi = phase_of(qk);
            q[k] = qk.norm();
            if let Some(um) = bi.u.as_mut() {
                if phi != Complex64::new(1.0, 0.0) {
                    for row in 0..n {
                        um[(row, k)] *= phi;
                    }
                }
            }
            if let Some(vm) = bi.v.as_mut() {
                if psi != Complex64::new(1.0, 0.0) {
                    for row in 0..n {
                        vm[(row, k)] *= psi;
                    }
                }
            }
            if k + 1 < n {
                let c = phi.conj() * bi.a[(k, k + 1)];
                r[k] = c.norm();
                psi = if r[k] == 0.0 { Complex64::new(1.0, 0.0) } else { (c / r[k]).conj() };
            }
        }
    }

    // Golub-Kahan dilation: interleaved tridiagonal of dimension 2n with
    // zero diagonal and off-diagonals (q0, r0, q1, r1, ..., q_{n-1}).
    let m = 2 * n;
    let mut d = vec![0.0; m];
    let mut e = vec![0.0; m];
    for k in 0..n {
        e[2 * k] = q[k];
        if k + 1 < n {
            e[2 * k + 1] = r[k];
        }
    }

    if !vectors {
        ql_implicit(&mut d, &mut e, |_, _, _| {})?;
        d.sort_unstable_by(|a, b| b.partial_cmp(a).expect("non-NaN"));
        d.truncate(n);
        // Clamp the roundoff-negative tail of the paired spectrum.
        for v in d.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        return Ok(SingularValueData { values: d, u: Matrix::zeros(0, 0), v: Matrix::zeros(0, 0) });
    }

    let mut z = vec![0.0; m * m];
    for i in 0..m {
        z[i * m + i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, |i, c, s| {
        for k in 0..m {
            let h = z[k * m + i + 1];
            z[k * m + i + 1] = s * z[k * m + i] + c * h;
            z[k * m + i] = c * z[k * m + i] - s * h;
        }
    })?;

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).expect("non-NaN"));
    let sigma_max = d[order[0]].max(0.0);
    let zero_tol = 1e-12 * sigma_max.max(1.0) * (n as f64);

    let mut values = vec![0.0; n];
    let mut u_core = Matrix::zeros(n, n);
    let mut v_core = Matrix::zeros(n, n);
    let sqrt2 = core::f64::consts::SQRT_2;
    let mut zero_cols: Vec<usize> = Vec::new();
    for j in 0..n {
        let col = order[j];
        let sigma = d[col];
        values[j] = sigma.max(0.0);
        if sigma <= zero_tol {
            zero_cols.push(j);
            continue;
        }
        for i in 0..n {
            v_core[(i, j)] = Complex64::new(sqrt2 * z[(2 * i) * m + col], 0.0);
            u_core[(i, j)] = Complex64::new(sqrt2 * z[(2 * i + 1) * m + col], 0.0);
        }
    }
    if !zero_cols.is_empty() {
        // Kernel columns: orthonormal completion seeded by the u/v parts of
        // the near-zero eigenvectors of the dilation.
        let near_zero: Vec<usize> = (0..m).filter(|&c| d[c].abs() <= zero_tol).collect();
        let v_cand: Vec<Vec<Complex64>> = near_zero
            .iter()
            .map(|&c| (0..n).map(|i| Complex64::new(z[(2 * i) * m + c], 0.0)).collect())
            .collect();
        let u_cand: Vec<Vec<Complex64>> = near_zero
            .iter()
            .map(|&c| (0..n).map(|i| Complex64::new(z[(2 * i + 1) * m + c], 0.0)).collect())
            .collect();
        complete_columns(&mut v_core, &zero_cols, &v_cand);
        complete_columns(&mut u_core, &zero_cols, &u_cand);
    }

    let u = bi.u.expect("vectors").mul(&u_core);
    let v = bi.v.expect("vectors").mul(&v_core);
    Ok(SingularValueData { values, u, v })
}
