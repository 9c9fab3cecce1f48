//! Householder tridiagonalization and implicit-shift QL.
//!
//! The real-symmetric path follows the classic tred2/tql2 routines
//! (Bowdler-Martin-Reinsch-Wilkinson; same lineage as EISPACK and JAMA).
//! Complex Hermitian input is reduced natively with complex Householder
//! reflectors, then phase-normalized to a real tridiagonal form so both
//! paths share one QL core. Columns whose below-subdiagonal part is exactly
//! zero are skipped, so already-tridiagonal (or diagonal) input costs O(n^2).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::kernel::matrix::Matrix;

const MAX_QL_SWEEPS: usize = 60;

fn hypot(a: f64, b: f64) -> f64 {
    libm::hypot(a, b)
}

/// Symmetric tridiagonal matrix: `d` diagonal, `e[i]` couples `i` and `i+1`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(e.len() + 1 == d.len() || d.is_empty() && e.is_empty());
        SymTridiagonal { d, e }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.d.len();
        let mut d = self.d.clone();
        let mut e = vec![0.0; n];
        e[..n.saturating_sub(1)].copy_from_slice(&self.e);
        ql_implicit(&mut d, &mut e, |_, _, _| {})?;
        d.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-NaN eigenvalues"));
        Ok(d)
    }
}

/// Reduce a real symmetric matrix (row-major, length n*n) to tridiagonal
/// form. On return `a` holds the accumulated orthogonal transformation if
/// `vectors` is set (otherwise its content is scratch). Ported from tred2.
pub(crate) fn tridiagonalize_real(
    a: &mut [f64],
    n: usize,
    d: &mut [f64],
    e: &mut [f64],
    vectors: bool,
) {
    for j in 0..n {
        d[j] = a[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = a[(i - 1) * n + j];
                a[i * n + j] = 0.0;
                a[j * n + i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                f = d[j];
                a[j * n + i] = f;
                g = e[j] + a[j * n + j] * f;
                for k in j + 1..i {
                    g += a[k * n + j] * d[k];
                    e[k] += a[k * n + j] * f;
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
                    a[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = a[(i - 1) * n + j];
                a[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    if vectors {
        for i in 0..n - 1 {
            a[(n - 1) * n + i] = a[i * n + i];
            a[i * n + i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = a[k * n + i + 1] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += a[k * n + i + 1] * a[k * n + j];
                    }
                    for k in 0..=i {
                        a[k * n + j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                a[k * n + i + 1] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = a[(n - 1) * n + j];
            a[(n - 1) * n + j] = 0.0;
        }
        a[(n - 1) * n + n - 1] = 1.0;
    } else {
        // Values-only: the reduced diagonal sits on the diagonal of `a`.
        for j in 0..n {
            d[j] = a[j * n + j];
        }
    }

    // Shift e to the "e[i] couples i,i+1" convention with e[n-1] = 0.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
}

/// Implicit-shift QL on a tridiagonal `(d, e)`; `e[i]` couples `i` and
/// `i+1`, `e[n-1]` ignored. Rotations are streamed to `rot(i, c, s)` acting
/// on coordinate pair `(i, i+1)`. Eigenvalues land in `d`, unsorted.
pub(crate) fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    mut rot: impl FnMut(usize, f64, f64),
) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

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
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(Error::ConvergenceFailure { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
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
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rot(i, c, s);
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

/// Reduce a complex Hermitian matrix to real tridiagonal form with unitary
/// Householder reflectors. On return `q` (if requested) holds the unitary
/// transformation such that `Q^* A Q` is the real tridiagonal `(d, e)`.
pub(crate) fn tridiagonalize_hermitian(
    a: &mut Matrix,
    d: &mut [f64],
    e: &mut [f64],
    vectors: bool,
) -> Option<Matrix> {
    let n = a.rows();
    debug_assert!(a.is_square());
    let mut q = if vectors { Some(Matrix::identity(n)) } else { None };
    let zero = Complex64::new(0.0, 0.0);

    let mut betas = vec![zero; n.saturating_sub(1)];
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];

    for k in 0..n.saturating_sub(1) {
        // Column below the diagonal.
        let mut tail2 = 0.0;
        for i in k + 2..n {
            tail2 += a[(i, k)].norm_sqr();
        }
        let x0 = a[(k + 1, k)];
        if tail2 == 0.0 {
            // Already tridiagonal in this column.
            betas[k] = x0;
            continue;
        }
        let norm = (x0.norm_sqr() + tail2).sqrt();
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        // v = x - alpha e0, normalized.
        let mut vnorm2 = 0.0;
        v[k + 1] = x0 - alpha;
        vnorm2 += v[k + 1].norm_sqr();
        for i in k + 2..n {
            v[i] = a[(i, k)];
            vnorm2 += v[i].norm_sqr();
        }
        let vn = vnorm2.sqrt();
        for item in v.iter_mut().take(n).skip(k + 1) {
            *item /= vn;
        }

        // u = A2 v on the trailing block, then rank-2 Hermitian update
        // A2 <- A2 - v w^* - w v^* with w = 2u - 2(v^* u)v.
        for i in k + 1..n {
            let mut acc = zero;
            for j in k + 1..n {
                acc += a[(i, j)] * v[j];
            }
            w[i] = 2.0 * acc;
        }
        let mut vu = zero;
        for i in k + 1..n {
            vu += v[i].conj() * w[i];
        }
        for i in k + 1..n {
            w[i] -= vu * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                let val = a[(i, j)] - upd;
                a[(i, j)] = val;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = zero;
        }
        betas[k] = alpha;

        if let Some(q) = q.as_mut() {
            // Q <- Q (I - 2 v v^*)
            for r in 0..n {
                let mut acc = zero;
                for j in k + 1..n {
                    acc += q[(r, j)] * v[j];
                }
                acc *= 2.0;
                for j in k + 1..n {
                    let sub = acc * v[j].conj();
                    q[(r, j)] -= sub;
                }
            }
        }
    }

    // Phase-normalize the complex subdiagonal to real nonnegative entries.
    let mut theta = Complex64::new(1.0, 0.0);
    for k in 0..n {
        d[k] = a[(k, k)].re;
        if k + 1 < n {
            let b = betas[k];
            let babs = b.norm();
            e[k] = babs;
            let next = if babs == 0.0 { theta } else { theta * (b / babs) };
            if let Some(q) = q.as_mut() {
                if next != Complex64::new(1.0, 0.0) {
                    for r in 0..n {
                        q[(r, k + 1)] *= next;
                    }
                }
            }
            theta = next;
        }
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    q
}

/// Sort eigenvalues ascending, permuting matching columns of `z`.
pub(crate) fn sort_eigen(d: &mut [f64], mut z: Option<&mut Matrix>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("non-NaN eigenvalues"));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(z) = z.as_mut() {
        let rows = z.rows();
        let mut permuted = Matrix::zeros(rows, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for r in 0..rows {
                permuted[(r, new_col)] = z[(r, old_col)];
            }
        }
        **z = permuted;
    }
}
