//! Dense Hermitian linear-algebra core.
//!
//! Powers of a decomposed operator follow the partial-inverse convention:
//! [`partial_power`] assigns 0 on the numerical kernel before raising the
//! modulus of the spectrum to the requested complex power, while
//! [`matrix_function`] applies a plain scalar function with no kernel
//! killing.

pub mod bidiag;
pub mod matrix;
pub mod tridiag;

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
pub use bidiag::SingularValueData;
pub use matrix::{KahanSum, Matrix};
pub use tridiag::SymTridiagonal;

/// Hermiticity acceptance threshold for [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default kernel threshold, relative to the spectral radius.
pub const KERNEL_TOL_FACTOR: f64 = 1e-10;

/// A validated conjugate-symmetric square matrix.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    mat: Matrix,
}

impl HermitianMatrix {
    /// Wrap a square matrix, enforcing conjugate symmetry within
    /// [`HERMITIAN_TOL`] (relative to the largest entry). The stored matrix
    /// is symmetrized exactly.
    pub fn new(mat: Matrix) -> Result<Self> {
        assert!(mat.is_square(), "Hermitian matrix must be square");
        assert!(mat.rows() >= 1, "dimension must be at least 1");
        let defect = mat.hermitian_defect();
        let scale = mat.max_norm().max(1.0);
        if defect > HERMITIAN_TOL * scale {
            return Err(Error::NonHermitianInput { max_defect: defect });
        }
        Ok(Self::new_unchecked(mat))
    }

    /// Wrap and symmetrize without the tolerance gate (for matrices that are
    /// Hermitian by construction).
    pub fn new_unchecked(mat: Matrix) -> Self {
        let n = mat.rows();
        let mut sym = mat;
        for i in 0..n {
            let di = sym[(i, i)].re;
            sym[(i, i)] = Complex64::new(di, 0.0);
            for j in i + 1..n {
                let avg = 0.5 * (sym[(i, j)] + sym[(j, i)].conj());
                sym[(i, j)] = avg;
                sym[(j, i)] = avg.conj();
            }
        }
        HermitianMatrix { mat: sym }
    }

    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_real(n, n, data))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::new_unchecked(Matrix::diag_real(values))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }

    /// Eigendecomposition with eigenvectors, eigenvalues ascending.
    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        eigh(self)
    }

    /// Eigenvalues only (ascending); cheaper than [`Self::eigh`].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigh_values(self)
    }
}

/// Eigendecomposition of a Hermitian matrix: `A = U diag(eigenvalues) U^*`
/// with ascending eigenvalues and unitary `U`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
    kernel_tol: f64,
}

impl SpectralDecomposition {
    /// Assemble from parts; `eigenvalues` must be ascending and match the
    /// column count of `eigenvectors`.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Matrix, kernel_tol: f64) -> Self {
        assert_eq!(eigenvalues.len(), eigenvectors.cols());
        SpectralDecomposition { eigenvalues, eigenvectors, kernel_tol }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn kernel_tol(&self) -> f64 {
        self.kernel_tol
    }

    /// Override the kernel threshold (models with exact-zero modes set this
    /// from construction metadata rather than numerics).
    pub fn with_kernel_tol(mut self, tol: f64) -> Self {
        self.kernel_tol = tol;
        self
    }

    /// Indices of eigenvalues inside the kernel band `|lambda| <= kernel_tol`.
    pub fn kernel_indices(&self) -> Vec<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l.abs() <= self.kernel_tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// `U diag(f(lambda)) U^*` for a complex-valued spectral multiplier.
    fn assemble(&self, weights: &[Complex64]) -> Matrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        // out = U W U^* computed as (U W) U^*.
        let mut uw = u.clone();
        for j in 0..n {
            if weights[j] == Complex64::new(0.0, 0.0) {
                for i in 0..n {
                    uw[(i, j)] = Complex64::new(0.0, 0.0);
                }
            } else {
                for i in 0..n {
                    uw[(i, j)] *= weights[j];
                }
            }
        }
        uw.mul(&u.adjoint())
    }

    /// Reconstruct the original matrix `U diag(lambda) U^*`.
    pub fn reconstruct(&self) -> Matrix {
        let weights: Vec<Complex64> =
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        self.assemble(&weights)
    }
}

fn eigh_real_path(a: &HermitianMatrix, vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = a.dim();
    let mut work: Vec<f64> = a.matrix().data().iter().map(|z| z.re).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiag::tridiagonalize_real(&mut work, n, &mut d, &mut e, vectors);
    if vectors {
        tridiag::ql_implicit(&mut d, &mut e, |i, c, s| {
            for k in 0..n {
                let h = work[k * n + i + 1];
                work[k * n + i + 1] = s * work[k * n + i] + c * h;
                work[k * n + i] = c * work[k * n + i] - s * h;
            }
        })?;
        let mut z = Matrix::from_real(n, n, &work);
        tridiag::sort_eigen(&mut d, Some(&mut z));
        Ok((d, Some(z)))
    } else {
        tridiag::ql_implicit(&mut d, &mut e, |_, _, _| {})?;
        tridiag::sort_eigen(&mut d, None);
        Ok((d, None))
    }
}

fn eigh_complex_path(a: &HermitianMatrix, vectors: bool) -> Result<(Vec<f64>, Option<Matrix>)> {
    let n = a.dim();
    let mut work = a.matrix().clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let q = tridiag::tridiagonalize_hermitian(&mut work, &mut d, &mut e, vectors);
    match q {
        Some(mut q) => {
            tridiag::ql_implicit(&mut d, &mut e, |i, c, s| {
                for k in 0..n {
                    let h = q[(k, i + 1)];
                    q[(k, i + 1)] = s * q[(k, i)] + c * h;
                    q[(k, i)] = c * q[(k, i)] - s * h;
                }
            })?;
            tridiag::sort_eigen(&mut d, Some(&mut q));
            Ok((d, Some(q)))
        }
        None => {
            tridiag::ql_implicit(&mut d, &mut e, |_, _, _| {})?;
            tridiag::sort_eigen(&mut d, None);
            Ok((d, None))
        }
    }
}

/// Exact-zero banded shortcut: if the matrix is tridiagonal (all entries
/// beyond the first off-diagonal are exactly zero), extract `(d, e)`
/// directly. Hermitian tridiagonal subdiagonals are phase-normalized.
fn try_tridiagonal(a: &HermitianMatrix) -> Option<SymTridiagonal> {
    let n = a.dim();
    let m = a.matrix();
    for i in 0..n {
        for j in 0..n {
            if (j + 1 < i || i + 1 < j) && m[(i, j)] != Complex64::new(0.0, 0.0) {
                return None;
            }
        }
    }
    let d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let e: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)].norm()).collect();
    Some(SymTridiagonal::new(d, e))
}

/// Full eigendecomposition (Householder tridiagonalization + implicit QL).
pub fn eigh(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let (d, z) = if a.matrix().is_real() {
        eigh_real_path(a, true)?
    } else {
        eigh_complex_path(a, true)?
    };
    let z = z.expect("vectors requested");
    let radius = d.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    Ok(SpectralDecomposition {
        eigenvalues: d,
        eigenvectors: z,
        kernel_tol: KERNEL_TOL_FACTOR * radius,
    })
}

/// Eigenvalues only, ascending.
pub fn eigh_values(a: &HermitianMatrix) -> Result<Vec<f64>> {
    if let Some(t) = try_tridiagonal(a) {
        return t.eigenvalues();
    }
    let (d, _) = if a.matrix().is_real() {
        eigh_real_path(a, false)?
    } else {
        eigh_complex_path(a, false)?
    };
    Ok(d)
}

/// `U diag(f_z(lambda)) U^*` with `f_z(l) = |l|^z` away from the kernel band
/// and 0 on it. For `Re z < 0` this is the partial inverse power.
pub fn partial_power(d: &SpectralDecomposition, z: Complex64) -> Matrix {
    let tol = d.kernel_tol();
    let weights: Vec<Complex64> = d
        .eigenvalues()
        .iter()
        .map(|&l| {
            if l.abs() <= tol {
                Complex64::new(0.0, 0.0)
            } else {
                // |l|^z = exp(z ln |l|)
                (z * libm::log(l.abs())).exp()
            }
        })
        .collect();
    d.assemble(&weights)
}

/// `U diag(f(lambda)) U^*`; the kernel convention is NOT applied.
pub fn matrix_function(d: &SpectralDecomposition, f: impl Fn(f64) -> f64) -> Matrix {
    let weights: Vec<Complex64> =
        d.eigenvalues().iter().map(|&l| Complex64::new(f(l), 0.0)).collect();
    d.assemble(&weights)
}

/// Sign operator `F = D|D|^{-1}` (zero on the kernel band) and the kernel
/// projection `P0`.
pub fn sign_and_kernel(d: &SpectralDecomposition) -> (Matrix, Matrix) {
    let tol = d.kernel_tol();
    let sign: Vec<Complex64> = d
        .eigenvalues()
        .iter()
        .map(|&l| {
            if l.abs() <= tol {
                Complex64::new(0.0, 0.0)
            } else if l > 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        })
        .collect();
    let proj: Vec<Complex64> = d
        .eigenvalues()
        .iter()
        .map(|&l| {
            if l.abs() <= tol { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
        .collect();
    (d.assemble(&sign), d.assemble(&proj))
}

/// Singular value decomposition (Householder bidiagonalization plus a
/// Golub-Kahan tridiagonal solve); values descending.
pub fn svd(a: &Matrix) -> Result<SingularValueData> {
    bidiag::svd(a, true)
}

/// Singular values only, descending.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(bidiag::svd(a, false)?.values)
}
