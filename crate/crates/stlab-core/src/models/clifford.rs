//! Clifford generators for the Dirac model.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::kernel::Matrix;

/// Skew-adjoint Clifford matrices: `gamma_j^* = -gamma_j` and
/// `gamma_j gamma_k + gamma_k gamma_j = -2 delta_{jk}`.
#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    n: usize,
    spinor_dim: usize,
    gammas: Vec<Matrix>,
}

fn pauli(which: usize) -> Matrix {
    let mut m = Matrix::zeros(2, 2);
    match which {
        1 => {
            m[(0, 1)] = Complex64::new(1.0, 0.0);
            m[(1, 0)] = Complex64::new(1.0, 0.0);
        }
        2 => {
            m[(0, 1)] = Complex64::new(0.0, -1.0);
            m[(1, 0)] = Complex64::new(0.0, 1.0);
        }
        3 => {
            m[(0, 0)] = Complex64::new(1.0, 0.0);
            m[(1, 1)] = Complex64::new(-1.0, 0.0);
        }
        _ => unreachable!(),
    }
    m
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = Matrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let v = a[(i, j)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for p in 0..rb {
                for q in 0..cb {
                    out[(i * rb + p, j * cb + q)] = v * b[(p, q)];
                }
            }
        }
    }
    out
}

impl CliffordAlgebra {
    /// Jordan-Wigner construction: Hermitian Euclidean generators
    /// `e_{2a-1} = s3^(a-1) (x) s1 (x) I..`, `e_{2a} = s3^(a-1) (x) s2 (x) I..`
    /// (and `e_n = s3^k` for odd `n`), then `gamma_j = i e_j`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let k = n / 2;
        let spinor_dim = 1usize << k;
        let i = Complex64::new(0.0, 1.0);
        let mut gammas = Vec::with_capacity(n);
        for j in 1..=n {
            let mut factors: Vec<Matrix> = Vec::with_capacity(k.max(1));
            if j == n && n % 2 == 1 {
                for _ in 0..k {
                    factors.push(pauli(3));
                }
            } else {
                let a = j.div_ceil(2); // block position, 1-based
                for _ in 0..a - 1 {
                    factors.push(pauli(3));
                }
                factors.push(pauli(if j % 2 == 1 { 1 } else { 2 }));
                for _ in a..k {
                    factors.push(Matrix::identity(2));
                }
            }
            let mut e = factors.first().cloned().unwrap_or_else(|| Matrix::identity(1));
            for f in factors.iter().skip(1) {
                e = kron(&e, f);
            }
            gammas.push(e.scale(i));
        }
        CliffordAlgebra { n, spinor_dim, gammas }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn gamma(&self, j: usize) -> &Matrix {
        &self.gammas[j]
    }

    /// The Hermitian block `i sum_j m_j gamma_j` whose square is `|m|^2 I`.
    pub fn momentum_block(&self, m: &[i64]) -> Matrix {
        debug_assert_eq!(m.len(), self.n);
        let mut out = Matrix::zeros(self.spinor_dim, self.spinor_dim);
        let i = Complex64::new(0.0, 1.0);
        for (j, &mj) in m.iter().enumerate() {
            if mj != 0 {
                out = out.add(&self.gammas[j].scale(i * (mj as f64)));
            }
        }
        out
    }

    /// Largest violation of the Clifford relations (skew-adjointness and
    /// anticommutators); exact constructions return 0.
    pub fn relation_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let id = Matrix::identity(self.spinor_dim);
        for j in 0..self.n {
            let g = &self.gammas[j];
            worst = worst.max(g.adjoint().add(g).max_norm());
            for l in 0..self.n {
                let h = &self.gammas[l];
                let anti = g.mul(h).add(&h.mul(g));
                let target = if j == l { id.scale(Complex64::new(-2.0, 0.0)) } else { Matrix::zeros(self.spinor_dim, self.spinor_dim) };
                worst = worst.max(anti.sub(&target).max_norm());
            }
        }
        worst
    }
}
