//! Concrete spectral-triple truncations and their symbol algebras.
//!
//! Every model stores `|D|` as a diagonal over an explicit basis (lattice
//! points, boundary modes, or per-block eigenslots), its exact kernel modes
//! as construction metadata, the summability degree `p`, and the density
//! constant of its limit functional. Multiplication operators are realized
//! by twisted convolution on lattice bases and by product-to-sum cosine
//! action on rectangle bases, with finite-section compression (matrix
//! elements leaving the truncation are dropped, never wrapped).

pub mod clifford;
pub mod lattice;
pub mod symbol;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, HermitianMatrix, Matrix, SymTridiagonal};
use crate::seq::SignedEigenSequence;

pub use clifford::CliffordAlgebra;
pub use lattice::{LatticeTruncation, DEFAULT_BASIS_CAP};
pub use symbol::{adjoint_phase, tau0, twist_phase, FourierSymbol, ThetaMatrix};

/// Volume of the unit ball in `R^n`.
pub fn ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    libm::pow(core::f64::consts::PI, half) / libm::tgamma(half + 1.0)
}

/// The density constant `c(n) = (2 pi)^{-n} |B^n|` of the integration
/// formula on `n`-dimensional commutative bases.
pub fn density_constant(n: usize) -> f64 {
    ball_volume(n) * libm::pow(2.0 * core::f64::consts::PI, -(n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Torus,
    QuantumTorus,
    DiracQuantumTorus,
    RectangleDirichlet,
    RectangleNeumann,
    SteklovCircle,
    Grushin,
}

#[derive(Debug, Clone)]
enum BasisKind {
    Lattice(LatticeTruncation),
    LatticeSpinor { lattice: LatticeTruncation, spinor_dim: usize },
    Modes { modes: Vec<(i64, i64)>, side_a: f64, side_b: f64, k_max: i64, neumann: bool },
    GrushinBlocks { _mx: i64, _my: i64 },
}

/// A finite truncation of a spectral triple.
#[derive(Debug, Clone)]
pub struct ModelTriple {
    kind: ModelKind,
    p: f64,
    tau_constant: f64,
    d_abs: Vec<f64>,
    d_signed: Vec<f64>,
    kernel_modes: Vec<usize>,
    basis: BasisKind,
    theta: Option<ThetaMatrix>,
}

impl ModelTriple {
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.d_abs.len()
    }

    /// Summability degree of the triple.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Density constant of the limit functional: `tau(a)` is this constant
    /// times the mean/zeroth-coefficient reading of `a`.
    pub fn tau_constant(&self) -> f64 {
        self.tau_constant
    }

    /// `|D|` diagonal values in basis order.
    pub fn d_abs(&self) -> &[f64] {
        &self.d_abs
    }

    /// `D` diagonal values where `D` itself is diagonal (all kinds except
    /// the Dirac torus, whose per-block eigenvalues are reported instead).
    pub fn d_signed(&self) -> &[f64] {
        &self.d_signed
    }

    pub fn kernel_modes(&self) -> &[usize] {
        &self.kernel_modes
    }

    pub fn theta(&self) -> Option<&ThetaMatrix> {
        self.theta.as_ref()
    }

    pub fn lattice(&self) -> Option<&LatticeTruncation> {
        match &self.basis {
            BasisKind::Lattice(l) => Some(l),
            BasisKind::LatticeSpinor { lattice, .. } => Some(lattice),
            _ => None,
        }
    }

    pub fn spinor_dim(&self) -> usize {
        match &self.basis {
            BasisKind::LatticeSpinor { spinor_dim, .. } => *spinor_dim,
            _ => 1,
        }
    }

    /// Eigenvalues of `D^2` in basis order.
    pub fn d_squared(&self) -> Vec<f64> {
        self.d_abs.iter().map(|&v| v * v).collect()
    }

    /// Ascending eigenvalues of `D^2`.
    pub fn d_squared_sorted(&self) -> Vec<f64> {
        let mut v = self.d_squared();
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
        v
    }

    /// `|D|^z` diagonal with the kernel killed (exact kernel modes only).
    pub fn partial_power_diag(&self, z: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .d_abs
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { libm::pow(v, z) })
            .collect();
        for &i in &self.kernel_modes {
            out[i] = 0.0;
        }
        out
    }

    /// Smallest nonzero `|D|` value (infimum of the non-kernel spectrum).
    pub fn d_abs_min_nonzero(&self) -> f64 {
        self.d_abs
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.kernel_modes.contains(i))
            .map(|(_, &v)| v)
            .fold(f64::INFINITY, f64::min)
    }

    /// The limit functional on a symbol: `tau_constant` times the model's
    /// coefficient reading (zeroth Fourier coefficient; constant cosine
    /// coefficient on rectangles; fiber-averaged zero row on the Grushin
    /// cylinder, whose unknown density constant is normalized to 1).
    pub fn tau_symbol(&self, a: &FourierSymbol) -> Result<Complex64> {
        match &self.basis {
            BasisKind::Lattice(l) | BasisKind::LatticeSpinor { lattice: l, .. } => {
                if a.dim() != l.lattice_dim() {
                    return Err(Error::UnsupportedModel(String::from(
                        "symbol dimension does not match the model lattice",
                    )));
                }
                Ok(Complex64::new(self.tau_constant, 0.0) * tau0(a))
            }
            BasisKind::Modes { .. } => {
                if a.dim() != 2 {
                    return Err(Error::UnsupportedModel(String::from(
                        "rectangle potentials live on a 2-d cosine lattice",
                    )));
                }
                Ok(Complex64::new(self.tau_constant, 0.0) * a.coeff(&[0, 0]))
            }
            BasisKind::GrushinBlocks { .. } => {
                if a.dim() != 2 {
                    return Err(Error::UnsupportedModel(String::from(
                        "Grushin symbols live on the 2-torus lattice",
                    )));
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &c) in a.coeffs() {
                    if k[1] == 0 {
                        acc += c;
                    }
                }
                Ok(Complex64::new(self.tau_constant, 0.0) * acc)
            }
        }
    }

    /// Multiplication operator of a symbol in the model basis.
    pub fn symbol_to_matrix(&self, a: &FourierSymbol) -> Result<Matrix> {
        match &self.basis {
            BasisKind::Lattice(l) => {
                self.check_symbol_dim(a, l)?;
                let theta =
                    self.theta.clone().unwrap_or_else(|| ThetaMatrix::zero(l.lattice_dim()));
                Ok(lattice_symbol_matrix(l, a, &theta, 1))
            }
            BasisKind::LatticeSpinor { lattice, spinor_dim } => {
                self.check_symbol_dim(a, lattice)?;
                let theta =
                    self.theta.clone().unwrap_or_else(|| ThetaMatrix::zero(lattice.lattice_dim()));
                Ok(lattice_symbol_matrix(lattice, a, &theta, *spinor_dim))
            }
            BasisKind::Modes { modes, k_max, neumann, .. } => {
                rectangle_symbol_matrix(a, modes, *k_max, *neumann)
            }
            BasisKind::GrushinBlocks { .. } => Err(Error::UnsupportedModel(String::from(
                "the Grushin model does not realize symbols as operators",
            ))),
        }
    }

    fn check_symbol_dim(&self, a: &FourierSymbol, l: &LatticeTruncation) -> Result<()> {
        if a.dim() != l.lattice_dim() {
            return Err(Error::UnsupportedModel(String::from(
                "symbol dimension does not match the model lattice",
            )));
        }
        Ok(())
    }

    /// `tau[f(a)]`. Commutative kinds integrate `f(a(x))` on a uniform grid;
    /// quantum kinds read the origin entry of `f` applied to the symbol
    /// matrix at the oracle truncation. The estimate carries the difference
    /// against a half-resolution oracle and fails if it exceeds `rel_tol`.
    pub fn tau_of_function(
        &self,
        a: &FourierSymbol,
        f: &dyn Fn(f64) -> f64,
        m_oracle: usize,
        rel_tol: f64,
    ) -> Result<TauEstimate> {
        let coarse = self.tau_of_function_at(a, f, (m_oracle / 2).max(2))?;
        let fine = self.tau_of_function_at(a, f, m_oracle)?;
        let diff = (fine - coarse).abs();
        if diff > rel_tol * fine.abs().max(1.0) {
            return Err(Error::OracleNotConverged { difference: diff, tolerance: rel_tol });
        }
        Ok(TauEstimate { value: fine, convergence_diff: diff })
    }

    fn tau_of_function_at(
        &self,
        a: &FourierSymbol,
        f: &dyn Fn(f64) -> f64,
        resolution: usize,
    ) -> Result<f64> {
        match (&self.kind, &self.basis) {
            (ModelKind::Torus, BasisKind::Lattice(l)) => {
                Ok(self.tau_constant * periodic_mean(a, f, l.lattice_dim(), resolution))
            }
            (ModelKind::SteklovCircle, BasisKind::Lattice(_)) => {
                Ok(self.tau_constant * periodic_mean(a, f, 1, resolution))
            }
            (
                ModelKind::RectangleDirichlet | ModelKind::RectangleNeumann,
                BasisKind::Modes { side_a, side_b, .. },
            ) => Ok(self.tau_constant * rectangle_mean(a, f, *side_a, *side_b, resolution)),
            (ModelKind::QuantumTorus | ModelKind::DiracQuantumTorus, _) => {
                let lat = self.lattice().expect("quantum kinds carry a lattice");
                let theta =
                    self.theta.clone().unwrap_or_else(|| ThetaMatrix::zero(lat.lattice_dim()));
                let oracle =
                    LatticeTruncation::new(lat.lattice_dim(), resolution as i64, DEFAULT_BASIS_CAP)?;
                let mat = lattice_symbol_matrix(&oracle, a, &theta, 1);
                let h = HermitianMatrix::new(mat).map_err(|_| {
                    Error::UnsupportedModel(String::from(
                        "tau of a function requires a self-adjoint symbol",
                    ))
                })?;
                let dec = kernel::eigh(&h)?;
                let fa = kernel::matrix_function(&dec, f);
                let o = oracle.origin_index();
                Ok(self.tau_constant * fa[(o, o)].re)
            }
            (ModelKind::Grushin, _) => Err(Error::UnsupportedModel(String::from(
                "tau of a function is not defined for the Grushin model",
            ))),
            _ => unreachable!("kind/basis pairing is fixed by the builders"),
        }
    }
}

/// Value of the tau functional applied through a scalar function, with the
/// observed oracle-refinement difference.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TauEstimate {
    pub value: f64,
    pub convergence_diff: f64,
}

fn periodic_mean(a: &FourierSymbol, f: &dyn Fn(f64) -> f64, n: usize, grid: usize) -> f64 {
    let grid = grid.max(2);
    let two_pi = 2.0 * core::f64::consts::PI;
    let total = grid.pow(n as u32);
    let mut x = vec![0.0f64; n];
    let mut idx = vec![0usize; n];
    let mut sum = kernel::KahanSum::new();
    for _ in 0..total {
        for (xi, &i) in x.iter_mut().zip(idx.iter()) {
            *xi = two_pi * (i as f64) / (grid as f64);
        }
        sum.add(f(a.eval(&x).re));
        let mut axis = 0;
        while axis < n {
            idx[axis] += 1;
            if idx[axis] < grid {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
    sum.value() / total as f64
}

fn rectangle_mean(
    a: &FourierSymbol,
    f: &dyn Fn(f64) -> f64,
    side_a: f64,
    side_b: f64,
    grid: usize,
) -> f64 {
    let grid = grid.max(2);
    let mut sum = kernel::KahanSum::new();
    for i in 0..grid {
        let x = side_a * (i as f64 + 0.5) / grid as f64;
        for j in 0..grid {
            let y = side_b * (j as f64 + 0.5) / grid as f64;
            let mut v = 0.0;
            for (k, &c) in a.coeffs() {
                v += c.re
                    * libm::cos(core::f64::consts::PI * k[0] as f64 * x / side_a)
                    * libm::cos(core::f64::consts::PI * k[1] as f64 * y / side_b);
            }
            sum.add(f(v));
        }
    }
    sum.value() / (grid * grid) as f64
}

fn lattice_symbol_matrix(
    l: &LatticeTruncation,
    a: &FourierSymbol,
    theta: &ThetaMatrix,
    spinor_dim: usize,
) -> Matrix {
    let nl = l.dim();
    let dim = nl * spinor_dim;
    let mut out = Matrix::zeros(dim, dim);
    for (col, m) in l.points().iter().enumerate() {
        for (k, &ak) in a.coeffs() {
            let target: Vec<i64> = k.iter().zip(m.iter()).map(|(x, y)| x + y).collect();
            if let Some(row) = l.index_of(&target) {
                let v = ak * twist_phase(theta, k, m);
                for s in 0..spinor_dim {
                    out[(row * spinor_dim + s, col * spinor_dim + s)] += v;
                }
            }
        }
    }
    out
}

/// One-dimensional cosine action: `cos(j pi x / L)` applied to the
/// orthonormal sine (Dirichlet) or cosine (Neumann) mode `k`, as weighted
/// target modes by product-to-sum identities.
fn cosine_action_1d(neumann: bool, j: i64, k: i64, out: &mut Vec<(i64, f64)>) {
    out.clear();
    if j == 0 {
        out.push((k, 1.0));
        return;
    }
    if neumann {
        // Normalizations: n_0 = sqrt(1/L), n_k = sqrt(2/L) for k >= 1; the
        // weight between modes is (n_k / n_target) / 2.
        let ratio = |from: i64, to: i64| -> f64 {
            let nf = if from == 0 { 1.0 } else { core::f64::consts::SQRT_2 };
            let nt = if to == 0 { 1.0 } else { core::f64::consts::SQRT_2 };
            nf / nt
        };
        out.push((k + j, 0.5 * ratio(k, k + j)));
        let d = (k - j).abs();
        out.push((d, 0.5 * ratio(k, d)));
    } else {
        // sin(k) cos(j) = [sin(k+j) + sin(k-j)] / 2, sin(-m) = -sin(m).
        out.push((k + j, 0.5));
        match (k - j).signum() {
            1 => out.push((k - j, 0.5)),
            -1 => out.push((j - k, -0.5)),
            _ => {}
        }
    }
}

fn rectangle_symbol_matrix(
    a: &FourierSymbol,
    modes: &[(i64, i64)],
    k_max: i64,
    neumann: bool,
) -> Result<Matrix> {
    if a.dim() != 2 {
        return Err(Error::UnsupportedModel(String::from(
            "rectangle potentials live on a 2-d cosine lattice",
        )));
    }
    for (k, &c) in a.coeffs() {
        if k[0] < 0 || k[1] < 0 || c.im.abs() > 1e-14 {
            return Err(Error::UnsupportedModel(String::from(
                "rectangle potentials are real finite cosine series (nonnegative indices)",
            )));
        }
    }
    let lo = if neumann { 0 } else { 1 };
    let side = (k_max - lo + 1) as usize;
    let index_of = |k1: i64, k2: i64| -> Option<usize> {
        if k1 < lo || k2 < lo || k1 > k_max || k2 > k_max {
            None
        } else {
            Some(((k1 - lo) as usize) * side + (k2 - lo) as usize)
        }
    };
    let dim = modes.len();
    let mut out = Matrix::zeros(dim, dim);
    let mut act1 = Vec::new();
    let mut act2 = Vec::new();
    for (col, &(k1, k2)) in modes.iter().enumerate() {
        for (j, &c) in a.coeffs() {
            cosine_action_1d(neumann, j[0], k1, &mut act1);
            cosine_action_1d(neumann, j[1], k2, &mut act2);
            for &(t1, w1) in &act1 {
                for &(t2, w2) in &act2 {
                    if let Some(row) = index_of(t1, t2) {
                        out[(row, col)] += Complex64::new(c.re * w1 * w2, 0.0);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Flat torus: `D` diagonal `|m|` over the sup-ball lattice, `p = n`,
/// `tau(a) = c(n) (2 pi)^n a_0 = |B^n| a_0`.
pub fn build_torus(n: usize, m: i64) -> Result<ModelTriple> {
    assert!(n >= 1 && m >= 1);
    let lattice = LatticeTruncation::new(n, m, DEFAULT_BASIS_CAP)?;
    let d_abs: Vec<f64> = (0..lattice.dim()).map(|i| lattice.norm(i)).collect();
    let kernel_modes = vec![lattice.origin_index()];
    Ok(ModelTriple {
        kind: ModelKind::Torus,
        p: n as f64,
        tau_constant: ball_volume(n),
        d_signed: d_abs.clone(),
        d_abs,
        kernel_modes,
        basis: BasisKind::Lattice(lattice),
        theta: None,
    })
}

/// Quantum torus: isospectral `D`, twisted symbol action,
/// `tau(a) = |B^n| tau_0(a)`.
pub fn build_quantum_torus(theta: &ThetaMatrix, m: i64) -> Result<ModelTriple> {
    let n = theta.dim();
    let mut model = build_torus(n, m)?;
    model.kind = ModelKind::QuantumTorus;
    model.theta = Some(theta.clone());
    Ok(model)
}

/// Dirac quantum torus: per-mode blocks `i sum m_j gamma_j` with spectra
/// `+-|m|`, symbol action `a (x) I_N`, `tau(a) = 2^{[n/2]} |B^n| tau_0(a)`.
pub fn build_dirac_quantum_torus(theta: &ThetaMatrix, m: i64) -> Result<ModelTriple> {
    let n = theta.dim();
    let lattice = LatticeTruncation::new(n, m, DEFAULT_BASIS_CAP)?;
    let cl = CliffordAlgebra::new(n);
    let nsp = cl.spinor_dim();
    let mut d_abs = Vec::with_capacity(lattice.dim() * nsp);
    let mut d_signed = Vec::with_capacity(lattice.dim() * nsp);
    let mut kernel_modes = Vec::new();
    for (li, point) in lattice.points().iter().enumerate() {
        let norm = lattice.norm(li);
        let block = HermitianMatrix::new_unchecked(cl.momentum_block(point));
        let ev = block.eigenvalues()?;
        for (s, &l) in ev.iter().enumerate() {
            debug_assert!(
                (l.abs() - norm).abs() <= 1e-10 * norm.max(1.0),
                "Dirac block spectrum must be +-|m|"
            );
            d_abs.push(norm);
            d_signed.push(l);
            if norm == 0.0 {
                kernel_modes.push(li * nsp + s);
            }
        }
    }
    Ok(ModelTriple {
        kind: ModelKind::DiracQuantumTorus,
        p: n as f64,
        tau_constant: (nsp as f64) * ball_volume(n),
        d_abs,
        d_signed,
        kernel_modes,
        basis: BasisKind::LatticeSpinor { lattice, spinor_dim: nsp },
        theta: Some(theta.clone()),
    })
}

/// Rectangle `(0,a) x (0,b)` with Dirichlet (`neumann = false`) or Neumann
/// boundary modes up to `k_max`; `D` is the square-rooted mode Laplacian,
/// `tau(f) = c(2) a b f_00`.
pub fn build_rectangle(neumann: bool, side_a: f64, side_b: f64, k_max: i64) -> Result<ModelTriple> {
    assert!(side_a > 0.0 && side_b > 0.0 && k_max >= 1);
    let lo = if neumann { 0 } else { 1 };
    let mut modes = Vec::new();
    let mut d_abs = Vec::new();
    let mut kernel_modes = Vec::new();
    let pi = core::f64::consts::PI;
    for k1 in lo..=k_max {
        for k2 in lo..=k_max {
            if k1 == 0 && k2 == 0 {
                kernel_modes.push(modes.len());
            }
            modes.push((k1, k2));
            let lam = pi
                * pi
                * ((k1 * k1) as f64 / (side_a * side_a) + (k2 * k2) as f64 / (side_b * side_b));
            d_abs.push(libm::sqrt(lam));
        }
    }
    Ok(ModelTriple {
        kind: if neumann { ModelKind::RectangleNeumann } else { ModelKind::RectangleDirichlet },
        p: 2.0,
        tau_constant: density_constant(2) * side_a * side_b,
        d_signed: d_abs.clone(),
        d_abs,
        kernel_modes,
        basis: BasisKind::Modes { modes, side_a, side_b, k_max, neumann },
        theta: None,
    })
}

/// Boundary circle with the Dirichlet-to-Neumann spectrum `|k|`;
/// `tau(gamma) = c(1) (2 pi) gamma_0 = 2 gamma_0`.
pub fn build_steklov_circle(m: i64) -> Result<ModelTriple> {
    let mut model = build_torus(1, m)?;
    model.kind = ModelKind::SteklovCircle;
    Ok(model)
}

/// Signed spectrum of the weighted boundary operator
/// `Lambda^{-1/2} gamma Lambda^{-1/2}` compressed to the kernel complement.
/// Weights supported on `{0, +-1}` keep the compressed operator tridiagonal
/// in the spliced ordering (negative modes then positive), which is solved
/// directly; wider supports fall back to the dense path.
pub fn steklov_bs_sequence(
    model: &ModelTriple,
    gamma: &FourierSymbol,
) -> Result<SignedEigenSequence> {
    if model.kind != ModelKind::SteklovCircle {
        return Err(Error::UnsupportedModel(String::from(
            "weighted Steklov spectra require the boundary circle model",
        )));
    }
    if gamma.dim() != 1 {
        return Err(Error::UnsupportedModel(String::from(
            "Steklov weights live on a 1-d lattice",
        )));
    }
    if !gamma.is_self_adjoint(&ThetaMatrix::zero(1)) {
        return Err(Error::UnsupportedModel(String::from("Steklov weights must be real-valued")));
    }
    let m = model.lattice().expect("circle lattice").radius();
    // Spliced ordering of the kernel complement: -M..-1, 1..M.
    let modes: Vec<i64> = (-m..=m).filter(|&k| k != 0).collect();
    let dim = modes.len();
    let ev = if gamma.support_radius() <= 1 {
        let mut d = vec![0.0; dim];
        let mut e = vec![0.0; dim.saturating_sub(1)];
        let g0 = gamma.coeff(&[0]).re;
        let g1 = gamma.coeff(&[1]).re;
        for (i, &k) in modes.iter().enumerate() {
            d[i] = g0 / k.abs() as f64;
            if i + 1 < dim {
                let k2 = modes[i + 1];
                // Coupling is gamma_{k2-k} (zero across the spliced gap).
                e[i] =
                    if k2 - k == 1 { g1 / libm::sqrt((k.abs() * k2.abs()) as f64) } else { 0.0 };
            }
        }
        SymTridiagonal::new(d, e).eigenvalues()?
    } else {
        let weights = model.partial_power_diag(-0.5);
        let full = model.symbol_to_matrix(gamma)?.scale_rows_cols(&weights, &weights);
        // Compress away the kernel mode k = 0.
        let lat = model.lattice().expect("circle lattice");
        let keep: Vec<usize> = modes.iter().map(|&k| lat.index_of(&[k]).unwrap()).collect();
        let mut sub = Matrix::zeros(dim, dim);
        for (i, &ri) in keep.iter().enumerate() {
            for (j, &cj) in keep.iter().enumerate() {
                sub[(i, j)] = full[(ri, cj)];
            }
        }
        HermitianMatrix::new(sub)?.eigenvalues()?
    };
    let scale = ev.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    Ok(SignedEigenSequence::from_eigenvalues(&ev, 1e-12 * scale.max(1.0)))
}

/// Degenerate Grushin cylinder: per `y`-frequency `eta` the Fourier block is
/// `diag(k^2) + eta^2 T` with `T` the Toeplitz matrix of
/// `4 (1 - cos x)^2 = 6 - 8 cos x + 2 cos 2x`; `D` is the square root of the
/// assembled operator, `p = 3`. The density constant of its singular limit
/// functional is not pinned down by the construction; it is normalized to 1
/// here, so `tau(1) = 2 pi`.
pub fn build_grushin(mx: i64, my: i64) -> Result<ModelTriple> {
    assert!(mx >= 1 && my >= 1);
    let nloc = (2 * mx + 1) as usize;
    let total = nloc * (2 * my + 1) as usize;
    if total > DEFAULT_BASIS_CAP {
        return Err(Error::DimensionOverflow { requested: total, cap: DEFAULT_BASIS_CAP });
    }
    let mut d_abs = Vec::with_capacity(total);
    let mut kernel_modes = Vec::new();
    for eta in -my..=my {
        let ev = grushin_block_eigenvalues(mx, eta)?;
        for (slot, &lam) in ev.iter().enumerate() {
            if eta == 0 && slot == 0 {
                debug_assert!(lam.abs() < 1e-12, "eta = 0 block has an exact zero mode");
                kernel_modes.push(d_abs.len());
                d_abs.push(0.0);
            } else {
                d_abs.push(libm::sqrt(lam.max(0.0)));
            }
        }
    }
    Ok(ModelTriple {
        kind: ModelKind::Grushin,
        p: 3.0,
        tau_constant: 2.0 * core::f64::consts::PI,
        d_signed: d_abs.clone(),
        d_abs,
        kernel_modes,
        basis: BasisKind::GrushinBlocks { _mx: mx, _my: my },
        theta: None,
    })
}

/// Ascending eigenvalues of the single-frequency Grushin block
/// `diag(k^2) + eta^2 (6 - 8 cos + 2 cos 2)` on `|k| <= mx`.
pub fn grushin_block_eigenvalues(mx: i64, eta: i64) -> Result<Vec<f64>> {
    let n = (2 * mx + 1) as usize;
    let w = (eta * eta) as f64;
    let mut mat = Matrix::zeros(n, n);
    for i in 0..n {
        let k = i as i64 - mx;
        mat[(i, i)] = Complex64::new((k * k) as f64 + 6.0 * w, 0.0);
        if i + 1 < n {
            mat[(i, i + 1)] = Complex64::new(-4.0 * w, 0.0);
            mat[(i + 1, i)] = Complex64::new(-4.0 * w, 0.0);
        }
        if i + 2 < n {
            mat[(i, i + 2)] = Complex64::new(w, 0.0);
            mat[(i + 2, i)] = Complex64::new(w, 0.0);
        }
    }
    HermitianMatrix::new_unchecked(mat).eigenvalues()
}
