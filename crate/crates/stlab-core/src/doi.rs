//! Double operator integrals: the resolvent-pair transformers, the assembled
//! commutator factorization, and the refined power-difference decay check.
//!
//! In the eigenbasis of `D` each transformer entry is a scalar integral
//! `int_0^inf mu^{1+alpha} |x|^d |y|^d' / ((x^2+mu^2)(y^2+mu^2)) dmu`,
//! evaluated under the substitution `mu = e^s` by the adaptive Gauss-Kronrod
//! rule with panel bounds from the integrand envelope.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, HermitianMatrix, Matrix, SpectralDecomposition};
use crate::models::{FourierSymbol, ModelTriple};
use crate::ops;
use crate::quad;
use crate::seq::{self, FitOptions};

/// Quadrature policy for the transformer integrals: log substitution
/// `mu = e^s`, panel bounds from the scalar envelope, adaptive 15-point
/// Gauss-Kronrod refinement.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DoiQuadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for DoiQuadrature {
    fn default() -> Self {
        DoiQuadrature { abs_tol: 1e-9, rel_tol: 1e-9, max_panels: 512 }
    }
}

impl DoiQuadrature {
    pub fn with_tol(tol: f64) -> Self {
        DoiQuadrature { abs_tol: tol, rel_tol: tol, max_panels: 512 }
    }

    /// Substitution-domain bounds outside which the integrand envelope for
    /// the exponent `2 + alpha` and spectral floor/ceiling `(lam_lo, lam_hi)`
    /// integrates to below `abs_tol`.
    fn bounds(&self, alpha: f64, lam_lo: f64, lam_hi: f64) -> (f64, f64) {
        let lo_env = (libm::log(self.abs_tol * 0.5 * (2.0 + alpha))
            + 2.0 * libm::log(lam_lo * lam_lo))
            / (2.0 + alpha);
        let hi_env = libm::log((2.0 - alpha) * self.abs_tol * 0.5) / (alpha - 2.0);
        let lo = lo_env.min(libm::log(lam_lo) - 2.0);
        let hi = hi_env.max(libm::log(lam_hi) + 2.0);
        (lo, hi)
    }
}

/// `c(alpha) = (2/pi) sin(pi alpha / 2)` for `alpha` in `[0, 2)`.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(Error::OutOfRange(format!("c(alpha) needs alpha in [0,2), got {alpha}")));
    }
    Ok(2.0 / core::f64::consts::PI * libm::sin(core::f64::consts::PI * alpha / 2.0))
}

/// Residual of the scalar identity
/// `|x|^{-alpha} = c(alpha) int_0^inf mu^{1-alpha} (x^2 + mu^2)^{-1} dmu`.
pub fn scalar_power_identity_check(x: f64, alpha: f64, quad: &DoiQuadrature) -> Result<f64> {
    assert!(x != 0.0, "the identity is stated away from 0");
    assert!(alpha > 0.0 && alpha < 1.0);
    let c = c_alpha(alpha)?;
    let ax = x.abs();
    // mu = e^s: integrand e^{(2-alpha)s} / (x^2 + e^{2s}); the single
    // resolvent factor leaves an e^{-alpha s} upper tail.
    let g = move |s: f64| {
        let mu2 = libm::exp(2.0 * s);
        libm::exp((2.0 - alpha) * s) / (ax * ax + mu2)
    };
    let half = 0.5 * quad.abs_tol;
    let lo = ((libm::log(half * (2.0 - alpha)) + 2.0 * libm::log(ax)) / (2.0 - alpha))
        .min(libm::log(ax) - 2.0);
    let hi = (-libm::log(half * alpha) / alpha).max(libm::log(ax) + 2.0);
    let out = quad::integrate(&g, lo, hi, quad.abs_tol, quad.rel_tol, quad.max_panels)?;
    Ok((c * out.value - libm::pow(ax, -alpha)).abs())
}

fn check_region(alpha: f64, delta: f64, delta_p: f64) -> Result<bool> {
    if !(-2.0..2.0).contains(&alpha) || !(0.0..=2.0).contains(&delta) || !(0.0..=2.0).contains(&delta_p)
    {
        return Err(Error::ParameterRegionViolation(format!(
            "alpha = {alpha}, delta = {delta}, delta' = {delta_p} outside base ranges"
        )));
    }
    let total = alpha + delta + delta_p;
    if total < 2.0 - 1e-12 {
        Ok(false)
    } else if (total - 2.0).abs() <= 1e-12 && delta > 0.0 && delta < 2.0 && delta_p > 0.0 && delta_p < 2.0
    {
        Ok(true)
    } else {
        Err(Error::ParameterRegionViolation(format!(
            "alpha + delta + delta' = {total} with delta = {delta}, delta' = {delta_p}"
        )))
    }
}

/// The transformer
/// `Psi^alpha_{delta,delta'}(T) = int mu^{1+alpha} |D|^delta (D^2+mu^2)^{-1} T |D|^delta' (D^2+mu^2)^{-1} dmu`,
/// evaluated entrywise in the eigenbasis of `D`; kernel rows and columns
/// vanish (the `|D|^0 = 1 - P0` convention).
pub fn doi_transform(
    d: &SpectralDecomposition,
    t: &Matrix,
    alpha: f64,
    delta: f64,
    delta_p: f64,
    quad: &DoiQuadrature,
) -> Result<Matrix> {
    check_region(alpha, delta, delta_p)?;
    let n = d.dim();
    assert_eq!(t.rows(), n);
    let u = d.eigenvectors();
    let t_hat = u.adjoint().mul(t).mul(u);
    let tol = d.kernel_tol();
    let lam: Vec<f64> = d.eigenvalues().to_vec();
    let (mut lam_lo, mut lam_hi) = (f64::INFINITY, 0.0f64);
    for &l in &lam {
        if l.abs() > tol {
            lam_lo = lam_lo.min(l.abs());
            lam_hi = lam_hi.max(l.abs());
        }
    }
    if !lam_lo.is_finite() {
        return Ok(Matrix::zeros(n, n));
    }
    let (s_lo, s_hi) = quad.bounds(alpha, lam_lo, lam_hi);
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        let x = lam[i].abs();
        if x <= tol {
            continue;
        }
        for j in 0..n {
            let y = lam[j].abs();
            if y <= tol || t_hat[(i, j)] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let g = move |s: f64| {
                let mu2 = libm::exp(2.0 * s);
                libm::exp((2.0 + alpha) * s) / ((x * x + mu2) * (y * y + mu2))
            };
            let integral =
                quad::integrate(&g, s_lo, s_hi, quad.abs_tol, quad.rel_tol, quad.max_panels)?;
            let weight = libm::pow(x, delta) * libm::pow(y, delta_p) * integral.value;
            out[(i, j)] = t_hat[(i, j)] * weight;
        }
    }
    Ok(u.mul(&out).mul(&u.adjoint()))
}

/// `Phi^alpha_{beta,gamma}(T) = -c(alpha) F Psi^{-alpha}_{beta+1,gamma}(T)
///  - c(alpha) Psi^{-alpha}_{beta,gamma+1}(T) F`.
pub fn phi_operator(
    d: &SpectralDecomposition,
    t: &Matrix,
    alpha: f64,
    beta: f64,
    gamma: f64,
    quad: &DoiQuadrature,
) -> Result<Matrix> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || !(0.0..=1.0).contains(&gamma)
    {
        return Err(Error::ParameterRegionViolation(format!(
            "phi needs alpha, beta, gamma in [0,1]; got {alpha}, {beta}, {gamma}"
        )));
    }
    let sum = beta + gamma;
    if !(sum < alpha + 1.0 - 1e-12 || ((sum - (alpha + 1.0)).abs() <= 1e-12 && beta.max(gamma) < 1.0))
    {
        return Err(Error::ParameterRegionViolation(format!(
            "phi needs beta + gamma < alpha + 1 (or = with max < 1); got {beta} + {gamma} vs {alpha}"
        )));
    }
    let c = c_alpha(alpha)?;
    let (f, _p0) = kernel::sign_and_kernel(d);
    let left = doi_transform(d, t, -alpha, beta + 1.0, gamma, quad)?;
    let right = doi_transform(d, t, -alpha, beta, gamma + 1.0, quad)?;
    let minus_c = Complex64::new(-c, 0.0);
    Ok(f.mul(&left).scale(minus_c).add(&right.mul(&f).scale(minus_c)))
}

/// Residual sheet for the commutator factorization
/// `[|D|^{-alpha}, a] = |D|^{-beta} Phi([D,a]) |D|^{-gamma}
///  + |D|^{-(alpha+1)} F [D,a] P0 + P0 [D,a] F |D|^{-(alpha+1)}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lhs_norm: f64,
    pub residual_norm: f64,
}

/// Verify the factorization on an explicitly decomposed operator `D` and a
/// bounded operator `a` (as matrices).
pub fn factorization_residual_matrix(
    d: &SpectralDecomposition,
    a: &Matrix,
    alpha: f64,
    beta: f64,
    gamma: f64,
    quad: &DoiQuadrature,
) -> Result<FactorizationReport> {
    let d_mat = d.reconstruct();
    let com_d = d_mat.commutator(a);
    let pow_alpha = kernel::partial_power(d, Complex64::new(-alpha, 0.0));
    let lhs = pow_alpha.commutator(a);

    let phi = phi_operator(d, &com_d, alpha, beta, gamma, quad)?;
    let pow_beta = kernel::partial_power(d, Complex64::new(-beta, 0.0));
    let pow_gamma = kernel::partial_power(d, Complex64::new(-gamma, 0.0));
    let main = pow_beta.mul(&phi).mul(&pow_gamma);

    let (f, p0) = kernel::sign_and_kernel(d);
    let pow_a1 = kernel::partial_power(d, Complex64::new(-(alpha + 1.0), 0.0));
    let corr1 = pow_a1.mul(&f).mul(&com_d).mul(&p0);
    let corr2 = p0.mul(&com_d).mul(&f).mul(&pow_a1);

    let rhs = main.add(&corr1).add(&corr2);
    Ok(FactorizationReport {
        alpha,
        beta,
        gamma,
        lhs_norm: lhs.max_norm(),
        residual_norm: lhs.sub(&rhs).max_norm(),
    })
}

/// Factorization check with `D` taken from a model and `a` from its symbol
/// algebra.
pub fn factorization_residual(
    model: &ModelTriple,
    a: &FourierSymbol,
    alpha: f64,
    beta: f64,
    gamma: f64,
    quad: &DoiQuadrature,
) -> Result<FactorizationReport> {
    let amat = model.symbol_to_matrix(a)?;
    let d = model_decomposition(model);
    factorization_residual_matrix(&d, &amat, alpha, beta, gamma, quad)
}

/// Spectral data of a model's diagonal `D` (identity eigenvectors), with the
/// kernel threshold induced by the exact kernel modes.
pub fn model_decomposition(model: &ModelTriple) -> SpectralDecomposition {
    let d = model.d_signed().to_vec();
    let n = d.len();
    // Identity eigenvectors; eigenvalues need ascending order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("non-NaN"));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vals.push(d[src]);
        vecs[(src, col)] = Complex64::new(1.0, 0.0);
    }
    let floor = model.d_abs_min_nonzero();
    SpectralDecomposition::from_parts(vals, vecs, (0.5 * floor).max(1e-300))
}

/// Decay-exponent comparison for the refined power-difference estimate:
/// singular values of `(a^{1/2} |D|^{-alpha} a^{1/2})^s - |D|^{-alpha s} a^s`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CszReport {
    pub fitted_exponent: f64,
    /// Decay rate of the undifferenced operators, `alpha s / p`.
    pub baseline_exponent: f64,
    /// The refined bound approaches `(alpha s + 1)/p` as epsilon -> 0.
    pub refined_exponent_cap: f64,
}

/// Fit the singular-value decay of the refined difference for a positive
/// symbol; `s > 1`, `alpha` in `(0, 1]`.
pub fn refined_csz_decay(
    model: &ModelTriple,
    a: &FourierSymbol,
    alpha: f64,
    s: f64,
    opts: FitOptions,
) -> Result<CszReport> {
    assert!(s > 1.0 && alpha > 0.0 && alpha <= 1.0);
    let base = HermitianMatrix::new(ops::sandwich(model, a, alpha)?)?;
    let t1 = kernel::matrix_function(&kernel::eigh(&base)?, |t| libm::pow(t.max(0.0), s));

    let amat = HermitianMatrix::new(model.symbol_to_matrix(a)?)?;
    let a_pow = kernel::matrix_function(&kernel::eigh(&amat)?, |t| libm::pow(t.max(0.0), s));
    let w = model.partial_power_diag(-alpha * s);
    let mut t2 = a_pow;
    for i in 0..t2.rows() {
        for j in 0..t2.cols() {
            t2[(i, j)] *= w[i];
        }
    }

    let mu = seq::mu_sequence(&t1.sub(&t2))?;
    let fitted = seq::decay_exponent_fit(mu.values(), opts)?;
    let p = model.p();
    Ok(CszReport {
        fitted_exponent: fitted,
        baseline_exponent: alpha * s / p,
        refined_exponent_cap: (alpha * s + 1.0) / p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_torus;

    fn diag_decomposition(values: &[f64]) -> SpectralDecomposition {
        kernel::eigh(&HermitianMatrix::diag(values)).unwrap()
    }

    #[test]
    fn c_alpha_values() {
        assert_eq!(c_alpha(0.0).unwrap(), 0.0);
        assert!((c_alpha(1.0).unwrap() - 2.0 / core::f64::consts::PI).abs() < 1e-15);
        let expect = core::f64::consts::SQRT_2 / core::f64::consts::PI;
        assert!((c_alpha(0.5).unwrap() - expect).abs() < 1e-15);
        assert!(c_alpha(2.0).is_err());
        assert!(c_alpha(-0.1).is_err());
    }

    #[test]
    fn scalar_identity_unit_case() {
        // x = 1, alpha = 1/2: c(1/2) * pi / sqrt(2) = 1.
        let quad = DoiQuadrature::with_tol(1e-10);
        let r = scalar_power_identity_check(1.0, 0.5, &quad).unwrap();
        assert!(r <= 1e-8, "{r}");
        let r2 = scalar_power_identity_check(2.0, 0.999, &quad).unwrap();
        assert!(r2 <= 1e-8, "{r2}");
    }

    #[test]
    fn scalar_identity_scaling() {
        // Doubling x scales the integral by 2^{-alpha}: residuals stay tiny.
        let quad = DoiQuadrature::with_tol(1e-10);
        for alpha in [0.25, 0.8] {
            for x in [0.5, 1.0, 2.0, 4.0] {
                let r = scalar_power_identity_check(x, alpha, &quad).unwrap();
                assert!(r <= 1e-8, "x={x} alpha={alpha}: {r}");
            }
        }
    }

    #[test]
    fn doi_zero_input_zero_output() {
        let d = diag_decomposition(&[1.0, 2.0]);
        let quad = DoiQuadrature::default();
        let out = doi_transform(&d, &Matrix::zeros(2, 2), 0.3, 0.5, 0.5, &quad).unwrap();
        assert_eq!(out.max_norm(), 0.0);
    }

    #[test]
    fn doi_diagonal_matches_scalar_quadrature() {
        // For T = I the (i,i) entry is the scalar integral with x = y =
        // lambda_i.
        let d = diag_decomposition(&[1.0, 2.0]);
        let quad = DoiQuadrature::with_tol(1e-10);
        let out = doi_transform(&d, &Matrix::identity(2), 0.4, 0.5, 0.3, &quad).unwrap();
        for (i, &x) in [1.0f64, 2.0].iter().enumerate() {
            let g = move |s: f64| {
                let mu2 = libm::exp(2.0 * s);
                libm::exp(2.4 * s) / ((x * x + mu2) * (x * x + mu2))
            };
            let (lo, hi) = quad.bounds(0.4, 1.0, 2.0);
            let scalar = quad::integrate(&g, lo, hi, 1e-12, 1e-12, 512).unwrap().value;
            let expect = libm::pow(x, 0.8) * scalar;
            assert!((out[(i, i)].re - expect).abs() <= 1e-8, "{} vs {expect}", out[(i, i)].re);
        }
    }

    #[test]
    fn doi_scalar_power_identity_boundary_regime() {
        // Boundary case (ii) with delta = delta' = 1 and exponent -alpha:
        // the diagonal entry is x^{-alpha} int t^{1-alpha} (1+t^2)^{-2} dt
        // = x^{-alpha} (alpha/2) pi / (2 sin(pi alpha / 2)) by the Beta
        // integral, i.e. c(alpha) Psi_ii = (alpha/2) |lambda_i|^{-alpha}.
        let d = diag_decomposition(&[0.7, 1.9]);
        let quad = DoiQuadrature::with_tol(1e-10);
        let alpha = 0.6;
        let out = doi_transform(&d, &Matrix::identity(2), -alpha, 1.0, 1.0, &quad).unwrap();
        let c = c_alpha(alpha).unwrap();
        for (i, &x) in [0.7f64, 1.9].iter().enumerate() {
            let expect = 0.5 * alpha * libm::pow(x, -alpha) / c;
            assert!(
                (out[(i, i)].re - expect).abs() <= 1e-7 * expect,
                "{} vs {expect}",
                out[(i, i)].re
            );
        }
    }

    #[test]
    fn doi_region_violations() {
        let d = diag_decomposition(&[1.0, 2.0]);
        let quad = DoiQuadrature::default();
        assert!(matches!(
            doi_transform(&d, &Matrix::identity(2), 1.0, 1.0, 0.5, &quad),
            Err(Error::ParameterRegionViolation(_))
        ));
        // Boundary with an endpoint delta is rejected.
        assert!(matches!(
            doi_transform(&d, &Matrix::identity(2), 0.0, 2.0, 0.0, &quad),
            Err(Error::ParameterRegionViolation(_))
        ));
    }

    #[test]
    fn doi_factorization_property() {
        // Psi_{d,d'} = |D|^{-e} Psi_{d+e,d'+e'} |D|^{-e'}.
        let d = diag_decomposition(&[0.5, 1.0, 3.0]);
        let quad = DoiQuadrature::with_tol(1e-11);
        let mut t = Matrix::zeros(3, 3);
        t[(0, 1)] = Complex64::new(0.3, -0.2);
        t[(1, 0)] = Complex64::new(0.3, 0.2);
        t[(2, 2)] = Complex64::new(-1.0, 0.0);
        t[(0, 2)] = Complex64::new(0.1, 0.05);
        t[(2, 0)] = Complex64::new(0.1, -0.05);
        let lhs = doi_transform(&d, &t, 0.2, 0.3, 0.1, &quad).unwrap();
        let inner = doi_transform(&d, &t, 0.2, 0.8, 0.6, &quad).unwrap();
        let p_half_l = kernel::partial_power(&d, Complex64::new(-0.5, 0.0));
        let rhs = p_half_l.mul(&inner).mul(&p_half_l);
        assert!(lhs.sub(&rhs).max_norm() < 1e-7, "{}", lhs.sub(&rhs).max_norm());
    }

    #[test]
    fn doi_linear_in_t() {
        let d = diag_decomposition(&[0.8, 1.5, 2.5]);
        let quad = DoiQuadrature::with_tol(1e-10);
        let mut t1 = Matrix::zeros(3, 3);
        t1[(0, 2)] = Complex64::new(1.0, 0.5);
        let mut t2 = Matrix::zeros(3, 3);
        t2[(1, 1)] = Complex64::new(-2.0, 0.0);
        let sum = t1.add(&t2);
        let a = doi_transform(&d, &t1, 0.1, 0.4, 0.2, &quad).unwrap();
        let b = doi_transform(&d, &t2, 0.1, 0.4, 0.2, &quad).unwrap();
        let ab = doi_transform(&d, &sum, 0.1, 0.4, 0.2, &quad).unwrap();
        assert!(ab.sub(&a.add(&b)).max_norm() < 1e-10);
    }

    #[test]
    fn phi_zero_input() {
        let d = diag_decomposition(&[1.0, -2.0, 0.0]);
        let quad = DoiQuadrature::default();
        let out = phi_operator(&d, &Matrix::zeros(3, 3), 0.5, 0.0, 0.0, &quad).unwrap();
        assert_eq!(out.max_norm(), 0.0);
    }

    #[test]
    fn phi_annihilates_kernel() {
        let d = diag_decomposition(&[-1.5, 0.0, 2.0]);
        let quad = DoiQuadrature::with_tol(1e-9);
        let mut t = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                t[(i, j)] = Complex64::new(0.3 + i as f64, j as f64 - 1.0);
            }
        }
        let out = phi_operator(&d, &t, 0.5, 0.0, 0.0, &quad).unwrap();
        let (_, p0) = kernel::sign_and_kernel(&d);
        assert!(p0.mul(&out).max_norm() < 1e-12);
        assert!(out.mul(&p0).max_norm() < 1e-12);
    }

    #[test]
    fn factorization_on_torus_shift() {
        let t = build_torus(1, 6).unwrap();
        let quad = DoiQuadrature::with_tol(1e-8);
        let rep = factorization_residual(
            &t,
            &FourierSymbol::unitary(&[1]),
            1.0,
            0.0,
            0.0,
            &quad,
        )
        .unwrap();
        assert!(rep.lhs_norm > 0.1);
        assert!(rep.residual_norm <= 1e-4 * rep.lhs_norm, "{}", rep.residual_norm);
    }

    #[test]
    fn factorization_trivial_for_constant() {
        let t = build_torus(1, 4).unwrap();
        let quad = DoiQuadrature::default();
        let rep =
            factorization_residual(&t, &FourierSymbol::one(1), 0.5, 0.0, 0.0, &quad).unwrap();
        assert!(rep.lhs_norm < 1e-14);
        assert!(rep.residual_norm < 1e-12);
    }

    #[test]
    fn csz_difference_vanishes_for_constant() {
        let t = build_torus(1, 20).unwrap();
        let a = FourierSymbol::one(1);
        // a = 1: both terms coincide, the difference is numerically zero, so
        // the exponent fit must reject the all-zero sequence.
        let base = HermitianMatrix::new(ops::sandwich(&t, &a, 1.0).unwrap()).unwrap();
        let t1 = kernel::matrix_function(&kernel::eigh(&base).unwrap(), |x| x * x);
        let w = t.partial_power_diag(-2.0);
        let mut t2 = t.symbol_to_matrix(&a).unwrap();
        for i in 0..t2.rows() {
            t2[(i, i)] = Complex64::new(w[i], 0.0);
        }
        assert!(t1.sub(&t2).max_norm() < 1e-12);
    }
}
