//! Spectra as asymptotic observables: singular/signed sequences, weak
//! quasi-norms, counting functions, Weyl-limit and decay-exponent fits, and
//! the logarithmic-mean estimator for the noncommutative integral.
//!
//! Index convention: sequences are 0-based and weighted by `(j+1)^e`, so an
//! exact power law `v_j = c (j+1)^{-e}` fits with limit `c` and zero spread.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, HermitianMatrix, Matrix};

/// Nonincreasing nonnegative sequence of singular values.
#[derive(Debug, Clone)]
pub struct SingularSequence {
    values: Vec<f64>,
    source_dim: usize,
}

impl SingularSequence {
    pub fn new(values: Vec<f64>, source_dim: usize) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] >= w[1]), "must be nonincreasing");
        debug_assert!(values.last().is_none_or(|&v| v >= 0.0), "must be nonnegative");
        SingularSequence { values, source_dim }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }
}

/// Positive and negative eigenvalue branches, each nonincreasing, with the
/// negative branch stored as magnitudes.
#[derive(Debug, Clone)]
pub struct SignedEigenSequence {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
    pub zeros: usize,
    pub source_dim: usize,
}

impl SignedEigenSequence {
    /// Split raw eigenvalues at `zero_tol`.
    pub fn from_eigenvalues(eigenvalues: &[f64], zero_tol: f64) -> Self {
        let mut positive: Vec<f64> =
            eigenvalues.iter().copied().filter(|&l| l > zero_tol).collect();
        let mut negative: Vec<f64> =
            eigenvalues.iter().map(|&l| -l).filter(|&l| l > zero_tol).collect();
        positive.sort_by(|a, b| b.partial_cmp(a).expect("non-NaN"));
        negative.sort_by(|a, b| b.partial_cmp(a).expect("non-NaN"));
        let zeros = eigenvalues.len() - positive.len() - negative.len();
        SignedEigenSequence { positive, negative, zeros, source_dim: eigenvalues.len() }
    }
}

/// Eigenvalue count strictly below a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingResult {
    pub threshold: f64,
    pub count: usize,
}

/// Tail-fitted asymptotic limit with its window and in-window spread.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylFit {
    pub exponent: f64,
    pub limit: f64,
    pub window: (usize, usize),
    pub spread: f64,
}

/// Window policy for tail fits. The last `corrupt_tail_fraction` of a
/// truncated model's sequence is excluded (finite sections perturb the
/// spectral edge most); the window then covers the trailing
/// `window_fraction` of the full length, clipped to the valid range.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitOptions {
    pub window_fraction: f64,
    pub corrupt_tail_fraction: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { window_fraction: 0.5, corrupt_tail_fraction: 0.2 }
    }
}

impl FitOptions {
    pub fn with_window(window_fraction: f64) -> Self {
        FitOptions { window_fraction, ..Default::default() }
    }

    /// Half-open index window `[lo, hi)` for a sequence of length `len`.
    pub fn window(&self, len: usize) -> (usize, usize) {
        let hi = ((len as f64) * (1.0 - self.corrupt_tail_fraction)).floor() as usize;
        let lo = ((len as f64) * (1.0 - self.window_fraction)).ceil() as usize;
        (lo.min(hi), hi)
    }
}

const MIN_FIT_LEN: usize = 32;
const MIN_WINDOW_POINTS: usize = 8;

/// Singular values of a square matrix, descending; length equals the
/// dimension.
pub fn mu_sequence(t: &Matrix) -> Result<SingularSequence> {
    let values = kernel::singular_values(t)?;
    let n = t.rows();
    Ok(SingularSequence::new(values, n))
}

/// Split a Hermitian matrix spectrum into signed branches.
pub fn lambda_pm(a: &HermitianMatrix, zero_tol: f64) -> Result<SignedEigenSequence> {
    let ev = a.eigenvalues()?;
    Ok(SignedEigenSequence::from_eigenvalues(&ev, zero_tol))
}

/// Weak Schatten quasi-norm `sup_j (j+1)^{1/p} mu_j`.
pub fn weak_quasi_norm(seq: &SingularSequence, p: f64) -> Result<f64> {
    assert!(p > 0.0, "p must be positive");
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let inv_p = 1.0 / p;
    Ok(seq
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| ((j + 1) as f64).powf(inv_p) * v)
        .fold(0.0, f64::max))
}

/// Number of eigenvalues strictly below `threshold`.
pub fn counting_below(a: &HermitianMatrix, threshold: f64) -> Result<CountingResult> {
    let ev = a.eigenvalues()?;
    Ok(counting_below_sorted(&ev, threshold))
}

/// Counting helper for precomputed eigenvalues (any order).
pub fn counting_below_sorted(eigenvalues: &[f64], threshold: f64) -> CountingResult {
    let count = eigenvalues.iter().filter(|&&l| l < threshold).count();
    CountingResult { threshold, count }
}

fn median_of(mut vals: Vec<f64>) -> f64 {
    vals.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
    let n = vals.len();
    if n % 2 == 1 { vals[n / 2] } else { 0.5 * (vals[n / 2 - 1] + vals[n / 2]) }
}

/// Estimate `lim (j+1)^exponent * value_j` as the window median of the
/// weighted sequence; the spread is the max-min over the window.
pub fn weyl_limit_fit(values: &[f64], exponent: f64, opts: FitOptions) -> Result<WeylFit> {
    if values.len() < MIN_FIT_LEN {
        return Err(Error::WindowTooSmall { points: values.len(), required: MIN_FIT_LEN });
    }
    let (lo, hi) = opts.window(values.len());
    if hi.saturating_sub(lo) < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooSmall {
            points: hi.saturating_sub(lo),
            required: MIN_WINDOW_POINTS,
        });
    }
    let weighted: Vec<f64> =
        (lo..hi).map(|j| ((j + 1) as f64).powf(exponent) * values[j]).collect();
    let spread = weighted.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        - weighted.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    Ok(WeylFit { exponent, limit: median_of(weighted), window: (lo, hi), spread })
}

/// Logarithmic-mean estimator `(1/log(N+1)) sum_{j<N} lambda_j` with the
/// eigenvalues arranged by descending modulus, positive values first at ties.
pub fn dixmier_log_average(a: &HermitianMatrix, n_terms: usize) -> Result<f64> {
    let ev = a.eigenvalues()?;
    Ok(dixmier_log_average_from(&ev, n_terms))
}

/// Same estimator on precomputed eigenvalues.
pub fn dixmier_log_average_from(eigenvalues: &[f64], n_terms: usize) -> f64 {
    assert!(n_terms <= eigenvalues.len(), "N must not exceed the dimension");
    let mut ordered: Vec<f64> = eigenvalues.to_vec();
    ordered.sort_by(|a, b| {
        b.abs()
            .partial_cmp(&a.abs())
            .expect("non-NaN")
            .then_with(|| b.partial_cmp(a).expect("non-NaN"))
    });
    let mut sum = kernel::KahanSum::new();
    for &l in ordered.iter().take(n_terms) {
        sum.add(l);
    }
    sum.value() / libm::log(n_terms as f64 + 1.0)
}

/// Verdict sheet for spectral measurability at `p = 1`: both branch limits,
/// their difference, and the logarithmic-mean estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurabilityReport {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub plus_spread: f64,
    pub minus_spread: f64,
    pub difference: f64,
    pub log_average: f64,
    pub tolerance: f64,
    pub consistent: bool,
}

fn branch_limit(branch: &[f64], opts: FitOptions) -> (f64, f64) {
    match weyl_limit_fit(branch, 1.0, opts) {
        Ok(fit) => (fit.limit, fit.spread),
        // Short branches decay faster than 1/j at the scale of the model:
        // their Weyl limit is 0 (finite-rank-like).
        Err(_) => (0.0, 0.0),
    }
}

/// Measurability check for a Hermitian matrix assumed weak-trace-class at
/// `p = 1`: compares `Lambda^+ - Lambda^-` with the logarithmic mean.
pub fn spectral_measurability_report(
    a: &HermitianMatrix,
    zero_tol: f64,
    opts: FitOptions,
    tolerance: f64,
) -> Result<MeasurabilityReport> {
    let ev = a.eigenvalues()?;
    Ok(measurability_from_eigenvalues(&ev, zero_tol, opts, tolerance))
}

/// Measurability report from precomputed eigenvalues.
pub fn measurability_from_eigenvalues(
    eigenvalues: &[f64],
    zero_tol: f64,
    opts: FitOptions,
    tolerance: f64,
) -> MeasurabilityReport {
    let branches = SignedEigenSequence::from_eigenvalues(eigenvalues, zero_tol);
    let (lambda_plus, plus_spread) = branch_limit(&branches.positive, opts);
    let (lambda_minus, minus_spread) = branch_limit(&branches.negative, opts);
    let difference = lambda_plus - lambda_minus;
    let n_terms = ((eigenvalues.len() as f64) * (1.0 - opts.corrupt_tail_fraction)) as usize;
    let log_average = dixmier_log_average_from(eigenvalues, n_terms.max(1).min(eigenvalues.len()));
    MeasurabilityReport {
        lambda_plus,
        lambda_minus,
        plus_spread,
        minus_spread,
        difference,
        log_average,
        tolerance,
        consistent: (difference - log_average).abs() <= tolerance,
    }
}

/// Least-squares decay (or growth) exponent: |slope| of `log value` against
/// `log (j+1)` over the fit window.
pub fn decay_exponent_fit(values: &[f64], opts: FitOptions) -> Result<f64> {
    if values.len() < MIN_FIT_LEN {
        return Err(Error::WindowTooSmall { points: values.len(), required: MIN_FIT_LEN });
    }
    let (lo, hi) = opts.window(values.len());
    if hi.saturating_sub(lo) < MIN_WINDOW_POINTS {
        return Err(Error::WindowTooSmall {
            points: hi.saturating_sub(lo),
            required: MIN_WINDOW_POINTS,
        });
    }
    slope_magnitude(values, lo, hi)
}

/// Exponent fit over an explicit half-open index window.
pub fn decay_exponent_fit_window(values: &[f64], lo: usize, hi: usize) -> Result<f64> {
    if hi.saturating_sub(lo) < 2 || hi > values.len() {
        return Err(Error::WindowTooSmall { points: hi.saturating_sub(lo), required: 2 });
    }
    slope_magnitude(values, lo, hi)
}

fn slope_magnitude(values: &[f64], lo: usize, hi: usize) -> Result<f64> {
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let n = (hi - lo) as f64;
    for (j, &v) in values.iter().enumerate().take(hi).skip(lo) {
        if v <= 0.0 {
            return Err(Error::NonPositiveValues { index: j });
        }
        let x = libm::log((j + 1) as f64);
        let y = libm::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    Ok(((n * sxy - sx * sy) / denom).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn mu_of_diagonal() {
        let t = Matrix::diag_real(&[1.0, -2.0, 0.0]);
        let mu = mu_sequence(&t).unwrap();
        for (got, want) in mu.values().iter().zip([2.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn mu_of_unitary_is_ones() {
        let angle = 0.5173;
        let c = libm::cos(angle);
        let s = libm::sin(angle);
        let u = Matrix::from_real(2, 2, &[c, -s, s, c]);
        let mu = mu_sequence(&u).unwrap();
        for v in mu.values() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_pm_splits() {
        let a = HermitianMatrix::diag(&[3.0, -1.0, -5.0, 0.0]);
        let s = lambda_pm(&a, 1e-12).unwrap();
        assert_eq!(s.positive, vec![3.0]);
        assert_eq!(s.negative, vec![5.0, 1.0]);
        assert_eq!(s.zeros, 1);
    }

    #[test]
    fn lambda_pm_nonnegative_matrix() {
        let a = HermitianMatrix::diag(&[2.0, 1.0, 0.0]);
        let s = lambda_pm(&a, 1e-12).unwrap();
        assert!(s.negative.is_empty());
    }

    #[test]
    fn quasi_norm_harmonic_is_one() {
        let values: Vec<f64> = (0..100).map(|j| 1.0 / (j + 1) as f64).collect();
        let seq = SingularSequence::new(values, 100);
        assert!((weak_quasi_norm(&seq, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quasi_norm_two_terms() {
        let seq = SingularSequence::new(vec![4.0, 3.0], 2);
        let expect = (3.0 * core::f64::consts::SQRT_2).max(4.0);
        assert!((weak_quasi_norm(&seq, 2.0).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn quasi_norm_homogeneous() {
        let base: Vec<f64> = (0..40).map(|j| 1.0 / ((j + 1) as f64).sqrt()).collect();
        let seq = SingularSequence::new(base.clone(), 40);
        let scaled = SingularSequence::new(base.iter().map(|v| 3.5 * v).collect(), 40);
        let a = weak_quasi_norm(&seq, 1.7).unwrap();
        let b = weak_quasi_norm(&scaled, 1.7).unwrap();
        assert!((b - 3.5 * a).abs() < 1e-12);
    }

    #[test]
    fn quasi_norm_empty_errors() {
        let seq = SingularSequence::new(vec![], 0);
        assert!(matches!(weak_quasi_norm(&seq, 1.0), Err(Error::EmptySequence)));
    }

    #[test]
    fn counting_examples() {
        let a = HermitianMatrix::diag(&[-2.0, 0.0, 3.0]);
        assert_eq!(counting_below(&a, 0.0).unwrap().count, 1);
        assert_eq!(counting_below(&a, 3.5).unwrap().count, 3);
        assert_eq!(counting_below(&a, -5.0).unwrap().count, 0);
    }

    #[test]
    fn counting_complement() {
        let ev = [-1.0, 0.0, 0.5, 2.0];
        for lam in [-2.0, 0.0, 0.25, 5.0] {
            let below = counting_below_sorted(&ev, lam).count;
            let at_or_above = ev.iter().filter(|&&l| l >= lam).count();
            assert_eq!(below + at_or_above, ev.len());
        }
    }

    #[test]
    fn weyl_fit_exact_power_law() {
        let values: Vec<f64> = (0..256).map(|j| 2.0 / (j + 1) as f64).collect();
        let fit = weyl_limit_fit(&values, 1.0, FitOptions::default()).unwrap();
        assert!((fit.limit - 2.0).abs() < 1e-13);
        assert!(fit.spread <= 1e-12);
    }

    #[test]
    fn weyl_fit_with_correction_term() {
        let values: Vec<f64> = (0..4096)
            .map(|j| {
                let x = (j + 1) as f64;
                (1.0 + 1.0 / x.sqrt()) / x
            })
            .collect();
        let fit = weyl_limit_fit(&values, 1.0, FitOptions::default()).unwrap();
        // Weighted values are 1 + (j+1)^{-1/2}, so the median sits above 1
        // by the correction at the window midpoint.
        let (lo, _) = fit.window;
        let corr = 1.0 / ((lo + 1) as f64).sqrt();
        assert!(fit.limit > 1.0 && fit.limit - 1.0 <= corr, "{} corr {corr}", fit.limit);
    }

    #[test]
    fn weyl_fit_ignores_corrupted_tail() {
        let mut values: Vec<f64> = (0..1000).map(|j| 2.0 / (j + 1) as f64).collect();
        let fit_clean = weyl_limit_fit(&values, 1.0, FitOptions::default()).unwrap();
        for v in values.iter_mut().skip(800) {
            *v *= 7.0;
        }
        let fit_corrupt = weyl_limit_fit(&values, 1.0, FitOptions::default()).unwrap();
        assert_eq!(fit_clean.limit, fit_corrupt.limit);
    }

    #[test]
    fn weyl_fit_window_too_small() {
        let values = vec![1.0; 10];
        assert!(matches!(
            weyl_limit_fit(&values, 1.0, FitOptions::default()),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn dixmier_matches_harmonic_oracle() {
        let n = 10_000usize;
        let values: Vec<f64> = (0..n).map(|j| 1.0 / (j + 1) as f64).collect();
        let got = dixmier_log_average_from(&values, n);
        let mut h = 0.0;
        for j in 1..=n {
            h += 1.0 / j as f64;
        }
        let oracle = h / libm::log(n as f64 + 1.0);
        assert!((got - oracle).abs() < 1e-12);
        // The estimator approaches 1 only logarithmically; at N = 1e4 the
        // Euler-Mascheroni offset is still ~6e-2.
        assert!((got - 1.0).abs() < 0.07, "{got}");
    }

    #[test]
    fn dixmier_annihilates_summable() {
        let values: Vec<f64> = (0..60).map(|j| 0.5f64.powi(j)).collect();
        let got = dixmier_log_average_from(&values, 60);
        assert!(got < 0.5, "{got}");
        let sum = got * libm::log(61.0);
        assert!((sum - 2.0).abs() < 1e-9);
    }

    #[test]
    fn dixmier_tie_breaking_deterministic() {
        let values = [1.0, -1.0, 0.5, -0.5];
        let got = dixmier_log_average_from(&values, 3);
        assert!((got - 0.5 / libm::log(4.0)).abs() < 1e-14);
    }

    #[test]
    fn measurability_interleaved() {
        let n = 4096;
        let mut ev = Vec::with_capacity(n);
        for j in 0..n {
            let v = 1.0 / (j + 1) as f64;
            ev.push(if j % 2 == 0 { v } else { -v });
        }
        let rep = measurability_from_eigenvalues(&ev, 0.0, FitOptions::default(), 0.1);
        assert!((rep.lambda_plus - 0.5).abs() < 0.01, "{}", rep.lambda_plus);
        assert!((rep.lambda_minus - 0.5).abs() < 0.01);
        assert!(rep.difference.abs() < 0.01);
        // Modulus-ordered partial sums telescope to the alternating harmonic
        // series, so the estimator decays like log(2)/log(N+1).
        let n_terms = (n as f64 * 0.8) as usize;
        let oracle = core::f64::consts::LN_2 / libm::log(n_terms as f64 + 1.0);
        assert!((rep.log_average - oracle).abs() < 1e-3, "{} vs {oracle}", rep.log_average);
        assert!(rep.consistent);
    }

    #[test]
    fn measurability_finite_rank_is_zero() {
        let mut ev = vec![0.0; 64];
        ev[0] = 5.0;
        ev[1] = -3.0;
        let rep = measurability_from_eigenvalues(&ev, 1e-12, FitOptions::default(), 0.05);
        assert_eq!(rep.lambda_plus, 0.0);
        assert_eq!(rep.lambda_minus, 0.0);
        assert!(rep.log_average.abs() < 2.0 / libm::log(52.0) + 1e-9);
    }

    #[test]
    fn decay_fit_exact() {
        let values: Vec<f64> = (0..512).map(|j| ((j + 1) as f64).powi(-2)).collect();
        let got = decay_exponent_fit(&values, FitOptions::default()).unwrap();
        assert!((got - 2.0).abs() < 1e-9);
    }

    #[test]
    fn decay_fit_with_correction() {
        let values: Vec<f64> = (0..2048)
            .map(|j| {
                let x = (j + 1) as f64;
                x.powf(-1.5) * (1.0 + 0.1 / x)
            })
            .collect();
        let got = decay_exponent_fit(&values, FitOptions::default()).unwrap();
        assert!((got - 1.5).abs() < 0.02, "{got}");
    }

    #[test]
    fn decay_fit_constant_is_zero() {
        let values = vec![3.0; 128];
        let got = decay_exponent_fit(&values, FitOptions::default()).unwrap();
        assert!(got.abs() < 1e-12);
    }

    #[test]
    fn decay_fit_rejects_nonpositive() {
        let mut values = vec![1.0; 128];
        values[100] = 0.0;
        assert!(matches!(
            decay_exponent_fit(&values, FitOptions::default()),
            Err(Error::NonPositiveValues { .. })
        ));
    }
}
