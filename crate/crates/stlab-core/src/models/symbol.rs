//! Finitely supported Fourier symbols and the twisting phase cocycle.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Real antisymmetric deformation matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// Validates antisymmetry to 1e-14 and stores the exactly antisymmetrized
    /// matrix.
    pub fn new(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n);
        for i in 0..n {
            for j in 0..n {
                let defect = (entries[i * n + j] + entries[j * n + i]).abs();
                assert!(defect <= 1e-14, "theta must be antisymmetric (defect {defect})");
            }
        }
        let mut anti = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (entries[i * n + j] - entries[j * n + i]);
                anti[i * n + j] = v;
                anti[j * n + i] = -v;
            }
        }
        ThetaMatrix { n, entries: anti }
    }

    pub fn zero(n: usize) -> Self {
        ThetaMatrix { n, entries: vec![0.0; n * n] }
    }

    /// The 2-torus deformation with `theta_{12} = t`.
    pub fn two_torus(t: f64) -> Self {
        ThetaMatrix::new(2, &[0.0, t, -t, 0.0])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0.0)
    }

    pub fn row_major(&self) -> &[f64] {
        &self.entries
    }
}

/// Unimodular factor `sigma(k, m)` in `U^k U^m = sigma(k, m) U^{k+m}`,
/// obtained by normal-ordering the generator word:
/// `sigma(k, m) = exp(2 pi i sum_{q<p} theta_{qp} k_p m_q)`.
pub fn twist_phase(theta: &ThetaMatrix, k: &[i64], m: &[i64]) -> Complex64 {
    let n = theta.dim();
    debug_assert_eq!(k.len(), n);
    debug_assert_eq!(m.len(), n);
    let mut arg = 0.0;
    for q in 0..n {
        if m[q] == 0 {
            continue;
        }
        for p in q + 1..n {
            if k[p] != 0 {
                arg += theta.get(q, p) * (k[p] as f64) * (m[q] as f64);
            }
        }
    }
    Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * arg)
}

/// Phase relating `(U^k)^*` to `U^{-k}`: `(U^k)^* = conj(sigma(-k, k)) U^{-k}`.
pub fn adjoint_phase(theta: &ThetaMatrix, k: &[i64]) -> Complex64 {
    let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
    twist_phase(theta, &neg, k).conj()
}

/// Finitely supported coefficient map `a = sum_k a_k U^k` on the integer
/// lattice. Serialized as a JSON array of `{k, re, im}` records.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSymbol {
    n: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CoeffRecord {
    k: Vec<i64>,
    re: f64,
    im: f64,
}

impl Serialize for FourierSymbol {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> core::result::Result<S::Ok, S::Error> {
        let records: Vec<CoeffRecord> = self
            .coeffs
            .iter()
            .map(|(k, a)| CoeffRecord { k: k.clone(), re: a.re, im: a.im })
            .collect();
        records.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FourierSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> core::result::Result<Self, D::Error> {
        let records = Vec::<CoeffRecord>::deserialize(de)?;
        let n = records.first().map_or(0, |r| r.k.len());
        let mut sym = FourierSymbol::zero(n.max(1));
        for r in records {
            if r.k.len() != sym.n {
                return Err(serde::de::Error::custom("inconsistent lattice dimension"));
            }
            sym.add(&r.k, Complex64::new(r.re, r.im));
        }
        Ok(sym)
    }
}

impl FourierSymbol {
    pub fn zero(n: usize) -> Self {
        FourierSymbol { n, coeffs: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut s = Self::zero(n);
        s.add(&vec![0; n], Complex64::new(1.0, 0.0));
        s
    }

    /// Constant plus cosine in one chosen coordinate:
    /// `c0 + amp cos(x_axis)`, i.e. coefficients `c0` at 0 and `amp/2` at
    /// `+-e_axis`.
    pub fn constant_plus_cos(n: usize, axis: usize, c0: f64, amp: f64) -> Self {
        let mut s = Self::zero(n);
        if c0 != 0.0 {
            s.add(&vec![0; n], Complex64::new(c0, 0.0));
        }
        let mut k = vec![0i64; n];
        k[axis] = 1;
        s.add(&k, Complex64::new(0.5 * amp, 0.0));
        k[axis] = -1;
        s.add(&k, Complex64::new(0.5 * amp, 0.0));
        s
    }

    /// Single generator power `U^k`.
    pub fn unitary(k: &[i64]) -> Self {
        let mut s = Self::zero(k.len());
        s.add(k, Complex64::new(1.0, 0.0));
        s
    }

    pub fn add(&mut self, k: &[i64], a: Complex64) {
        assert_eq!(k.len(), self.n, "coefficient index dimension mismatch");
        if a == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.coeffs.entry(k.to_vec()).or_insert(Complex64::new(0.0, 0.0));
        *entry += a;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(k);
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (k, &a) in other.coeffs.iter() {
            out.add(k, a);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn support_radius(&self) -> i64 {
        self.coeffs.keys().flat_map(|k| k.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    /// Sum of coefficient moduli; an operator-norm bound for the realized
    /// multiplication operator.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm()).sum()
    }

    /// Plain coefficient symmetry `a_{-k} = conj(a_k)`.
    pub fn has_conjugate_symmetry(&self) -> bool {
        self.coeffs.iter().all(|(k, &a)| {
            let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
            (self.coeff(&neg) - a.conj()).norm() <= 1e-14
        })
    }

    /// Operator self-adjointness under the deformation: the twisted adjoint
    /// carries a phase, `a^* = sum conj(a_k) conj(sigma(-k,k)) U^{-k}`, so
    /// the condition is `a_{-k} = conj(a_k sigma(-k,k))`. For theta = 0 or
    /// axis-supported coefficients this reduces to plain conjugate symmetry.
    pub fn is_self_adjoint(&self, theta: &ThetaMatrix) -> bool {
        self.coeffs.iter().all(|(k, &a)| {
            let neg: Vec<i64> = k.iter().map(|&x| -x).collect();
            let phase = twist_phase(theta, &neg, k);
            (self.coeff(&neg) - (a * phase).conj()).norm() <= 1e-14
        })
    }

    /// Pointwise evaluation `sum_k a_k e^{i k.x}` (commutative reading).
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &a) in self.coeffs.iter() {
            let mut arg = 0.0;
            for (ki, xi) in k.iter().zip(x.iter()) {
                arg += (*ki as f64) * xi;
            }
            acc += a * Complex64::from_polar(1.0, arg);
        }
        acc
    }

    /// Twisted product `(a b)_m = sum_k a_k b_{m-k} sigma(k, m-k)`.
    pub fn twisted_product(&self, other: &Self, theta: &ThetaMatrix) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (k, &ak) in self.coeffs.iter() {
            for (l, &bl) in other.coeffs.iter() {
                let m: Vec<i64> = k.iter().zip(l.iter()).map(|(a, b)| a + b).collect();
                out.add(&m, ak * bl * twist_phase(theta, k, l));
            }
        }
        out
    }
}

/// The standard trace reads the zeroth coefficient.
pub fn tau0(a: &FourierSymbol) -> Complex64 {
    a.coeff(&vec![0; a.dim()])
}
