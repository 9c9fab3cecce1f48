//! Acceptance suite: every gate below prints one pass/fail line with its
//! runtime. Tolerances are pinned here, in the experiment configs.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlab_core::doi::{self, DoiQuadrature};
use stlab_core::kernel::{self, HermitianMatrix, Matrix};
use stlab_core::models::{
    self, build_steklov_circle, build_torus, twist_phase, FourierSymbol, ThetaMatrix,
};
use stlab_core::ops;
use stlab_core::seq::{self, FitOptions};
use stlab_core::verify::{
    run_experiment, ExperimentConfig, ExperimentKind, ModelConfig, NamedSymbol, Params, Tolerances,
};

struct Gate {
    name: &'static str,
    budget_s: f64,
}

impl Gate {
    fn new(name: &'static str, budget_s: f64) -> (Self, Instant) {
        (Gate { name, budget_s }, Instant::now())
    }

    fn finish(self, started: Instant, pass: bool, detail: &str) {
        let dt = started.elapsed().as_secs_f64();
        let status = if pass { "PASS" } else { "FAIL" };
        println!("acceptance {:<42} {status}  {dt:6.2}s  {detail}", self.name);
        assert!(pass, "{}: {detail}", self.name);
        assert!(
            dt < self.budget_s,
            "{} exceeded its runtime budget: {dt:.1}s >= {}s",
            self.name,
            self.budget_s
        );
    }
}

fn config(kind: ExperimentKind, id: &str) -> ExperimentConfig {
    ExperimentConfig {
        id: id.to_string(),
        kind,
        model: ModelConfig::default(),
        symbols: Vec::new(),
        params: Params::default(),
        tolerances: Tolerances::default(),
        seed: 0x5eed,
    }
}

fn symbol(name: &str, coeffs: &[(&[i64], f64)]) -> NamedSymbol {
    let n = coeffs[0].0.len();
    let mut s = FourierSymbol::zero(n);
    for (k, c) in coeffs {
        s.add(k, Complex64::new(*c, 0.0));
    }
    NamedSymbol { name: name.to_string(), coeffs: s }
}

/// 01: exact Birman-Schwinger count identity on 200 random pairs.
#[test]
fn criterion_01_birman_schwinger_exactness() {
    let (gate, t0) = Gate::new("01 birman-schwinger count identity", 10.0);
    let mut cfg = config(ExperimentKind::BirmanSchwingerCounts, "bs-exact");
    cfg.params.trials = 200;
    cfg.params.dim_lo = 8;
    cfg.params.dim_hi = 64;
    let report = run_experiment(&cfg).unwrap();
    let failures = report.rows.iter().filter(|r| !r.pass).count();
    gate.finish(t0, report.passed, &format!("{} rows, {failures} violations", report.rows.len()));
}

/// 02: quantum-torus heat trace against the modular-transform values.
#[test]
fn criterion_02_heat_trace() {
    let (gate, t0) = Gate::new("02 quantum-torus heat trace", 5.0);
    let pi = std::f64::consts::PI;

    let theta = ThetaMatrix::two_torus(0.35);
    let q2 = models::build_quantum_torus(&theta, 40).unwrap();
    let tr = ops::heat_trace(&q2, &FourierSymbol::one(2), &[0.5]).unwrap().values[0];
    let target2 = pi / 0.5;
    let rel2 = (tr - target2).abs() / target2;

    let circle = build_torus(1, 12).unwrap();
    let tr1 = ops::heat_trace(&circle, &FourierSymbol::one(1), &[1.0]).unwrap().values[0];
    // Poisson-resummed oracle for the t = 1 lattice sum.
    let theta1 = pi.sqrt()
        * (1.0
            + 2.0 * (-pi * pi).exp()
            + 2.0 * (-4.0 * pi * pi).exp()
            + 2.0 * (-9.0 * pi * pi).exp());
    let abs1 = (tr1 - theta1).abs();

    gate.finish(
        t0,
        rel2 <= 1e-6 && abs1 <= 1e-9,
        &format!("n=2 rel err {rel2:.2e} (<=1e-6), n=1 abs err {abs1:.2e} (<=1e-9)"),
    );
}

/// 03: scalar power identity through the adaptive quadrature.
#[test]
fn criterion_03_doi_scalar_identity() {
    let (gate, t0) = Gate::new("03 DOI scalar power identity", 1.0);
    let quad = DoiQuadrature::with_tol(1e-8);
    let mut worst: f64 = 0.0;
    for x in [1.0, 2.0, 5.0] {
        for alpha in [0.25, 0.5, 0.9] {
            let r = doi::scalar_power_identity_check(x, alpha, &quad).unwrap();
            worst = worst.max(r);
        }
    }
    gate.finish(t0, worst <= 1e-6, &format!("worst residual {worst:.2e} (<=1e-6)"));
}

/// 04: commutator factorization on random triples with a forced kernel mode.
#[test]
fn criterion_04_factorization() {
    let (gate, t0) = Gate::new("04 factorization identity", 60.0);
    let quad = DoiQuadrature::with_tol(1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst_rel: f64 = 0.0;
    for trial in 0..20 {
        let n = 12 + (rng.gen::<u64>() as usize) % 5;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let h = HermitianMatrix::new_unchecked(m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0)));
        let dec = kernel::eigh(&h).unwrap();
        // Force one kernel mode: zero out the smallest-modulus eigenvalue.
        let smallest = dec
            .eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, |acc, l| if l.abs() < acc.abs() { l } else { acc });
        let killed = kernel::matrix_function(&dec, |t| if t == smallest { 0.0 } else { t });
        let d = kernel::eigh(&HermitianMatrix::new_unchecked(killed)).unwrap();

        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        for &alpha in &[0.5, 1.0] {
            let rep = doi::factorization_residual_matrix(&d, &a, alpha, 0.0, 0.0, &quad).unwrap();
            let rel = rep.residual_norm / rep.lhs_norm.max(1e-300);
            worst_rel = worst_rel.max(rel);
            assert!(rel <= 1e-4, "trial {trial} alpha {alpha}: rel residual {rel:.3e}");
        }
    }
    gate.finish(t0, worst_rel <= 1e-4, &format!("worst relative residual {worst_rel:.2e} (<=1e-4)"));
}

/// 05: fractional-commutator decay exponents and quasi-norm stability.
#[test]
fn criterion_05_commutator_decay() {
    let (gate, t0) = Gate::new("05 commutator decay exponents", 30.0);
    let mut cfg = config(ExperimentKind::CommutatorDecay, "commutator-torus1");
    cfg.model =
        ModelConfig { kind: Some(models::ModelKind::Torus), n: Some(1), m: Some(512), ..Default::default() };
    cfg.symbols.push(NamedSymbol {
        name: "a".to_string(),
        coeffs: FourierSymbol::unitary(&[1]),
    });
    cfg.params.q_grid = vec![1.0, 2.0];
    cfg.params.stability_check = true;
    // Exponent gate |fit - (q+1)| <= 0.1 expressed relatively at q = 2.
    cfg.tolerances.rel = 0.1 / 3.0;
    cfg.tolerances.drift = 0.05;
    let report = run_experiment(&cfg).unwrap();
    let detail: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{}@q={}: {:.4}", r.label, r.params[0].1, r.measured))
        .collect();
    gate.finish(t0, report.passed, &detail.join("; "));
}

/// 06: flat-torus Weyl law through the dense spectrum at dim 3969.
#[test]
fn criterion_06_torus_weyl_law() {
    let (gate, t0) = Gate::new("06 torus Weyl law (dense, dim 3969)", 120.0);
    let model = build_torus(2, 31).unwrap();
    assert_eq!(model.dim(), 3969);
    let dense = HermitianMatrix::new_unchecked(Matrix::diag_real(&model.d_squared()));
    let ev = dense.eigenvalues().unwrap();
    let ratios: Vec<f64> = (3000..=3500).map(|j| ev[j] / (j + 1) as f64).collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let target = 1.0 / std::f64::consts::PI;
    let rel = (median - target).abs() / target;
    gate.finish(
        t0,
        rel <= 0.02,
        &format!("median j^-1 lambda_j = {median:.5}, rel err {:.3}% (<=2%)", 100.0 * rel),
    );
}

fn sweep_config(id: &str, quantum: bool) -> ExperimentConfig {
    let mut cfg = config(ExperimentKind::SemiclassicalSweep, id);
    cfg.model = if quantum {
        ModelConfig {
            kind: Some(models::ModelKind::QuantumTorus),
            n: Some(2),
            m: Some(2),
            theta: Some(vec![0.0, 0.35, -0.35, 0.0]),
            ..Default::default()
        }
    } else {
        ModelConfig { kind: Some(models::ModelKind::Torus), n: Some(2), m: Some(2), ..Default::default() }
    };
    // V = -1 + (cos x_1)/2 commutatively; -1 + (U_1 + U_1^*)/4 on the
    // quantum side -- identical coefficients.
    cfg.symbols.push(symbol("v", &[(&[0, 0], -1.0), (&[1, 0], 0.25), (&[-1, 0], 0.25)]));
    cfg.params.q_grid = vec![1.0];
    cfg.params.h_grid = vec![0.3, 0.2, 0.15, 0.1];
    cfg.params.lambda = 0.0;
    cfg.tolerances.rel = 0.10;
    cfg
}

/// 07: semiclassical sweep on the commutative 2-torus.
#[test]
fn criterion_07_semiclassical_commutative() {
    let (gate, t0) = Gate::new("07 semiclassical sweep (commutative)", 300.0);
    let report = run_experiment(&sweep_config("sweep-t2", false)).unwrap();
    let last = report.rows.last().unwrap();
    let pi = std::f64::consts::PI;
    let ok = report.passed && (last.target - pi).abs() < 1e-6;
    gate.finish(
        t0,
        ok,
        &format!("extrapolated {:.4} vs pi, rel err {:.2}% (<=10%)", last.measured, 100.0 * last.rel_err),
    );
}

/// 08: the same sweep on the quantum 2-torus (theta_12 = 0.35).
#[test]
fn criterion_08_semiclassical_quantum() {
    let (gate, t0) = Gate::new("08 semiclassical sweep (quantum)", 480.0);
    let report = run_experiment(&sweep_config("sweep-qt2", true)).unwrap();
    let last = report.rows.last().unwrap();
    let pi = std::f64::consts::PI;
    let ok = report.passed && (last.target - pi).abs() < 1e-9;
    gate.finish(
        t0,
        ok,
        &format!("extrapolated {:.4} vs pi, rel err {:.2}% (<=10%)", last.measured, 100.0 * last.rel_err),
    );
}

/// 09: weighted Steklov Weyl limits at M = 4000.
#[test]
fn criterion_09_steklov_weighted() {
    let (gate, t0) = Gate::new("09 weighted Steklov limits (M=4000)", 10.0);
    let mut cfg = config(ExperimentKind::SteklovWeighted, "steklov-4000");
    cfg.model = ModelConfig {
        kind: Some(models::ModelKind::SteklovCircle),
        n: Some(1),
        m: Some(4000),
        ..Default::default()
    };
    cfg.symbols.push(symbol("unit", &[(&[0], 1.0)]));
    cfg.symbols.push(symbol("cosine", &[(&[0], 1.0), (&[1], 0.25), (&[-1], 0.25)]));
    cfg.params.window_fraction = 0.5;
    cfg.tolerances.rel = 0.01;
    let report = run_experiment(&cfg).unwrap();
    let detail: Vec<String> = report
        .rows
        .iter()
        .filter(|r| r.target != 0.0)
        .map(|r| format!("{}: {:.5} vs {:.5}", r.label, r.measured, r.target))
        .collect();
    gate.finish(t0, report.passed, &detail.join("; "));
}

/// 10: Grushin growth exponent 2/3 with truncation-safe frequencies.
#[test]
fn criterion_10_grushin_exponent() {
    let (gate, t0) = Gate::new("10 Grushin growth exponent", 180.0);
    let mut cfg = config(ExperimentKind::GrushinExponent, "grushin-48");
    cfg.model = ModelConfig {
        kind: Some(models::ModelKind::Grushin),
        mx: Some(48),
        my: Some(1000),
        ..Default::default()
    };
    cfg.params.fit_lo = Some(500);
    cfg.params.fit_hi = Some(2000);
    cfg.params.stability_check = true;
    // 2/3 +- 0.05 as a relative tolerance, drift 0.02 under my-doubling.
    cfg.tolerances.rel = 0.05 / (2.0 / 3.0);
    cfg.tolerances.drift = 0.02;
    let report = run_experiment(&cfg).unwrap();
    let exp = report.rows[0].measured;
    let drift = report.rows[1].measured;
    gate.finish(
        t0,
        report.passed,
        &format!("exponent {exp:.4} (target 2/3 +- 0.05), doubling drift {drift:.4} (<=0.02)"),
    );
}

/// 11: integration-formula consistency on the circle.
#[test]
fn criterion_11_integration_formula() {
    let (gate, t0) = Gate::new("11 integration formula consistency", 30.0);
    let mut cfg = config(ExperimentKind::IntegrationFormula, "integration-t1");
    cfg.model =
        ModelConfig { kind: Some(models::ModelKind::Torus), n: Some(1), m: Some(1024), ..Default::default() };
    cfg.symbols.push(symbol("a", &[(&[0], 2.0), (&[1], 0.5), (&[-1], 0.5)]));
    cfg.tolerances.rel = 0.10;
    let report = run_experiment(&cfg).unwrap();
    // All three readings target tau[a] = 4 and must sit within 10% of it
    // and of each other.
    let diff = report.rows[0].measured;
    let logavg = report.rows[1].measured;
    let mu = report.rows[2].measured;
    let mutual = ((diff - logavg).abs() / 4.0).max((diff - mu).abs() / 4.0);
    let ok = report.passed && mutual <= 0.10;
    gate.finish(
        t0,
        ok,
        &format!("diff {diff:.4}, log-avg {logavg:.4}, mu-limit {mu:.4} vs 4; mutual {:.2}%", 100.0 * mutual),
    );
}

/// 12a: weak-Schatten Hoelder inequality on random triples.
#[test]
fn criterion_12a_hoelder_inequality() {
    let (gate, t0) = Gate::new("12a Hoelder quasi-norm inequality", 120.0);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut violations = 0usize;
    for _ in 0..500 {
        let n = 3 + (rng.gen::<u64>() as usize) % 14;
        let mut s = Matrix::zeros(n, n);
        let mut t = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
                t[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let p = 0.6 + 2.4 * rng.gen::<f64>();
        let q = 0.6 + 2.4 * rng.gen::<f64>();
        let r = p * q / (p + q);
        let mu_s = seq::mu_sequence(&s).unwrap();
        let mu_t = seq::mu_sequence(&t).unwrap();
        let mu_st = seq::mu_sequence(&s.mul(&t)).unwrap();
        let c_pq = p.powf(-1.0 / q) * q.powf(-1.0 / p) * (p + q).powf(1.0 / p + 1.0 / q);
        let lhs = seq::weak_quasi_norm(&mu_st, r).unwrap();
        let rhs = c_pq
            * seq::weak_quasi_norm(&mu_s, p).unwrap()
            * seq::weak_quasi_norm(&mu_t, q).unwrap();
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    gate.finish(t0, violations == 0, &format!("{violations} violations in 500 trials"));
}

/// 12b: Fan-type shift stability under finite-rank perturbations.
#[test]
fn criterion_12b_fan_shift() {
    let (gate, t0) = Gate::new("12b Fan shift inequality", 60.0);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut ok = true;
    for _ in 0..120 {
        let n = 6 + (rng.gen::<u64>() as usize) % 10;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let rank = 1 + (rng.gen::<u64>() as usize) % 3;
        let mut r = Matrix::zeros(n, n);
        for _ in 0..rank {
            let u: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
                .collect();
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
                .collect();
            for i in 0..n {
                for j in 0..n {
                    r[(i, j)] += u[i] * v[j].conj();
                }
            }
        }
        let mu_a = seq::mu_sequence(&a).unwrap();
        let mu_ar = seq::mu_sequence(&a.add(&r)).unwrap();
        for j in 0..n - rank {
            if mu_ar.values()[j + rank] > mu_a.values()[j] + 1e-10 {
                ok = false;
            }
        }
    }
    gate.finish(t0, ok, "mu_{j+rank}(A+R) <= mu_j(A) on 120 trials");
}

/// 12c: twist-phase cocycle plus the word-reordering oracle (n = 2, 3).
#[test]
fn criterion_12c_twist_phase_cocycle() {
    let (gate, t0) = Gate::new("12c twist cocycle + reordering oracle", 120.0);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let theta2 = ThetaMatrix::two_torus(0.35);
    let theta3 = ThetaMatrix::new(
        3,
        &[0.0, 0.3, -0.11, -0.3, 0.0, 0.47, 0.11, -0.47, 0.0],
    );
    // Cocycle identity on 10^4 random triples per dimension.
    let mut worst: f64 = 0.0;
    for theta in [&theta2, &theta3] {
        let n = theta.dim();
        for _ in 0..10_000 {
            let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<i64> {
                (0..n).map(|_| (rng.gen::<u64>() % 17) as i64 - 8).collect()
            };
            let k = rand_vec(&mut rng);
            let m = rand_vec(&mut rng);
            let l = rand_vec(&mut rng);
            let km: Vec<i64> = k.iter().zip(&m).map(|(a, b)| a + b).collect();
            let ml: Vec<i64> = m.iter().zip(&l).map(|(a, b)| a + b).collect();
            let lhs = twist_phase(theta, &k, &m) * twist_phase(theta, &km, &l);
            let rhs = twist_phase(theta, &m, &l) * twist_phase(theta, &k, &ml);
            worst = worst.max((lhs - rhs).norm());
        }
    }
    assert!(worst < 1e-12, "cocycle defect {worst:.2e}");

    // Reordering oracle: normal-order the generator word letter by letter
    // and compare the collected phase for every word of length <= 6.
    let mut checked = 0usize;
    for theta in [&theta2, &theta3] {
        let n = theta.dim();
        let mut worst_word: f64 = 0.0;
        let mut stack: Vec<Vec<i64>> = vec![vec![]];
        // Enumerate all k with |k|_1 <= 3 per factor, paired so the word
        // length |k|_1 + |m|_1 stays <= 6.
        let mut smalls: Vec<Vec<i64>> = Vec::new();
        enumerate_small(n, 3, &mut vec![0; n], 0, &mut smalls);
        stack.clear();
        for k in &smalls {
            for m in &smalls {
                let l1k: i64 = k.iter().map(|x| x.abs()).sum();
                let l1m: i64 = m.iter().map(|x| x.abs()).sum();
                if l1k + l1m > 6 {
                    continue;
                }
                let fast = twist_phase(theta, k, m);
                let slow = reorder_oracle(theta, k, m);
                worst_word = worst_word.max((fast - slow).norm());
                checked += 1;
            }
        }
        assert!(worst_word < 1e-12, "reordering defect {worst_word:.2e} (n = {n})");
    }
    gate.finish(t0, true, &format!("cocycle defect {worst:.1e}; {checked} words reordered"));
}

fn enumerate_small(n: usize, cap: i64, current: &mut Vec<i64>, axis: usize, out: &mut Vec<Vec<i64>>) {
    if axis == n {
        out.push(current.clone());
        return;
    }
    for v in -cap..=cap {
        current[axis] = v;
        enumerate_small(n, cap, current, axis + 1, out);
    }
    current[axis] = 0;
}

/// Brute-force normal ordering of `U^k U^m`: expand into generator letters,
/// bubble-sort by generator index, collect a phase `e^{2 pi i theta_qp s t}`
/// for every swap of `U_p^s` past `U_q^t` with `p > q`.
fn reorder_oracle(theta: &ThetaMatrix, k: &[i64], m: &[i64]) -> Complex64 {
    let mut letters: Vec<(usize, i64)> = Vec::new();
    for word in [k, m] {
        for (gen, &power) in word.iter().enumerate() {
            let sign = power.signum();
            for _ in 0..power.abs() {
                letters.push((gen, sign));
            }
        }
    }
    let mut arg = 0.0;
    let mut swapped = true;
    while swapped {
        swapped = false;
        for i in 0..letters.len().saturating_sub(1) {
            let (p, s) = letters[i];
            let (q, t) = letters[i + 1];
            if p > q {
                arg += theta.get(q, p) * (s as f64) * (t as f64);
                letters.swap(i, i + 1);
                swapped = true;
            }
        }
    }
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * arg)
}

/// 12d: partial-power semigroup on random spectra (deterministic spots).
#[test]
fn criterion_12d_partial_power_semigroup() {
    let (gate, t0) = Gate::new("12d partial-power semigroup", 30.0);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = 4 + (rng.gen::<u64>() as usize) % 10;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] =
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        let h = HermitianMatrix::new_unchecked(m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0)));
        let d = kernel::eigh(&h).unwrap();
        let z1 = rng.gen::<f64>() * 3.0 - 1.5;
        let z2 = rng.gen::<f64>() * 3.0 - 1.5;
        let p1 = kernel::partial_power(&d, Complex64::new(z1, 0.0));
        let p2 = kernel::partial_power(&d, Complex64::new(z2, 0.0));
        let p12 = kernel::partial_power(&d, Complex64::new(z1 + z2, 0.0));
        let scale = (p1.max_norm() * p2.max_norm()).max(1.0);
        worst = worst.max(p1.mul(&p2).sub(&p12).max_norm() / scale);
    }
    gate.finish(t0, worst <= 1e-10, &format!("worst scaled residual {worst:.2e} (<=1e-10)"));
}

/// 12e: refined power-difference decay beats the baseline exponent.
#[test]
fn criterion_12e_refined_csz_decay() {
    let (gate, t0) = Gate::new("12e refined power-difference decay", 120.0);
    let model = build_torus(1, 256).unwrap();
    let a = FourierSymbol::constant_plus_cos(1, 0, 2.0, 1.0);
    let report = doi::refined_csz_decay(&model, &a, 1.0, 2.0, FitOptions::default()).unwrap();
    let ok = report.fitted_exponent >= 2.5;
    gate.finish(
        t0,
        ok,
        &format!(
            "fitted {:.3} (>=2.5; baseline {}, refined cap {})",
            report.fitted_exponent, report.baseline_exponent, report.refined_exponent_cap
        ),
    );
}

/// 12f: exponent grows with s within fit noise (companion to 12e).
#[test]
fn criterion_12f_refined_csz_monotonicity() {
    let (gate, t0) = Gate::new("12f refined decay monotone in s", 120.0);
    let model = build_torus(1, 192).unwrap();
    let a = FourierSymbol::constant_plus_cos(1, 0, 2.0, 1.0);
    let e2 = doi::refined_csz_decay(&model, &a, 1.0, 2.0, FitOptions::default())
        .unwrap()
        .fitted_exponent;
    let e3 = doi::refined_csz_decay(&model, &a, 1.0, 3.0, FitOptions::default())
        .unwrap()
        .fitted_exponent;
    gate.finish(t0, e3 >= e2 - 0.1, &format!("exponent(s=2) {e2:.3} <= exponent(s=3) {e3:.3} + noise"));
}

/// Steklov closed form reproduced exactly (companion invariant to 09).
#[test]
fn steklov_closed_form_sequence() {
    let s = build_steklov_circle(2000).unwrap();
    let seq_bs = models::steklov_bs_sequence(&s, &FourierSymbol::one(1)).unwrap();
    for (j, &v) in seq_bs.positive.iter().enumerate() {
        let expect = 1.0 / ((j / 2 + 1) as f64);
        assert!((v - expect).abs() < 1e-11, "j = {j}");
    }
}
