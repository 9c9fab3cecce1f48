//! Declarative experiments: configurations bind a model, symbols, and
//! parameter grids to a named check; reports carry measured/target pairs
//! with provenance and pass flags.

mod experiments;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{
    build_dirac_quantum_torus, build_grushin, build_quantum_torus, build_rectangle,
    build_steklov_circle, build_torus, FourierSymbol, ModelKind, ModelTriple, ThetaMatrix,
};

/// The experiment registry: what each kind measures and which knobs it needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Weyl law for the conformal operator `a D^{-2} a`.
    WeylConformal,
    /// Leading heat-trace coefficient against the density functional.
    HeatCoefficient,
    /// Zeta residue `(s - p) Tr[a |D|^{-s}] -> p tau(a)`.
    ZetaResidue,
    /// Semiclassical counting `h^p N(h^{2q}(D^2)^q + V; lambda)`.
    SemiclassicalSweep,
    /// Integration-formula consistency for `|D|^{-p/2} a |D|^{-p/2}`.
    IntegrationFormula,
    /// Exact finite-dimensional Birman-Schwinger count identity.
    BirmanSchwingerCounts,
    /// Weighted Steklov spectra against the boundary density.
    SteklovWeighted,
    /// Growth exponent of the degenerate Grushin spectrum.
    GrushinExponent,
    /// Weak-Schatten decay of fractional commutators.
    CommutatorDecay,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::WeylConformal => "weyl_conformal",
            ExperimentKind::HeatCoefficient => "heat_coefficient",
            ExperimentKind::ZetaResidue => "zeta_residue",
            ExperimentKind::SemiclassicalSweep => "semiclassical_sweep",
            ExperimentKind::IntegrationFormula => "integration_formula",
            ExperimentKind::BirmanSchwingerCounts => "birman_schwinger_counts",
            ExperimentKind::SteklovWeighted => "steklov_weighted",
            ExperimentKind::GrushinExponent => "grushin_exponent",
            ExperimentKind::CommutatorDecay => "commutator_decay",
        }
    }

    pub fn all() -> [ExperimentKind; 9] {
        [
            ExperimentKind::WeylConformal,
            ExperimentKind::HeatCoefficient,
            ExperimentKind::ZetaResidue,
            ExperimentKind::SemiclassicalSweep,
            ExperimentKind::IntegrationFormula,
            ExperimentKind::BirmanSchwingerCounts,
            ExperimentKind::SteklovWeighted,
            ExperimentKind::GrushinExponent,
            ExperimentKind::CommutatorDecay,
        ]
    }

    /// One-line registry entry: what is checked, which parameters are needed.
    pub fn describe(&self) -> (&'static str, &'static str) {
        match self {
            ExperimentKind::WeylConformal => (
                "lim j^{2/p} lambda_j(a D^-2 a) = tau[a^p]^{2/p}",
                "model, symbol a > 0, window_fraction",
            ),
            ExperimentKind::HeatCoefficient => (
                "Tr[a e^{-t D^2}] = Gamma(1+p/2) t^{-p/2} (tau(a) + O(t^d))",
                "model, symbol a, t_grid",
            ),
            ExperimentKind::ZetaResidue => (
                "(s-p) Tr[a |D|^{-s}] -> p tau(a) as s -> p",
                "torus-family model (n <= 2), symbol a, eps_grid",
            ),
            ExperimentKind::SemiclassicalSweep => (
                "h^p N(h^{2q}(D^2)^q + V; lambda) -> tau[(V-lambda)_-^{p/2q}]",
                "model kind (radius chosen per h), symbol V, q_grid[0], h_grid, lambda",
            ),
            ExperimentKind::IntegrationFormula => (
                "NC integral of |D|^{-p/2} a |D|^{-p/2} = tau[a]; modulus form tau[|a|]",
                "model, symbol a, window_fraction",
            ),
            ExperimentKind::BirmanSchwingerCounts => (
                "#neg eigenvalues(H0+V) = #{BS eigenvalues < -1}, exactly",
                "seed, trials, dim_lo/dim_hi",
            ),
            ExperimentKind::SteklovWeighted => (
                "j lambda_j^pm(L^-1/2 gamma L^-1/2) -> c(1) int gamma_pm",
                "steklov_circle model, weight symbols, window_fraction",
            ),
            ExperimentKind::GrushinExponent => (
                "lambda_j of the degenerate cylinder grows like j^{2/3}",
                "grushin model (mx, my), fit_lo/fit_hi window",
            ),
            ExperimentKind::CommutatorDecay => (
                "mu_j([|D|^{-q}, a]) decays with exponent (q+1)/p; quasi-norm stable in M",
                "torus model, symbol a, q_grid",
            ),
        }
    }
}

/// Model construction parameters (TOML `[model]` table).
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: Option<ModelKind>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<i64>,
    /// Row-major n x n deformation matrix (quantum kinds).
    #[serde(default)]
    pub theta: Option<Vec<f64>>,
    #[serde(default)]
    pub side_a: Option<f64>,
    #[serde(default)]
    pub side_b: Option<f64>,
    #[serde(default)]
    pub k_max: Option<i64>,
    #[serde(default)]
    pub mx: Option<i64>,
    #[serde(default)]
    pub my: Option<i64>,
}

impl ModelConfig {
    fn want<T: Copy>(v: Option<T>, what: &str) -> Result<T> {
        v.ok_or_else(|| Error::InvalidConfig(alloc::format!("missing model field `{what}`")))
    }

    pub fn kind(&self) -> Result<ModelKind> {
        Self::want(self.kind, "kind")
    }

    pub fn theta_matrix(&self) -> Result<ThetaMatrix> {
        let n = Self::want(self.n, "n")?;
        match &self.theta {
            Some(entries) => {
                if entries.len() != n * n {
                    return Err(Error::InvalidConfig(String::from(
                        "theta must be a row-major n*n array",
                    )));
                }
                Ok(ThetaMatrix::new(n, entries))
            }
            None => Ok(ThetaMatrix::zero(n)),
        }
    }

    pub fn build(&self) -> Result<ModelTriple> {
        match self.kind()? {
            ModelKind::Torus => build_torus(Self::want(self.n, "n")?, Self::want(self.m, "m")?),
            ModelKind::QuantumTorus => {
                build_quantum_torus(&self.theta_matrix()?, Self::want(self.m, "m")?)
            }
            ModelKind::DiracQuantumTorus => {
                build_dirac_quantum_torus(&self.theta_matrix()?, Self::want(self.m, "m")?)
            }
            ModelKind::RectangleDirichlet => build_rectangle(
                false,
                Self::want(self.side_a, "side_a")?,
                Self::want(self.side_b, "side_b")?,
                Self::want(self.k_max, "k_max")?,
            ),
            ModelKind::RectangleNeumann => build_rectangle(
                true,
                Self::want(self.side_a, "side_a")?,
                Self::want(self.side_b, "side_b")?,
                Self::want(self.k_max, "k_max")?,
            ),
            ModelKind::SteklovCircle => build_steklov_circle(Self::want(self.m, "m")?),
            ModelKind::Grushin => {
                build_grushin(Self::want(self.mx, "mx")?, Self::want(self.my, "my")?)
            }
        }
    }

    /// Rebuild with a different lattice radius (sweeps, stability checks).
    pub fn with_radius(&self, m: i64) -> ModelConfig {
        let mut c = self.clone();
        c.m = Some(m);
        c
    }
}

/// Named symbol (TOML `[[symbols]]` entry).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedSymbol {
    pub name: String,
    pub coeffs: FourierSymbol,
}

/// Grids and knobs (TOML `[params]` table); unused fields are ignored by
/// each experiment kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub q_grid: Vec<f64>,
    pub h_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub lambda: f64,
    pub window_fraction: f64,
    pub corrupt_tail_fraction: f64,
    /// Oracle resolution for tau-of-function targets; 0 picks a per-kind
    /// default (256-point grids commutatively, radius 8 quantum).
    pub m_oracle: usize,
    pub trials: usize,
    pub dim_lo: usize,
    pub dim_hi: usize,
    /// Explicit fit window (inclusive lo, exclusive hi) where an experiment
    /// pins indices instead of fractions.
    pub fit_lo: Option<usize>,
    pub fit_hi: Option<usize>,
    /// Run the doubled-truncation stability sub-checks.
    pub stability_check: bool,
    /// Quadrature tolerance for DOI-backed experiments (unused otherwise).
    pub quad_tol: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            q_grid: vec![1.0],
            h_grid: Vec::new(),
            t_grid: Vec::new(),
            eps_grid: vec![0.4, 0.2, 0.1],
            lambda: 0.0,
            window_fraction: 0.5,
            corrupt_tail_fraction: 0.2,
            m_oracle: 0,
            trials: 200,
            dim_lo: 8,
            dim_hi: 64,
            fit_lo: None,
            fit_hi: None,
            stability_check: true,
            quad_tol: 1e-8,
        }
    }
}

/// Pass criteria (TOML `[tolerances]` table): two-sided relative tolerance
/// for value rows, absolute drift bound for stability rows.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rel: f64,
    pub drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rel: 0.10, drift: 0.05 }
    }
}

/// A declarative experiment: id, kind, model, symbols, grids, tolerances.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub symbols: Vec<NamedSymbol>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn symbol(&self, idx: usize) -> Result<&FourierSymbol> {
        self.symbols
            .get(idx)
            .map(|s| &s.coeffs)
            .ok_or_else(|| Error::InvalidConfig(alloc::format!("experiment needs symbol #{idx}")))
    }
}

/// Where a target value comes from: a closed-form model constant, an
/// independent numerical oracle, or an exact identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Formula,
    Oracle,
    Exact,
}

/// One measured/target pair. For zero targets the tolerance is absolute;
/// otherwise it bounds the relative error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub params: Vec<(String, f64)>,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub rel_err: f64,
    pub pass: bool,
    pub provenance: Provenance,
    /// Informational rows contribute data points but never fail a report.
    pub gating: bool,
}

impl ReportRow {
    pub fn gate(
        label: impl Into<String>,
        params: Vec<(String, f64)>,
        measured: f64,
        target: f64,
        tolerance: f64,
        provenance: Provenance,
    ) -> Self {
        let rel_err =
            if target == 0.0 { measured.abs() } else { ((measured - target) / target).abs() };
        ReportRow {
            label: label.into(),
            params,
            measured,
            target,
            tolerance,
            rel_err,
            pass: rel_err <= tolerance,
            provenance,
            gating: true,
        }
    }

    pub fn info(
        label: impl Into<String>,
        params: Vec<(String, f64)>,
        measured: f64,
        target: f64,
        provenance: Provenance,
    ) -> Self {
        let rel_err =
            if target == 0.0 { measured.abs() } else { ((measured - target) / target).abs() };
        ReportRow {
            label: label.into(),
            params,
            measured,
            target,
            tolerance: f64::MAX,
            rel_err,
            pass: true,
            provenance,
            gating: false,
        }
    }
}

/// Full result sheet of one experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub kind: ExperimentKind,
    pub rows: Vec<ReportRow>,
    pub passed: bool,
    /// Stamped by the runner; 0 when produced in-process.
    pub runtime_s: f64,
    pub diagnostics: Vec<String>,
}

impl ExperimentReport {
    fn new(id: &str, kind: ExperimentKind, rows: Vec<ReportRow>, diagnostics: Vec<String>) -> Self {
        let passed = rows.iter().all(|r| r.pass);
        ExperimentReport { id: String::from(id), kind, rows, passed, runtime_s: 0.0, diagnostics }
    }
}

/// Execute one experiment; deterministic for a fixed `(config, seed)`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (rows, diagnostics) = match config.kind {
        ExperimentKind::WeylConformal => experiments::weyl_conformal(config)?,
        ExperimentKind::HeatCoefficient => experiments::heat_coefficient(config)?,
        ExperimentKind::ZetaResidue => experiments::zeta_residue(config)?,
        ExperimentKind::SemiclassicalSweep => experiments::semiclassical_sweep(config)?,
        ExperimentKind::IntegrationFormula => experiments::integration_formula(config)?,
        ExperimentKind::BirmanSchwingerCounts => experiments::birman_schwinger_counts(config)?,
        ExperimentKind::SteklovWeighted => experiments::steklov_weighted(config)?,
        ExperimentKind::GrushinExponent => experiments::grushin_exponent(config)?,
        ExperimentKind::CommutatorDecay => experiments::commutator_decay(config)?,
    };
    Ok(ExperimentReport::new(&config.id, config.kind, rows, diagnostics))
}
