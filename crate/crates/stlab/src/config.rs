//! TOML experiment files: `[experiment]`, `[model]`, `[[symbols]]`,
//! `[params]`, `[tolerances]`.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use stlab_core::verify::{ExperimentConfig, ExperimentKind, ModelConfig, NamedSymbol, Params, Tolerances};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentSection {
    id: String,
    kind: ExperimentKind,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: ExperimentSection,
    #[serde(default)]
    model: ModelConfig,
    #[serde(default)]
    symbols: Vec<NamedSymbol>,
    #[serde(default)]
    params: Params,
    #[serde(default)]
    tolerances: Tolerances,
}

/// Parse one experiment file. A seed passed on the command line overrides
/// the file's seed.
pub fn load(path: &Path, seed_override: Option<u64>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let file: ConfigFile =
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    Ok(ExperimentConfig {
        id: file.experiment.id,
        kind: file.experiment.kind,
        model: file.model,
        symbols: file.symbols,
        params: file.params,
        tolerances: file.tolerances,
        seed: seed_override.unwrap_or(file.experiment.seed),
    })
}
