//! Experiment orchestration: cache lookup, work-stealing execution,
//! deterministic report assembly, JSON and CSV emission.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use stlab_core::verify::{run_experiment, ExperimentConfig, ExperimentReport};

/// Cache behaviour for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CachePolicy {
    ReadWrite,
    Off,
}

/// Resolved run: configs, output directory, thread budget, cache policy.
#[derive(Debug)]
pub struct RunManifest {
    pub configs: Vec<ExperimentConfig>,
    pub out_dir: PathBuf,
    pub threads: usize,
    pub cache: CachePolicy,
}

/// Cache key: canonical JSON of the config tied to the crate version, so
/// version bumps invalidate stale results.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
    hasher.update([0u8]);
    hasher.update(serde_json::to_vec(config).expect("config serializes"));
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn cache_path(out_dir: &Path, hash: &str) -> PathBuf {
    out_dir.join(".cache").join(format!("{hash}.report.json"))
}

/// Run (or serve from cache) one experiment; returns the report and its
/// serialized JSON bytes (byte-identical on cache hits).
fn run_one(
    config: &ExperimentConfig,
    out_dir: &Path,
    cache: CachePolicy,
) -> Result<(ExperimentReport, Vec<u8>)> {
    let hash = config_hash(config);
    let cpath = cache_path(out_dir, &hash);
    if cache == CachePolicy::ReadWrite {
        if let Ok(bytes) = fs::read(&cpath) {
            if let Ok(report) = serde_json::from_slice::<ExperimentReport>(&bytes) {
                return Ok((report, bytes));
            }
        }
    }
    let started = Instant::now();
    let report = match run_experiment(config) {
        Ok(mut report) => {
            report.runtime_s = started.elapsed().as_secs_f64();
            report
        }
        Err(err) => ExperimentReport {
            id: config.id.clone(),
            kind: config.kind,
            rows: Vec::new(),
            passed: false,
            runtime_s: started.elapsed().as_secs_f64(),
            diagnostics: vec![format!("failed: {err}")],
        },
    };
    let bytes = serde_json::to_vec_pretty(&report).context("serializing report")?;
    if cache == CachePolicy::ReadWrite {
        fs::create_dir_all(cpath.parent().expect("cache dir"))?;
        fs::write(&cpath, &bytes)?;
    }
    Ok((report, bytes))
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn params_cell(params: &[(String, f64)]) -> String {
    params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// Per-experiment CSV: one row per grid point.
fn report_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("id,label,params,measured,target,rel_err,pass\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_escape(&report.id),
            csv_escape(&row.label),
            csv_escape(&params_cell(&row.params)),
            row.measured,
            row.target,
            row.rel_err,
            row.pass
        ));
    }
    out
}

/// Outcome of a whole run.
pub struct RunOutcome {
    pub reports: Vec<ExperimentReport>,
    pub failing_ids: Vec<String>,
}

/// Execute the manifest: each experiment runs (or is served from cache),
/// reports land as `<id>.report.json` and `<id>.csv`, and `summary.csv`
/// collects every row ordered by experiment id.
pub fn run(manifest: &RunManifest) -> Result<RunOutcome> {
    fs::create_dir_all(&manifest.out_dir)
        .with_context(|| format!("creating output dir {}", manifest.out_dir.display()))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(manifest.threads)
        .build()
        .context("building thread pool")?;
    let results: Vec<Result<(ExperimentReport, Vec<u8>)>> = pool.install(|| {
        manifest
            .configs
            .par_iter()
            .map(|config| run_one(config, &manifest.out_dir, manifest.cache))
            .collect()
    });

    let mut reports = Vec::with_capacity(results.len());
    for result in results {
        let (report, bytes) = result?;
        let json_path = manifest.out_dir.join(format!("{}.report.json", report.id));
        fs::write(&json_path, &bytes)?;
        let csv_path = manifest.out_dir.join(format!("{}.csv", report.id));
        fs::write(&csv_path, report_csv(&report))?;
        reports.push(report);
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));

    let mut summary = String::from("id,kind,label,measured,target,rel_err,pass,runtime_s\n");
    for report in &reports {
        for row in &report.rows {
            summary.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_escape(&report.id),
                report.kind.name(),
                csv_escape(&row.label),
                row.measured,
                row.target,
                row.rel_err,
                row.pass,
                report.runtime_s
            ));
        }
    }
    fs::write(manifest.out_dir.join("summary.csv"), summary)?;

    let failing_ids: Vec<String> =
        reports.iter().filter(|r| !r.passed).map(|r| r.id.clone()).collect();
    Ok(RunOutcome { reports, failing_ids })
}
