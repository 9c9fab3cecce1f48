//! `stlab` — run spectral-triple experiments from TOML configs and emit
//! JSON reports plus plot-ready CSV tables.

mod config;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stlab_core::verify::ExperimentKind;

#[derive(Parser)]
#[command(name = "stlab", version, about = "spectral-triple numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute experiments from one or more TOML config files.
    Run {
        /// Experiment config file (repeatable).
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        /// Output directory for reports and CSV tables.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads (0 = auto); the STLAB_THREADS variable supplies
        /// the default.
        #[arg(long)]
        threads: Option<usize>,
        /// Disable the result cache.
        #[arg(long)]
        no_cache: bool,
        /// Override every config's RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Only run experiments whose id matches this glob (`*` wildcards).
        #[arg(long)]
        filter: Option<String>,
    },
    /// List the experiment registry.
    List,
}

fn glob_match(pattern: &str, text: &str) -> bool {
    // Tiny '*' glob: segments between stars must appear in order.
    let mut segments = pattern.split('*');
    let mut rest = text;
    let first = segments.next().unwrap_or("");
    if !rest.starts_with(first) {
        return false;
    }
    rest = &rest[first.len()..];
    let mut tail: Option<&str> = None;
    for seg in segments {
        tail = Some(seg);
        if seg.is_empty() {
            continue;
        }
        match rest.find(seg) {
            Some(pos) => rest = &rest[pos + seg.len()..],
            None => return false,
        }
    }
    match tail {
        // No '*' at all: require exact match.
        None => rest.is_empty(),
        Some(last) => last.is_empty() || rest.is_empty(),
    }
}

fn run_command(
    configs: Vec<PathBuf>,
    out: PathBuf,
    threads: Option<usize>,
    no_cache: bool,
    seed: Option<u64>,
    filter: Option<String>,
) -> ExitCode {
    let mut resolved = Vec::new();
    for path in &configs {
        match config::load(path, seed) {
            Ok(cfg) => resolved.push(cfg),
            Err(err) => {
                eprintln!("config error: {err:#}");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(pattern) = &filter {
        resolved.retain(|c| glob_match(pattern, &c.id));
    }
    let threads = threads
        .or_else(|| std::env::var("STLAB_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let manifest = runner::RunManifest {
        configs: resolved,
        out_dir: out,
        threads,
        cache: if no_cache { runner::CachePolicy::Off } else { runner::CachePolicy::ReadWrite },
    };
    match runner::run(&manifest) {
        Ok(outcome) => {
            for report in &outcome.reports {
                let status = if report.passed { "pass" } else { "FAIL" };
                println!(
                    "{:<28} {:<24} {:>4} rows  {status}  {:.2}s",
                    report.id,
                    report.kind.name(),
                    report.rows.len(),
                    report.runtime_s
                );
            }
            if outcome.failing_ids.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("failing experiments: {}", outcome.failing_ids.join(", "));
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("run error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn list_command() -> ExitCode {
    println!("{:<26} {:<58} required parameters", "kind", "checks");
    for kind in ExperimentKind::all() {
        let (checks, required) = kind.describe();
        println!("{:<26} {:<58} {required}", kind.name(), checks);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { configs, out, threads, no_cache, seed, filter } => {
            run_command(configs, out, threads, no_cache, seed, filter)
        }
        Command::List => list_command(),
    }
}
