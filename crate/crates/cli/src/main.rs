#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use commands::{Outcome, SCHEMAS};
use config::ConfigError;

const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Build the index set and report its metrics.
    Indexset,
    /// Run one diffusion solve and write the field.
    Solve,
    /// Compute the expansion, the error curve and the summability report.
    Rates,
    /// Run the configured verification suites.
    Verify,
    /// Run the weighted identity battery.
    Identity,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Indexset => "indexset",
            Self::Solve => "solve",
            Self::Rates => "rates",
            Self::Verify => "verify",
            Self::Identity => "identity",
        }
    }
}

/// Sparse polynomial chaos experiments for lognormal diffusion on the torus.
///
/// Exit codes: 0 success, 2 property violation, 3 invalid configuration or
/// failed precondition, 1 other errors.
#[derive(Debug, Parser)]
#[command(name = "lnpc", version)]
struct Cli {
    command: Command,
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn manifest(cli: &Cli, name: &str, config_text: &str, seed: u64, jobs: usize, out: &Outcome) -> String {
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let mut m = lnpc_core::Report::new();
    m.push("schema_version", SCHEMA_VERSION)
        .push("subcommand", cli.command.name())
        .push("experiment", name)
        .push("config_path", cli.config.display())
        .push("config_sha256", hex(&Sha256::digest(config_text.as_bytes())))
        .push("seed", seed)
        .push("jobs", jobs)
        .push("lnpc_cli_version", env!("CARGO_PKG_VERSION"))
        .push("lnpc_core_version", lnpc_core::VERSION)
        .push("created_unix", created);
    for (file, bytes) in &out.artifacts {
        m.push(format!("artifact.{file}.sha256"), hex(&Sha256::digest(bytes)));
        if let Some((_, cols)) = SCHEMAS.iter().find(|(f, _)| f == file) {
            m.push(format!("artifact.{file}.schema"), cols);
        }
    }
    m.to_string()
}

fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let loaded = config::load(&cli.config)?;
    let cfg = &loaded.config;
    let seed = cli.seed.unwrap_or(cfg.seed);
    if cli.jobs == Some(0) {
        return Err(ConfigError("--jobs: must be at least 1".into()).into());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .context("starting worker pool")?;
    let jobs = pool.current_num_threads();
    let base = &loaded.base_dir;
    let mut out = pool.install(|| match cli.command {
        Command::Indexset => commands::indexset(cfg),
        Command::Solve => commands::solve(cfg, base),
        Command::Rates => commands::rates(cfg, base, seed),
        Command::Verify => commands::verify(cfg, base, seed),
        Command::Identity => commands::identity(cfg, seed),
    })?;

    let mut report = lnpc_core::Report::new();
    report
        .push("experiment", &cfg.name)
        .push("subcommand", cli.command.name())
        .push("seed", seed)
        .push("outcome", if out.violation { "violation" } else { "pass" });
    report.extend_prefixed(cli.command.name(), &out.report);
    out.add_report(report.to_string());

    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(|d| base.join(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let manifest = manifest(cli, &cfg.name, &loaded.text, seed, jobs, &out);
    out.artifacts.push(("manifest.txt".into(), manifest.into_bytes()));
    write_all(&dir, &out.artifacts)?;
    print!("{report}");
    println!("output: {}", dir.display());
    Ok(out.violation)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 3;
    }
    match err.downcast_ref::<lnpc_core::Error>() {
        Some(e) if e.is_precondition() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
