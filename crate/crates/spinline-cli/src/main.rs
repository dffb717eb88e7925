//! spinline — command-line front end for the waveguide/spin-chain toolkit.
//!
//! Every command reads its parameters from an optional `key = value` config
//! file (one `[section]` per command) plus long-form flag overrides, runs its
//! sweep on a bounded worker pool, and writes plot-ready CSV tables with
//! provenance headers. Reruns with the same config and seed produce
//! byte-identical files.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::Config;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "spinline",
    version,
    about = "Microwave transmission through spin-1/2 antiferromagnetic chains: \
             simulation sweeps, phase diagrams, resonance maps and S-parameter fitting"
)]
struct Cli {
    /// Configuration file (flat key = value with [command] sections).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV tables.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker-pool size (fallback: SPINLINE_JOBS, then 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for any stochastic output.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Per-command overrides, repeatable: --set section.key=value
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    sets: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact-diagonalization chain thermodynamics (and composite χT model).
    EdThermo,
    /// Mean-field Δθ_eq phase diagram over (T, B).
    MfPhase,
    /// Resonance-mode distribution Ω(ψ) at fixed (T, B).
    Resonance,
    /// Transmission spectra over (T, B) and visibility-vs-T tables.
    Transmit,
    /// Synthetic raw-sweep generator (model × background + seeded noise).
    Synthesize,
    /// Normalize a raw sweep and fit the resonances; tanh coupling-law fit.
    NormalizeFit,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::EdThermo => "ed-thermo",
            Command::MfPhase => "mf-phase",
            Command::Resonance => "resonance",
            Command::Transmit => "transmit",
            Command::Synthesize => "synthesize",
            Command::NormalizeFit => "normalize-fit",
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match Config::from_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                std::process::exit(2);
            }
        },
        None => Config::default(),
    };
    for s in &cli.sets {
        let Some((key_path, value)) = s.split_once('=') else {
            eprintln!("error: --set expects SECTION.KEY=VALUE, got {s}");
            std::process::exit(2);
        };
        let (section, key) = key_path.split_once('.').unwrap_or(("", key_path));
        cfg.set(section.trim(), key.trim(), value.trim().to_string());
    }

    let jobs = cli
        .jobs
        .or_else(|| {
            std::env::var("SPINLINE_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .or_else(|| cfg.get("", "jobs").and_then(|v| v.parse().ok()))
        .unwrap_or(1);
    let seed = cli
        .seed
        .or_else(|| cfg.get("", "seed").and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    // Seed participates in the provenance hash.
    cfg.set("", "seed", seed.to_string());

    let mut ctx = commands::RunContext {
        out_dir: cli.out.clone(),
        jobs,
        seed,
        config_hash: cfg.hash(),
        failures: Vec::new(),
    };

    let result = match &cli.command {
        Command::EdThermo => commands::cmd_ed_thermo(&cfg, &mut ctx),
        Command::MfPhase => commands::cmd_mf_phase(&cfg, &mut ctx),
        Command::Resonance => commands::cmd_resonance(&cfg, &mut ctx),
        Command::Transmit => commands::cmd_transmit(&cfg, &mut ctx),
        Command::Synthesize => commands::cmd_synthesize(&cfg, &mut ctx),
        Command::NormalizeFit => commands::cmd_normalize_fit(&cfg, &mut ctx),
    };

    if let Err(e) = result {
        eprintln!("error: {}: {e}", cli.command.name());
        std::process::exit(2);
    }
    if !ctx.failures.is_empty() {
        eprintln!(
            "{}: {} cell(s) failed:",
            cli.command.name(),
            ctx.failures.len()
        );
        for f in &ctx.failures {
            eprintln!("  {f}");
        }
        std::process::exit(1);
    }
}
