//! Thin CLI over the harness commands. All logic lives in the library;
//! this binary parses flags, loads configs, and prints outcomes as JSON.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

use optileak::codecs::Payload;
use optileak::harness::{
    cmd_capture, cmd_conceal, cmd_evaluate, cmd_reconstruct, cmd_roundtrip, ExperimentConfig,
    LocateChoice, ReportRow, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "optileak",
    version,
    about = "Hide visual payloads on a screen below the perceptibility threshold \
             and recover them from simulated captures"
)]
struct Cli {
    /// Experiment config JSON (a sweep config for `evaluate`).
    #[arg(long, global = true, value_name = "JSON")]
    config: Option<PathBuf>,
    /// Base RNG seed; without --config it also fills the default payload.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default "out").
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Proceed when the embedding fails the perceptibility gate, flagged.
    #[arg(long, global = true)]
    allow_at_risk: bool,
    /// Save each enhancement stage as a PGM under <out>/stages.
    #[arg(long, global = true)]
    dump_stages: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the configured embedding into numbered frames plus manifests.
    Conceal,
    /// Photograph a staged directory through the capture model.
    Capture {
        /// Directory produced by `conceal`.
        #[arg(long)]
        input: PathBuf,
        /// Distance preset overriding the configured one.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Recover the hidden object from a staged directory.
    Reconstruct {
        /// Directory produced by `conceal` or `capture`.
        #[arg(long)]
        input: PathBuf,
        /// Locate the symbol by its finder patterns instead of recorded
        /// geometry.
        #[arg(long)]
        finder: bool,
    },
    /// Sweep capture presets over repeated trials and write report.csv.
    Evaluate,
    /// Conceal, capture, and reconstruct under one output tree.
    Roundtrip {
        /// Digits to carry; defaults to the zero-padded seed.
        #[arg(long)]
        payload: Option<String>,
        /// Sensor noise sigma override.
        #[arg(long)]
        noise: Option<f64>,
        /// Distance preset override.
        #[arg(long)]
        preset: Option<String>,
    },
}

fn experiment_config(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)
            .with_context(|| format!("loading config {}", path.display()))?,
        None => {
            let digits = format!("{:020}", cli.seed.unwrap_or(0));
            ExperimentConfig::baseline(Payload::numeric(digits)?)
        }
    };
    if let Some(seed) = cli.seed {
        cfg.base_seed = seed;
    }
    Ok(cfg)
}

fn print_json(value: &impl Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));

    match &cli.command {
        Command::Conceal => {
            let cfg = experiment_config(&cli)?;
            print_json(&cmd_conceal(&cfg, &out, cli.allow_at_risk)?)
        }
        Command::Capture { input, preset } => {
            let cfg = experiment_config(&cli)?;
            let mut spec = cfg.capture.clone();
            if preset.is_some() {
                spec.preset = preset.clone();
            }
            let seed = cli.seed.unwrap_or(cfg.base_seed);
            print_json(&cmd_capture(input, &spec, seed, &out)?)
        }
        Command::Reconstruct { input, finder } => {
            let cfg = experiment_config(&cli)?;
            let locate = if *finder { LocateChoice::Finder } else { cfg.locate };
            let dump = cli.dump_stages.then(|| out.join("stages"));
            print_json(&cmd_reconstruct(input, &cfg.recon, locate, dump.as_deref())?)
        }
        Command::Evaluate => {
            let mut cfg = match &cli.config {
                Some(path) => SweepConfig::load(path)
                    .with_context(|| format!("loading sweep config {}", path.display()))?,
                None => {
                    let digits = format!("{:020}", cli.seed.unwrap_or(0));
                    SweepConfig::new(ExperimentConfig::baseline(Payload::numeric(digits)?))
                }
            };
            if let Some(seed) = cli.seed {
                cfg.experiment.base_seed = seed;
            }
            let (path, rows) = cmd_evaluate(&cfg, &out, cli.allow_at_risk)?;

            #[derive(Serialize)]
            struct EvaluateOutcome {
                report_csv: PathBuf,
                rows: Vec<ReportRow>,
            }
            print_json(&EvaluateOutcome { report_csv: path, rows })
        }
        Command::Roundtrip { payload, noise, preset } => {
            let mut cfg = experiment_config(&cli)?;
            if let Some(digits) = payload {
                cfg.object =
                    optileak::harness::ObjectSpec::Qr { payload: Payload::numeric(digits)? };
            }
            if let Some(sigma) = noise {
                cfg.capture.model.noise_sigma = *sigma;
            }
            if preset.is_some() {
                cfg.capture.preset = preset.clone();
            }
            print_json(&cmd_roundtrip(&cfg, &out, cli.allow_at_risk, cli.dump_stages)?)
        }
    }
}
