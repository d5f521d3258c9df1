//! Sweep one embedding across camera distances and tabulate recovery rates:
//! the harness renders the scene once, then runs seeded capture/recover
//! trials per preset and writes an RFC 4180 report.
//!
//! Run with: cargo run --example sweep_report

use optileak::codecs::Payload;
use optileak::harness::{cmd_evaluate, ExperimentConfig, SweepConfig};

fn main() -> anyhow::Result<()> {
    let mut experiment = ExperimentConfig::baseline(Payload::numeric("31556952000000000000")?);
    experiment.plan.scale = 8;
    experiment.trials = 5;
    experiment.base_seed = 17;
    experiment.capture.model.noise_sigma = 1.0;

    let mut sweep = SweepConfig::new(experiment);
    sweep.presets = ["identity", "50cm", "1m", "2m"].map(String::from).to_vec();

    let out_dir = std::env::temp_dir().join("optileak-sweep-report");
    let (report_csv, rows) = cmd_evaluate(&sweep, &out_dir, false)?;
    println!("{} rows -> {}", rows.len(), report_csv.display());
    for row in &rows {
        println!(
            "  {:<9} decode rate {:>5.1}%  mean accuracy {}",
            row.preset,
            row.decode_rate_pct.unwrap_or(f64::NAN),
            row.mean_module_accuracy_pct.map_or_else(|| "n/a".into(), |v| format!("{v:.1}%")),
        );
    }
    println!("\n{}", std::fs::read_to_string(&report_csv)?);
    Ok(())
}
