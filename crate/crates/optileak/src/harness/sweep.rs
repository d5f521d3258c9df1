//! Repeated-trial sweeps over capture presets, reported as CSV.
//!
//! One report row per (object variant, preset) pair. The embedding renders
//! once per variant (it is seed-independent); each trial re-captures it with
//! seed `base_seed + trial` and runs the receiver in memory. A trial whose
//! recovery errors out (for example the finder losing the symbol entirely)
//! counts as a failed trial; only configuration and capture errors abort.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{capture_still, capture_video, preset_names};
use crate::conceal::render_sequence;
use crate::conceal::{BlinkMode, ObjectKind, Polarity, SequenceManifest};

use super::config::{CaptureSpec, ExperimentConfig, ObjectSpec};
use super::ops::{prepare_embedding, recover_frames};
use super::HarnessError;

pub const SWEEP_SCHEMA_VERSION: u32 = 1;

/// An experiment swept over capture presets (and optionally rect sizes).
/// Sweep presets replace any preset named in the experiment's capture spec;
/// the spec's explicit model fields still apply underneath each preset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub experiment: ExperimentConfig,
    #[serde(default = "default_presets")]
    pub presets: Vec<String>,
    /// Rect edge lengths to sweep; requires a rect object.
    #[serde(default)]
    pub rect_sizes: Vec<usize>,
}

fn default_schema_version() -> u32 {
    SWEEP_SCHEMA_VERSION
}

fn default_presets() -> Vec<String> {
    vec!["identity".into()]
}

impl SweepConfig {
    pub fn new(experiment: ExperimentConfig) -> Self {
        SweepConfig {
            schema_version: SWEEP_SCHEMA_VERSION,
            experiment,
            presets: default_presets(),
            rect_sizes: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema_version > SWEEP_SCHEMA_VERSION {
            return Err(HarnessError::UnsupportedSchema(self.schema_version));
        }
        if self.presets.is_empty() {
            return Err(HarnessError::ConfigConflict("presets must not be empty"));
        }
        if !self.rect_sizes.is_empty() && !matches!(self.experiment.object, ObjectSpec::Rect { .. })
        {
            return Err(HarnessError::ConfigConflict("rect_sizes requires a rect object"));
        }
        self.experiment.validate()
    }

    pub fn from_json(json: &str) -> Result<Self, HarnessError> {
        let cfg: SweepConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// One line of the recovery-rate report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub object_kind: ObjectKind,
    pub polarity: Polarity,
    pub mode: BlinkMode,
    pub contrast_pct: f64,
    pub delta: u8,
    pub preset: String,
    pub scale: f64,
    pub blur_sigma: f64,
    pub noise_sigma: f64,
    pub trials: u32,
    /// For symbols, matching decodes; for text/image, trials meeting the
    /// pixel-accuracy bar. Empty when the metric selection excludes it.
    pub decode_rate_pct: Option<f64>,
    /// Mean over trials that produced a measurement; symbols only.
    pub mean_module_accuracy_pct: Option<f64>,
    pub at_risk: bool,
}

const HEADERS: [&str; 13] = [
    "object_kind",
    "polarity",
    "mode",
    "contrast_pct",
    "delta",
    "preset",
    "scale",
    "blur_sigma",
    "noise_sigma",
    "trials",
    "decode_rate_pct",
    "mean_module_accuracy_pct",
    "at_risk",
];

impl ReportRow {
    fn record(&self) -> [String; 13] {
        fn opt(value: Option<f64>) -> String {
            value.map_or(String::new(), |v| format!("{v:.4}"))
        }
        [
            self.object_kind.to_string(),
            self.polarity.to_string(),
            self.mode.to_string(),
            format!("{:.4}", self.contrast_pct),
            self.delta.to_string(),
            self.preset.clone(),
            format!("{:.4}", self.scale),
            format!("{:.4}", self.blur_sigma),
            format!("{:.4}", self.noise_sigma),
            self.trials.to_string(),
            opt(self.decode_rate_pct),
            opt(self.mean_module_accuracy_pct),
            self.at_risk.to_string(),
        ]
    }
}

/// Run every (variant, preset) cell of the sweep and return the rows sorted
/// by preset severity (nearest first), then by contrast.
pub fn run_sweep(cfg: &SweepConfig, allow_at_risk: bool) -> Result<Vec<ReportRow>, HarnessError> {
    cfg.validate()?;
    let variants: Vec<ExperimentConfig> = if cfg.rect_sizes.is_empty() {
        vec![cfg.experiment.clone()]
    } else {
        cfg.rect_sizes
            .iter()
            .map(|&size| {
                let mut exp = cfg.experiment.clone();
                exp.object = ObjectSpec::Rect { size };
                exp
            })
            .collect()
    };

    let mut rows = Vec::new();
    for exp in &variants {
        let prep = prepare_embedding(exp, allow_at_risk)?;
        let sequence =
            render_sequence(&prep.screen, &prep.object, &prep.plan, prep.duration_frames)?;
        let manifest = SequenceManifest::describe(
            &prep.plan,
            (prep.object.width(), prep.object.height()),
            sequence.frame_count(),
        );
        let base_run = prep.run_manifest();

        for preset in &cfg.presets {
            let spec =
                CaptureSpec { preset: Some(preset.clone()), model: exp.capture.model.clone() };
            let mut successes = 0u32;
            let mut accuracy_sum = 0.0;
            let mut accuracy_count = 0u32;
            let mut row_model = None;

            for trial in 0..exp.trials {
                let model = spec.resolve(exp.base_seed + u64::from(trial))?;
                let frames = if sequence.frame_count() == 1 {
                    vec![capture_still(&sequence.frames()[0], &model)?.image]
                } else {
                    capture_video(&sequence, &model)?.frames
                };
                let mut run = base_run.clone();
                run.captured_frame_count = Some(frames.len());
                run.capture = Some(model);
                if row_model.is_none() {
                    row_model = run.capture.clone();
                }

                // An Err means the receiver got nothing usable: a failed trial.
                let recovered = recover_frames(
                    &frames,
                    &run,
                    &manifest,
                    &exp.recon,
                    exp.locate,
                    None,
                    Some(&prep.object),
                );
                if let Ok(outcome) = recovered {
                    if outcome.success() {
                        successes += 1;
                    }
                    if let Some(acc) = outcome.module_accuracy_pct {
                        accuracy_sum += acc;
                        accuracy_count += 1;
                    }
                }
            }

            let model = row_model.expect("trials >= 1 is validated");
            rows.push(ReportRow {
                object_kind: prep.kind,
                polarity: exp.polarity,
                mode: exp.mode,
                contrast_pct: prep.plan.effective_contrast_pct(),
                delta: prep.plan.delta(),
                preset: preset.clone(),
                scale: model.scale,
                blur_sigma: model.blur_sigma,
                noise_sigma: model.noise_sigma,
                trials: exp.trials,
                decode_rate_pct: exp
                    .metrics
                    .wants_decode_rate()
                    .then(|| 100.0 * f64::from(successes) / f64::from(exp.trials)),
                mean_module_accuracy_pct: (exp.metrics.wants_accuracy() && accuracy_count > 0)
                    .then(|| accuracy_sum / f64::from(accuracy_count)),
                at_risk: prep.at_risk,
            });
        }
    }

    let severity: Vec<&str> = preset_names();
    let rank = |name: &str| severity.iter().position(|n| *n == name).unwrap_or(usize::MAX);
    rows.sort_by(|a, b| {
        rank(&a.preset).cmp(&rank(&b.preset)).then(a.contrast_pct.total_cmp(&b.contrast_pct))
    });
    Ok(rows)
}

/// Write `rows` as CRLF-terminated CSV with a fixed header.
pub fn write_report(path: &Path, rows: &[ReportRow]) -> Result<(), HarnessError> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_path(path)?;
    writer.write_record(HEADERS)?;
    for row in rows {
        writer.write_record(row.record())?;
    }
    writer.flush()?;
    Ok(())
}

/// Run the sweep and write `report.csv` under `out_dir`.
pub fn cmd_evaluate(
    cfg: &SweepConfig,
    out_dir: &Path,
    allow_at_risk: bool,
) -> Result<(PathBuf, Vec<ReportRow>), HarnessError> {
    let rows = run_sweep(cfg, allow_at_risk)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join("report.csv");
    write_report(&path, &rows)?;
    Ok((path, rows))
}
