//! End-to-end experiment harness.
//!
//! Ties the other modules into four commands that mirror the attack stages:
//! [`cmd_conceal`] renders an embedded frame sequence to disk, [`cmd_capture`]
//! runs it through a capture model, [`cmd_reconstruct`] recovers the hidden
//! object from a captured directory, and [`cmd_roundtrip`] chains all three.
//! [`cmd_evaluate`] sweeps capture presets over repeated trials and writes a
//! CSV report of recovery rates.
//!
//! On-disk layout: each stage directory holds numbered `NNNN.pgm` frames, the
//! embedding ground truth (`manifest.json`), the object mask (`object.pgm`),
//! and a `run.json` carrying everything the next stage needs to interpret the
//! frames without re-reading the experiment config.

mod config;
mod ops;
mod run;
mod score;
mod sweep;

pub use config::{
    CaptureSpec, ExperimentConfig, LocateChoice, Metrics, ObjectSpec, PlanOverrides, ScreenSpec,
    CONFIG_SCHEMA_VERSION,
};
pub use ops::{
    cmd_capture, cmd_conceal, cmd_reconstruct, cmd_roundtrip, CaptureOutcome, ConcealOutcome,
    ReconstructOutcome, RoundtripOutcome, AT_RISK_DELTA,
};
pub use run::{RunManifest, OBJECT_FILE, RUN_FILE, RUN_SCHEMA_VERSION};
pub use score::{pixel_accuracy, PIXEL_SUCCESS_THRESHOLD_PCT};
pub use sweep::{cmd_evaluate, write_report, ReportRow, SweepConfig, SWEEP_SCHEMA_VERSION};

use std::path::PathBuf;

use crate::channel::ChannelError;
use crate::codecs::CodecError;
use crate::conceal::{ConcealError, StealthVerdict};
use crate::imaging::ImageError;
use crate::reconstruct::ReconError;

/// Errors from experiment configuration, staging, or scoring.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config schema version {0} is newer than this build supports")]
    UnsupportedSchema(u32),
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("conflicting config fields: {0}")]
    ConfigConflict(&'static str),
    #[error("rect object must have a nonzero size")]
    EmptyRect,
    #[error("no run manifest at {0}; stage the directory with conceal or capture first")]
    MissingRunManifest(PathBuf),
    #[error("no frame manifest at {0}")]
    MissingManifest(PathBuf),
    #[error("no object mask at {0}")]
    MissingObject(PathBuf),
    #[error("captured directory {0} records zero frames")]
    EmptyCapture(PathBuf),
    #[error("embedding rejected by stealth check: {verdict:?}")]
    StealthViolation { verdict: StealthVerdict },
    #[error("no uniform {w}x{h} surface region on the screen; pass an explicit origin")]
    NoSurface { w: usize, h: usize },
    #[error("pixel pitch {0} is too small to score")]
    InvalidPitch(f64),
    #[error("reconstruction is flat; nothing to score")]
    FlatReconstruction,
    #[error("object cell center ({x:.1}, {y:.1}) falls outside the captured image")]
    ObjectOutsideCapture { x: f64, y: f64 },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Conceal(#[from] ConcealError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Recon(#[from] ReconError),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
