//! The transmitter: find a uniform surface, pick a contrast delta the viewer
//! cannot notice, stamp the object, and schedule its display frames.
//!
//! The flow mirrors how a sequence is produced end to end:
//!
//! 1. [`find_surface`] locates a bright or dark region big enough for the
//!    scaled object.
//! 2. [`max_delta_below`] quantizes the largest luma offset that stays
//!    strictly under the applicable perceptibility minimum
//!    ([`PERCEPTIBILITY_MINIMA`]); [`stealth_check`] gates any plan after the
//!    fact.
//! 3. [`embed`] stamps the object at `base - delta` on bright surfaces or
//!    `base + delta` on dark ones.
//! 4. [`schedule_blink`] and [`render_sequence`] spread the object over
//!    display frames, either statically or strobed at 60/30 Hz.
//!
//! Several dark-surface minima sit below one 8-bit luma step, so no compliant
//! integer delta exists for them; those cases surface as
//! [`StealthVerdict::Infeasible`] values rather than errors, and callers
//! decide whether to proceed at delta 1 anyway.

mod plan;
mod profile;
mod sequence;
mod surface;

pub use plan::{schedule_blink, BlinkSchedule, ConcealmentPlan};
pub use profile::{
    builtin_profile, contrast_percent, max_delta_below, stealth_check, BlinkMode, ObjectKind,
    Polarity, StealthProfile, StealthVerdict, PERCEPTIBILITY_MINIMA,
};
pub use sequence::{
    embed, frame_file_name, load_sequence, render_sequence, save_sequence, FrameSequence,
    SequenceManifest, MANIFEST_SCHEMA_VERSION,
};
pub use surface::find_surface;

use thiserror::Error;

use crate::imaging::ImageError;

/// Failures constructing plans, placing objects, or moving sequences on disk.
#[derive(Debug, Error)]
pub enum ConcealError {
    #[error("delta must be at least 1")]
    ZeroDelta,
    #[error("scale must be at least 1 pixel per cell")]
    ZeroScale,
    #[error("display rate must be positive")]
    ZeroFps,
    #[error("{polarity} embedding at base {base} with delta {delta} leaves [0,255]")]
    LumaOutOfRange { polarity: Polarity, base: u8, delta: u8 },
    #[error("perceptibility threshold must lie in (0,100], got {0}")]
    InvalidThreshold(f64),
    #[error("invalid blink schedule: {0}")]
    InvalidSchedule(&'static str),
    #[error("display rate {0} Hz unsupported; standard schedules exist for 60 and 120 Hz")]
    UnsupportedDisplayFps(u32),
    #[error("{mode} cannot be scheduled on a {display_fps} Hz display")]
    UnschedulableMode { mode: BlinkMode, display_fps: u32 },
    #[error("object window {w}x{h} is empty")]
    EmptyObject { w: usize, h: usize },
    #[error("object window {w}x{h} exceeds the {sw}x{sh} screen")]
    ObjectExceedsScreen { w: usize, h: usize, sw: usize, sh: usize },
    #[error("scaled object {w}x{h} at ({x},{y}) overflows the {sw}x{sh} screen")]
    OutOfBounds { x: usize, y: usize, w: usize, h: usize, sw: usize, sh: usize },
    #[error("object images must be binary (0 or 255); found {value} at cell ({x},{y})")]
    NonBinaryObject { x: usize, y: usize, value: u8 },
    #[error("frame sequence must contain at least one frame")]
    EmptySequence,
    #[error("frame {index} is {w}x{h}, expected {ew}x{eh}")]
    MixedFrameSizes { index: usize, w: usize, h: usize, ew: usize, eh: usize },
    #[error("manifest records {recorded} frames but the sequence has {actual}")]
    ManifestMismatch { recorded: usize, actual: usize },
    #[error("unsupported manifest schema version {0}")]
    UnsupportedSchema(u32),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("sequence i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("manifest encoding: {0}")]
    Json(#[from] serde_json::Error),
}
