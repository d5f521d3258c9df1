//! Receiver side of the channel: enhance a captured image until the faint
//! object separates from its background, find the symbol grid, sample the
//! modules, and decode.
//!
//! The still path is `reconstruct` -> `locate_symbol` -> `sample_symbol` ->
//! decode; the video path first runs `detect_object_frames` over the capture
//! and averages the frames that carry the object. `recover_from_still` and
//! `recover_from_sequence` tie the steps together and report the outcome.

mod detect;
mod locate;
mod pipeline;
mod recover;
mod sample;

pub use detect::{detect_object_frames, DEFAULT_DETECT_SENSITIVITY};
pub use locate::{locate_symbol, LocateMode, Rotation, SymbolGeometry};
pub use pipeline::{
    dump_stages, reconstruct, reconstruct_color, reconstruct_stages, ReconParams, Stage,
    SupplementaryKernel, UnsharpConfig,
};
pub(crate) use recover::average_frames;
pub use recover::{recover_from_sequence, recover_from_still, RecoverConfig, RecoveryReport};
pub use sample::{module_accuracy, sample_symbol};

use crate::imaging::ImageError;

#[derive(Debug, thiserror::Error)]
pub enum ReconError {
    #[error("{what} {value} is outside the supported range")]
    ParamOutOfRange { what: &'static str, value: f64 },
    #[error("supplementary kernel {0} listed more than once")]
    DuplicateKernel(&'static str),
    #[error("need at least 3 frames to detect object frames, got {got}")]
    TooFewFrames { got: usize },
    #[error("frame {index} is {w}x{h}, expected {ew}x{eh}")]
    MixedFrameSizes { index: usize, w: usize, h: usize, ew: usize, eh: usize },
    #[error("no finder patterns found")]
    FinderNotFound,
    #[error("found {0} finder patterns, expected 3")]
    AmbiguousFinders(usize),
    #[error("finder patterns are not axis-aligned")]
    NotAxisAligned,
    #[error("symbol geometry is degenerate")]
    InvalidGeometry,
    #[error("module ({row},{col}) center ({x:.1},{y:.1}) falls outside the image")]
    GeometryOutOfBounds { row: usize, col: usize, x: f64, y: f64 },
    #[error("sampled modules have no contrast to threshold")]
    FlatSamples,
    #[error("no frames carry the object")]
    NoObjectFrames,
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
