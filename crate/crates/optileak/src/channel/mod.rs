//! The camera stand-in: what a remote camera does to displayed frames.
//!
//! [`capture_still`] runs the fixed degradation pipeline — projective warp,
//! area-average downscale, Gaussian blur, gamma, additive Gaussian noise,
//! quantization — and [`capture_video`] prefixes it with temporal exposure
//! integration, which is what dilutes blinking objects: a shutter open across
//! on and off frames records only the on-fraction of the contrast delta.
//!
//! Everything is deterministic given the [`CaptureModel`], whose seed feeds a
//! per-frame random stream; capturing frames in any order gives identical
//! noise. Named [`preset`]s map viewing distances to (scale, blur) pairs.

mod model;
mod pipeline;
mod presets;
mod warp;

pub use model::{CaptureModel, WarpQuad};
pub use pipeline::{capture_still, capture_video, CapturedSequence, CapturedStill};
pub use presets::{preset, preset_names, DistancePreset};

use thiserror::Error;

/// Invalid camera parameters or impossible capture geometry.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("scale must lie in (0,1], got {0}")]
    InvalidScale(f64),
    #[error("blur_sigma must be finite and non-negative, got {0}")]
    InvalidBlur(f64),
    #[error("noise_sigma must be finite and non-negative, got {0}")]
    InvalidNoise(f64),
    #[error("gamma must be finite and positive, got {0}")]
    InvalidGamma(f64),
    #[error("camera_fps must be at least 1")]
    ZeroCameraFps,
    #[error("exposure {exposure} s outside (0, {max} s] at {fps} fps")]
    InvalidExposure { exposure: f64, max: f64, fps: u32 },
    #[error("warp quadrilateral is degenerate")]
    DegenerateWarp,
    #[error("camera at {camera_fps} fps cannot sample a {display_fps} fps display")]
    CameraFasterThanDisplay { camera_fps: u32, display_fps: u32 },
    #[error("sequence of {frames} display frames is shorter than one exposure window")]
    SequenceTooShort { frames: usize },
    #[error("unknown capture preset {0:?}")]
    UnknownPreset(String),
}
