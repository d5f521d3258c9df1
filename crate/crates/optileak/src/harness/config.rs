//! Experiment configuration: what to hide, where, and how to capture it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::CaptureModel;
use crate::codecs::{prepare_image_object, qr_encode, rasterize_text, Payload};
use crate::conceal::{BlinkMode, ObjectKind, Polarity};
use crate::imaging::{load_pnm, GrayImage};
use crate::reconstruct::ReconParams;

use super::HarnessError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// The payload-bearing object. `build` yields the binary mask (0 = ink,
/// 255 = background) plus the payload when the object is a symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectSpec {
    Qr {
        payload: Payload,
    },
    Text {
        text: String,
        #[serde(default = "default_text_scale")]
        scale: usize,
    },
    Image {
        path: PathBuf,
    },
    /// Filled square, the plain shape used for blink-detection sweeps.
    Rect {
        size: usize,
    },
}

fn default_text_scale() -> usize {
    1
}

impl ObjectSpec {
    pub fn kind(&self) -> ObjectKind {
        match self {
            ObjectSpec::Qr { .. } => ObjectKind::Qr,
            ObjectSpec::Text { .. } => ObjectKind::Text,
            ObjectSpec::Image { .. } | ObjectSpec::Rect { .. } => ObjectKind::Image,
        }
    }

    pub fn build(&self) -> Result<(GrayImage, Option<Payload>), HarnessError> {
        match self {
            ObjectSpec::Qr { payload } => {
                Ok((qr_encode(payload).to_image(1), Some(payload.clone())))
            }
            ObjectSpec::Text { text, scale } => Ok((rasterize_text(text, *scale)?, None)),
            ObjectSpec::Image { path } => {
                let img = load_pnm(path)?.into_gray();
                Ok((prepare_image_object(&img)?, None))
            }
            ObjectSpec::Rect { size } => {
                if *size == 0 {
                    return Err(HarnessError::EmptyRect);
                }
                Ok((GrayImage::filled(*size, *size, 0), None))
            }
        }
    }
}

/// Embedding knobs; everything optional falls back to gated defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanOverrides {
    /// Surface luma under the object; defaults to the screen fill.
    pub base: Option<u8>,
    /// Contrast step; defaults to the largest gate-compliant value.
    pub delta: Option<u8>,
    /// Placement; defaults to the first uniform region found.
    pub origin: Option<(usize, usize)>,
    pub scale: usize,
    pub display_fps: u32,
    /// Defaults to 1 frame for static plans, one second for blink plans.
    pub duration_frames: Option<u32>,
}

impl Default for PlanOverrides {
    fn default() -> Self {
        PlanOverrides {
            base: None,
            delta: None,
            origin: None,
            scale: 4,
            display_fps: 60,
            duration_frames: None,
        }
    }
}

/// The displayed scene: a flat synthetic screen, or a PGM/PPM from disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScreenSpec {
    pub width: usize,
    pub height: usize,
    /// Fill level for synthetic screens; defaults to the polarity's surface.
    pub luma: Option<u8>,
    pub path: Option<PathBuf>,
}

impl Default for ScreenSpec {
    fn default() -> Self {
        ScreenSpec { width: 320, height: 240, luma: None, path: None }
    }
}

impl ScreenSpec {
    pub fn build(&self, polarity: Polarity) -> Result<GrayImage, HarnessError> {
        if let Some(path) = &self.path {
            if self.luma.is_some() {
                return Err(HarnessError::ConfigConflict(
                    "screen path and screen luma are mutually exclusive",
                ));
            }
            return Ok(load_pnm(path)?.into_gray());
        }
        let luma = self.luma.unwrap_or(surface_luma(polarity));
        Ok(GrayImage::filled(self.width, self.height, luma))
    }
}

pub(super) fn surface_luma(polarity: Polarity) -> u8 {
    match polarity {
        Polarity::Bright => 255,
        Polarity::Dark => 0,
    }
}

/// Camera selection: an explicit model, optionally overlaid with a named
/// distance preset (the preset fixes scale and blur, the model keeps the rest).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaptureSpec {
    pub preset: Option<String>,
    pub model: CaptureModel,
}

impl CaptureSpec {
    pub fn resolve(&self, seed: u64) -> Result<CaptureModel, HarnessError> {
        let mut model = match &self.preset {
            Some(name) => CaptureModel::with_preset(name, self.model.clone())?,
            None => self.model.clone(),
        };
        model.seed = seed;
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metrics {
    DecodeRate,
    ModuleAccuracy,
    #[default]
    Both,
}

impl Metrics {
    pub fn wants_decode_rate(self) -> bool {
        matches!(self, Metrics::DecodeRate | Metrics::Both)
    }

    pub fn wants_accuracy(self) -> bool {
        matches!(self, Metrics::ModuleAccuracy | Metrics::Both)
    }
}

/// Which localization the receiver runs; oracle replays recorded geometry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocateChoice {
    #[default]
    Oracle,
    Finder,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub object: ObjectSpec,
    pub polarity: Polarity,
    #[serde(default)]
    pub mode: BlinkMode,
    #[serde(default)]
    pub plan: PlanOverrides,
    #[serde(default)]
    pub screen: ScreenSpec,
    #[serde(default)]
    pub capture: CaptureSpec,
    #[serde(default = "default_trials")]
    pub trials: u32,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub metrics: Metrics,
    #[serde(default)]
    pub recon: ReconParams,
    #[serde(default)]
    pub locate: LocateChoice,
}

fn default_schema_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn default_trials() -> u32 {
    30
}

impl ExperimentConfig {
    /// Smoke-test baseline: a bright static QR on a flat white screen through
    /// an identity camera.
    pub fn baseline(payload: Payload) -> Self {
        ExperimentConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            object: ObjectSpec::Qr { payload },
            polarity: Polarity::Bright,
            mode: BlinkMode::Static,
            plan: PlanOverrides::default(),
            screen: ScreenSpec::default(),
            capture: CaptureSpec::default(),
            trials: 1,
            base_seed: 0,
            metrics: Metrics::Both,
            recon: ReconParams::default(),
            locate: LocateChoice::Oracle,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schema_version > CONFIG_SCHEMA_VERSION {
            return Err(HarnessError::UnsupportedSchema(self.schema_version));
        }
        if self.trials == 0 {
            return Err(HarnessError::ZeroTrials);
        }
        self.recon.validate()?;
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
