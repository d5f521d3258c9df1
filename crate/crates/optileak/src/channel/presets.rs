//! Named distance presets: calibration knobs mapping viewing distance to
//! (scale, blur) severity, compiled in from `presets/distance.json`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::model::CaptureModel;
use super::ChannelError;

const PRESET_FILE: &str = include_str!("../../presets/distance.json");
const PRESET_SCHEMA_VERSION: u32 = 1;

/// The degradation a viewing distance stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistancePreset {
    pub scale: f64,
    pub blur_sigma: f64,
}

#[derive(Deserialize)]
struct PresetFile {
    schema_version: u32,
    presets: HashMap<String, DistancePreset>,
}

fn table() -> &'static HashMap<String, DistancePreset> {
    static TABLE: OnceLock<HashMap<String, DistancePreset>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let file: PresetFile =
            serde_json::from_str(PRESET_FILE).expect("bundled preset file parses");
        assert_eq!(file.schema_version, PRESET_SCHEMA_VERSION, "bundled preset file schema");
        file.presets
    })
}

/// Look up a named preset.
pub fn preset(name: &str) -> Result<DistancePreset, ChannelError> {
    table().get(name).copied().ok_or_else(|| ChannelError::UnknownPreset(name.to_string()))
}

/// All preset names ordered by increasing severity: descending scale, then
/// ascending blur.
pub fn preset_names() -> Vec<&'static str> {
    let mut names: Vec<&'static str> = table().keys().map(String::as_str).collect();
    names.sort_by(|a, b| {
        let (pa, pb) = (table()[*a], table()[*b]);
        pb.scale
            .partial_cmp(&pa.scale)
            .unwrap()
            .then(pa.blur_sigma.partial_cmp(&pb.blur_sigma).unwrap())
            .then(a.cmp(b))
    });
    names
}

impl CaptureModel {
    /// A model with the preset's scale and blur; everything else stays at the
    /// given base (noise, gamma, timing, seed).
    pub fn with_preset(name: &str, base: CaptureModel) -> Result<CaptureModel, ChannelError> {
        let p = preset(name)?;
        Ok(CaptureModel { scale: p.scale, blur_sigma: p.blur_sigma, ..base })
    }
}
