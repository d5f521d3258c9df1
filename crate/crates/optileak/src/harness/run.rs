//! Ground-truth record saved beside a rendered or captured sequence.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::CaptureModel;
use crate::codecs::Payload;
use crate::conceal::{BlinkMode, ObjectKind, Polarity, StealthVerdict};

use super::HarnessError;

pub const RUN_SCHEMA_VERSION: u32 = 1;
pub const RUN_FILE: &str = "run.json";
pub const OBJECT_FILE: &str = "object.pgm";

/// Everything the receiver and the scorer need that the frame manifest does
/// not carry: payload ground truth, gate outcome, and (after capture) the
/// camera model the frames went through.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema_version: u32,
    pub object_kind: ObjectKind,
    /// Present for QR objects only; text/image truth is `object.pgm`.
    pub payload: Option<Payload>,
    pub polarity: Polarity,
    pub mode: BlinkMode,
    pub min_threshold_pct: f64,
    pub verdict: StealthVerdict,
    pub at_risk: bool,
    #[serde(default)]
    pub capture: Option<CaptureModel>,
    #[serde(default)]
    pub captured_frame_count: Option<usize>,
}

impl RunManifest {
    pub fn save(&self, dir: &Path) -> Result<(), HarnessError> {
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        std::fs::write(dir.join(RUN_FILE), json)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self, HarnessError> {
        let path = dir.join(RUN_FILE);
        let json = std::fs::read_to_string(&path)
            .map_err(|_| HarnessError::MissingRunManifest(path.clone()))?;
        let run: RunManifest = serde_json::from_str(&json)?;
        if run.schema_version > RUN_SCHEMA_VERSION {
            return Err(HarnessError::UnsupportedSchema(run.schema_version));
        }
        Ok(run)
    }
}

#[cfg(test)]
mod tests {
    use crate::conceal::StealthVerdict;

    use super::*;

    #[test]
    fn run_manifest_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let run = RunManifest {
            schema_version: RUN_SCHEMA_VERSION,
            object_kind: ObjectKind::Qr,
            payload: Some(Payload::numeric("77").unwrap()),
            polarity: Polarity::Dark,
            mode: BlinkMode::Blink30,
            min_threshold_pct: 0.39,
            verdict: StealthVerdict::Infeasible,
            at_risk: true,
            capture: Some(CaptureModel::identity(3)),
            captured_frame_count: Some(12),
        };
        run.save(dir.path()).unwrap();
        let back = RunManifest::load(dir.path()).unwrap();
        assert_eq!(back.payload, run.payload);
        assert!(back.at_risk);
        assert_eq!(back.captured_frame_count, Some(12));
    }

    #[test]
    fn missing_manifest_is_a_named_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(RunManifest::load(dir.path()), Err(HarnessError::MissingRunManifest(_))));
    }
}
