//! The parameterized camera model and its validation.

use serde::{Deserialize, Serialize};

use super::warp::Homography;
use super::ChannelError;

/// Where the four frame corners land, in coordinates normalized to [0,1]².
/// The identity quad leaves every corner in place; anything else applies the
/// projective map sending the frame onto the quadrilateral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WarpQuad {
    pub top_left: (f64, f64),
    pub top_right: (f64, f64),
    pub bottom_right: (f64, f64),
    pub bottom_left: (f64, f64),
}

impl WarpQuad {
    pub const IDENTITY: WarpQuad = WarpQuad {
        top_left: (0.0, 0.0),
        top_right: (1.0, 0.0),
        bottom_right: (1.0, 1.0),
        bottom_left: (0.0, 1.0),
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn corners(&self) -> [(f64, f64); 4] {
        [self.top_left, self.top_right, self.bottom_right, self.bottom_left]
    }
}

impl Default for WarpQuad {
    fn default() -> Self {
        Self::IDENTITY
    }
}

/// Everything the capture simulator knows about the camera. `scale` is the
/// distance proxy (output pixels per input pixel), `blur_sigma` the optics
/// proxy, `noise_sigma` the sensor proxy; `exposure: None` means the shutter
/// stays open for the whole frame time `1/camera_fps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaptureModel {
    pub scale: f64,
    pub warp: WarpQuad,
    pub blur_sigma: f64,
    pub noise_sigma: f64,
    pub gamma: f64,
    pub camera_fps: u32,
    pub exposure: Option<f64>,
    pub seed: u64,
}

impl Default for CaptureModel {
    fn default() -> Self {
        CaptureModel {
            scale: 1.0,
            warp: WarpQuad::IDENTITY,
            blur_sigma: 0.0,
            noise_sigma: 0.0,
            gamma: 1.0,
            camera_fps: 30,
            exposure: None,
            seed: 0,
        }
    }
}

impl CaptureModel {
    /// The do-nothing camera: stills pass through bit-identically.
    pub fn identity(seed: u64) -> Self {
        CaptureModel { seed, ..Default::default() }
    }

    /// Shutter-open time in seconds; defaults to the full frame time.
    pub fn effective_exposure(&self) -> f64 {
        self.exposure.unwrap_or(1.0 / f64::from(self.camera_fps))
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err(ChannelError::InvalidScale(self.scale));
        }
        if !(self.blur_sigma >= 0.0 && self.blur_sigma.is_finite()) {
            return Err(ChannelError::InvalidBlur(self.blur_sigma));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(ChannelError::InvalidNoise(self.noise_sigma));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(ChannelError::InvalidGamma(self.gamma));
        }
        if self.camera_fps == 0 {
            return Err(ChannelError::ZeroCameraFps);
        }
        let max_exposure = 1.0 / f64::from(self.camera_fps);
        let exposure = self.effective_exposure();
        if !(exposure > 0.0 && exposure <= max_exposure) {
            return Err(ChannelError::InvalidExposure {
                exposure,
                max: max_exposure,
                fps: self.camera_fps,
            });
        }
        if !self.warp.is_identity()
            && Homography::unit_square_to_quad(&self.warp).invert().is_none()
        {
            return Err(ChannelError::DegenerateWarp);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_model_is_valid_identity() {
        let m = CaptureModel::default();
        m.validate().unwrap();
        assert!(m.warp.is_identity());
        assert_eq!(m.effective_exposure(), 1.0 / 30.0);
    }

    #[test]
    fn validation_catches_each_field() {
        let base = CaptureModel::identity(0);
        let cases: Vec<(CaptureModel, &str)> = vec![
            (CaptureModel { scale: 0.0, ..base.clone() }, "scale zero"),
            (CaptureModel { scale: 1.5, ..base.clone() }, "scale above 1"),
            (CaptureModel { blur_sigma: -0.1, ..base.clone() }, "negative blur"),
            (CaptureModel { noise_sigma: f64::NAN, ..base.clone() }, "nan noise"),
            (CaptureModel { gamma: 0.0, ..base.clone() }, "gamma zero"),
            (CaptureModel { camera_fps: 0, ..base.clone() }, "fps zero"),
            (CaptureModel { exposure: Some(0.05), ..base.clone() }, "exposure beyond frame time"),
            (CaptureModel { exposure: Some(0.0), ..base.clone() }, "exposure zero"),
        ];
        for (model, what) in cases {
            assert!(model.validate().is_err(), "{what} accepted");
        }
        // A collapsed quad is degenerate.
        let collapsed = WarpQuad {
            top_left: (0.5, 0.5),
            top_right: (0.5, 0.5),
            bottom_right: (0.5, 0.5),
            bottom_left: (0.5, 0.5),
        };
        assert!(matches!(
            CaptureModel { warp: collapsed, ..base }.validate(),
            Err(ChannelError::DegenerateWarp)
        ));
    }

    #[test]
    fn model_json_round_trip_with_defaults() {
        let parsed: CaptureModel = serde_json::from_str(r#"{"scale":0.5,"seed":7}"#).unwrap();
        assert_eq!(parsed.scale, 0.5);
        assert_eq!(parsed.seed, 7);
        assert_eq!(parsed.gamma, 1.0);
        assert!(parsed.warp.is_identity());
        assert!(serde_json::from_str::<CaptureModel>(r#"{"scael":0.5}"#).is_err());

        let full = CaptureModel {
            scale: 0.7,
            blur_sigma: 0.8,
            noise_sigma: 2.0,
            gamma: 1.1,
            camera_fps: 60,
            exposure: Some(1.0 / 120.0),
            seed: 42,
            ..CaptureModel::default()
        };
        let json = serde_json::to_string(&full).unwrap();
        assert_eq!(serde_json::from_str::<CaptureModel>(&json).unwrap(), full);
    }
}
