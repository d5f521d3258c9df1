//! The capture pipeline: warp → downscale → blur → gamma → noise → quantize.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::conceal::FrameSequence;
use crate::imaging::{gaussian_blur_f64, round_clamp_u8, GrayImage};

use super::model::CaptureModel;
use super::warp::warp_plane;
use super::ChannelError;

/// A still photograph plus the camera that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CapturedStill {
    pub image: GrayImage,
    pub model: CaptureModel,
}

/// A video recording plus the camera that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CapturedSequence {
    pub frames: Vec<GrayImage>,
    pub model: CaptureModel,
}

/// Exact area-average resampling to ceil(dims × scale). Each output pixel
/// averages the input rectangle it covers, fractional border pixels weighted
/// by coverage.
fn downscale_area(plane: &[f64], w: usize, h: usize, scale: f64) -> (Vec<f64>, usize, usize) {
    let ow = (w as f64 * scale).ceil() as usize;
    let oh = (h as f64 * scale).ceil() as usize;
    let inv = 1.0 / scale;
    let mut out = vec![0.0f64; ow * oh];
    for oy in 0..oh {
        let y0 = oy as f64 * inv;
        let y1 = ((oy + 1) as f64 * inv).min(h as f64);
        for ox in 0..ow {
            let x0 = ox as f64 * inv;
            let x1 = ((ox + 1) as f64 * inv).min(w as f64);
            let mut sum = 0.0;
            let mut area = 0.0;
            let mut iy = y0.floor() as usize;
            while (iy as f64) < y1 {
                let wy = (y1.min((iy + 1) as f64) - y0.max(iy as f64)).max(0.0);
                let mut ix = x0.floor() as usize;
                while (ix as f64) < x1 {
                    let wx = (x1.min((ix + 1) as f64) - x0.max(ix as f64)).max(0.0);
                    sum += wx * wy * plane[iy * w + ix];
                    area += wx * wy;
                    ix += 1;
                }
                iy += 1;
            }
            out[oy * ow + ox] = sum / area;
        }
    }
    (out, ow, oh)
}

/// Run one f64 plane through the spatial/sensor stages. `frame_index` selects
/// the per-frame random stream so parallel capture order cannot change noise.
fn still_pipeline(
    mut plane: Vec<f64>,
    mut w: usize,
    mut h: usize,
    model: &CaptureModel,
    frame_index: u64,
) -> GrayImage {
    if !model.warp.is_identity() {
        plane = warp_plane(&plane, w, h, &model.warp);
    }
    if model.scale < 1.0 {
        let (scaled, ow, oh) = downscale_area(&plane, w, h, model.scale);
        plane = scaled;
        w = ow;
        h = oh;
    }
    if model.blur_sigma > 0.0 {
        plane = gaussian_blur_f64(&plane, w, h, model.blur_sigma);
    }
    if model.gamma != 1.0 {
        for v in &mut plane {
            *v = 255.0 * (*v / 255.0).powf(model.gamma);
        }
    }
    if model.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
        rng.set_stream(frame_index);
        let normal = Normal::new(0.0, model.noise_sigma).expect("validated sigma");
        for v in &mut plane {
            *v += normal.sample(&mut rng);
        }
    }
    let data = plane.into_iter().map(round_clamp_u8).collect();
    GrayImage::new(w, h, data).expect("pipeline preserves non-empty dims")
}

/// Photograph a single frame. Deterministic given the model (including its
/// seed); the identity model returns the input bit-identically.
pub fn capture_still(
    frame: &GrayImage,
    model: &CaptureModel,
) -> Result<CapturedStill, ChannelError> {
    model.validate()?;
    let image = still_pipeline(frame.to_f64(), frame.width(), frame.height(), model, 0);
    Ok(CapturedStill { image, model: model.clone() })
}

/// Record a displayed sequence. Camera frame k opens its shutter at
/// k/camera_fps for the exposure time; every display frame overlapping that
/// window contributes proportionally to its overlap, which is what attenuates
/// blinking objects: a 50% on-fraction within the window halves the delta.
pub fn capture_video(
    sequence: &FrameSequence,
    model: &CaptureModel,
) -> Result<CapturedSequence, ChannelError> {
    model.validate()?;
    let display_fps = sequence.display_fps();
    if model.camera_fps > display_fps {
        return Err(ChannelError::CameraFasterThanDisplay {
            camera_fps: model.camera_fps,
            display_fps,
        });
    }

    // All times in display-frame units; one display frame = 1.0.
    let step = f64::from(display_fps) / f64::from(model.camera_fps);
    let window = model.effective_exposure() * f64::from(display_fps);
    let total = sequence.frame_count() as f64;
    // Tiny slack absorbs f64 representation error in fps ratios; capture
    // stays deterministic for identical inputs.
    const SLACK: f64 = 1e-9;
    if window > total + SLACK {
        return Err(ChannelError::SequenceTooShort { frames: sequence.frame_count() });
    }

    let (w, h) = sequence.dimensions();
    let mut frames = Vec::new();
    let mut k = 0u64;
    loop {
        let start = k as f64 * step;
        if start + window > total + SLACK {
            break;
        }
        let mut plane = vec![0.0f64; w * h];
        let first = start.floor() as usize;
        for (j, frame) in sequence.frames().iter().enumerate().skip(first) {
            let overlap = (start + window).min(j as f64 + 1.0) - start.max(j as f64);
            if overlap <= 0.0 {
                if j as f64 >= start + window {
                    break;
                }
                continue;
            }
            let weight = overlap / window;
            for (acc, &v) in plane.iter_mut().zip(frame.data()) {
                *acc += weight * f64::from(v);
            }
        }
        frames.push(still_pipeline(plane, w, h, model, k));
        k += 1;
    }
    Ok(CapturedSequence { frames, model: model.clone() })
}
