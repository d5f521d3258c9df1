//! Pixel-accuracy scoring for text and bitmap objects.
//!
//! QR objects are scored by module accuracy and RS decode; text and image
//! objects have no code words, so the reconstruction is binarized and each
//! object cell is compared against the source mask.

use crate::conceal::Polarity;
use crate::imaging::{otsu_threshold, GrayImage};

use super::HarnessError;

/// A non-symbol object counts as recovered when at least this share of its
/// cells binarize to the right class.
pub const PIXEL_SUCCESS_THRESHOLD_PCT: f64 = 95.0;

/// Fraction (percent) of mask cells whose binarized reconstruction matches.
/// `origin`/`pitch` place the mask grid in `recon` pixels; under dark
/// polarity the ink is the brighter class.
pub fn pixel_accuracy(
    recon: &GrayImage,
    mask: &GrayImage,
    origin: (f64, f64),
    pitch: f64,
    polarity: Polarity,
) -> Result<f64, HarnessError> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(HarnessError::InvalidPitch(pitch));
    }
    let level = otsu_threshold(recon).map_err(|_| HarnessError::FlatReconstruction)?;
    let (w, h) = (recon.width() as f64, recon.height() as f64);
    let mut matches = 0usize;
    let total = mask.width() * mask.height();
    for row in 0..mask.height() {
        for col in 0..mask.width() {
            let cx = origin.0 + (col as f64 + 0.5) * pitch;
            let cy = origin.1 + (row as f64 + 0.5) * pitch;
            if !(cx >= 0.0 && cx < w && cy >= 0.0 && cy < h) {
                return Err(HarnessError::ObjectOutsideCapture { x: cx, y: cy });
            }
            let (px, py) = (cx.round() as isize, cy.round() as isize);
            let mut sum = 0u32;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    sum += u32::from(recon.get_clamped(px + dx, py + dy));
                }
            }
            let mean = sum as f64 / 9.0;
            let sampled_ink = match polarity {
                Polarity::Bright => mean <= f64::from(level),
                Polarity::Dark => mean > f64::from(level),
            };
            let mask_ink = mask.get(col, row) == 0;
            if sampled_ink == mask_ink {
                matches += 1;
            }
        }
    }
    Ok(100.0 * matches as f64 / total as f64)
}
