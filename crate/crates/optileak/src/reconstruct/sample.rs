//! Reading module values off a located grid.

use crate::codecs::{SymbolMatrix, SYMBOL_SIZE};
use crate::imaging::{otsu_threshold, GrayImage};

use super::{ReconError, SymbolGeometry};

/// Reads the 29x29 module grid: each module is the mean of a 3x3 patch at its
/// center, and a module is dark when its mean falls at or below the Otsu level
/// of all 841 means.
pub fn sample_symbol(
    img: &GrayImage,
    geometry: &SymbolGeometry,
) -> Result<SymbolMatrix, ReconError> {
    geometry.validate()?;
    let (w, h) = (img.width() as f64, img.height() as f64);
    let mut means = Vec::with_capacity(SYMBOL_SIZE * SYMBOL_SIZE);
    for row in 0..SYMBOL_SIZE {
        for col in 0..SYMBOL_SIZE {
            let (cx, cy) = geometry.module_center(row, col);
            if !(cx >= 0.0 && cx < w && cy >= 0.0 && cy < h) {
                return Err(ReconError::GeometryOutOfBounds { row, col, x: cx, y: cy });
            }
            let (px, py) = (cx.round() as isize, cy.round() as isize);
            let mut sum = 0u32;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    sum += u32::from(img.get_clamped(px + dx, py + dy));
                }
            }
            means.push(((sum as f64 / 9.0).round() as u32).min(255) as u8);
        }
    }

    let mean_img =
        GrayImage::new(SYMBOL_SIZE, SYMBOL_SIZE, means.clone()).expect("dimensions match buffer");
    let level = otsu_threshold(&mean_img).map_err(|_| ReconError::FlatSamples)?;
    Ok(SymbolMatrix::from_fn(|row, col| means[row * SYMBOL_SIZE + col] <= level))
}

/// Percentage of the 841 modules on which the two matrices agree.
pub fn module_accuracy(a: &SymbolMatrix, b: &SymbolMatrix) -> f64 {
    let mut equal = 0usize;
    for row in 0..SYMBOL_SIZE {
        for col in 0..SYMBOL_SIZE {
            if a.get(row, col) == b.get(row, col) {
                equal += 1;
            }
        }
    }
    100.0 * equal as f64 / (SYMBOL_SIZE * SYMBOL_SIZE) as f64
}

#[cfg(test)]
mod tests {
    use crate::codecs::{qr_encode, Payload};
    use crate::reconstruct::Rotation;

    use super::*;

    fn rendered(scale: usize, margin: usize) -> (SymbolMatrix, GrayImage) {
        let truth = qr_encode(&Payload::numeric("31415926535897932384").unwrap());
        let tile = truth.to_image(scale);
        let side = SYMBOL_SIZE * scale + 2 * margin;
        let mut canvas = GrayImage::filled(side, side, 255);
        for y in 0..tile.height() {
            for x in 0..tile.width() {
                canvas.set(margin + x, margin + y, tile.get(x, y));
            }
        }
        (truth, canvas)
    }

    fn exact_geometry(scale: usize, margin: usize) -> SymbolGeometry {
        SymbolGeometry {
            origin: (margin as f64, margin as f64),
            pitch: (scale as f64, scale as f64),
            rotation: Rotation::R0,
        }
    }

    #[test]
    fn exact_geometry_reads_every_module() {
        let (truth, canvas) = rendered(8, 16);
        let sampled = sample_symbol(&canvas, &exact_geometry(8, 16)).unwrap();
        assert_eq!(module_accuracy(&sampled, &truth), 100.0);
    }

    #[test]
    fn small_offset_barely_degrades() {
        let (truth, canvas) = rendered(8, 16);
        let mut g = exact_geometry(8, 16);
        g.origin = (16.0 + 0.4 * 8.0, 16.0 - 0.4 * 8.0);
        let sampled = sample_symbol(&canvas, &g).unwrap();
        assert!(module_accuracy(&sampled, &truth) >= 99.0);
    }

    #[test]
    fn wrong_pitch_degrades_accuracy() {
        let (truth, canvas) = rendered(8, 40);
        let mut g = exact_geometry(8, 40);
        g.pitch = (8.8, 8.8);
        let sampled = sample_symbol(&canvas, &g).unwrap();
        let acc = module_accuracy(&sampled, &truth);
        assert!(acc < 100.0, "accuracy {acc}");
    }

    #[test]
    fn out_of_bounds_center_is_rejected() {
        let (_, canvas) = rendered(4, 0);
        let mut g = exact_geometry(4, 0);
        g.origin = (-30.0, 0.0);
        assert!(matches!(sample_symbol(&canvas, &g), Err(ReconError::GeometryOutOfBounds { .. })));
    }

    #[test]
    fn flat_image_has_no_contrast() {
        let canvas = GrayImage::filled(200, 200, 128);
        let g = exact_geometry(4, 20);
        assert!(matches!(sample_symbol(&canvas, &g), Err(ReconError::FlatSamples)));
    }

    #[test]
    fn accuracy_identities() {
        let truth = qr_encode(&Payload::bytes(*b"identities").unwrap());
        assert_eq!(module_accuracy(&truth, &truth), 100.0);
        assert_eq!(module_accuracy(&truth, &truth.invert()), 0.0);
        let mut one_off = truth.clone();
        one_off.set(14, 14, !one_off.get(14, 14));
        let acc = module_accuracy(&truth, &one_off);
        assert!((acc - 100.0 * 840.0 / 841.0).abs() < 1e-12);
    }
}
