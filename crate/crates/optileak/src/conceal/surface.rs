//! Locating a uniform region of the screen suitable for embedding.

use crate::imaging::GrayImage;

use super::profile::Polarity;
use super::ConcealError;

/// Top-left corner of the first `w`x`h` window (raster-scan order: left to
/// right, then top to bottom) whose pixels all lie within `uniformity_tol`
/// levels of 255 (bright) or 0 (dark). `None` when no such window exists.
///
/// Runs on an integral image of the per-pixel violation mask, so cost is
/// O(screen area) regardless of window size.
pub fn find_surface(
    screen: &GrayImage,
    w: usize,
    h: usize,
    polarity: Polarity,
    uniformity_tol: u8,
) -> Result<Option<(usize, usize)>, ConcealError> {
    if w == 0 || h == 0 {
        return Err(ConcealError::EmptyObject { w, h });
    }
    let (sw, sh) = (screen.width(), screen.height());
    if w > sw || h > sh {
        return Err(ConcealError::ObjectExceedsScreen { w, h, sw, sh });
    }

    let target: u8 = match polarity {
        Polarity::Bright => 255,
        Polarity::Dark => 0,
    };

    // integral[y][x] = number of violating pixels in the rectangle [0,x) x [0,y)
    let mut integral = vec![0u64; (sw + 1) * (sh + 1)];
    for y in 0..sh {
        let mut row_sum = 0u64;
        for x in 0..sw {
            if screen.get(x, y).abs_diff(target) > uniformity_tol {
                row_sum += 1;
            }
            integral[(y + 1) * (sw + 1) + (x + 1)] = integral[y * (sw + 1) + (x + 1)] + row_sum;
        }
    }
    let window_violations = |x: usize, y: usize| -> u64 {
        let at = |ix: usize, iy: usize| integral[iy * (sw + 1) + ix];
        at(x + w, y + h) + at(x, y) - at(x + w, y) - at(x, y + h)
    };

    for y in 0..=(sh - h) {
        for x in 0..=(sw - w) {
            if window_violations(x, y) == 0 {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    /// Exhaustive window scan in raster order; the specification of
    /// `find_surface`, kept dumb on purpose.
    fn brute_force(
        screen: &GrayImage,
        w: usize,
        h: usize,
        polarity: Polarity,
        tol: u8,
    ) -> Option<(usize, usize)> {
        let target: u8 = match polarity {
            Polarity::Bright => 255,
            Polarity::Dark => 0,
        };
        for y in 0..=(screen.height() - h) {
            for x in 0..=(screen.width() - w) {
                let uniform = (0..h)
                    .all(|dy| (0..w).all(|dx| screen.get(x + dx, y + dy).abs_diff(target) <= tol));
                if uniform {
                    return Some((x, y));
                }
            }
        }
        None
    }

    #[test]
    fn uniform_screen_hits_origin() {
        let screen = GrayImage::filled(64, 48, 255);
        assert_eq!(find_surface(&screen, 10, 10, Polarity::Bright, 0).unwrap(), Some((0, 0)));
        assert_eq!(find_surface(&screen, 10, 10, Polarity::Dark, 0).unwrap(), None);
    }

    #[test]
    fn finds_isolated_patch() {
        // 40x40 patch of 254s at (100,50) on an otherwise black screen.
        let mut screen = GrayImage::filled(150, 100, 0);
        for y in 50..90 {
            for x in 100..140 {
                screen.set(x, y, 254);
            }
        }
        assert_eq!(find_surface(&screen, 32, 32, Polarity::Bright, 4).unwrap(), Some((100, 50)));
        // Tolerance 0 excludes the 254 patch.
        assert_eq!(find_surface(&screen, 32, 32, Polarity::Bright, 0).unwrap(), None);
        // The black remainder is not uniformly dark in any 32x32 window that
        // overlaps the patch, but plenty of windows avoid it.
        assert_eq!(find_surface(&screen, 32, 32, Polarity::Dark, 0).unwrap(), Some((0, 0)));
    }

    #[test]
    fn rejects_window_problems() {
        let screen = GrayImage::filled(20, 20, 255);
        assert!(matches!(
            find_surface(&screen, 21, 5, Polarity::Bright, 0),
            Err(ConcealError::ObjectExceedsScreen { .. })
        ));
        assert!(matches!(
            find_surface(&screen, 0, 5, Polarity::Bright, 0),
            Err(ConcealError::EmptyObject { .. })
        ));
    }

    #[test]
    fn window_spanning_full_screen() {
        let screen = GrayImage::filled(33, 21, 254);
        assert_eq!(find_surface(&screen, 33, 21, Polarity::Bright, 1).unwrap(), Some((0, 0)));
        assert_eq!(find_surface(&screen, 33, 21, Polarity::Bright, 0).unwrap(), None);
    }

    #[test]
    fn matches_brute_force_on_random_screens() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_FACE);
        let palette = [0u8, 1, 3, 250, 253, 255];
        for case in 0..60 {
            let sw = rng.random_range(8..40);
            let sh = rng.random_range(8..30);
            let data: Vec<u8> =
                (0..sw * sh).map(|_| palette[rng.random_range(0..palette.len())]).collect();
            let screen = GrayImage::new(sw, sh, data).unwrap();
            let w = rng.random_range(1..=sw);
            let h = rng.random_range(1..=sh);
            let tol = [0u8, 2, 4][rng.random_range(0..3)];
            for polarity in [Polarity::Bright, Polarity::Dark] {
                let fast = find_surface(&screen, w, h, polarity, tol).unwrap();
                let slow = brute_force(&screen, w, h, polarity, tol);
                assert_eq!(fast, slow, "case {case}: {w}x{h} {polarity} tol {tol}");
                if let Some((x, y)) = fast {
                    // Re-check the uniformity predicate verbatim.
                    let target = match polarity {
                        Polarity::Bright => 255,
                        Polarity::Dark => 0,
                    };
                    for dy in 0..h {
                        for dx in 0..w {
                            assert!(screen.get(x + dx, y + dy).abs_diff(target) <= tol);
                        }
                    }
                }
            }
        }
    }
}
