//! Projective frame warping: unit-square-to-quad homography, applied by
//! inverse mapping with bilinear sampling and clamp-to-edge.

use super::model::WarpQuad;

/// 3x3 projective transform over normalized coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Homography(pub [[f64; 3]; 3]);

impl Homography {
    /// The map sending the unit square's corners (TL, TR, BR, BL order) onto
    /// the quad. Square-to-quad has a closed form: solve the two projective
    /// denominators from the corner sums, then read the rest off the edges.
    pub(crate) fn unit_square_to_quad(q: &WarpQuad) -> Homography {
        let (x0, y0) = q.top_left;
        let (x1, y1) = q.top_right;
        let (x2, y2) = q.bottom_right;
        let (x3, y3) = q.bottom_left;
        let sx = x0 - x1 + x2 - x3;
        let sy = y0 - y1 + y2 - y3;
        if sx == 0.0 && sy == 0.0 {
            return Homography([[x1 - x0, x3 - x0, x0], [y1 - y0, y3 - y0, y0], [0.0, 0.0, 1.0]]);
        }
        let dx1 = x1 - x2;
        let dx2 = x3 - x2;
        let dy1 = y1 - y2;
        let dy2 = y3 - y2;
        let den = dx1 * dy2 - dx2 * dy1;
        let g = (sx * dy2 - dx2 * sy) / den;
        let h = (dx1 * sy - sx * dy1) / den;
        Homography([
            [x1 - x0 + g * x1, x3 - x0 + h * x3, x0],
            [y1 - y0 + g * y1, y3 - y0 + h * y3, y0],
            [g, h, 1.0],
        ])
    }

    /// Inverse via the adjugate; `None` when the map is not invertible
    /// (degenerate quad) or produced non-finite coefficients.
    pub(crate) fn invert(&self) -> Option<Homography> {
        let m = &self.0;
        let cof = |r1: usize, r2: usize, c1: usize, c2: usize| {
            m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
        };
        let det = m[0][0] * cof(1, 2, 1, 2) - m[0][1] * cof(1, 2, 0, 2) + m[0][2] * cof(1, 2, 0, 1);
        if !det.is_finite() || det.abs() < 1e-12 {
            return None;
        }
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        let mut out = [[0.0f64; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let v = adj[r][c] / det;
                if !v.is_finite() {
                    return None;
                }
                out[r][c] = v;
            }
        }
        Some(Homography(out))
    }

    pub(crate) fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.0;
        let w = m[2][0] * x + m[2][1] * y + m[2][2];
        ((m[0][0] * x + m[0][1] * y + m[0][2]) / w, (m[1][0] * x + m[1][1] * y + m[1][2]) / w)
    }
}

/// Bilinear sample with coordinates clamped to the image border.
pub(crate) fn bilinear_clamped(plane: &[f64], w: usize, h: usize, x: f64, y: f64) -> f64 {
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let top = plane[y0 * w + x0] * (1.0 - fx) + plane[y0 * w + x1] * fx;
    let bottom = plane[y1 * w + x0] * (1.0 - fx) + plane[y1 * w + x1] * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Warp the plane so the frame corners land on `quad`. Output pixel centers
/// are pulled back through the inverse map; the caller guarantees
/// invertibility (model validation).
pub(crate) fn warp_plane(plane: &[f64], w: usize, h: usize, quad: &WarpQuad) -> Vec<f64> {
    let inverse = Homography::unit_square_to_quad(quad)
        .invert()
        .expect("validated model has invertible warp");
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let u = (x as f64 + 0.5) / w as f64;
            let v = (y as f64 + 0.5) / h as f64;
            let (su, sv) = inverse.apply(u, v);
            let sx = su * w as f64 - 0.5;
            let sy = sv * h as f64 - 0.5;
            out[y * w + x] = bilinear_clamped(plane, w, h, sx, sy);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn assert_close(a: (f64, f64), b: (f64, f64), tol: f64) {
        assert!((a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn homography_hits_all_four_corners() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut jitter = |base: (f64, f64)| {
                (base.0 + rng.random_range(-0.2..0.2), base.1 + rng.random_range(-0.2..0.2))
            };
            let quad = WarpQuad {
                top_left: jitter((0.0, 0.0)),
                top_right: jitter((1.0, 0.0)),
                bottom_right: jitter((1.0, 1.0)),
                bottom_left: jitter((0.0, 1.0)),
            };
            let hom = Homography::unit_square_to_quad(&quad);
            let square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            for (src, dst) in square.iter().zip(quad.corners()) {
                assert_close(hom.apply(src.0, src.1), dst, 1e-9);
            }
            // Inverse composes to the identity on a grid.
            let inv = hom.invert().expect("jittered quad stays invertible");
            for gy in 0..5 {
                for gx in 0..5 {
                    let p = (gx as f64 / 4.0, gy as f64 / 4.0);
                    let there = hom.apply(p.0, p.1);
                    assert_close(inv.apply(there.0, there.1), p, 1e-9);
                }
            }
        }
    }

    #[test]
    fn identity_quad_gives_identity_matrix() {
        let hom = Homography::unit_square_to_quad(&WarpQuad::IDENTITY);
        assert_close(hom.apply(0.3, 0.7), (0.3, 0.7), 1e-15);
    }

    #[test]
    fn degenerate_quad_not_invertible() {
        let line = WarpQuad {
            top_left: (0.0, 0.0),
            top_right: (1.0, 1.0),
            bottom_right: (0.5, 0.5),
            bottom_left: (0.2, 0.2),
        };
        assert!(Homography::unit_square_to_quad(&line).invert().is_none());
    }

    #[test]
    fn translation_warp_shifts_content() {
        // Move every corner one pixel right: column x of the output should
        // show column x-1 of the input (clamped at the left edge).
        let (w, h) = (16, 8);
        let plane: Vec<f64> = (0..w * h).map(|i| f64::from((i % w) as u8) * 10.0).collect();
        let dx = 1.0 / w as f64;
        let quad = WarpQuad {
            top_left: (dx, 0.0),
            top_right: (1.0 + dx, 0.0),
            bottom_right: (1.0 + dx, 1.0),
            bottom_left: (dx, 1.0),
        };
        let out = warp_plane(&plane, w, h, &quad);
        for y in 0..h {
            for x in 1..w {
                assert!((out[y * w + x] - plane[y * w + x - 1]).abs() < 1e-9, "at ({x},{y})");
            }
            assert!((out[y * w] - plane[y * w]).abs() < 1e-9, "clamped edge");
        }
    }

    #[test]
    fn bilinear_interpolates_and_clamps() {
        // 2x1 plane: halfway between 0 and 100 is 50; outside clamps.
        let plane = [0.0, 100.0];
        assert_eq!(bilinear_clamped(&plane, 2, 1, 0.5, 0.0), 50.0);
        assert_eq!(bilinear_clamped(&plane, 2, 1, -5.0, 0.0), 0.0);
        assert_eq!(bilinear_clamped(&plane, 2, 1, 7.0, 3.0), 100.0);
    }
}
