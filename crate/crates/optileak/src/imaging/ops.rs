//! Point and neighborhood operations: desaturation, histogram equalization,
//! Otsu thresholding, binarization, and parametric unsharp masking.
//!
//! Every integer result is round-half-away-from-zero, then clamped to [0,255].

use super::{GrayImage, ImageError, RgbImage};

/// Round half away from zero, clamp to [0,255].
#[inline]
pub(crate) fn round_clamp_u8(v: f64) -> u8 {
    // f64::round ties away from zero, matching div_round_half_away.
    v.round().clamp(0.0, 255.0) as u8
}

/// Luminosity grayscale: luma = round(0.299 R + 0.587 G + 0.114 B).
pub fn desaturate(img: &RgbImage) -> GrayImage {
    let mut data = Vec::with_capacity(img.width() * img.height());
    for chunk in img.data().chunks_exact(3) {
        let luma = 0.299 * chunk[0] as f64 + 0.587 * chunk[1] as f64 + 0.114 * chunk[2] as f64;
        data.push(round_clamp_u8(luma));
    }
    GrayImage::new(img.width(), img.height(), data).expect("dimensions from valid image")
}

/// Full-range histogram equalization.
///
/// out(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255) where cdf_min is
/// the smallest nonzero cdf value. Single-valued images pass through
/// unchanged. The map is monotone in the input value.
pub fn equalize_histogram(img: &GrayImage) -> GrayImage {
    let hist = img.histogram();
    let n = (img.width() * img.height()) as u64;

    let mut cdf = [0u64; 256];
    let mut acc = 0u64;
    for (v, c) in hist.iter().enumerate() {
        acc += c;
        cdf[v] = acc;
    }
    let cdf_min = cdf.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if cdf_min == n {
        // Single distinct value: the map is undefined, pass through.
        return img.clone();
    }

    let denom = (n - cdf_min) as f64;
    let mut lut = [0u8; 256];
    for v in 0..256 {
        let num = cdf[v].saturating_sub(cdf_min) as f64;
        lut[v] = round_clamp_u8(num / denom * 255.0);
    }
    let data = img.data().iter().map(|&v| lut[v as usize]).collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}

/// Between-class variance of the split (≤t vs >t), up to the constant N².
///
/// Class stats are exact integers; the final ratio is one f64 expression so
/// any exhaustive search over the same stats ranks thresholds identically.
fn between_class_score(c0: u64, s0: u64, n: u64, s: u64) -> f64 {
    let c1 = n - c0;
    if c0 == 0 || c1 == 0 {
        return 0.0;
    }
    // mean0 - mean1 = (s0*n - s*c0) / (c0*c1); score = c0*c1*(mean0-mean1)^2.
    let diff = s0 as i128 * n as i128 - s as i128 * c0 as i128;
    (diff as f64) * (diff as f64) / (c0 as f64 * c1 as f64)
}

/// Otsu's threshold: the smallest t in [0,254] maximizing the between-class
/// variance of the split (≤t vs >t).
pub fn otsu_threshold(img: &GrayImage) -> Result<u8, ImageError> {
    let hist = img.histogram();
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(ImageError::DegenerateHistogram);
    }
    let n: u64 = hist.iter().sum();
    let s: u64 = hist.iter().enumerate().map(|(v, &c)| v as u64 * c).sum();

    let mut best_t = 0u8;
    let mut best_score = f64::NEG_INFINITY;
    let (mut c0, mut s0) = (0u64, 0u64);
    for t in 0..=254u8 {
        c0 += hist[t as usize];
        s0 += t as u64 * hist[t as usize];
        let score = between_class_score(c0, s0, n, s);
        if score > best_score {
            best_score = score;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// Binary image: pixel > level maps to 255, otherwise 0.
pub fn binarize(img: &GrayImage, level: u8) -> GrayImage {
    let data = img.data().iter().map(|&v| if v > level { 255 } else { 0 }).collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}

/// Separable Gaussian blur on f64 samples, truncated at 3σ, clamp-to-edge.
/// σ ≤ 0 returns the input unchanged.
pub(crate) fn gaussian_blur_f64(data: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    assert_eq!(data.len(), width * height);
    if sigma <= 0.0 {
        return data.to_vec();
    }
    let radius = (3.0 * sigma).floor() as isize;
    if radius == 0 {
        return data.to_vec();
    }
    let mut weights = Vec::with_capacity(2 * radius as usize + 1);
    for i in -radius..=radius {
        weights.push((-((i * i) as f64) / (2.0 * sigma * sigma)).exp());
    }
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }

    let clamp_x = |x: isize| x.clamp(0, width as isize - 1) as usize;
    let clamp_y = |y: isize| y.clamp(0, height as isize - 1) as usize;

    let mut horiz = vec![0.0; data.len()];
    for y in 0..height {
        for x in 0..width as isize {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                acc += w * data[y * width + clamp_x(x + k as isize - radius)];
            }
            horiz[y * width + x as usize] = acc;
        }
    }
    let mut out = vec![0.0; data.len()];
    for y in 0..height as isize {
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                acc += w * horiz[clamp_y(y + k as isize - radius) * width + x];
            }
            out[y as usize * width + x] = acc;
        }
    }
    out
}

/// Parametric unsharp mask in blur-difference form.
///
/// blurred = Gaussian blur with σ = radius/3; out = clamp(img + amount·(img −
/// blurred)) at pixels where |img − blurred| ≥ threshold, otherwise the pixel
/// is left unchanged. Callers must pass radius ≥ 1 and amount > 0.
pub fn unsharp_mask(img: &GrayImage, radius: f64, amount: f64, threshold: u8) -> GrayImage {
    debug_assert!(radius >= 1.0);
    debug_assert!(amount > 0.0);
    let src = img.to_f64();
    let blurred = gaussian_blur_f64(&src, img.width(), img.height(), radius / 3.0);
    let data = src
        .iter()
        .zip(&blurred)
        .map(|(&p, &b)| {
            let d = p - b;
            if d.abs() >= threshold as f64 {
                round_clamp_u8(p + amount * d)
            } else {
                p as u8
            }
        })
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}
