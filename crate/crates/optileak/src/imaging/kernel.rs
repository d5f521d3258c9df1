//! Integer convolution kernels and the spatial convolution operator.
//!
//! Kernels store integer numerators plus a common divisor so that
//! flat-preservation (scaled coefficient sum exactly 1) can be checked in
//! exact arithmetic rather than floating point.

use super::{GrayImage, ImageError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    size: usize,
    numerators: Vec<i32>,
    divisor: i32,
}

impl Kernel {
    pub fn new(size: usize, numerators: Vec<i32>, divisor: i32) -> Result<Self, ImageError> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(ImageError::EvenKernel(size));
        }
        if divisor == 0 {
            return Err(ImageError::ZeroDivisor);
        }
        if numerators.len() != size * size {
            return Err(ImageError::BufferMismatch {
                width: size,
                height: size,
                expected: size * size,
                got: numerators.len(),
            });
        }
        Ok(Self { size, numerators, divisor })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn numerators(&self) -> &[i32] {
        &self.numerators
    }

    pub fn divisor(&self) -> i32 {
        self.divisor
    }

    /// True when the scaled coefficient sum is exactly 1, i.e. the kernel
    /// maps constant images to themselves.
    pub fn is_flat_preserving(&self) -> bool {
        let sum: i64 = self.numerators.iter().map(|&n| n as i64).sum();
        sum == self.divisor as i64
    }
}

/// 5x5 binomial unsharp matrix with center -476, divisor -256.
pub fn unsharp5() -> Kernel {
    #[rustfmt::skip]
    let n = vec![
        1,  4,    6,  4, 1,
        4, 16,   24, 16, 4,
        6, 24, -476, 24, 6,
        4, 16,   24, 16, 4,
        1,  4,    6,  4, 1,
    ];
    Kernel::new(5, n, -256).unwrap()
}

/// 3x3 emboss matrix.
pub fn emboss3() -> Kernel {
    #[rustfmt::skip]
    let n = vec![
         3, -1,  0,
        -1,  1,  1,
         0,  1, -3,
    ];
    Kernel::new(3, n, 1).unwrap()
}

/// Conventional 3x3 sharpen matrix.
pub fn sharpen3() -> Kernel {
    #[rustfmt::skip]
    let n = vec![
         0, -1,  0,
        -1,  5, -1,
         0, -1,  0,
    ];
    Kernel::new(3, n, 1).unwrap()
}

/// 5x5 cross-shaped strong sharpening matrix.
pub fn strong5() -> Kernel {
    #[rustfmt::skip]
    let n = vec![
         0,  0, -1,  0,  0,
         0,  0, -2,  0,  0,
        -1, -2, 13, -2, -1,
         0,  0, -2,  0,  0,
         0,  0, -1,  0,  0,
    ];
    Kernel::new(5, n, 1).unwrap()
}

/// Spatial convolution with clamp-to-edge borders.
///
/// Each output pixel is `clamp(round(sum(coeff * pixel) / divisor))` with
/// round-half-away-from-zero; output dimensions equal input dimensions.
pub fn convolve(img: &GrayImage, kernel: &Kernel) -> Result<GrayImage, ImageError> {
    let ks = kernel.size();
    if img.width() < ks || img.height() < ks {
        return Err(ImageError::ImageSmallerThanKernel { iw: img.width(), ih: img.height(), ks });
    }
    let half = (ks / 2) as isize;
    let mut out = Vec::with_capacity(img.width() * img.height());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            let mut sum: i64 = 0;
            for ky in 0..ks as isize {
                for kx in 0..ks as isize {
                    let coeff = kernel.numerators()[(ky * ks as isize + kx) as usize] as i64;
                    let px = img.get_clamped(x + kx - half, y + ky - half) as i64;
                    sum += coeff * px;
                }
            }
            let v = div_round_half_away(sum, kernel.divisor() as i64);
            out.push(v.clamp(0, 255) as u8);
        }
    }
    GrayImage::new(img.width(), img.height(), out)
}

/// Integer `round(n / d)` with ties rounded away from zero.
pub(crate) fn div_round_half_away(n: i64, d: i64) -> i64 {
    debug_assert!(d != 0);
    let sign = if (n < 0) != (d < 0) && n != 0 { -1 } else { 1 };
    let (n, d) = (n.unsigned_abs(), d.unsigned_abs());
    let q = ((2 * n + d) / (2 * d)) as i64;
    sign * q
}
