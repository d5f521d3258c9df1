//! Raster types, NetPBM I/O, and the image-processing primitives used by
//! concealment and reconstruction.
//!
//! Images are immutable values once constructed; every operation here is a
//! pure function of its inputs, so they are safe to evaluate concurrently.

mod kernel;
mod ops;
mod pnm;

pub use kernel::{convolve, emboss3, sharpen3, strong5, unsharp5, Kernel};
pub use ops::{binarize, desaturate, equalize_histogram, otsu_threshold, unsharp_mask};
pub use pnm::{encode_pnm, load_pnm, parse_pnm, save_pgm, save_pnm, Pnm};

pub(crate) use ops::{gaussian_blur_f64, round_clamp_u8};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image dimensions must be nonzero, got {width}x{height}")]
    EmptyDimensions { width: usize, height: usize },
    #[error("pixel buffer length {got} does not match {width}x{height} ({expected})")]
    BufferMismatch { width: usize, height: usize, expected: usize, got: usize },
    #[error("kernel size must be odd and >= 1, got {0}")]
    EvenKernel(usize),
    #[error("kernel divisor must be nonzero")]
    ZeroDivisor,
    #[error("image {iw}x{ih} is smaller than the {ks}x{ks} kernel")]
    ImageSmallerThanKernel { iw: usize, ih: usize, ks: usize },
    #[error("degenerate histogram: image has a single distinct value")]
    DegenerateHistogram,
    #[error("malformed NetPBM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported NetPBM maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),
    #[error("truncated NetPBM data: expected {expected} bytes, got {got}")]
    TruncatedData { expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Rectangular 8-bit grayscale raster, row-major, top-to-bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        if data.len() != width * height {
            return Err(ImageError::BufferMismatch {
                width,
                height,
                expected: width * height,
                got: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    /// Uniform image filled with `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = value;
    }

    /// Pixel with clamp-to-edge semantics for out-of-range coordinates.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.data[cy * self.width + cx]
    }

    /// Pixel values as f64, same row-major layout.
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|&v| v as f64).collect()
    }

    /// Histogram over the 256 luma levels.
    pub fn histogram(&self) -> [u64; 256] {
        let mut hist = [0u64; 256];
        for &v in &self.data {
            hist[v as usize] += 1;
        }
        hist
    }
}

/// Rectangular 8-bit RGB raster, row-major (R,G,B) triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyDimensions { width, height });
        }
        if data.len() != 3 * width * height {
            return Err(ImageError::BufferMismatch {
                width,
                height,
                expected: 3 * width * height,
                got: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (u8, u8, u8) {
        let i = 3 * (y * self.width + x);
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }
}
