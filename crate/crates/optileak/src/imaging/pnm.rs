//! Binary NetPBM reader/writer: PGM (P5) and PPM (P6), maxval 255.
//!
//! The writer emits the canonical form `P5\n<w> <h>\n255\n<data>`; the reader
//! accepts any standard header (arbitrary whitespace, `#` comments) so files
//! from other tools load too. Canonical files round-trip byte-identically.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{GrayImage, ImageError, RgbImage};

/// A loaded NetPBM file: either grayscale (P5) or color (P6).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pnm {
    Gray(GrayImage),
    Rgb(RgbImage),
}

impl Pnm {
    /// Grayscale view: P6 files are desaturated, P5 files pass through.
    pub fn into_gray(self) -> GrayImage {
        match self {
            Pnm::Gray(g) => g,
            Pnm::Rgb(c) => super::desaturate(&c),
        }
    }
}

pub fn load_pnm(path: impl AsRef<Path>) -> Result<Pnm, ImageError> {
    let bytes = fs::read(path)?;
    parse_pnm(&bytes)
}

pub fn save_pnm(image: &Pnm, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_pnm(image))?;
    Ok(())
}

/// Convenience wrapper for the common grayscale case.
pub fn save_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    save_pnm(&Pnm::Gray(image.clone()), path)
}

pub fn encode_pnm(image: &Pnm) -> Vec<u8> {
    let (magic, w, h, data) = match image {
        Pnm::Gray(g) => ("P5", g.width(), g.height(), g.data()),
        Pnm::Rgb(c) => ("P6", c.width(), c.height(), c.data()),
    };
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    out.extend_from_slice(data);
    out
}

pub fn parse_pnm(bytes: &[u8]) -> Result<Pnm, ImageError> {
    if bytes.len() < 2 {
        return Err(ImageError::MalformedHeader("file too short".into()));
    }
    let channels = match &bytes[..2] {
        b"P5" => 1usize,
        b"P6" => 3usize,
        other => {
            return Err(ImageError::MalformedHeader(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };

    let mut pos = 2;
    let width = read_header_int(bytes, &mut pos)?;
    let height = read_header_int(bytes, &mut pos)?;
    let maxval = read_header_int(bytes, &mut pos)?;
    if maxval != 255 {
        return Err(ImageError::UnsupportedMaxval(maxval as u32));
    }
    // Exactly one whitespace byte separates the maxval from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(ImageError::MalformedHeader("missing whitespace after maxval".into()));
    }
    pos += 1;

    if width == 0 || height == 0 {
        return Err(ImageError::EmptyDimensions { width: width as usize, height: height as usize });
    }
    let expected = channels * width as usize * height as usize;
    let body = &bytes[pos..];
    if body.len() < expected {
        return Err(ImageError::TruncatedData { expected, got: body.len() });
    }
    let data = body[..expected].to_vec();
    if channels == 1 {
        Ok(Pnm::Gray(GrayImage::new(width as usize, height as usize, data)?))
    } else {
        Ok(Pnm::Rgb(RgbImage::new(width as usize, height as usize, data)?))
    }
}

/// Read one whitespace-delimited decimal token, skipping `#` comments.
fn read_header_int(bytes: &[u8], pos: &mut usize) -> Result<u64, ImageError> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(ImageError::MalformedHeader("expected decimal header field".into()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ImageError::MalformedHeader("invalid header integer".into()))
}
