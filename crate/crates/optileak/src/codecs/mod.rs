//! Payload object codecs: QR version 3-M symbols over Reed-Solomon GF(256),
//! dot-matrix text, and binarized bitmap objects.

mod gf256;
mod qr;
mod rs;
mod text;

pub use qr::{
    data_module_positions, is_function_module, qr_decode, qr_encode, SymbolMatrix,
    DATA_MODULE_COUNT, SYMBOL_SIZE,
};
pub use rs::{
    rs_decode, rs_encode, RsBlock, BLOCK_CODEWORDS, CORRECTION_CAPACITY, DATA_CODEWORDS,
    EC_CODEWORDS,
};
pub use text::{rasterize_text, GLYPH_HEIGHT, GLYPH_WIDTH};

use crate::imaging::{binarize, otsu_threshold, GrayImage, ImageError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("numeric payload has {0} digits, capacity is 101")]
    NumericOverflow(usize),
    #[error("numeric payload must contain only ASCII digits")]
    NonDigitPayload,
    #[error("byte payload has {0} bytes, capacity is 42")]
    ByteOverflow(usize),
    #[error("reed-solomon block is uncorrectable")]
    Uncorrectable,
    #[error("format information unreadable")]
    FormatUnreadable,
    #[error("format information selects an unsupported error-correction level")]
    UnsupportedLevel,
    #[error("malformed segment header")]
    MalformedSegment,
    #[error("character {0:?} is outside the printable ASCII font")]
    UnsupportedGlyph(char),
}

/// Payload carried by a symbol: up to 101 digits in numeric mode or 42 bytes
/// in byte mode (the v3-M budget of 352 data bits minus segment headers).
///
/// Constructors enforce the capacity, so a held value always encodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PayloadRepr", into = "PayloadRepr")]
pub enum Payload {
    Numeric(String),
    Bytes(Vec<u8>),
}

impl Payload {
    pub const NUMERIC_CAPACITY: usize = 101;
    pub const BYTE_CAPACITY: usize = 42;

    pub fn numeric(digits: impl Into<String>) -> Result<Self, CodecError> {
        let digits = digits.into();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CodecError::NonDigitPayload);
        }
        if digits.len() > Self::NUMERIC_CAPACITY {
            return Err(CodecError::NumericOverflow(digits.len()));
        }
        Ok(Self::Numeric(digits))
    }

    pub fn bytes(data: impl Into<Vec<u8>>) -> Result<Self, CodecError> {
        let data = data.into();
        if data.len() > Self::BYTE_CAPACITY {
            return Err(CodecError::ByteOverflow(data.len()));
        }
        Ok(Self::Bytes(data))
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Self::Numeric(_) => "numeric",
            Self::Bytes(_) => "byte",
        }
    }
}

/// Wire form: numeric content verbatim, byte content lowercase hex.
#[derive(Serialize, Deserialize)]
struct PayloadRepr {
    mode: String,
    content: String,
}

impl From<Payload> for PayloadRepr {
    fn from(p: Payload) -> Self {
        match p {
            Payload::Numeric(digits) => Self { mode: "numeric".into(), content: digits },
            Payload::Bytes(data) => Self {
                mode: "byte".into(),
                content: data.iter().map(|b| format!("{b:02x}")).collect(),
            },
        }
    }
}

impl TryFrom<PayloadRepr> for Payload {
    type Error = String;

    fn try_from(r: PayloadRepr) -> Result<Self, String> {
        match r.mode.as_str() {
            "numeric" => Payload::numeric(r.content).map_err(|e| e.to_string()),
            "byte" => {
                if !r.content.len().is_multiple_of(2) {
                    return Err("byte content must be an even-length hex string".into());
                }
                let bytes = (0..r.content.len())
                    .step_by(2)
                    .map(|i| u8::from_str_radix(&r.content[i..i + 2], 16))
                    .collect::<Result<Vec<u8>, _>>()
                    .map_err(|e| format!("invalid hex byte: {e}"))?;
                Payload::bytes(bytes).map_err(|e| e.to_string())
            }
            other => Err(format!("unknown payload mode {other:?}")),
        }
    }
}

/// Reduce an arbitrary grayscale bitmap to a binary embeddable object using
/// its Otsu threshold.
pub fn prepare_image_object(img: &GrayImage) -> Result<GrayImage, ImageError> {
    Ok(binarize(img, otsu_threshold(img)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payload_capacity_bounds_are_enforced() {
        let ok: String = "9".repeat(101);
        assert!(Payload::numeric(ok).is_ok());
        let over: String = "9".repeat(102);
        assert_eq!(Payload::numeric(over), Err(CodecError::NumericOverflow(102)));
        assert!(Payload::bytes(vec![0u8; 42]).is_ok());
        assert_eq!(Payload::bytes(vec![0u8; 43]), Err(CodecError::ByteOverflow(43)));
        assert_eq!(Payload::numeric("12a4"), Err(CodecError::NonDigitPayload));
    }

    #[test]
    fn payload_json_roundtrips_both_modes() {
        let n = Payload::numeric("0042").unwrap();
        let j = serde_json::to_string(&n).unwrap();
        assert_eq!(j, r#"{"mode":"numeric","content":"0042"}"#);
        assert_eq!(serde_json::from_str::<Payload>(&j).unwrap(), n);

        let b = Payload::bytes(vec![0x00, 0xFF, 0x7A]).unwrap();
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(j, r#"{"mode":"byte","content":"00ff7a"}"#);
        assert_eq!(serde_json::from_str::<Payload>(&j).unwrap(), b);
    }

    #[test]
    fn payload_json_rejects_out_of_capacity_content() {
        let j = format!(r#"{{"mode":"numeric","content":"{}"}}"#, "1".repeat(102));
        assert!(serde_json::from_str::<Payload>(&j).is_err());
        assert!(serde_json::from_str::<Payload>(r#"{"mode":"kanji","content":""}"#).is_err());
    }

    #[test]
    fn prepare_image_object_keeps_binary_images_binary() {
        let mut data = vec![0u8; 8];
        data.extend(vec![255u8; 8]);
        let img = GrayImage::new(4, 4, data).unwrap();
        assert_eq!(prepare_image_object(&img).unwrap(), img);
    }

    #[test]
    fn prepare_image_object_splits_bimodal_values_exactly() {
        let mut data = vec![50u8; 10];
        data.extend(vec![200u8; 6]);
        let img = GrayImage::new(4, 4, data).unwrap();
        let out = prepare_image_object(&img).unwrap();
        for (i, &v) in out.data().iter().enumerate() {
            assert_eq!(v, if i < 10 { 0 } else { 255 });
        }
    }

    #[test]
    fn prepare_image_object_rejects_flat_images() {
        let img = GrayImage::filled(4, 4, 9);
        assert!(matches!(prepare_image_object(&img), Err(ImageError::DegenerateHistogram)));
    }

    #[test]
    fn prepare_image_object_preserves_wide_raster_dimensions() {
        // 1400x906-proportioned raster downscaled to 175x113 with a gradient.
        let (w, h) = (175usize, 113usize);
        let data: Vec<u8> = (0..w * h).map(|i| (i % 251) as u8).collect();
        let img = GrayImage::new(w, h, data).unwrap();
        let out = prepare_image_object(&img).unwrap();
        assert_eq!((out.width(), out.height()), (w, h));
        assert!(out.data().iter().all(|&v| v == 0 || v == 255));
    }
}
