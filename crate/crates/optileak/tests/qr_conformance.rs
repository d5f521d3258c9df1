//! Cross-implementation check: symbols produced by our encoder must decode
//! with an independent reader (rqrr, a quirc port). This pins standard
//! conformance of the format information, mask, placement, and RS layers
//! rather than mere self-consistency.

use optileak::codecs::{qr_encode, Payload};
use optileak::imaging::GrayImage;

/// Render with the 4-module quiet zone a conformant reader expects.
fn render_with_quiet_zone(payload: &Payload, scale: usize) -> GrayImage {
    let symbol = qr_encode(payload).to_image(scale);
    let quiet = 4 * scale;
    let side = symbol.width() + 2 * quiet;
    let mut canvas = GrayImage::filled(side, side, 255);
    for y in 0..symbol.height() {
        for x in 0..symbol.width() {
            canvas.set(x + quiet, y + quiet, symbol.get(x, y));
        }
    }
    canvas
}

fn decode_with_rqrr(img: &GrayImage) -> (rqrr::MetaData, String) {
    let mut prepared =
        rqrr::PreparedImage::prepare_from_greyscale(img.width(), img.height(), |x, y| {
            img.get(x, y)
        });
    let grids = prepared.detect_grids();
    assert_eq!(grids.len(), 1, "expected exactly one symbol");
    grids[0].decode().expect("independent reader must decode")
}

#[test]
fn independent_reader_decodes_numeric_symbols() {
    for digits in ["7", "0042", "31415926535897932384626433832795"] {
        let payload = Payload::numeric(digits).unwrap();
        let (meta, content) = decode_with_rqrr(&render_with_quiet_zone(&payload, 8));
        assert_eq!(meta.version.0, 3, "version 3 expected");
        assert_eq!(content, digits);
    }
}

#[test]
fn independent_reader_decodes_full_capacity_numeric() {
    let digits: String = (0..101).map(|i| char::from(b'0' + (i % 10) as u8)).collect();
    let payload = Payload::numeric(digits.clone()).unwrap();
    let (meta, content) = decode_with_rqrr(&render_with_quiet_zone(&payload, 8));
    assert_eq!(meta.version.0, 3);
    assert_eq!(content, digits);
}

#[test]
fn independent_reader_decodes_byte_symbols() {
    for text in ["x", "hello channel", "the full 42-byte budget of version 3-M...!"] {
        assert!(text.len() <= Payload::BYTE_CAPACITY);
        let payload = Payload::bytes(text.as_bytes().to_vec()).unwrap();
        let (meta, content) = decode_with_rqrr(&render_with_quiet_zone(&payload, 8));
        assert_eq!(meta.version.0, 3);
        assert_eq!(content, text);
    }
}
