//! QR version 3, error correction level M: a 29×29 symbol carrying one
//! (70,44) Reed-Solomon block (352 data bits).
//!
//! Encoding fixes mask pattern 0 so identical payloads produce identical
//! symbols; decoding reads the format information under any of the 8 masks
//! and rides flipped modules through the RS layer.

use std::fmt;

use super::rs::{rs_decode, rs_encode, BLOCK_CODEWORDS, DATA_CODEWORDS};
use super::{CodecError, Payload};
use crate::imaging::GrayImage;

pub const SYMBOL_SIZE: usize = 29;

/// Non-function modules in the symbol: 560 codeword bits plus 7 remainder
/// bits.
pub const DATA_MODULE_COUNT: usize = 567;

const ENCODE_MASK: u8 = 0;
const EC_M_BITS: u8 = 0b00;

/// 29×29 module grid; true = dark module.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolMatrix {
    modules: [[bool; SYMBOL_SIZE]; SYMBOL_SIZE],
}

impl fmt::Debug for SymbolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymbolMatrix(")?;
        for row in &self.modules {
            for &m in row {
                write!(f, "{}", if m { '#' } else { '.' })?;
            }
            writeln!(f)?;
        }
        write!(f, ")")
    }
}

impl SymbolMatrix {
    pub fn blank() -> Self {
        Self { modules: [[false; SYMBOL_SIZE]; SYMBOL_SIZE] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::blank();
        for r in 0..SYMBOL_SIZE {
            for c in 0..SYMBOL_SIZE {
                m.modules[r][c] = f(r, c);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.modules[row][col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, dark: bool) {
        self.modules[row][col] = dark;
    }

    /// Symbol with every module flipped (dark-on-dark captures come out
    /// inverted).
    pub fn invert(&self) -> Self {
        Self::from_fn(|r, c| !self.get(r, c))
    }

    /// Render at `scale` pixels per module, dark = 0, light = 255, no quiet
    /// zone.
    pub fn to_image(&self, scale: usize) -> GrayImage {
        assert!(scale >= 1, "scale must be >= 1");
        let side = SYMBOL_SIZE * scale;
        let mut img = GrayImage::filled(side, side, 255);
        for r in 0..SYMBOL_SIZE {
            for c in 0..SYMBOL_SIZE {
                if self.modules[r][c] {
                    for dy in 0..scale {
                        for dx in 0..scale {
                            img.set(c * scale + dx, r * scale + dy, 0);
                        }
                    }
                }
            }
        }
        img
    }
}

/// True for finder, separator, timing, alignment, dark-module, and format
/// positions: everything that never carries codeword bits.
pub fn is_function_module(row: usize, col: usize) -> bool {
    debug_assert!(row < SYMBOL_SIZE && col < SYMBOL_SIZE);
    let finder_tl = row <= 7 && col <= 7;
    let finder_tr = row <= 7 && col >= 21;
    let finder_bl = row >= 21 && col <= 7;
    let timing = row == 6 || col == 6;
    let alignment = (20..=24).contains(&row) && (20..=24).contains(&col);
    let format_row = row == 8 && (col <= 8 || col >= 21);
    let format_col = col == 8 && (row <= 8 || row >= 21);
    finder_tl || finder_tr || finder_bl || timing || alignment || format_row || format_col
}

/// The 567 non-function positions in placement order; the first 560 carry
/// the block's codeword bits MSB-first, the final 7 are remainder bits.
pub fn data_module_positions() -> Vec<(usize, usize)> {
    let mut pos = Vec::with_capacity(DATA_MODULE_COUNT);
    let mut col = (SYMBOL_SIZE - 1) as isize;
    let mut upward = true;
    while col > 0 {
        if col == 6 {
            // The vertical timing pattern displaces the column pairs.
            col -= 1;
        }
        for step in 0..SYMBOL_SIZE {
            let row = if upward { SYMBOL_SIZE - 1 - step } else { step };
            for c in [col, col - 1] {
                if !is_function_module(row, c as usize) {
                    pos.push((row, c as usize));
                }
            }
        }
        upward = !upward;
        col -= 2;
    }
    debug_assert_eq!(pos.len(), DATA_MODULE_COUNT);
    pos
}

fn mask_bit(mask: u8, r: usize, c: usize) -> bool {
    match mask {
        0 => (r + c).is_multiple_of(2),
        1 => r.is_multiple_of(2),
        2 => c.is_multiple_of(3),
        3 => (r + c).is_multiple_of(3),
        4 => (r / 2 + c / 3).is_multiple_of(2),
        5 => (r * c) % 2 + (r * c) % 3 == 0,
        6 => ((r * c) % 2 + (r * c) % 3).is_multiple_of(2),
        7 => ((r + c) % 2 + (r * c) % 3).is_multiple_of(2),
        _ => unreachable!("mask ids are 3 bits"),
    }
}

/// 15-bit format word: BCH(15,5) over the 5 data bits, XORed with the
/// standard's masking constant.
fn format_code(ec_bits: u8, mask: u8) -> u16 {
    let data = ((ec_bits as u16) << 3) | mask as u16;
    let mut v = data << 10;
    const G: u16 = 0b101_0011_0111;
    for i in (10..15).rev() {
        if v >> i & 1 == 1 {
            v ^= G << (i - 10);
        }
    }
    ((data << 10) | v) ^ 0b101_0100_0001_0010
}

/// (row, col) of each of the 15 format bits in one placement copy.
type FormatCopy = [(usize, usize); 15];

/// Positions of format bit i (bit 0 = LSB) in the two placement copies.
fn format_positions() -> (FormatCopy, FormatCopy) {
    let mut around_finder = [(0usize, 0usize); 15];
    let mut split = [(0usize, 0usize); 15];
    for i in 0..15 {
        around_finder[i] = match i {
            0..=5 => (i, 8),
            6 | 7 => (i + 1, 8),
            8 => (8, 7),
            _ => (8, 14 - i),
        };
        split[i] = if i < 8 { (8, SYMBOL_SIZE - 1 - i) } else { (SYMBOL_SIZE - 15 + i, 8) };
    }
    (around_finder, split)
}

fn draw_function_patterns(m: &mut SymbolMatrix) {
    for &(r0, c0) in &[(0usize, 0usize), (0, 22), (22, 0)] {
        for dr in 0..7 {
            for dc in 0..7 {
                let border = dr == 0 || dr == 6 || dc == 0 || dc == 6;
                let center = (2..=4).contains(&dr) && (2..=4).contains(&dc);
                m.set(r0 + dr, c0 + dc, border || center);
            }
        }
    }
    for i in 8..=20 {
        m.set(6, i, i % 2 == 0);
        m.set(i, 6, i % 2 == 0);
    }
    for dr in 0..5usize {
        for dc in 0..5usize {
            let ring = dr == 0 || dr == 4 || dc == 0 || dc == 4 || (dr == 2 && dc == 2);
            m.set(20 + dr, 20 + dc, ring);
        }
    }
    m.set(21, 8, true);
}

fn write_format(m: &mut SymbolMatrix, ec_bits: u8, mask: u8) {
    let code = format_code(ec_bits, mask);
    let (a, b) = format_positions();
    for i in 0..15 {
        let bit = code >> i & 1 == 1;
        m.set(a[i].0, a[i].1, bit);
        m.set(b[i].0, b[i].1, bit);
    }
}

#[derive(Default)]
struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    fn push(&mut self, value: u32, width: usize) {
        for i in (0..width).rev() {
            self.bits.push(value >> i & 1 == 1);
        }
    }
}

/// Mode indicator, character count, and content bits (no terminator or pads).
fn payload_bits(p: &Payload) -> Vec<bool> {
    let mut w = BitWriter::default();
    match p {
        Payload::Numeric(digits) => {
            w.push(0b0001, 4);
            w.push(digits.len() as u32, 10);
            for chunk in digits.as_bytes().chunks(3) {
                let val = chunk.iter().fold(0u32, |acc, &b| acc * 10 + (b - b'0') as u32);
                let width = match chunk.len() {
                    3 => 10,
                    2 => 7,
                    _ => 4,
                };
                w.push(val, width);
            }
        }
        Payload::Bytes(data) => {
            w.push(0b0100, 4);
            w.push(data.len() as u32, 8);
            for &b in data {
                w.push(b as u32, 8);
            }
        }
    }
    w.bits
}

fn data_codewords(p: &Payload) -> [u8; DATA_CODEWORDS] {
    let mut bits = payload_bits(p);
    let capacity = DATA_CODEWORDS * 8;
    debug_assert!(bits.len() <= capacity, "payload constructors enforce capacity");
    let terminator = (capacity - bits.len()).min(4);
    bits.extend(std::iter::repeat_n(false, terminator));
    while !bits.len().is_multiple_of(8) {
        bits.push(false);
    }
    let mut bytes: Vec<u8> =
        bits.chunks(8).map(|byte| byte.iter().fold(0u8, |acc, &b| acc << 1 | b as u8)).collect();
    let mut pad = [0xECu8, 0x11].iter().cycle();
    while bytes.len() < DATA_CODEWORDS {
        bytes.push(*pad.next().unwrap());
    }
    bytes.try_into().unwrap()
}

pub fn qr_encode(payload: &Payload) -> SymbolMatrix {
    let codewords = rs_encode(&data_codewords(payload)).codewords();
    let mut m = SymbolMatrix::blank();
    draw_function_patterns(&mut m);
    for (i, &(r, c)) in data_module_positions().iter().enumerate() {
        let bit =
            if i < BLOCK_CODEWORDS * 8 { codewords[i / 8] >> (7 - i % 8) & 1 == 1 } else { false };
        m.set(r, c, bit ^ mask_bit(ENCODE_MASK, r, c));
    }
    write_format(&mut m, EC_M_BITS, ENCODE_MASK);
    m
}

fn read_format(m: &SymbolMatrix) -> Result<(u8, u8), CodecError> {
    let (a, b) = format_positions();
    let read = |slots: &[(usize, usize); 15]| {
        slots.iter().enumerate().fold(0u16, |acc, (i, &(r, c))| acc | (m.get(r, c) as u16) << i)
    };
    // Valid format words are ≥7 bits apart, so a ≤3-bit match is unique.
    for observed in [read(&a), read(&b)] {
        for ec in 0..4u8 {
            for mask in 0..8u8 {
                if (format_code(ec, mask) ^ observed).count_ones() <= 3 {
                    return Ok((ec, mask));
                }
            }
        }
    }
    Err(CodecError::FormatUnreadable)
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn take(&mut self, width: usize) -> Result<u32, CodecError> {
        if self.pos + width > self.bytes.len() * 8 {
            return Err(CodecError::MalformedSegment);
        }
        let mut v = 0u32;
        for _ in 0..width {
            let bit = self.bytes[self.pos / 8] >> (7 - self.pos % 8) & 1;
            v = v << 1 | bit as u32;
            self.pos += 1;
        }
        Ok(v)
    }
}

fn parse_payload(data: &[u8; DATA_CODEWORDS]) -> Result<Payload, CodecError> {
    let mut r = BitReader { bytes: data, pos: 0 };
    match r.take(4)? {
        0b0001 => {
            let count = r.take(10)? as usize;
            if count > Payload::NUMERIC_CAPACITY {
                return Err(CodecError::MalformedSegment);
            }
            let mut digits = String::with_capacity(count);
            let mut remaining = count;
            while remaining > 0 {
                let (n, width) = match remaining {
                    1 => (1usize, 4),
                    2 => (2, 7),
                    _ => (3, 10),
                };
                let val = r.take(width)? as usize;
                if val >= 10usize.pow(n as u32) {
                    return Err(CodecError::MalformedSegment);
                }
                digits.push_str(&format!("{val:0n$}"));
                remaining -= n;
            }
            Payload::numeric(digits)
        }
        0b0100 => {
            let count = r.take(8)? as usize;
            if count > Payload::BYTE_CAPACITY {
                return Err(CodecError::MalformedSegment);
            }
            let mut bytes = Vec::with_capacity(count);
            for _ in 0..count {
                bytes.push(r.take(8)? as u8);
            }
            Payload::bytes(bytes)
        }
        _ => Err(CodecError::MalformedSegment),
    }
}

pub fn qr_decode(m: &SymbolMatrix) -> Result<Payload, CodecError> {
    let (ec_bits, mask) = read_format(m)?;
    if ec_bits != EC_M_BITS {
        return Err(CodecError::UnsupportedLevel);
    }
    let mut codewords = [0u8; BLOCK_CODEWORDS];
    for (i, &(r, c)) in data_module_positions().iter().enumerate().take(BLOCK_CODEWORDS * 8) {
        if m.get(r, c) ^ mask_bit(mask, r, c) {
            codewords[i / 8] |= 1 << (7 - i % 8);
        }
    }
    let data = rs_decode(&codewords)?;
    parse_payload(&data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_payload(rng: &mut ChaCha8Rng) -> Payload {
        if rng.random_bool(0.5) {
            let len = rng.random_range(0..=Payload::NUMERIC_CAPACITY);
            let digits: String =
                (0..len).map(|_| char::from(b'0' + rng.random_range(0..10))).collect();
            Payload::numeric(digits).unwrap()
        } else {
            let len = rng.random_range(0..=Payload::BYTE_CAPACITY);
            let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            Payload::bytes(bytes).unwrap()
        }
    }

    #[test]
    fn data_module_positions_cover_exactly_the_non_function_modules() {
        let pos = data_module_positions();
        assert_eq!(pos.len(), DATA_MODULE_COUNT);
        let mut seen = [[false; SYMBOL_SIZE]; SYMBOL_SIZE];
        for &(r, c) in &pos {
            assert!(!is_function_module(r, c), "function module at ({r},{c})");
            assert!(!seen[r][c], "duplicate position ({r},{c})");
            seen[r][c] = true;
        }
        let function_count = (0..SYMBOL_SIZE)
            .flat_map(|r| (0..SYMBOL_SIZE).map(move |c| (r, c)))
            .filter(|&(r, c)| is_function_module(r, c))
            .count();
        assert_eq!(function_count + DATA_MODULE_COUNT, SYMBOL_SIZE * SYMBOL_SIZE);
    }

    #[test]
    fn encoded_symbol_has_the_standard_fixed_patterns() {
        let m = qr_encode(&Payload::numeric("42").unwrap());
        // Finder borders and centers at the three corners.
        for (r0, c0) in [(0usize, 0usize), (0, 22), (22, 0)] {
            for d in 0..7 {
                assert!(m.get(r0 + d, c0), "finder border");
                assert!(m.get(r0, c0 + d), "finder border");
            }
            assert!(!m.get(r0 + 1, c0 + 1), "finder ring is light");
            assert!(m.get(r0 + 3, c0 + 3), "finder center is dark");
        }
        // Timing alternates, dark at even indices.
        for i in 8..=20 {
            assert_eq!(m.get(6, i), i % 2 == 0);
            assert_eq!(m.get(i, 6), i % 2 == 0);
        }
        // Alignment pattern center and dark module.
        assert!(m.get(22, 22));
        assert!(!m.get(21, 21));
        assert!(m.get(21, 8));
    }

    #[test]
    fn format_word_for_level_m_mask_0() {
        assert_eq!(format_code(EC_M_BITS, 0), 0x5412);
    }

    #[test]
    fn roundtrip_over_seeded_random_payloads() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let p = random_payload(&mut rng);
            assert_eq!(qr_decode(&qr_encode(&p)).unwrap(), p);
        }
    }

    #[test]
    fn empty_byte_payload_roundtrips() {
        let p = Payload::bytes([]).unwrap();
        assert_eq!(qr_decode(&qr_encode(&p)).unwrap(), p);
    }

    #[test]
    fn full_capacity_numeric_payload_fits_and_roundtrips() {
        let digits: String =
            (0..Payload::NUMERIC_CAPACITY).map(|i| char::from(b'0' + (i % 10) as u8)).collect();
        let p = Payload::numeric(digits).unwrap();
        assert_eq!(payload_bits(&p).len(), 351);
        assert_eq!(qr_decode(&qr_encode(&p)).unwrap(), p);
    }

    #[test]
    fn decode_honors_every_mask_pattern() {
        let p = Payload::bytes(*b"mask sweep").unwrap();
        let encoded = qr_encode(&p);
        for mask in 0..8u8 {
            let mut m = encoded.clone();
            for &(r, c) in &data_module_positions() {
                let unmasked = m.get(r, c) ^ mask_bit(ENCODE_MASK, r, c);
                m.set(r, c, unmasked ^ mask_bit(mask, r, c));
            }
            write_format(&mut m, EC_M_BITS, mask);
            assert_eq!(qr_decode(&m).unwrap(), p, "mask {mask}");
        }
    }

    #[test]
    fn ninety_flipped_modules_in_thirteen_codewords_still_decode() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let p = Payload::numeric("31415926535897932384626433832795028841971").unwrap();
        let encoded = qr_encode(&p);
        let positions = data_module_positions();
        for _ in 0..20 {
            // 12 codewords own 96 module positions; flip 90 of them.
            let mut words: Vec<usize> = (0..BLOCK_CODEWORDS).collect();
            words.shuffle(&mut rng);
            let mut bit_positions: Vec<usize> =
                words[..12].iter().flat_map(|&w| (0..8).map(move |b| w * 8 + b)).collect();
            bit_positions.shuffle(&mut rng);
            let mut m = encoded.clone();
            for &bp in bit_positions.iter().take(90) {
                let (r, c) = positions[bp];
                m.set(r, c, !m.get(r, c));
            }
            assert_eq!(qr_decode(&m).unwrap(), p);
        }
    }

    #[test]
    fn all_dark_matrix_is_a_format_error() {
        let m = SymbolMatrix::from_fn(|_, _| true);
        assert!(matches!(qr_decode(&m), Err(CodecError::FormatUnreadable)));
    }

    #[test]
    fn remainder_bits_are_light_before_masking() {
        let m = qr_encode(&Payload::bytes([]).unwrap());
        let positions = data_module_positions();
        for &(r, c) in &positions[BLOCK_CODEWORDS * 8..] {
            assert_eq!(m.get(r, c), mask_bit(ENCODE_MASK, r, c));
        }
    }

    #[test]
    fn to_image_renders_dark_modules_at_scale() {
        let m = qr_encode(&Payload::numeric("7").unwrap());
        let img = m.to_image(3);
        assert_eq!(img.width(), 87);
        assert_eq!(img.height(), 87);
        for r in 0..SYMBOL_SIZE {
            for c in 0..SYMBOL_SIZE {
                let expect = if m.get(r, c) { 0 } else { 255 };
                for dy in 0..3 {
                    for dx in 0..3 {
                        assert_eq!(img.get(c * 3 + dx, r * 3 + dy), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn inverted_symbol_restores_under_double_inversion() {
        let m = qr_encode(&Payload::numeric("123").unwrap());
        assert_eq!(m.invert().invert(), m);
        assert!(qr_decode(&m.invert()).is_err());
    }
}
