//! GF(256) arithmetic with primitive polynomial 285 and generator α = 2.
//!
//! Log/antilog tables are built at compile time; α^255 = 1 so exponents live
//! in [0,255).

const FIELD_POLY: u16 = 285;

const fn build_tables() -> ([u8; 255], [u8; 256]) {
    let mut exp = [0u8; 255];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= FIELD_POLY;
        }
        i += 1;
    }
    (exp, log)
}

const TABLES: ([u8; 255], [u8; 256]) = build_tables();
const EXP: [u8; 255] = TABLES.0;
const LOG: [u8; 256] = TABLES.1;

#[inline]
pub(crate) fn mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        0
    } else {
        EXP[(LOG[a as usize] as usize + LOG[b as usize] as usize) % 255]
    }
}

/// Multiplicative inverse; panics on zero.
#[inline]
pub(crate) fn inv(a: u8) -> u8 {
    assert!(a != 0, "zero has no multiplicative inverse");
    EXP[(255 - LOG[a as usize] as usize) % 255]
}

/// α^n for any integer exponent, negative included.
#[inline]
pub(crate) fn alpha_pow(n: i64) -> u8 {
    EXP[n.rem_euclid(255) as usize]
}
