//! Reed-Solomon (70,44) block code over GF(256).
//!
//! 26 parity codewords, generator roots α^0..α^25, corrects up to 13
//! codeword errors. Codeword arrays are polynomial coefficients highest
//! power first, matching symbol transmission order.

use super::gf256::{alpha_pow, inv, mul};
use super::CodecError;

pub const DATA_CODEWORDS: usize = 44;
pub const EC_CODEWORDS: usize = 26;
pub const BLOCK_CODEWORDS: usize = DATA_CODEWORDS + EC_CODEWORDS;

/// Number of codeword errors the block corrects.
pub const CORRECTION_CAPACITY: usize = EC_CODEWORDS / 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsBlock {
    data: [u8; DATA_CODEWORDS],
    ec: [u8; EC_CODEWORDS],
}

impl RsBlock {
    pub fn data(&self) -> &[u8; DATA_CODEWORDS] {
        &self.data
    }

    pub fn ec(&self) -> &[u8; EC_CODEWORDS] {
        &self.ec
    }

    /// Data then parity, transmission order.
    pub fn codewords(&self) -> [u8; BLOCK_CODEWORDS] {
        let mut out = [0u8; BLOCK_CODEWORDS];
        out[..DATA_CODEWORDS].copy_from_slice(&self.data);
        out[DATA_CODEWORDS..].copy_from_slice(&self.ec);
        out
    }
}

/// Monic generator polynomial Π(x − α^i) for i in 0..26, highest power first.
fn generator() -> [u8; EC_CODEWORDS + 1] {
    let mut g = vec![1u8];
    for i in 0..EC_CODEWORDS {
        let root = alpha_pow(i as i64);
        let mut next = vec![0u8; g.len() + 1];
        for (j, &c) in g.iter().enumerate() {
            next[j] ^= c;
            next[j + 1] ^= mul(c, root);
        }
        g = next;
    }
    g.try_into().expect("generator has degree 26")
}

pub fn rs_encode(data: &[u8; DATA_CODEWORDS]) -> RsBlock {
    let g = generator();
    let mut rem = [0u8; EC_CODEWORDS];
    for &d in data {
        let factor = d ^ rem[0];
        rem.copy_within(1.., 0);
        rem[EC_CODEWORDS - 1] = 0;
        for j in 0..EC_CODEWORDS {
            rem[j] ^= mul(factor, g[j + 1]);
        }
    }
    RsBlock { data: *data, ec: rem }
}

fn syndromes(code: &[u8; BLOCK_CODEWORDS]) -> [u8; EC_CODEWORDS] {
    let mut s = [0u8; EC_CODEWORDS];
    for (j, slot) in s.iter_mut().enumerate() {
        let x = alpha_pow(j as i64);
        let mut acc = 0u8;
        for &c in code {
            acc = mul(acc, x) ^ c;
        }
        *slot = acc;
    }
    s
}

/// Evaluate a polynomial with ascending coefficients at x.
fn eval_ascending(poly: &[u8], x: u8) -> u8 {
    let mut acc = 0u8;
    for &c in poly.iter().rev() {
        acc = mul(acc, x) ^ c;
    }
    acc
}

/// Decode a possibly corrupted block back to its 44 data codewords.
///
/// Berlekamp-Massey for the error locator, Chien search for positions,
/// Forney for magnitudes; the corrected block is re-checked against the
/// syndromes so a failed correction never passes silently.
pub fn rs_decode(code: &[u8; BLOCK_CODEWORDS]) -> Result<[u8; DATA_CODEWORDS], CodecError> {
    let s = syndromes(code);
    if s.iter().all(|&v| v == 0) {
        return Ok(code[..DATA_CODEWORDS].try_into().unwrap());
    }

    // Berlekamp-Massey; sigma and prev hold ascending coefficients.
    let mut sigma = vec![1u8];
    let mut prev = vec![1u8];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = 1u8;
    for n in 0..EC_CODEWORDS {
        let mut d = s[n];
        for i in 1..sigma.len().min(n + 1) {
            d ^= mul(sigma[i], s[n - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = mul(d, inv(prev_disc));
        if 2 * l <= n {
            let keep = sigma.clone();
            if sigma.len() < prev.len() + shift {
                sigma.resize(prev.len() + shift, 0);
            }
            for (i, &pb) in prev.iter().enumerate() {
                sigma[i + shift] ^= mul(coef, pb);
            }
            l = n + 1 - l;
            prev = keep;
            prev_disc = d;
            shift = 1;
        } else {
            if sigma.len() < prev.len() + shift {
                sigma.resize(prev.len() + shift, 0);
            }
            for (i, &pb) in prev.iter().enumerate() {
                sigma[i + shift] ^= mul(coef, pb);
            }
            shift += 1;
        }
    }
    while sigma.last() == Some(&0) {
        sigma.pop();
    }
    let nu = sigma.len() - 1;
    if nu == 0 || nu != l || nu > CORRECTION_CAPACITY {
        return Err(CodecError::Uncorrectable);
    }

    // Chien search over all positions; X_k = α^(69−k) for array index k.
    let mut error_pos = Vec::new();
    for k in 0..BLOCK_CODEWORDS {
        let x_inv = alpha_pow(-((BLOCK_CODEWORDS - 1 - k) as i64));
        if eval_ascending(&sigma, x_inv) == 0 {
            error_pos.push(k);
        }
    }
    if error_pos.len() != nu {
        return Err(CodecError::Uncorrectable);
    }

    // Forney with first consecutive root α^0: e = X·Ω(X^{-1})/σ'(X^{-1}).
    let mut omega = vec![0u8; EC_CODEWORDS];
    for (i, &si) in s.iter().enumerate() {
        for (j, &sj) in sigma.iter().enumerate() {
            if i + j < EC_CODEWORDS {
                omega[i + j] ^= mul(si, sj);
            }
        }
    }
    let mut corrected = *code;
    for &k in &error_pos {
        let power = (BLOCK_CODEWORDS - 1 - k) as i64;
        let x_inv = alpha_pow(-power);
        let om = eval_ascending(&omega, x_inv);
        let mut deriv = 0u8;
        let mut i = 1;
        while i < sigma.len() {
            let mut term = sigma[i];
            for _ in 0..i - 1 {
                term = mul(term, x_inv);
            }
            deriv ^= term;
            i += 2;
        }
        if deriv == 0 {
            return Err(CodecError::Uncorrectable);
        }
        corrected[k] ^= mul(alpha_pow(power), mul(om, inv(deriv)));
    }

    if syndromes(&corrected).iter().any(|&v| v != 0) {
        return Err(CodecError::Uncorrectable);
    }
    Ok(corrected[..DATA_CODEWORDS].try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_block_roundtrips() {
        let block = rs_encode(&[0u8; DATA_CODEWORDS]);
        assert_eq!(block.ec(), &[0u8; EC_CODEWORDS]);
        assert_eq!(rs_decode(&block.codewords()).unwrap(), [0u8; DATA_CODEWORDS]);
    }

    #[test]
    fn generator_is_monic_degree_26_with_the_right_roots() {
        let g = generator();
        assert_eq!(g.len(), EC_CODEWORDS + 1);
        assert_eq!(g[0], 1);
        let ascending: Vec<u8> = g.iter().rev().copied().collect();
        for i in 0..EC_CODEWORDS {
            assert_eq!(eval_ascending(&ascending, alpha_pow(i as i64)), 0, "root {i}");
        }
    }

    // Oracle for the encoder: a valid codeword evaluates to zero at every
    // generator root. This checks encode without reusing its division loop.
    #[test]
    fn encoded_blocks_vanish_at_all_generator_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let mut data = [0u8; DATA_CODEWORDS];
            rng.fill(&mut data[..]);
            let code = rs_encode(&data).codewords();
            for s in syndromes(&code) {
                assert_eq!(s, 0);
            }
        }
    }

    fn corrupt(code: &mut [u8; BLOCK_CODEWORDS], n: usize, rng: &mut ChaCha8Rng) {
        let mut positions: Vec<usize> = (0..BLOCK_CODEWORDS).collect();
        positions.shuffle(rng);
        for &p in positions.iter().take(n) {
            let old = code[p];
            let mut new = rng.random();
            while new == old {
                new = rng.random();
            }
            code[p] = new;
        }
    }

    #[test]
    fn thirteen_errors_always_correct() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let mut data = [0u8; DATA_CODEWORDS];
            rng.fill(&mut data[..]);
            let mut code = rs_encode(&data).codewords();
            corrupt(&mut code, CORRECTION_CAPACITY, &mut rng);
            assert_eq!(rs_decode(&code).unwrap(), data);
        }
    }

    #[test]
    fn every_error_count_up_to_capacity_corrects() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 0..=CORRECTION_CAPACITY {
            let mut data = [0u8; DATA_CODEWORDS];
            rng.fill(&mut data[..]);
            let mut code = rs_encode(&data).codewords();
            corrupt(&mut code, n, &mut rng);
            assert_eq!(rs_decode(&code).unwrap(), data, "n={n}");
        }
    }

    #[test]
    fn fourteen_errors_are_flagged_as_failures() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let trials = 300;
        let mut failures = 0;
        for _ in 0..trials {
            let mut data = [0u8; DATA_CODEWORDS];
            rng.fill(&mut data[..]);
            let mut code = rs_encode(&data).codewords();
            corrupt(&mut code, CORRECTION_CAPACITY + 1, &mut rng);
            match rs_decode(&code) {
                Err(CodecError::Uncorrectable) => failures += 1,
                Err(other) => panic!("unexpected error {other:?}"),
                Ok(decoded) => assert_ne!(decoded, data, "silent miscorrection to the original"),
            }
        }
        assert!(failures * 100 >= trials * 99, "only {failures}/{trials} flagged");
    }
}
