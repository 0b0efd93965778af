//! Polar transform and encoders. Bits are `u8` values in `{0, 1}`.

use crate::code::PolarCode;
use crate::error::{param, Result};

/// In-place `x = u * G_N` over GF(2) using the `n`-stage butterfly.
pub fn polar_transform(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// Non-systematic encoding of a full-length input vector `u`.
pub fn encode(code: &PolarCode, u: &[u8]) -> Result<Vec<u8>> {
    if u.len() != code.len() {
        return param(format!("input has {} bits, code length is {}", u.len(), code.len()));
    }
    if let Some(i) = (0..u.len()).find(|&i| code.is_frozen(i) && u[i] != 0) {
        return param(format!("frozen position {i} carries a non-zero bit"));
    }
    let mut x = u.to_vec();
    polar_transform(&mut x);
    Ok(x)
}

/// Places `d` at the free positions of a length-N vector with zero frozen bits.
pub fn embed(code: &PolarCode, d: &[u8]) -> Result<Vec<u8>> {
    if d.len() != code.k() {
        return param(format!("data has {} bits, code dimension is {}", d.len(), code.k()));
    }
    let mut u = vec![0u8; code.len()];
    for (&pos, &bit) in code.info_positions().iter().zip(d) {
        u[pos] = bit;
    }
    Ok(u)
}

/// Reads the free positions of `x`.
pub fn extract(code: &PolarCode, x: &[u8]) -> Vec<u8> {
    code.info_positions().iter().map(|&i| x[i]).collect()
}

/// Systematic encoding: the returned codeword carries `d` at the free positions.
///
/// Two-pass form: transform the embedded data, clear the frozen coordinates
/// of the pre-image and transform again.
pub fn encode_systematic(code: &PolarCode, d: &[u8]) -> Result<Vec<u8>> {
    let mut x = embed(code, d)?;
    encode_systematic_in_place(code, &mut x);
    Ok(x)
}

/// Systematic encoding of a vector that already holds the data at the free
/// positions (frozen positions are ignored and overwritten).
pub fn encode_systematic_in_place(code: &PolarCode, x: &mut [u8]) {
    polar_transform(x);
    for (b, &f) in x.iter_mut().zip(code.frozen_mask()) {
        if f {
            *b = 0;
        }
    }
    polar_transform(x);
}
