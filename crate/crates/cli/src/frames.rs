//! Binary frame formats.
//!
//! * bit frames: each frame packed MSB-first into `ceil(bits / 8)` bytes,
//!   trailing pad bits zero;
//! * LLR frames: little-endian `f32`, N per frame;
//! * quantized LLR frames: one byte per LLR (bit 7 sign, low bits magnitude).

use polar_mcsc::quant::QLlr;

use crate::error::{CliError, CliResult};

pub fn bytes_per_frame(bits: usize) -> usize {
    bits.div_ceil(8)
}

pub fn pack_bits(bits: &[u8], out: &mut Vec<u8>) {
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            byte |= (b & 1) << (7 - i);
        }
        out.push(byte);
    }
}

pub fn unpack_frames(data: &[u8], bits: usize) -> CliResult<Vec<Vec<u8>>> {
    let per = bytes_per_frame(bits);
    if !data.len().is_multiple_of(per) {
        return Err(CliError::Config(format!(
            "bit file length {} is not a multiple of {per} bytes per frame",
            data.len()
        )));
    }
    Ok(data
        .chunks(per)
        .map(|f| (0..bits).map(|i| f[i / 8] >> (7 - i % 8) & 1).collect())
        .collect())
}

pub fn write_llrs(llr: &[f64], out: &mut Vec<u8>) {
    for &l in llr {
        out.extend_from_slice(&(l as f32).to_le_bytes());
    }
}

pub fn read_llr_frames(data: &[u8], n: usize) -> CliResult<Vec<Vec<f64>>> {
    if !data.len().is_multiple_of(4 * n) {
        return Err(CliError::Config(format!(
            "LLR file length {} is not a multiple of {} bytes per frame",
            data.len(),
            4 * n
        )));
    }
    Ok(data
        .chunks(4 * n)
        .map(|f| {
            f.chunks(4)
                .map(|b| f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])))
                .collect()
        })
        .collect())
}

pub fn read_qllr_frames(data: &[u8], n: usize) -> CliResult<Vec<Vec<QLlr>>> {
    if !data.len().is_multiple_of(n) {
        return Err(CliError::Config(format!(
            "quantized LLR file length {} is not a multiple of {n}",
            data.len()
        )));
    }
    data.chunks(n)
        .map(|f| {
            f.iter()
                .map(|&b| QLlr::from_byte(b).map_err(|e| CliError::Config(e.to_string())))
                .collect()
        })
        .collect()
}
