use super::{f_kernel, g_kernel, hard};
use crate::code::PolarCode;
use crate::error::{param, Result};

/// Index bit reversal over `bits` bits.
pub(crate) fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// The SC recursion on an interleaved vector: `llr` and `frozen` are in the
/// decoder's bit-reversed order, halves are the odd and even entries (1-based).
/// Returns the re-encoded hard estimate in the same order.
pub fn sc_recursion(llr: &[f64], frozen: &[bool]) -> Vec<u8> {
    let m = llr.len();
    if m == 1 {
        return if frozen[0] {
            vec![0]
        } else {
            vec![hard(llr[0])]
        };
    }
    let half = m / 2;
    let odd: Vec<f64> = llr.iter().step_by(2).copied().collect();
    let even: Vec<f64> = llr.iter().skip(1).step_by(2).copied().collect();
    let v_odd: Vec<bool> = frozen.iter().step_by(2).copied().collect();
    let v_even: Vec<bool> = frozen.iter().skip(1).step_by(2).copied().collect();

    let l: Vec<f64> = odd.iter().zip(&even).map(|(&a, &b)| f_kernel(a, b)).collect();
    let z = sc_recursion(&l, &v_odd);
    let r: Vec<f64> = (0..half).map(|j| g_kernel(odd[j], even[j], z[j])).collect();
    let x = sc_recursion(&r, &v_even);

    let mut u = vec![0u8; m];
    for j in 0..half {
        u[2 * j] = z[j] ^ x[j];
        u[2 * j + 1] = x[j];
    }
    u
}

/// Reference SC decoder. `llr` is in natural order; the result is the K
/// decided data bits (codeword estimate at the free positions).
pub fn decode_sc(code: &PolarCode, llr: &[f64]) -> Result<Vec<u8>> {
    let len = code.len();
    if llr.len() != len {
        return param(format!("{} LLRs supplied for a length-{len} code", llr.len()));
    }
    let n = code.n();
    let rev_llr: Vec<f64> = (0..len).map(|i| llr[bit_reverse(i, n)]).collect();
    let rev_frozen: Vec<bool> = (0..len).map(|i| code.is_frozen(bit_reverse(i, n))).collect();
    let est = sc_recursion(&rev_llr, &rev_frozen);
    Ok(code
        .info_positions()
        .iter()
        .map(|&i| est[bit_reverse(i, n)])
        .collect())
}
