//! Successive-cancellation decoding.
//!
//! Three decoders share one contract (channel LLRs in, systematic data bits
//! out):
//!
//! * [`decode_sc`], the plain recursion on interleaved (odd/even) halves of a
//!   bit-reversed LLR vector, kept as the reference;
//! * [`FastDecoder`] / [`decode_fast`], an iterative walk over a pruned
//!   segment tree in natural order whose shortcut leaves are resolved in
//!   closed form;
//! * the fixed-point variant in [`crate::quant`].
//!
//! All three return the re-encoded estimate restricted to the free positions,
//! which for a systematically encoded frame is the transmitted data.

pub(crate) mod fast;
mod literal;
mod plan;
mod shortcut;

pub use fast::{decode_fast, FastDecoder, Scratch};
pub use literal::{decode_sc, sc_recursion};
pub use plan::{DecodePlan, Op};
pub use shortcut::{detect_shortcuts, NodeKind, ShortcutCaps, ShortcutNode};

/// Min-sum check-node combiner: `sign(a) sign(b) min(|a|, |b|)`, `sign(0) = +1`.
#[inline]
pub fn f_kernel(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node combiner with hard feedback: `b + a` for `z = 0`, `b - a` for `z = 1`.
#[inline]
pub fn g_kernel(a: f64, b: f64, z: u8) -> f64 {
    if z == 0 {
        b + a
    } else {
        b - a
    }
}

/// Hard decision; a tie at zero decides 0.
#[inline]
pub fn hard(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
