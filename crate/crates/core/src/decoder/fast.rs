use super::plan::{DecodePlan, Op};
use super::shortcut::{NodeKind, ShortcutNode};
use super::{f_kernel, g_kernel, hard};
use crate::code::PolarCode;
use crate::error::{param, Result};

/// Shortcut-accelerated SC decoder over a fixed code and leaf list.
///
/// Immutable once built; each call owns its scratch, so one instance can be
/// shared by many workers.
#[derive(Debug, Clone)]
pub struct FastDecoder {
    code: PolarCode,
    plan: DecodePlan,
    offsets: Vec<usize>,
}

/// Per-call working memory for [`FastDecoder`].
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    llr: Vec<f64>,
    xhat: Vec<u8>,
    sum: Vec<f64>,
}

impl FastDecoder {
    pub fn new(code: &PolarCode, shortcuts: &[ShortcutNode]) -> Result<Self> {
        let plan = DecodePlan::new(code, shortcuts)?;
        Ok(Self {
            code: code.clone(),
            offsets: depth_offsets(code.len()),
            plan,
        })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn plan(&self) -> &DecodePlan {
        &self.plan
    }

    /// Decodes one frame of natural-order channel LLRs into K data bits.
    pub fn decode(&self, llr: &[f64]) -> Result<Vec<u8>> {
        let mut scratch = Scratch::default();
        let mut out = vec![0u8; self.code.k()];
        self.decode_into(llr, &mut scratch, &mut out)?;
        Ok(out)
    }

    /// As [`decode`](Self::decode) but reusing caller-provided buffers.
    pub fn decode_into(&self, llr: &[f64], scratch: &mut Scratch, out: &mut [u8]) -> Result<()> {
        let len = self.code.len();
        if llr.len() != len {
            return param(format!("{} LLRs supplied for a length-{len} code", llr.len()));
        }
        if out.len() != self.code.k() {
            return param(format!("output buffer holds {} bits, K = {}", out.len(), self.code.k()));
        }
        scratch.llr.resize(2 * len, 0.0);
        scratch.xhat.resize(len, 0);
        scratch.llr[..len].copy_from_slice(llr);
        self.run(scratch);
        for (o, &i) in out.iter_mut().zip(self.code.info_positions()) {
            *o = scratch.xhat[i];
        }
        Ok(())
    }

    /// Full re-encoded codeword estimate (all N positions).
    pub fn decode_codeword(&self, llr: &[f64]) -> Result<Vec<u8>> {
        let len = self.code.len();
        if llr.len() != len {
            return param(format!("{} LLRs supplied for a length-{len} code", llr.len()));
        }
        let mut scratch = Scratch {
            llr: vec![0.0; 2 * len],
            xhat: vec![0; len],
            sum: Vec::new(),
        };
        scratch.llr[..len].copy_from_slice(llr);
        self.run(&mut scratch);
        Ok(scratch.xhat)
    }

    fn run(&self, s: &mut Scratch) {
        let Scratch { llr, xhat, sum } = s;
        for op in self.plan.ops() {
            match *op {
                Op::F { depth, len } => {
                    let half = len / 2;
                    let (src, dst) = llr.split_at_mut(self.offsets[depth as usize + 1]);
                    let src = &src[self.offsets[depth as usize]..][..len];
                    for j in 0..half {
                        dst[j] = f_kernel(src[j], src[j + half]);
                    }
                }
                Op::G { depth, start, len } => {
                    let half = len / 2;
                    let (src, dst) = llr.split_at_mut(self.offsets[depth as usize + 1]);
                    let src = &src[self.offsets[depth as usize]..][..len];
                    let left = &xhat[start..start + half];
                    for j in 0..half {
                        dst[j] = g_kernel(src[j], src[j + half], left[j]);
                    }
                }
                Op::Leaf { depth, node } => {
                    let input = &llr[self.offsets[depth as usize]..][..node.len];
                    let is_frozen = self.code.is_frozen(node.start);
                    resolve_leaf(node, is_frozen, input, &mut xhat[node.start..node.start + node.len], sum);
                }
                Op::Combine { start, len, .. } => {
                    let half = len / 2;
                    let (lo, hi) = xhat[start..start + len].split_at_mut(half);
                    for (a, &b) in lo.iter_mut().zip(hi.iter()) {
                        *a ^= b;
                    }
                }
            }
        }
    }
}

/// Start of each depth's LLR buffer inside one flat allocation of `2N`.
pub(crate) fn depth_offsets(len: usize) -> Vec<usize> {
    let mut offs = vec![0];
    let mut m = len;
    while m > 1 {
        offs.push(offs.last().unwrap() + m);
        m /= 2;
    }
    offs
}

fn resolve_leaf(node: ShortcutNode, first_frozen: bool, llr: &[f64], out: &mut [u8], sum: &mut Vec<f64>) {
    match node.kind {
        NodeKind::Generic => out[0] = if first_frozen { 0 } else { hard(llr[0]) },
        NodeKind::Rate0 => out.fill(0),
        NodeKind::Rate1 => {
            for (o, &l) in out.iter_mut().zip(llr) {
                *o = hard(l);
            }
        }
        NodeKind::Repetition => {
            // Pairwise folding mirrors the additions the plain recursion performs.
            sum.clear();
            sum.extend_from_slice(llr);
            let mut m = sum.len();
            while m > 1 {
                m /= 2;
                for j in 0..m {
                    sum[j] = g_kernel(sum[j], sum[j + m], 0);
                }
            }
            out.fill(hard(sum[0]));
        }
        NodeKind::Spc => {
            let mut parity = 0u8;
            let mut weakest = 0;
            for (j, (o, &l)) in out.iter_mut().zip(llr).enumerate() {
                *o = hard(l);
                parity ^= *o;
                if l.abs() < llr[weakest].abs() {
                    weakest = j;
                }
            }
            out[weakest] ^= parity;
        }
    }
}

/// One-shot shortcut decode; see [`FastDecoder`].
pub fn decode_fast(code: &PolarCode, llr: &[f64], shortcuts: &[ShortcutNode]) -> Result<Vec<u8>> {
    FastDecoder::new(code, shortcuts)?.decode(llr)
}
