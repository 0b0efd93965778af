use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Fibonacci LFSR configuration: feedback polynomial exponents and seed.
///
/// `taps = [31, 28]` is `x^31 + x^28 + 1` (PRBS-31).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LfsrConfig {
    pub taps: Vec<u32>,
    pub seed: u64,
}

impl Default for LfsrConfig {
    fn default() -> Self {
        Self {
            taps: vec![31, 28],
            seed: 0x2545_f491,
        }
    }
}

impl LfsrConfig {
    pub fn prbs7(seed: u64) -> Self {
        Self { taps: vec![7, 6], seed }
    }
}

/// Fibonacci shift register. Each step emits the feedback bit and shifts it
/// in at the low end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    taps: u64,
    degree: u32,
    state: u64,
}

impl Lfsr {
    pub fn new(cfg: &LfsrConfig) -> Result<Self> {
        let degree = cfg.taps.iter().copied().max().unwrap_or(0);
        if degree == 0 || degree > 63 {
            return param(format!("LFSR degree {degree} outside 1..=63"));
        }
        if cfg.taps.contains(&0) {
            return param("LFSR tap exponents start at 1");
        }
        let taps = cfg.taps.iter().fold(0u64, |acc, &t| acc | 1 << (t - 1));
        let state = cfg.seed & mask(degree);
        if state == 0 {
            return param("LFSR state must be non-zero");
        }
        Ok(Self { taps, degree, state })
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn next_bit(&mut self) -> u8 {
        let fb = ((self.state & self.taps).count_ones() & 1) as u64;
        self.state = ((self.state << 1) | fb) & mask(self.degree);
        fb as u8
    }

    /// Emits the next `k` bits.
    pub fn next_block(&mut self, k: usize) -> Vec<u8> {
        let mut out = vec![0u8; k];
        self.fill(&mut out);
        out
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out.iter_mut() {
            *b = self.next_bit();
        }
    }

    /// Advances the register by `steps` in O(degree^3 log steps).
    pub fn jump(&mut self, steps: u64) {
        let mut pow = self.step_matrix();
        let mut e = steps;
        while e > 0 {
            if e & 1 == 1 {
                self.state = apply(&pow, self.state);
            }
            pow = compose(&pow, &pow);
            e >>= 1;
        }
    }

    /// Column `i` is the image of state bit `i` after one step.
    fn step_matrix(&self) -> Vec<u64> {
        (0..self.degree)
            .map(|i| {
                let e = 1u64 << i;
                let fb = ((e & self.taps).count_ones() & 1) as u64;
                ((e << 1) | fb) & mask(self.degree)
            })
            .collect()
    }
}

fn mask(degree: u32) -> u64 {
    (1u64 << degree) - 1
}

fn apply(m: &[u64], v: u64) -> u64 {
    m.iter()
        .enumerate()
        .filter(|(i, _)| v >> i & 1 == 1)
        .fold(0, |acc, (_, &c)| acc ^ c)
}

/// `a ∘ b` (apply `b` then `a`); here both are powers of one map so order is moot.
fn compose(a: &[u64], b: &[u64]) -> Vec<u64> {
    b.iter().map(|&c| apply(a, c)).collect()
}

/// Functional form: the next `k` bits and the advanced register.
pub fn lfsr_next_block(mut state: Lfsr, k: usize) -> (Vec<u8>, Lfsr) {
    let bits = state.next_block(k);
    (bits, state)
}
