//! Polar code definitions and frozen-set construction.

use serde::{Deserialize, Serialize};

use crate::construction;
use crate::error::{param, Error, Result};

/// Design Eb/No used when none is given.
pub const DEFAULT_DESIGN_SNR_DB: f64 = 6.0;

/// A polar code of length `N = 2^n` with `K` free positions.
///
/// Positions are in natural index order; `frozen[i] == true` pins `u_i` to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCode {
    n: u32,
    frozen: Vec<bool>,
    info: Vec<usize>,
    design_snr_db: Option<f64>,
}

impl PolarCode {
    /// Builds a code from an explicit frozen mask.
    pub fn from_mask(frozen: Vec<bool>) -> Result<Self> {
        let len = frozen.len();
        if len < 2 || !len.is_power_of_two() {
            return param(format!("block length {len} is not a power of two >= 2"));
        }
        let info: Vec<usize> = (0..len).filter(|&i| !frozen[i]).collect();
        if info.is_empty() {
            return param("code has no free positions (K = 0)");
        }
        Ok(Self {
            n: len.trailing_zeros(),
            frozen,
            info,
            design_snr_db: None,
        })
    }

    /// Freezes the `N - K` least reliable synthetic channels under
    /// Gaussian-approximation density evolution at `design_snr_db` (Eb/No).
    /// Equal reliabilities freeze the lower index first.
    pub fn construct(n: u32, k: usize, design_snr_db: f64) -> Result<Self> {
        if n == 0 || n > 24 {
            return param(format!("n = {n} outside 1..=24"));
        }
        let len = 1usize << n;
        if k == 0 || k > len {
            return param(format!("K = {k} outside 1..={len}"));
        }
        if !design_snr_db.is_finite() {
            return param("design SNR must be finite");
        }
        let rate = k as f64 / len as f64;
        let sigma2 = construction::noise_variance(design_snr_db, rate);
        let means = construction::channel_means(n, 2.0 / sigma2);
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| means[a].total_cmp(&means[b]).then(a.cmp(&b)));
        let mut frozen = vec![false; len];
        for &i in &order[..len - k] {
            frozen[i] = true;
        }
        let mut code = Self::from_mask(frozen)?;
        code.design_snr_db = Some(design_snr_db);
        Ok(code)
    }

    /// log2 of the block length.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Block length N.
    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    /// Always false; a code has at least two positions.
    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    /// Number of free positions K.
    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.len() as f64
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Free positions in ascending order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    pub fn design_snr_db(&self) -> Option<f64> {
        self.design_snr_db
    }

    /// Serializable description of this code.
    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            n: self.n,
            k: self.k(),
            design_snr_db: self.design_snr_db,
            frozen_mask: mask_to_hex(&self.frozen),
        }
    }

    pub fn from_file(file: &CodeFile) -> Result<Self> {
        if file.n == 0 || file.n > 24 {
            return Err(Error::Config(format!("n = {} outside 1..=24", file.n)));
        }
        let frozen = hex_to_mask(&file.frozen_mask, 1usize << file.n)?;
        let mut code = Self::from_mask(frozen).map_err(|e| Error::Config(e.to_string()))?;
        if code.k() != file.k {
            return Err(Error::Config(format!(
                "code file declares K = {} but its mask has {} free positions",
                file.k,
                code.k()
            )));
        }
        code.design_snr_db = file.design_snr_db;
        Ok(code)
    }
}

/// On-disk JSON form of a [`PolarCode`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: usize,
    pub design_snr_db: Option<f64>,
    /// Mask bits packed MSB-first: index 0 is the top bit of the first hex digit.
    pub frozen_mask: String,
}

/// Packs a mask into hex digits, MSB first, zero-padding the last nibble.
pub fn mask_to_hex(mask: &[bool]) -> String {
    mask.chunks(4)
        .map(|nib| {
            let v = nib
                .iter()
                .enumerate()
                .fold(0u32, |acc, (j, &b)| acc | (u32::from(b) << (3 - j)));
            char::from_digit(v, 16).unwrap()
        })
        .collect()
}

pub fn hex_to_mask(hex: &str, len: usize) -> Result<Vec<bool>> {
    let digits = len.div_ceil(4);
    if hex.len() != digits {
        return Err(Error::Config(format!(
            "frozen mask has {} hex digits, expected {digits}",
            hex.len()
        )));
    }
    let mut mask = Vec::with_capacity(digits * 4);
    for c in hex.chars() {
        let v = c
            .to_digit(16)
            .ok_or_else(|| Error::Config(format!("invalid hex digit {c:?} in frozen mask")))?;
        for j in 0..4 {
            mask.push(v >> (3 - j) & 1 == 1);
        }
    }
    if mask[len..].iter().any(|&b| b) {
        return Err(Error::Config("non-zero padding bits in frozen mask".into()));
    }
    mask.truncate(len);
    Ok(mask)
}
