//! Monte-Carlo link simulation: LFSR data, systematic polar encoding, BPSK
//! over AWGN, optional channel quantization, SC decoding and error counting.
//!
//! Frames of a point are grouped into fixed-size chunks. Chunk `c` draws its
//! noise from a generator seeded by `(master seed, Eb/No, c)` and starts the
//! data LFSR at bit offset `first_frame * K`, so every frame's content is a
//! function of the configuration alone. Chunks are merged in index order and
//! the stopping rule is applied frame by frame, so the counters do not depend
//! on how many workers ran the chunks.

mod channel;
mod lfsr;
mod stats;

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use channel::{awgn_llr, awgn_llr_into, uncoded_bpsk_ber};
pub use lfsr::{lfsr_next_block, Lfsr, LfsrConfig};
pub use stats::{wilson, ErrorStats};

use crate::code::PolarCode;
use crate::decoder::{decode_sc, detect_shortcuts, FastDecoder, Scratch, ShortcutCaps};
use crate::encode::encode_systematic_in_place;
use crate::error::{param, Result};
use crate::quant::{quantize, QLlr, QuantSchedule, QuantizedDecoder};

/// Which decoder the link runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderKind {
    /// Reference recursion.
    FloatSc,
    /// Shortcut decoder in floating point.
    FloatFast,
    /// Shortcut decoder on quantized LLRs.
    Quantized,
}

/// When to stop a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_frame_errors: 100,
            max_frames: 100_000_000,
        }
    }
}

/// Frames per work unit.
pub const DEFAULT_CHUNK_FRAMES: u64 = 256;

/// Normal quantile for the reported 95% Wilson interval.
pub const CI_Z: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: PolarCode,
    pub ebno_db: Vec<f64>,
    pub decoder: DecoderKind,
    /// Required for [`DecoderKind::Quantized`].
    pub schedule: Option<QuantSchedule>,
    pub caps: ShortcutCaps,
    pub seed: u64,
    pub stop: StopRule,
    pub lfsr: LfsrConfig,
    pub chunk_frames: u64,
}

impl SimConfig {
    pub fn new(code: PolarCode, decoder: DecoderKind) -> Self {
        Self {
            code,
            ebno_db: Vec::new(),
            decoder,
            schedule: None,
            caps: ShortcutCaps::default(),
            seed: 1,
            stop: StopRule::default(),
            lfsr: LfsrConfig::default(),
            chunk_frames: DEFAULT_CHUNK_FRAMES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stop.min_frame_errors == 0 || self.stop.max_frames == 0 {
            return param("stop rule needs min_frame_errors >= 1 and max_frames >= 1");
        }
        if self.chunk_frames == 0 {
            return param("chunk_frames must be >= 1");
        }
        if self.decoder == DecoderKind::Quantized && self.schedule.is_none() {
            return param("quantized decoder selected without a schedule");
        }
        Lfsr::new(&self.lfsr)?;
        self.caps.validate()
    }
}

enum FrameDecoder {
    Reference(PolarCode),
    Fast(FastDecoder),
    Quantized(QuantizedDecoder, QuantSchedule),
}

impl FrameDecoder {
    fn new(cfg: &SimConfig) -> Result<Self> {
        let leaves = detect_shortcuts(&cfg.code, &cfg.caps)?;
        Ok(match cfg.decoder {
            DecoderKind::FloatSc => Self::Reference(cfg.code.clone()),
            DecoderKind::FloatFast => Self::Fast(FastDecoder::new(&cfg.code, &leaves)?),
            DecoderKind::Quantized => {
                let s = cfg.schedule.clone().expect("validated");
                Self::Quantized(QuantizedDecoder::new(&cfg.code, &leaves, &s)?, s)
            }
        })
    }
}

/// SplitMix64 finalizer over a combined key.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15).rotate_left(17);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Chunk {
    index: u64,
    first_frame: u64,
    frames: u64,
}

/// Per-frame bit-error counts of one chunk.
fn run_chunk(cfg: &SimConfig, dec: &FrameDecoder, ebno_db: f64, point_seed: u64, chunk: &Chunk) -> Result<Vec<u32>> {
    let code = &cfg.code;
    let k = code.k();
    let len = code.len();
    let mut lfsr = Lfsr::new(&cfg.lfsr)?;
    lfsr.jump(chunk.first_frame * k as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(mix(point_seed, chunk.index));

    let mut data = vec![0u8; k];
    let mut x = vec![0u8; len];
    let mut llr = vec![0.0; len];
    let mut qllr = vec![QLlr::ZERO; len];
    let mut dhat = vec![0u8; k];
    let mut scratch = Scratch::default();
    let mut out = Vec::with_capacity(chunk.frames as usize);

    for _ in 0..chunk.frames {
        lfsr.fill(&mut data);
        x.fill(0);
        for (&p, &b) in code.info_positions().iter().zip(&data) {
            x[p] = b;
        }
        encode_systematic_in_place(code, &mut x);
        awgn_llr_into(&x, ebno_db, code.rate(), &mut rng, &mut llr);
        match dec {
            FrameDecoder::Reference(c) => dhat = decode_sc(c, &llr)?,
            FrameDecoder::Fast(d) => d.decode_into(&llr, &mut scratch, &mut dhat)?,
            FrameDecoder::Quantized(d, s) => {
                for (q, &l) in qllr.iter_mut().zip(&llr) {
                    *q = quantize(l, s.channel());
                }
                dhat = d.decode(&qllr)?;
            }
        }
        let errs = data.iter().zip(&dhat).filter(|(a, b)| a != b).count();
        out.push(errs as u32);
    }
    Ok(out)
}

#[cfg(feature = "parallel")]
fn wave_width() -> u64 {
    rayon::current_num_threads().max(1) as u64
}

#[cfg(not(feature = "parallel"))]
fn wave_width() -> u64 {
    1
}

#[cfg(feature = "parallel")]
fn run_wave(
    cfg: &SimConfig,
    dec: &FrameDecoder,
    ebno_db: f64,
    seed: u64,
    chunks: &[Chunk],
) -> Vec<Result<Vec<u32>>> {
    use rayon::prelude::*;
    chunks.par_iter().map(|c| run_chunk(cfg, dec, ebno_db, seed, c)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_wave(
    cfg: &SimConfig,
    dec: &FrameDecoder,
    ebno_db: f64,
    seed: u64,
    chunks: &[Chunk],
) -> Vec<Result<Vec<u32>>> {
    chunks.iter().map(|c| run_chunk(cfg, dec, ebno_db, seed, c)).collect()
}

// FrameDecoder holds only immutable decoders.
#[cfg(feature = "parallel")]
const _: fn() = || {
    fn assert_sync<T: Sync>() {}
    assert_sync::<FrameDecoder>();
};

/// Simulates one Eb/No point until the stopping rule fires.
pub fn run_point(cfg: &SimConfig, ebno_db: f64) -> Result<ErrorStats> {
    cfg.validate()?;
    if !ebno_db.is_finite() {
        return param("Eb/No must be finite");
    }
    let started = Instant::now();
    let dec = FrameDecoder::new(cfg)?;
    let point_seed = mix(cfg.seed, ebno_db.to_bits());
    let k = cfg.code.k() as u64;
    let mut stats = ErrorStats::default();
    let mut next = 0u64;

    'waves: loop {
        let chunks: Vec<Chunk> = (next..next + wave_width())
            .map(|index| Chunk {
                index,
                first_frame: index * cfg.chunk_frames,
                frames: cfg.chunk_frames,
            })
            .filter(|c| c.first_frame < cfg.stop.max_frames)
            .map(|c| Chunk {
                frames: c.frames.min(cfg.stop.max_frames - c.first_frame),
                ..c
            })
            .collect();
        if chunks.is_empty() {
            break;
        }
        next += chunks.len() as u64;
        for result in run_wave(cfg, &dec, ebno_db, point_seed, &chunks) {
            for errs in result? {
                stats.record(u64::from(errs), k);
                if stats.frame_errors >= cfg.stop.min_frame_errors || stats.frames >= cfg.stop.max_frames {
                    break 'waves;
                }
            }
        }
    }
    stats.wall_time_s = started.elapsed().as_secs_f64();
    Ok(stats)
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ebno_db: f64,
    pub stats: ErrorStats,
}

impl SweepPoint {
    pub fn uncoded_ber(&self) -> f64 {
        uncoded_bpsk_ber(self.ebno_db)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
}

/// Header of the sweep CSV.
pub const CSV_HEADER: &str = "ebno_db,frames,frame_errors,bit_errors,fer,ber,fer_ci_lo,fer_ci_hi,uncoded_ber";

impl Sweep {
    /// CSV with the fixed column set; contains no timing data.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let (lo, hi) = p.stats.fer_wilson(CI_Z);
            writeln!(
                s,
                "{},{},{},{},{:e},{:e},{:e},{:e},{:e}",
                p.ebno_db,
                p.stats.frames,
                p.stats.frame_errors,
                p.stats.bit_errors,
                p.stats.fer(),
                p.stats.ber(),
                lo,
                hi,
                p.uncoded_ber()
            )
            .unwrap();
        }
        s
    }

    /// Eb/No at which the FER curve crosses `target`, by linear
    /// interpolation of log10(FER) between the bracketing points.
    pub fn crossing_db(&self, target: f64) -> Option<f64> {
        let lt = target.log10();
        self.points.windows(2).find_map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let (fa, fb) = (a.stats.fer(), b.stats.fer());
            if fa >= target && fb < target {
                if fb == 0.0 {
                    return Some(b.ebno_db);
                }
                let (la, lb) = (fa.log10(), fb.log10());
                Some(a.ebno_db + (la - lt) / (la - lb) * (b.ebno_db - a.ebno_db))
            } else {
                None
            }
        })
    }
}

/// Runs every configured Eb/No point in order.
pub fn run_sweep(cfg: &SimConfig) -> Result<Sweep> {
    if cfg.ebno_db.is_empty() {
        return param("Eb/No list is empty");
    }
    if cfg.ebno_db.windows(2).any(|w| w[1] <= w[0]) {
        return param("Eb/No list must be strictly ascending");
    }
    let points = cfg
        .ebno_db
        .iter()
        .map(|&e| run_point(cfg, e).map(|stats| SweepPoint { ebno_db: e, stats }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { points })
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_ebno_list(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| crate::Error::Parameter(format!("bad Eb/No value {s:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return param(format!("bad Eb/No range {spec:?}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            // round to 1e-9 dB so 0.1-steps print cleanly
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => param(format!("bad Eb/No spec {spec:?}")),
    }
}
