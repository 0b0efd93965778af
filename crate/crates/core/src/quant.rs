//! Sign-magnitude fixed-point LLRs and the adaptively quantized SC decoder.
//!
//! All formats of one decoder share a single step (LLR units per LSB); a
//! stage only differs in how many magnitude bits it keeps. Values that do
//! not fit are clipped to the largest magnitude, keeping their sign, and
//! every clip is counted. A result whose exact magnitude is zero is stored
//! with a positive sign.

use serde::{Deserialize, Serialize};

use crate::code::PolarCode;
use crate::construction::noise_variance;
use crate::decoder::{DecodePlan, NodeKind, Op, ShortcutNode};
use crate::error::{config, param, Error, Result};

/// Width and scale of a fixed-point LLR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QFormat {
    /// Sign bit plus `total_bits - 1` magnitude bits; 1 means sign only.
    pub total_bits: u8,
    /// LLR units per magnitude LSB.
    pub step: f64,
}

impl QFormat {
    pub fn new(total_bits: u8, step: f64) -> Result<Self> {
        let f = Self { total_bits, step };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.total_bits) {
            return param(format!("total_bits {} outside 1..=8", self.total_bits));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return param(format!("step {} must be positive", self.step));
        }
        Ok(())
    }

    /// Largest representable magnitude in LSBs.
    pub fn max_magnitude(&self) -> u8 {
        ((1u16 << (self.total_bits - 1)) - 1) as u8
    }
}

/// A sign-magnitude LLR. Positive favors bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QLlr {
    pub negative: bool,
    pub magnitude: u8,
}

impl QLlr {
    pub const ZERO: QLlr = QLlr {
        negative: false,
        magnitude: 0,
    };

    pub fn new(negative: bool, magnitude: u8) -> Self {
        Self { negative, magnitude }
    }

    /// Signed magnitude in LSBs.
    pub fn signed(self) -> i32 {
        if self.negative {
            -i32::from(self.magnitude)
        } else {
            i32::from(self.magnitude)
        }
    }

    pub fn dequantize(self, step: f64) -> f64 {
        f64::from(self.signed()) * step
    }

    /// Hard decision from the sign bit.
    pub fn bit(self) -> u8 {
        u8::from(self.negative)
    }

    /// Frame byte: bit 7 sign, bits 3..0 magnitude.
    pub fn to_byte(self) -> Result<u8> {
        if self.magnitude > 0x0f {
            return param(format!("magnitude {} does not fit the 4-bit frame field", self.magnitude));
        }
        Ok((u8::from(self.negative) << 7) | self.magnitude)
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        if b & 0x70 != 0 {
            return Err(Error::Config(format!("quantized LLR byte {b:#04x} has unused bits set")));
        }
        Ok(Self {
            negative: b & 0x80 != 0,
            magnitude: b & 0x0f,
        })
    }
}

/// Running count of clipped values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SaturationCounter {
    pub count: u64,
}

/// Clips an exact signed LSB value into `fmt`.
#[inline]
fn fit(value: i32, fmt: &QFormat, sat: &mut SaturationCounter) -> QLlr {
    let max = i32::from(fmt.max_magnitude());
    let mag = value.abs();
    if mag == 0 {
        return QLlr::ZERO;
    }
    let mag = if mag > max {
        sat.count += 1;
        max
    } else {
        mag
    };
    QLlr::new(value < 0, mag as u8)
}

/// Rounds `|x| / step` to the nearest integer (halves away from zero),
/// saturating at the format's largest magnitude. The sign of `x` is kept even
/// when the magnitude rounds to zero; `0.0` and `-0.0` are positive.
pub fn quantize(x: f64, fmt: &QFormat) -> QLlr {
    quantize_counted(x, fmt, &mut SaturationCounter::default())
}

pub fn quantize_counted(x: f64, fmt: &QFormat, sat: &mut SaturationCounter) -> QLlr {
    let levels = (x.abs() / fmt.step).round();
    let max = f64::from(fmt.max_magnitude());
    let mag = if levels > max {
        sat.count += 1;
        max
    } else {
        levels
    };
    QLlr::new(x < 0.0, mag as u8)
}

pub fn q_f_kernel(a: QLlr, b: QLlr, out: &QFormat, sat: &mut SaturationCounter) -> QLlr {
    let mag = i32::from(a.magnitude.min(b.magnitude));
    fit(if a.negative != b.negative { -mag } else { mag }, out, sat)
}

pub fn q_g_kernel(a: QLlr, b: QLlr, z: u8, out: &QFormat, sat: &mut SaturationCounter) -> QLlr {
    let v = if z == 0 {
        b.signed() + a.signed()
    } else {
        b.signed() - a.signed()
    };
    fit(v, out, sat)
}

/// Per-depth storage formats for the quantized decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantSchedule {
    channel: QFormat,
    /// `stage[t - 1]` is the width at recursion depth `t` (1..=n).
    stage_bits: Vec<u8>,
}

/// JSON form of a [`QuantSchedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub channel_bits: u8,
    pub step: f64,
    /// Widths for depths 1..=n (the channel is depth 0).
    pub per_depth_bits: Vec<u8>,
}

/// Channel width used by the default schedules.
pub const DEFAULT_CHANNEL_BITS: u8 = 5;

impl QuantSchedule {
    pub fn new(channel: QFormat, stage_bits: Vec<u8>) -> Result<Self> {
        channel.validate()?;
        for &b in &stage_bits {
            QFormat::new(b, channel.step)?;
        }
        Ok(Self { channel, stage_bits })
    }

    /// Every stage at the channel width.
    pub fn uniform(n: u32, bits: u8, step: f64) -> Result<Self> {
        Self::new(QFormat::new(bits, step)?, vec![bits; n as usize])
    }

    /// Widths decay by one bit every `period` depths from 5 at the root,
    /// floored at `min_bits`; for n = 10, period 2 and `min_bits = 1` this is
    /// 5,5,4,4,3,3,2,2,1,1.
    pub fn decaying(n: u32, step: f64, min_bits: u8, period: u32) -> Result<Self> {
        if period == 0 {
            return config("decay period must be >= 1");
        }
        let bits = (0..n)
            .map(|t| (DEFAULT_CHANNEL_BITS as i32 - (t / period) as i32).max(i32::from(min_bits)) as u8)
            .collect();
        Self::new(QFormat::new(DEFAULT_CHANNEL_BITS, step)?, bits)
    }

    /// The default adaptive schedule for a code at a design Eb/No:
    /// 5,5,5,5,4,4,4,4,3,3 for n = 10.
    pub fn adaptive_default(code: &PolarCode, design_ebno_db: f64) -> Result<Self> {
        let step = channel_step(design_ebno_db, code.rate(), DEFAULT_CHANNEL_BITS);
        Self::decaying(code.n(), step, DEFAULT_MIN_BITS, DEFAULT_DECAY_PERIOD)
    }

    pub fn channel(&self) -> &QFormat {
        &self.channel
    }

    pub fn step(&self) -> f64 {
        self.channel.step
    }

    pub fn depths(&self) -> usize {
        self.stage_bits.len()
    }

    pub fn stage_bits(&self) -> &[u8] {
        &self.stage_bits
    }

    /// Format at recursion depth `t` (0 = channel).
    pub fn format_at(&self, depth: u32) -> Option<QFormat> {
        if depth == 0 {
            Some(self.channel)
        } else {
            self.stage_bits.get(depth as usize - 1).map(|&b| QFormat {
                total_bits: b,
                step: self.channel.step,
            })
        }
    }

    pub fn to_file(&self) -> ScheduleFile {
        ScheduleFile {
            channel_bits: self.channel.total_bits,
            step: self.channel.step,
            per_depth_bits: self.stage_bits.clone(),
        }
    }

    pub fn from_file(f: &ScheduleFile) -> Result<Self> {
        let channel = QFormat::new(f.channel_bits, f.step).map_err(|e| Error::Config(e.to_string()))?;
        Self::new(channel, f.per_depth_bits.clone()).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Smallest width used by [`QuantSchedule::adaptive_default`].
pub const DEFAULT_MIN_BITS: u8 = 3;

/// Depths per one-bit width reduction in [`QuantSchedule::adaptive_default`].
///
/// Faster decay (two depths per bit down to one bit) costs about 0.85 dB at
/// FER 1e-3 on the (1024, 854) code because every stage shares the channel
/// step, so narrow deep stages saturate the already-large polarized LLRs.
pub const DEFAULT_DECAY_PERIOD: u32 = 4;

/// Channel step such that `mean + 3 std` of the channel LLR at the design
/// point lands on the largest magnitude: LLR ~ N(2/s2, 4/s2), so the span is
/// `2/s2 + 6/s`.
pub fn channel_step(design_ebno_db: f64, rate: f64, channel_bits: u8) -> f64 {
    let sigma2 = noise_variance(design_ebno_db, rate);
    let span = 2.0 / sigma2 + 6.0 / sigma2.sqrt();
    span / f64::from(((1u16 << (channel_bits - 1)) - 1) as u8)
}

/// SC decoder on fixed-point LLRs following the shortcut decoder's schedule.
#[derive(Debug, Clone)]
pub struct QuantizedDecoder {
    code: PolarCode,
    plan: DecodePlan,
    formats: Vec<QFormat>,
    offsets: Vec<usize>,
}

impl QuantizedDecoder {
    pub fn new(code: &PolarCode, shortcuts: &[ShortcutNode], schedule: &QuantSchedule) -> Result<Self> {
        let plan = DecodePlan::new(code, shortcuts)?;
        let n = code.n();
        if schedule.depths() < n as usize {
            return config(format!(
                "schedule covers depths 1..={} but the code needs 1..={n}",
                schedule.depths()
            ));
        }
        let formats = (0..=n).map(|t| schedule.format_at(t).unwrap()).collect();
        Ok(Self {
            code: code.clone(),
            plan,
            formats,
            offsets: crate::decoder::fast::depth_offsets(code.len()),
        })
    }

    pub fn code(&self) -> &PolarCode {
        &self.code
    }

    pub fn decode(&self, qllr: &[QLlr]) -> Result<Vec<u8>> {
        let mut sat = SaturationCounter::default();
        self.decode_counted(qllr, &mut sat)
    }

    pub fn decode_counted(&self, qllr: &[QLlr], sat: &mut SaturationCounter) -> Result<Vec<u8>> {
        let len = self.code.len();
        if qllr.len() != len {
            return param(format!("{} LLRs supplied for a length-{len} code", qllr.len()));
        }
        let max = self.formats[0].max_magnitude();
        if let Some(i) = qllr.iter().position(|q| q.magnitude > max) {
            return param(format!("channel LLR {i} exceeds the {}-bit channel format", self.formats[0].total_bits));
        }
        let mut buf = vec![QLlr::ZERO; 2 * len];
        let mut xhat = vec![0u8; len];
        buf[..len].copy_from_slice(qllr);
        self.run(&mut buf, &mut xhat, sat);
        Ok(self.code.info_positions().iter().map(|&i| xhat[i]).collect())
    }

    fn run(&self, llr: &mut [QLlr], xhat: &mut [u8], sat: &mut SaturationCounter) {
        for op in self.plan.ops() {
            match *op {
                Op::F { depth, len } => {
                    let d = depth as usize;
                    let half = len / 2;
                    let out = self.formats[d + 1];
                    let (src, dst) = llr.split_at_mut(self.offsets[d + 1]);
                    let src = &src[self.offsets[d]..][..len];
                    for j in 0..half {
                        dst[j] = q_f_kernel(src[j], src[j + half], &out, sat);
                    }
                }
                Op::G { depth, start, len } => {
                    let d = depth as usize;
                    let half = len / 2;
                    let out = self.formats[d + 1];
                    let (src, dst) = llr.split_at_mut(self.offsets[d + 1]);
                    let src = &src[self.offsets[d]..][..len];
                    for j in 0..half {
                        dst[j] = q_g_kernel(src[j], src[j + half], xhat[start + j], &out, sat);
                    }
                }
                Op::Leaf { depth, node } => {
                    let input = &llr[self.offsets[depth as usize]..][..node.len];
                    let frozen = self.code.is_frozen(node.start);
                    resolve_leaf(node, frozen, input, &mut xhat[node.start..node.start + node.len]);
                }
                Op::Combine { start, len, .. } => {
                    let half = len / 2;
                    for j in 0..half {
                        xhat[start + j] ^= xhat[start + half + j];
                    }
                }
            }
        }
    }
}

fn resolve_leaf(node: ShortcutNode, first_frozen: bool, llr: &[QLlr], out: &mut [u8]) {
    match node.kind {
        NodeKind::Generic => out[0] = if first_frozen { 0 } else { llr[0].bit() },
        NodeKind::Rate0 => out.fill(0),
        NodeKind::Rate1 => {
            for (o, q) in out.iter_mut().zip(llr) {
                *o = q.bit();
            }
        }
        NodeKind::Repetition => {
            // unclipped accumulator
            let sum: i32 = llr.iter().map(|q| q.signed()).sum();
            out.fill(u8::from(sum < 0));
        }
        NodeKind::Spc => {
            let mut parity = 0u8;
            let mut weakest = 0;
            for (j, (o, q)) in out.iter_mut().zip(llr).enumerate() {
                *o = q.bit();
                parity ^= *o;
                if q.magnitude < llr[weakest].magnitude {
                    weakest = j;
                }
            }
            out[weakest] ^= parity;
        }
    }
}

/// One-shot quantized decode.
pub fn decode_sc_quantized(
    code: &PolarCode,
    qllr: &[QLlr],
    schedule: &QuantSchedule,
    shortcuts: &[ShortcutNode],
) -> Result<Vec<u8>> {
    QuantizedDecoder::new(code, shortcuts, schedule)?.decode(qllr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::{f_kernel, g_kernel};

    fn fmt(bits: u8) -> QFormat {
        QFormat::new(bits, 0.5).unwrap()
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize(100.0, &fmt(5)), QLlr::new(false, 15));
        assert_eq!(quantize(-0.24, &fmt(5)), QLlr::new(true, 0));
        assert_eq!(quantize(0.25, &fmt(5)), QLlr::new(false, 1));
        assert_eq!(quantize(-0.0, &fmt(5)), QLlr::ZERO);
        assert_eq!(quantize(-3.0, &fmt(1)), QLlr::new(true, 0));
    }

    #[test]
    fn quantize_counts_saturation() {
        let mut sat = SaturationCounter::default();
        quantize_counted(7.5, &fmt(5), &mut sat);
        assert_eq!(sat.count, 0);
        quantize_counted(7.76, &fmt(5), &mut sat);
        assert_eq!(sat.count, 1);
    }

    #[test]
    fn error_bounded_outside_saturation() {
        let f = fmt(5);
        let limit = f64::from(f.max_magnitude()) * f.step;
        let mut x = -8.0f64;
        while x <= 8.0 {
            let back = quantize(x, &f).dequantize(f.step);
            if x.abs() <= limit + f.step / 2.0 {
                assert!((back - x).abs() <= f.step / 2.0 + 1e-12, "x={x}");
            } else {
                assert_eq!(back.abs(), limit);
            }
            x += 0.01;
        }
    }

    #[test]
    fn kernel_examples() {
        let mut sat = SaturationCounter::default();
        let out3 = fmt(3);
        assert_eq!(q_f_kernel(QLlr::new(false, 3), QLlr::new(true, 7), &out3, &mut sat), QLlr::new(true, 3));
        assert_eq!(q_f_kernel(QLlr::new(false, 0), QLlr::new(true, 5), &out3, &mut sat), QLlr::ZERO);
        let out5 = fmt(5);
        let two = QLlr::new(false, 2);
        let three = QLlr::new(false, 3);
        assert_eq!(q_g_kernel(two, three, 0, &out5, &mut sat), QLlr::new(false, 5));
        assert_eq!(q_g_kernel(two, three, 1, &out5, &mut sat), QLlr::new(false, 1));
        assert_eq!(sat.count, 0);
        let max = QLlr::new(false, 15);
        assert_eq!(q_g_kernel(max, max, 0, &out5, &mut sat), max);
        assert_eq!(sat.count, 1);
    }

    #[test]
    fn narrow_output_keeps_sign() {
        let mut sat = SaturationCounter::default();
        let q = q_f_kernel(QLlr::new(true, 4), QLlr::new(false, 6), &fmt(1), &mut sat);
        assert_eq!(q, QLlr::new(true, 0));
        assert_eq!(sat.count, 1);
    }

    /// Every operand pair of up to 5 bits: the fixed-point kernels equal the
    /// real kernels applied to dequantized inputs whenever nothing clips.
    #[test]
    fn kernels_agree_with_real_arithmetic_exhaustively() {
        let f = fmt(5);
        let out = fmt(6);
        let all: Vec<QLlr> = (0..=15u8)
            .flat_map(|m| [QLlr::new(false, m), QLlr::new(true, m)])
            .collect();
        for &a in &all {
            for &b in &all {
                let (ra, rb) = (a.dequantize(f.step), b.dequantize(f.step));
                let mut sat = SaturationCounter::default();
                let qf = q_f_kernel(a, b, &out, &mut sat);
                assert_eq!(qf.dequantize(f.step), f_kernel(ra, rb).abs() * if qf.negative { -1.0 } else { 1.0 });
                assert_eq!(qf, quantize(f_kernel(ra, rb), &out).normalized());
                for z in 0..2 {
                    let qg = q_g_kernel(a, b, z, &out, &mut sat);
                    assert_eq!(qg.dequantize(f.step), g_kernel(ra, rb, z));
                }
                assert_eq!(sat.count, 0);
            }
        }
    }

    impl QLlr {
        fn normalized(self) -> Self {
            if self.magnitude == 0 {
                QLlr::ZERO
            } else {
                self
            }
        }
    }

    #[test]
    fn frame_byte_layout() {
        assert_eq!(QLlr::new(true, 9).to_byte().unwrap(), 0x89);
        assert_eq!(QLlr::from_byte(0x8f).unwrap(), QLlr::new(true, 15));
        assert!(QLlr::from_byte(0x10).is_err());
        assert!(QLlr::new(false, 16).to_byte().is_err());
    }

    #[test]
    fn default_schedule_shape() {
        let s = QuantSchedule::decaying(10, 1.0, 1, 2).unwrap();
        assert_eq!(s.stage_bits(), &[5, 5, 4, 4, 3, 3, 2, 2, 1, 1]);
        assert_eq!(s.format_at(0).unwrap().total_bits, 5);
        assert_eq!(s.format_at(10).unwrap().total_bits, 1);
        assert!(s.format_at(11).is_none());
        let code = PolarCode::construct(10, 854, 6.0).unwrap();
        let d = QuantSchedule::adaptive_default(&code, 6.0).unwrap();
        assert_eq!(d.stage_bits(), &[5, 5, 5, 5, 4, 4, 4, 4, 3, 3]);
        assert!(QuantSchedule::decaying(4, 1.0, 1, 0).is_err());
    }

    #[test]
    fn short_schedule_is_a_config_error() {
        let code = PolarCode::construct(4, 8, 3.0).unwrap();
        let leaves = crate::decoder::detect_shortcuts(&code, &Default::default()).unwrap();
        let s = QuantSchedule::uniform(3, 5, 0.5).unwrap();
        assert!(matches!(QuantizedDecoder::new(&code, &leaves, &s), Err(Error::Config(_))));
    }

    #[test]
    fn schedule_file_round_trip() {
        let s = QuantSchedule::decaying(6, 0.75, 2, 2).unwrap();
        let back = QuantSchedule::from_file(&s.to_file()).unwrap();
        assert_eq!(back, s);
        let bad = ScheduleFile {
            channel_bits: 5,
            step: 0.5,
            per_depth_bits: vec![5, 9],
        };
        assert!(QuantSchedule::from_file(&bad).is_err());
    }

    #[test]
    fn step_spans_three_sigma() {
        let step = channel_step(6.0, 854.0 / 1024.0, 5);
        let s2 = noise_variance(6.0, 854.0 / 1024.0);
        assert!((step * 15.0 - (2.0 / s2 + 6.0 / s2.sqrt())).abs() < 1e-9);
    }
}
