use serde::{Deserialize, Serialize};

/// Error counters for one Eb/No point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub frames: u64,
    pub frame_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    /// Wall-clock seconds spent on the point; excluded from equality checks
    /// that compare runs.
    pub wall_time_s: f64,
}

impl ErrorStats {
    pub fn fer(&self) -> f64 {
        ratio(self.frame_errors, self.frames)
    }

    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits)
    }

    /// Records one decoded frame.
    pub fn record(&mut self, bit_errors: u64, bits: u64) {
        self.frames += 1;
        self.bits += bits;
        self.bit_errors += bit_errors;
        if bit_errors > 0 {
            self.frame_errors += 1;
        }
    }

    /// Associative, commutative merge of the counters (wall time adds).
    pub fn merge(&mut self, other: &ErrorStats) {
        self.frames += other.frames;
        self.frame_errors += other.frame_errors;
        self.bits += other.bits;
        self.bit_errors += other.bit_errors;
        self.wall_time_s += other.wall_time_s;
    }

    /// Counters only, for reproducibility comparisons.
    pub fn counts(&self) -> (u64, u64, u64, u64) {
        (self.frames, self.frame_errors, self.bits, self.bit_errors)
    }

    /// Wilson score interval for the FER at normal quantile `z`.
    pub fn fer_wilson(&self, z: f64) -> (f64, f64) {
        wilson(self.frame_errors, self.frames, z)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Wilson score interval, clamped to `[0, 1]`. Empty samples give `[0, 1]`.
pub fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}
