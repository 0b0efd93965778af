//! Closed-form latency and throughput of the multicore wrapper.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchConfig {
    /// Core count P (power of two).
    pub cores: u32,
    /// Core clock f_c in Hz.
    pub core_hz: f64,
    /// IO clock period T_IO in seconds; nominally 1/(P f_c).
    pub io_period_s: f64,
    /// Core clock phase in degrees; `None` means unknown (report min/max).
    pub theta_deg: Option<f64>,
    /// Pipeline depth D.
    pub depth: usize,
    /// Channel LLR width Q.
    pub channel_bits: u8,
    pub n: usize,
    pub k: usize,
}

impl ArchConfig {
    /// Config with T_IO = 1/(P f_c), unknown phase and 5-bit channel LLRs.
    pub fn new(cores: u32, core_hz: f64, depth: usize, n: usize, k: usize) -> Self {
        Self {
            cores,
            core_hz,
            io_period_s: 1.0 / (f64::from(cores) * core_hz),
            theta_deg: None,
            depth,
            channel_bits: 5,
            n,
            k,
        }
    }

    pub fn with_io_period(mut self, t_io_s: f64) -> Self {
        self.io_period_s = t_io_s;
        self
    }

    pub fn with_theta(mut self, theta_deg: f64) -> Self {
        self.theta_deg = Some(theta_deg);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores == 0 || !self.cores.is_power_of_two() {
            return param(format!("core count {} is not a power of two", self.cores));
        }
        if !(self.core_hz.is_finite() && self.core_hz > 0.0) {
            return param("core clock must be positive");
        }
        if !(self.io_period_s.is_finite() && self.io_period_s > 0.0) {
            return param("IO period must be positive");
        }
        if let Some(t) = self.theta_deg {
            if !(0.0..360.0).contains(&t) {
                return param(format!("theta {t} outside [0, 360)"));
            }
        }
        if self.depth == 0 {
            return param("pipeline depth must be >= 1");
        }
        if self.k > self.n {
            return param(format!("K = {} exceeds N = {}", self.k, self.n));
        }
        Ok(())
    }
}

/// IO cycles a loaded frame waits for its core clock edge:
/// `floor(mod(P (theta + 180) / 360, P))`, always in `0..P`.
pub fn phase_wait_cycles(cores: u32, theta_deg: f64) -> u32 {
    let p = f64::from(cores);
    let m = (p * (theta_deg + 180.0) / 360.0).rem_euclid(p).floor() as u32;
    m.min(cores - 1)
}

/// Latency in IO cycles for a given wait.
pub fn latency_cycles(cores: u32, depth: usize, wait: u32) -> u64 {
    u64::from(cores) * (depth as u64 + 2) + u64::from(wait)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyInterval {
    pub min_s: f64,
    pub max_s: f64,
}

impl LatencyInterval {
    /// Widens the bounds to a grid of `resolution` seconds (min rounded down,
    /// max rounded up).
    pub fn rounded_outward(&self, resolution: f64) -> Self {
        // nudge absorbs binary representation error at exact grid points
        let eps = 1e-9;
        Self {
            min_s: ((self.min_s / resolution) + eps).floor() * resolution,
            max_s: ((self.max_s / resolution) - eps).ceil() * resolution,
        }
    }
}

/// `L = T_IO (P (D + 2) + mod term)`; the interval collapses to one value
/// when the phase is known, otherwise it spans mod terms 0..P-1.
pub fn latency(cfg: &ArchConfig) -> Result<LatencyInterval> {
    cfg.validate()?;
    let t = cfg.io_period_s;
    let (lo, hi) = match cfg.theta_deg {
        Some(theta) => {
            let w = phase_wait_cycles(cfg.cores, theta);
            (w, w)
        }
        None => (0, cfg.cores - 1),
    };
    Ok(LatencyInterval {
        min_s: t * latency_cycles(cfg.cores, cfg.depth, lo) as f64,
        max_s: t * latency_cycles(cfg.cores, cfg.depth, hi) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub info_bps: f64,
    pub coded_bps: f64,
}

/// One frame per core clock per core.
pub fn throughput(cfg: &ArchConfig) -> Result<Throughput> {
    cfg.validate()?;
    let frames = cfg.core_hz * f64::from(cfg.cores);
    Ok(Throughput {
        info_bps: cfg.k as f64 * frames,
        coded_bps: cfg.n as f64 * frames,
    })
}
