//! Gaussian-approximation density evolution for the binary-input AWGN channel.
//!
//! Every synthetic channel is summarized by the mean of its (assumed
//! consistent Gaussian) LLR. Starting from the channel mean `2/sigma^2`, the
//! check-node ("minus") branch maps `m -> phi^-1(1 - (1 - phi(m))^2)` and the
//! variable-node ("plus") branch maps `m -> 2m`. The `phi` function uses the
//! usual two-piece closed-form approximation, evaluated in the log domain so
//! that the large means of well-polarized channels never underflow.

const SMALL_A: f64 = -0.4527;
const SMALL_B: f64 = 0.86;
const SMALL_C: f64 = 0.0218;
const SPLIT: f64 = 10.0;

/// `ln phi(x)` for `x >= 0`.
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= SPLIT {
        (SMALL_A * x.powf(SMALL_B) + SMALL_C).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// Inverse of [`ln_phi`]: the mean `x` with `ln phi(x) = y`, for `y <= 0`.
pub fn ln_phi_inv(y: f64) -> f64 {
    if y >= 0.0 {
        return 0.0;
    }
    if y >= ln_phi(SPLIT) {
        return ((y - SMALL_C) / SMALL_A).max(0.0).powf(1.0 / SMALL_B);
    }
    // Large-mean branch is strictly decreasing; bracket then bisect.
    let mut lo = SPLIT;
    let mut hi = SPLIT * 2.0;
    while ln_phi(hi) > y {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Mean LLR of the check-node combination of two channels of mean `m`.
pub fn minus_mean(m: f64) -> f64 {
    // 1 - (1 - p)^2 = p (2 - p)
    let lp = ln_phi(m);
    let p = lp.exp();
    ln_phi_inv(lp + (2.0 - p).ln())
}

/// Mean LLR of the variable-node combination of two channels of mean `m`.
pub fn plus_mean(m: f64) -> f64 {
    2.0 * m
}

/// Noise variance of BPSK over AWGN at the given Eb/No (dB) and code rate.
pub fn noise_variance(ebno_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))
}

/// Per-index LLR means (larger = more reliable) for a length-`2^n` code in
/// natural index order. The transform nearest the channel selects the most
/// significant bit of the index.
pub fn channel_means(n: u32, channel_mean: f64) -> Vec<f64> {
    let mut means = vec![channel_mean];
    for _ in 0..n {
        let mut next = Vec::with_capacity(means.len() * 2);
        for &m in &means {
            next.push(minus_mean(m));
            next.push(plus_mean(m));
        }
        means = next;
    }
    means
}
