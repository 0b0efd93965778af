use rand::Rng;
use rand_distr::StandardNormal;

use crate::construction::noise_variance;

/// BPSK over AWGN: bit 0 -> +1, bit 1 -> -1, noise variance
/// `1 / (2 R Eb/No)`, output `2y / sigma^2`.
pub fn awgn_llr<R: Rng + ?Sized>(x: &[u8], ebno_db: f64, rate: f64, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    awgn_llr_into(x, ebno_db, rate, rng, &mut out);
    out
}

pub fn awgn_llr_into<R: Rng + ?Sized>(x: &[u8], ebno_db: f64, rate: f64, rng: &mut R, out: &mut [f64]) {
    let sigma2 = noise_variance(ebno_db, rate);
    let sigma = sigma2.sqrt();
    let scale = 2.0 / sigma2;
    for (o, &b) in out.iter_mut().zip(x) {
        let s = if b == 0 { 1.0 } else { -1.0 };
        let n: f64 = rng.sample(StandardNormal);
        *o = scale * (s + sigma * n);
    }
}

/// Uncoded BPSK bit error rate `Q(sqrt(2 Eb/No))`.
pub fn uncoded_bpsk_ber(ebno_db: f64) -> f64 {
    let ebno = 10f64.powf(ebno_db / 10.0);
    0.5 * statrs::function::erf::erfc(ebno.sqrt())
}
