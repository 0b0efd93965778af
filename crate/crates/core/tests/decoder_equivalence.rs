use polar_mcsc::decoder::{decode_sc, detect_shortcuts, FastDecoder, ShortcutCaps};
use polar_mcsc::encode::{encode, encode_systematic, extract};
use polar_mcsc::PolarCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_masks(len: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..(1 << len) - 1).map(move |m| (0..len).map(|i| m >> i & 1 == 1).collect())
}

/// Magnitudes sqrt(p) for distinct primes: every signed subset sum is
/// non-zero and no two disjoint subset sums share a magnitude, so neither
/// decoder ever meets an exact tie.
fn tie_free_magnitudes(len: usize) -> Vec<f64> {
    let primes = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0, 41.0, 43.0, 47.0, 53.0];
    primes[..len].iter().map(|p: &f64| p.sqrt()).collect()
}

fn cap_sets() -> Vec<ShortcutCaps> {
    vec![
        ShortcutCaps::default(),
        ShortcutCaps::minimal(),
        ShortcutCaps::unlimited(),
        ShortcutCaps { rate0: 2, rate1: 4, repetition: 4, spc: 4 },
    ]
}

#[test]
fn exhaustive_sign_patterns_small_codes() {
    for len in [2usize, 4, 8] {
        let mags = tie_free_magnitudes(len);
        for mask in all_masks(len) {
            let code = PolarCode::from_mask(mask).unwrap();
            for caps in cap_sets() {
                let leaves = detect_shortcuts(&code, &caps).unwrap();
                let dec = FastDecoder::new(&code, &leaves).unwrap();
                for signs in 0u32..(1 << len) {
                    // rotate magnitudes with the pattern so the weakest position varies
                    let llr: Vec<f64> = (0..len)
                        .map(|i| {
                            let m = mags[(i + signs as usize) % len];
                            if signs >> i & 1 == 1 { -m } else { m }
                        })
                        .collect();
                    assert_eq!(
                        dec.decode(&llr).unwrap(),
                        decode_sc(&code, &llr).unwrap(),
                        "mask {:?} caps {caps:?} llr {llr:?}",
                        code.frozen_mask()
                    );
                }
            }
        }
    }
}

#[test]
fn random_frames_paper_code() {
    let code = PolarCode::construct(10, 854, 6.0).unwrap();
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default()).unwrap();
    let dec = FastDecoder::new(&code, &leaves).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let llr: Vec<f64> = (0..1024).map(|_| rng.gen_range(-20.0..20.0)).collect();
        assert_eq!(dec.decode(&llr).unwrap(), decode_sc(&code, &llr).unwrap());
    }
}

#[test]
fn noiseless_reencode_reproduces_codeword() {
    let code = PolarCode::construct(9, 300, 4.0).unwrap();
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default()).unwrap();
    let dec = FastDecoder::new(&code, &leaves).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let d: Vec<u8> = (0..300).map(|_| rng.gen_range(0..2)).collect();
        let x = encode_systematic(&code, &d).unwrap();
        let llr: Vec<f64> = x.iter().map(|&b| if b == 0 { 0.7 } else { -0.7 }).collect();
        let dhat = dec.decode(&llr).unwrap();
        assert_eq!(encode_systematic(&code, &dhat).unwrap(), x);
        assert_eq!(dec.decode_codeword(&llr).unwrap(), x);
    }
}

#[test]
fn scale_invariance() {
    let code = PolarCode::construct(7, 64, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let llr: Vec<f64> = (0..128).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let base = decode_sc(&code, &llr).unwrap();
        for lambda in [0.125, 3.0, 1024.0] {
            let scaled: Vec<f64> = llr.iter().map(|l| l * lambda).collect();
            assert_eq!(decode_sc(&code, &scaled).unwrap(), base);
        }
    }
}

#[test]
fn systematic_codebook_small() {
    let code = PolarCode::construct(3, 4, 3.0).unwrap();
    // every codeword of the code: u with zero frozen bits
    let codebook: Vec<Vec<u8>> = (0u8..16)
        .map(|m| {
            let d: Vec<u8> = (0..4).map(|i| m >> i & 1).collect();
            let mut u = vec![0u8; 8];
            for (&p, &b) in code.info_positions().iter().zip(&d) {
                u[p] = b;
            }
            encode(&code, &u).unwrap()
        })
        .collect();
    for m in 0u8..16 {
        let d: Vec<u8> = (0..4).map(|i| m >> i & 1).collect();
        let x = encode_systematic(&code, &d).unwrap();
        assert!(codebook.contains(&x));
        assert_eq!(extract(&code, &x), d);
    }
}
