//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use polar_mcsc::arch::*;
use polar_mcsc::decoder::{decode_fast, decode_sc, detect_shortcuts, FastDecoder, ShortcutCaps};
use polar_mcsc::encode::encode_systematic;
use polar_mcsc::quant::QuantSchedule;
use polar_mcsc::sim::*;
use polar_mcsc::PolarCode;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Latency bounds must land within this distance of the published values (ns).
const LATENCY_TOL_NS: f64 = 0.1;
/// Throughput must land within this distance of the published values (Gb/s).
const THROUGHPUT_TOL_GBPS: f64 = 0.1;
/// Largest allowed quantized-minus-float shift at FER 1e-3 (dB).
const QUANT_GAP_DB: f64 = 0.35;
/// FER the float decoder must beat somewhere in the waterfall window.
const WATERFALL_FER: f64 = 1e-4;
/// Noisy frames per code in the ML comparison. SC is within a few frames
/// of ML on the (16, 8) code, so 10^4 frames cannot resolve the ordering.
const ML_FRAMES: usize = 1_000_000;
/// Relative tolerance of the uncoded BER checks.
const UNCODED_REL_TOL: f64 = 0.02;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failures += 1;
        }
        println!(
            "{} criterion {id}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    }
}

fn paper_code() -> PolarCode {
    PolarCode::construct(10, 854, 6.0).unwrap()
}

fn latency_formula(r: &mut Report) {
    let t = Instant::now();
    let cases = [(4u32, 300e6, 25usize, 89.9, 92.5), (8, 150e6, 12, 93.2, 99.2)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (p, f, d, lo, hi) in cases {
        let cfg = ArchConfig::new(p, f, d, 1024, 854).with_io_period(0.833e-9);
        let l = latency(&cfg).unwrap();
        let (a, b) = (l.min_s * 1e9, l.max_s * 1e9);
        let out = l.rounded_outward(0.1e-9);
        let exact = (out.min_s * 1e9 - lo).abs() < 1e-6 && (out.max_s * 1e9 - hi).abs() < 1e-6;
        pass &= (a - lo).abs() <= LATENCY_TOL_NS && (b - hi).abs() <= LATENCY_TOL_NS && exact;
        detail.push(format!("P={p} D={d}: [{a:.3}, {b:.3}] ns vs [{lo}, {hi}]"));
    }
    r.line("1 (latency formula)", pass, detail.join("; "), t);
}

fn throughput_exactness(r: &mut Report) {
    let t = Instant::now();
    let cases = [(2u32, 50e6, 85.4), (4, 30e6, 102.5), (8, 30e6, 204.9), (1, 1200e6, 1024.8)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (p, f, want) in cases {
        let got = throughput(&ArchConfig::new(p, f, 13, 1024, 854)).unwrap().info_bps / 1e9;
        pass &= (got - want).abs() <= THROUGHPUT_TOL_GBPS;
        detail.push(format!("P={p} f_c={} MHz: {got:.2} Gb/s vs {want}", f / 1e6));
    }
    r.line("2 (throughput)", pass, detail.join("; "), t);
}

fn flow_agreement(r: &mut Report) {
    let t = Instant::now();
    let mut points = 0;
    let mut mismatches = 0;
    for p in [1u32, 2, 4, 8] {
        for theta in [0.0, 90.0, 180.0, 270.0] {
            for d in [12usize, 13, 25, 59, 124] {
                points += 1;
                let cfg = ArchConfig::new(p, 1.2e9 / f64::from(p), d, 1024, 854).with_theta(theta);
                let sim = simulate_frame_flow(&cfg, p as usize * (d + 3) + 128).unwrap();
                let want = latency(&cfg).unwrap().min_s;
                let want_cycles = (want / cfg.io_period_s).round() as u64;
                let lat_ok = sim.done_cycle.iter().zip(&sim.start_cycle).all(|(e, s)| e - s == want_cycles);
                let tp = throughput(&cfg).unwrap().info_bps;
                let tp_ok = (sim.sustained_info_bps - tp).abs() <= 1e-9 * tp;
                if !(lat_ok && tp_ok && sim.hazards == 0) {
                    mismatches += 1;
                }
            }
        }
    }
    r.line(
        "3 (flow simulation vs closed forms)",
        mismatches == 0,
        format!("{mismatches} mismatches over {points} grid points"),
        t,
    );
}

fn shortcut_exactness(r: &mut Report) {
    let t = Instant::now();
    let code = paper_code();
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default()).unwrap();
    let dec = FastDecoder::new(&code, &leaves).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut random_bad = 0;
    for i in 0..10_000 {
        // half uniform LLRs, half noisy codewords near the waterfall
        let llr: Vec<f64> = if i % 2 == 0 {
            (0..1024).map(|_| rng.gen_range(-20.0..20.0)).collect()
        } else {
            let d: Vec<u8> = (0..854).map(|_| rng.gen_range(0..2)).collect();
            awgn_llr(&encode_systematic(&code, &d).unwrap(), 4.5, code.rate(), &mut rng)
        };
        if dec.decode(&llr).unwrap() != decode_sc(&code, &llr).unwrap() {
            random_bad += 1;
        }
    }

    // every frozen pattern of N <= 8 and every sign pattern; magnitudes are
    // square roots of distinct primes so no decision meets an exact tie
    let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    let mut exhaustive_bad = 0;
    let mut exhaustive = 0;
    for len in [2usize, 4, 8] {
        for mask in 0u32..(1 << len) - 1 {
            let code = PolarCode::from_mask((0..len).map(|i| mask >> i & 1 == 1).collect()).unwrap();
            for caps in [ShortcutCaps::default(), ShortcutCaps::minimal(), ShortcutCaps::unlimited()] {
                let leaves = detect_shortcuts(&code, &caps).unwrap();
                for signs in 0u32..(1 << len) {
                    let llr: Vec<f64> = (0..len)
                        .map(|i| {
                            let m = primes[(i + signs as usize) % len].sqrt();
                            if signs >> i & 1 == 1 { -m } else { m }
                        })
                        .collect();
                    exhaustive += 1;
                    if decode_fast(&code, &llr, &leaves).unwrap() != decode_sc(&code, &llr).unwrap() {
                        exhaustive_bad += 1;
                    }
                }
            }
        }
    }
    r.line(
        "4 (shortcut bit-exactness)",
        random_bad == 0 && exhaustive_bad == 0,
        format!("(1024,854): {random_bad}/10000 frames differ; N<=8: {exhaustive_bad}/{exhaustive} patterns differ"),
        t,
    );
}

fn ml_bound(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let mut pass = true;
    let mut detail = Vec::new();
    for (n, k) in [(3u32, 4usize), (4, 8)] {
        let code = PolarCode::construct(n, k, 3.0).unwrap();
        let leaves = detect_shortcuts(&code, &ShortcutCaps::default()).unwrap();
        let book: Vec<(Vec<u8>, Vec<u8>)> = (0..1u32 << k)
            .map(|m| {
                let d: Vec<u8> = (0..k).map(|i| (m >> i & 1) as u8).collect();
                let x = encode_systematic(&code, &d).unwrap();
                (d, x)
            })
            .collect();
        let (mut sc_err, mut ml_err, mut literal_diff) = (0, 0, 0);
        for _ in 0..ML_FRAMES {
            let (d, x) = &book[rng.gen_range(0..book.len())];
            let llr = awgn_llr(x, 3.0, code.rate(), &mut rng);
            let corr = |c: &[u8]| -> f64 { c.iter().zip(&llr).map(|(&b, &l)| if b == 0 { l } else { -l }).sum() };
            let ml = book.iter().max_by(|a, b| corr(&a.1).total_cmp(&corr(&b.1))).unwrap();
            let fast = decode_fast(&code, &llr, &leaves).unwrap();
            let literal = decode_sc(&code, &llr).unwrap();
            literal_diff += usize::from(fast != literal);
            sc_err += usize::from(&fast != d);
            ml_err += usize::from(&ml.0 != d);
        }
        pass &= sc_err >= ml_err && literal_diff == 0;
        detail.push(format!(
            "({}, {k}): SC {sc_err} vs ML {ml_err} word errors, {literal_diff} literal mismatches",
            code.len()
        ));
    }
    r.line("5 (ML bound)", pass, detail.join("; "), t);
}

fn desk_sweep(decoder: DecoderKind, ebno: Vec<f64>, max_frames: u64) -> Sweep {
    let code = paper_code();
    let mut cfg = SimConfig::new(code.clone(), decoder);
    if decoder == DecoderKind::Quantized {
        cfg.schedule = Some(QuantSchedule::adaptive_default(&code, 6.0).unwrap());
    }
    cfg.ebno_db = ebno;
    cfg.seed = 0x00c0_ffee;
    cfg.stop = StopRule {
        min_frame_errors: 100,
        max_frames,
    };
    run_sweep(&cfg).unwrap()
}

fn quantization_loss(r: &mut Report) {
    let t = Instant::now();
    let ebno = parse_ebno_list("4.5:0.25:5.25").unwrap();
    let float = desk_sweep(DecoderKind::FloatFast, ebno.clone(), 100_000);
    let quant = desk_sweep(DecoderKind::Quantized, ebno, 100_000);
    let (detail, pass) = match (float.crossing_db(1e-3), quant.crossing_db(1e-3)) {
        (Some(f), Some(q)) => (
            format!("float {f:.3} dB, quantized {q:.3} dB, gap {:.3} dB (limit {QUANT_GAP_DB})", q - f),
            q - f <= QUANT_GAP_DB,
        ),
        (f, q) => (format!("FER 1e-3 not bracketed: float {f:?}, quantized {q:?}"), false),
    };
    r.line("6 (quantization loss)", pass, detail, t);
}

fn waterfall(r: &mut Report) {
    let t = Instant::now();
    let code = paper_code();
    let mut cfg = SimConfig::new(code, DecoderKind::FloatFast);
    cfg.seed = 7;
    cfg.stop = StopRule {
        min_frame_errors: 100,
        max_frames: 60_000,
    };
    let mut detail = Vec::new();
    let mut pass = false;
    for e in [5.5, 6.0, 6.5, 7.0] {
        let s = run_point(&cfg, e).unwrap();
        let (_, hi) = s.fer_wilson(CI_Z);
        detail.push(format!("{e} dB: {}/{} (95% upper {hi:.2e})", s.frame_errors, s.frames));
        if hi < WATERFALL_FER {
            pass = true;
            break;
        }
    }
    r.line("7 (waterfall below 1e-4 in [5.5, 7.0] dB)", pass, detail.join("; "), t);
}

/// `Q(x)` by Simpson's rule on `[x, x + 40]`.
fn q_quadrature(x: f64) -> f64 {
    let steps = 200_000;
    let h = 40.0 / steps as f64;
    let pdf = |u: f64| (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut acc = pdf(x) + pdf(x + 40.0);
    for i in 1..steps {
        acc += pdf(x + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn uncoded_ber(r: &mut Report) {
    let t = Instant::now();
    let column = uncoded_bpsk_ber(9.6);
    let oracle = q_quadrature((2.0 * 10f64.powf(0.96)).sqrt());
    let rel = (column / oracle - 1.0).abs();
    r.line(
        "8a (uncoded BER column vs quadrature)",
        rel <= UNCODED_REL_TOL,
        format!("column {column:.4e}, quadrature {oracle:.4e}, relative error {rel:.2e}"),
        t,
    );
    let t = Instant::now();
    let nominal = 1e-5;
    let rel = (column / nominal - 1.0).abs();
    r.line(
        "8b (uncoded BER at 9.6 dB vs 1e-5)",
        rel <= UNCODED_REL_TOL,
        format!("Q(sqrt(2 Eb/No)) = {column:.4e}, {:.2}% from 1e-5 (limit 2%)", 100.0 * rel),
        t,
    );
}

fn rrb_properties(r: &mut Report) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut disagreements = 0;
    let mut monotone = true;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12usize);
        let mut g = UnrolledGraph::new();
        for _ in 0..n {
            g.add_node(UnitKind::GLayer, 1, f64::from(rng.gen_range(1..=10u32)) / 10.0);
        }
        let density = rng.gen_range(0.1..0.6);
        for j in 1..n {
            for i in 0..j {
                if rng.gen_bool(density) {
                    g.add_edge(i, j);
                }
            }
        }
        let max = g.nodes.iter().map(|v| v.delay).fold(0.0, f64::max);
        let budget = max * rng.gen_range(1.0..4.0);
        if rrb_schedule(&g, budget).unwrap().depth != exhaustive_depth(&g, budget) {
            disagreements += 1;
        }
        let mut prev = usize::MAX;
        for i in 0..12 {
            let d = rrb_schedule(&g, max * (1.0 + 0.5 * f64::from(i))).unwrap().depth;
            monotone &= d <= prev;
            prev = d;
        }
    }
    let code = paper_code();
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default()).unwrap();
    let g = build_unrolled_graph(&code, &leaves, &DelayModel::default()).unwrap();
    let cal = calibrate(&g, 124, 1.2e9).unwrap();
    let base = cal.budget_for(1.2e9);
    let depths: Vec<usize> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|m| rrb_schedule(&g, base * m).unwrap().depth)
        .collect();
    let trend = depths.windows(2).all(|w| w[1] <= w[0]) && depths[3] <= depths[0].div_ceil(8) + 2;
    r.line(
        "9 (R-RB)",
        disagreements == 0 && monotone && trend,
        format!("{disagreements}/1000 greedy vs exhaustive mismatches; monotone {monotone}; calibrated depths {depths:?}"),
        t,
    );
}

fn exhaustive_depth(g: &UnrolledGraph, budget: f64) -> usize {
    let level = asap_levels(g);
    let levels = level.iter().copied().max().unwrap() + 1;
    let critical = |lo: usize, hi: usize| -> f64 {
        let mut arrive = vec![0.0f64; g.nodes.len()];
        let mut best = 0.0f64;
        for v in 0..g.nodes.len() {
            if level[v] < lo || level[v] > hi {
                continue;
            }
            let start = g
                .edges
                .iter()
                .filter(|&&(a, b)| b == v && level[a] >= lo)
                .map(|&(a, _)| arrive[a])
                .fold(0.0, f64::max);
            arrive[v] = start + g.nodes[v].delay;
            best = best.max(arrive[v]);
        }
        best
    };
    (0u32..1 << (levels - 1))
        .filter_map(|cuts| {
            let mut lo = 0;
            let mut groups = 0;
            for l in 0..levels {
                if l == levels - 1 || cuts >> l & 1 == 1 {
                    if critical(lo, l) > budget + 1e-12 {
                        return None;
                    }
                    groups += 1;
                    lo = l + 1;
                }
            }
            Some(groups)
        })
        .min()
        .unwrap()
}

fn determinism(r: &mut Report) {
    let t = Instant::now();
    let code = PolarCode::construct(8, 200, 4.0).unwrap();
    let mut cfg = SimConfig::new(code.clone(), DecoderKind::Quantized);
    cfg.schedule = Some(QuantSchedule::adaptive_default(&code, 4.0).unwrap());
    cfg.ebno_db = vec![2.0, 2.5, 3.0];
    cfg.seed = 31337;
    cfg.chunk_frames = 64;
    cfg.stop = StopRule {
        min_frame_errors: 50,
        max_frames: 20_000,
    };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_sweep(&cfg).unwrap().to_csv())
    };
    let reference = run(1);
    let same = [1usize, 2, 3, 4].iter().all(|&w| run(w) == reference);
    r.line(
        "10 (determinism)",
        same,
        format!("CSV byte-identical for 1..4 workers: {same}"),
        t,
    );
}

fn main() {
    // `cargo test -- --list` and filters are not supported by this runner
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut r = Report { failures: 0 };
    latency_formula(&mut r);
    throughput_exactness(&mut r);
    flow_agreement(&mut r);
    shortcut_exactness(&mut r);
    ml_bound(&mut r);
    quantization_loss(&mut r);
    waterfall(&mut r);
    uncoded_ber(&mut r);
    rrb_properties(&mut r);
    determinism(&mut r);
    println!("acceptance: {} failing", r.failures);
    if r.failures > 0 {
        std::process::exit(1);
    }
}
