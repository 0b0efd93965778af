use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use polar_mcsc::arch::{
    build_unrolled_graph, calibrate, latency, rrb_schedule, throughput, ArchConfig, Calibration, DelayModel,
    UnrolledGraph,
};
use polar_mcsc::code::{CodeFile, DEFAULT_DESIGN_SNR_DB};
use polar_mcsc::decoder::{decode_sc, detect_shortcuts, FastDecoder, ShortcutCaps};
use polar_mcsc::encode::encode_systematic;
use polar_mcsc::quant::{quantize, QuantSchedule, QuantizedDecoder, ScheduleFile};
use polar_mcsc::sim::{parse_ebno_list, run_sweep, DecoderKind, SimConfig, StopRule, DEFAULT_CHUNK_FRAMES};
use polar_mcsc::PolarCode;
use serde_json::json;

use crate::config::{self, FileConfig};
use crate::error::{CliError, CliResult};
use crate::frames;
use crate::manifest::RunManifest;
use crate::{
    ArchArgs, ArchModelArgs, Cli, Command, ConstructArgs, DecodeArgs, DecoderArg, EncodeArgs, FrameFormat, LlrFormat,
    SimulateArgs, SweepArchArgs,
};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_EBNO: &str = "4.0:0.25:6.0";
const DEFAULT_MIN_FE: u64 = 100;
const DEFAULT_MAX_FRAMES: u64 = 1_000_000;
const DEFAULT_CALIBRATION_DEPTH: usize = 124;
const DEFAULT_REFERENCE_MHZ: f64 = 1200.0;

struct Ctx {
    seed: u64,
    out_dir: PathBuf,
    manifest: Option<PathBuf>,
    file: FileConfig,
}

impl Ctx {
    fn output(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out_dir.join(p)
        }
    }

    fn manifest_path(&self, command: &str) -> PathBuf {
        self.manifest
            .clone()
            .unwrap_or_else(|| self.out_dir.join(format!("{command}.manifest.json")))
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = config::load(cli.global.config.as_deref())?;
    let ctx = Ctx {
        seed: cli.global.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        out_dir: cli.global.out_dir.clone().or_else(|| file.out_dir.clone()).unwrap_or_else(|| ".".into()),
        manifest: cli.global.manifest.clone(),
        file,
    };
    match cli.command {
        Command::Construct(a) => construct(&ctx, a),
        Command::Encode(a) => encode(&ctx, a),
        Command::Decode(a) => decode(&ctx, a),
        Command::Simulate(a) => simulate(&ctx, a),
        Command::Arch(a) => arch(&ctx, a),
        Command::SweepArch(a) => sweep_arch(&ctx, a),
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn load_code(path: &Path) -> CliResult<PolarCode> {
    let data = read(path)?;
    let file: CodeFile =
        serde_json::from_slice(&data).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    PolarCode::from_file(&file).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn load_schedule(path: Option<&Path>, code: &PolarCode) -> CliResult<QuantSchedule> {
    match path {
        Some(p) => {
            let data = read(p)?;
            let file: ScheduleFile =
                serde_json::from_slice(&data).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let s = QuantSchedule::from_file(&file)?;
            if s.depths() != code.n() as usize {
                return Err(CliError::Config(format!(
                    "schedule has {} depths, code needs {}",
                    s.depths(),
                    code.n()
                )));
            }
            Ok(s)
        }
        None => Ok(QuantSchedule::adaptive_default(
            code,
            code.design_snr_db().unwrap_or(DEFAULT_DESIGN_SNR_DB),
        )?),
    }
}

fn construct(ctx: &Ctx, a: ConstructArgs) -> CliResult<()> {
    let code = PolarCode::construct(a.n, a.k, a.design_snr)?;
    let out = ctx.output(&a.out);
    let mut m = RunManifest::new("construct", ctx.seed);
    m.config = json!({"n": a.n, "k": a.k, "design_snr_db": a.design_snr, "out": out});
    let text = serde_json::to_string_pretty(&code.to_file()).expect("code serializes") + "\n";
    m.write_output(&out, text.as_bytes())?;
    println!(
        "N={} K={} frozen={} -> {}",
        code.len(),
        code.k(),
        code.len() - code.k(),
        out.display()
    );
    m.finish(&ctx.manifest_path("construct"))
}

fn encode(ctx: &Ctx, a: EncodeArgs) -> CliResult<()> {
    let code = load_code(&a.code)?;
    let data = frames::unpack_frames(&read(&a.input)?, code.k())?;
    let schedule = match a.format {
        FrameFormat::Qllr => Some(load_schedule(a.schedule.as_deref(), &code)?),
        _ => None,
    };
    if !(a.amplitude.is_finite() && a.amplitude > 0.0) {
        return Err(CliError::Usage("--amplitude must be positive".into()));
    }
    let mut buf = Vec::new();
    for d in &data {
        let x = encode_systematic(&code, d)?;
        let llr: Vec<f64> = x.iter().map(|&b| if b == 0 { a.amplitude } else { -a.amplitude }).collect();
        match a.format {
            FrameFormat::Bits => frames::pack_bits(&x, &mut buf),
            FrameFormat::Llr => frames::write_llrs(&llr, &mut buf),
            FrameFormat::Qllr => {
                let fmt = schedule.as_ref().expect("loaded above").channel();
                for &l in &llr {
                    buf.push(quantize(l, fmt).to_byte()?);
                }
            }
        }
    }
    let out = ctx.output(&a.out);
    let mut m = RunManifest::new("encode", ctx.seed);
    m.config = json!({
        "code": a.code, "input": a.input, "out": out,
        "format": format!("{:?}", a.format).to_lowercase(), "amplitude": a.amplitude,
        "schedule": schedule.map(|s| s.to_file()),
    });
    m.write_output(&out, &buf)?;
    println!("encoded {} frames -> {}", data.len(), out.display());
    m.finish(&ctx.manifest_path("encode"))
}

fn decode(ctx: &Ctx, a: DecodeArgs) -> CliResult<()> {
    let code = load_code(&a.code)?;
    let input = read(&a.input)?;
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default())?;
    let n = code.len();
    let mut results = Vec::new();
    let mut schedule_used = None;
    match (a.decoder, a.input_format) {
        (DecoderArg::Quant, fmt) => {
            let s = load_schedule(a.schedule.as_deref(), &code)?;
            let dec = QuantizedDecoder::new(&code, &leaves, &s)?;
            let q = match fmt {
                LlrFormat::Q8 => frames::read_qllr_frames(&input, n)?,
                LlrFormat::F32 => frames::read_llr_frames(&input, n)?
                    .into_iter()
                    .map(|f| f.iter().map(|&l| quantize(l, s.channel())).collect())
                    .collect(),
            };
            for f in &q {
                results.push(dec.decode(f)?);
            }
            schedule_used = Some(s.to_file());
        }
        (_, LlrFormat::Q8) => {
            return Err(CliError::Usage("q8 input needs --decoder quant".into()));
        }
        (DecoderArg::Float, LlrFormat::F32) => {
            for f in frames::read_llr_frames(&input, n)? {
                results.push(decode_sc(&code, &f)?);
            }
        }
        (DecoderArg::Fast, LlrFormat::F32) => {
            let dec = FastDecoder::new(&code, &leaves)?;
            for f in frames::read_llr_frames(&input, n)? {
                results.push(dec.decode(&f)?);
            }
        }
    }
    let mut buf = Vec::new();
    for d in &results {
        frames::pack_bits(d, &mut buf);
    }
    let out = ctx.output(&a.out);
    let mut m = RunManifest::new("decode", ctx.seed);
    m.config = json!({
        "code": a.code, "input": a.input, "out": out,
        "decoder": format!("{:?}", a.decoder).to_lowercase(),
        "input_format": format!("{:?}", a.input_format).to_lowercase(),
        "schedule": schedule_used,
    });
    m.write_output(&out, &buf)?;
    println!("decoded {} frames -> {}", results.len(), out.display());
    m.finish(&ctx.manifest_path("decode"))
}

fn decoder_kind(d: DecoderArg) -> DecoderKind {
    match d {
        DecoderArg::Float => DecoderKind::FloatSc,
        DecoderArg::Fast => DecoderKind::FloatFast,
        DecoderArg::Quant => DecoderKind::Quantized,
    }
}

fn simulate(ctx: &Ctx, a: SimulateArgs) -> CliResult<()> {
    let f = &ctx.file.simulate;
    let code = load_code(&a.code)?;
    let ebno_spec = a.ebno.clone().or_else(|| f.ebno.clone()).unwrap_or_else(|| DEFAULT_EBNO.into());
    let decoder = match (a.decoder, &f.decoder) {
        (Some(d), _) => d,
        (None, Some(s)) => DecoderArg::from_str(s, true).map_err(|e| CliError::Config(format!("decoder: {e}")))?,
        (None, None) => DecoderArg::Fast,
    };
    let schedule_path = a.schedule.clone().or_else(|| f.schedule.clone());

    let mut cfg = SimConfig::new(code.clone(), decoder_kind(decoder));
    cfg.ebno_db = parse_ebno_list(&ebno_spec)?;
    cfg.seed = ctx.seed;
    cfg.stop = StopRule {
        min_frame_errors: a.min_fe.or(f.min_fe).unwrap_or(DEFAULT_MIN_FE),
        max_frames: a.max_frames.or(f.max_frames).unwrap_or(DEFAULT_MAX_FRAMES),
    };
    cfg.chunk_frames = a.chunk_frames.or(f.chunk_frames).unwrap_or(DEFAULT_CHUNK_FRAMES);
    if decoder == DecoderArg::Quant {
        cfg.schedule = Some(load_schedule(schedule_path.as_deref(), &code)?);
    }

    let mut m = RunManifest::new("simulate", ctx.seed);
    let sweep = run_sweep(&cfg)?;
    let out = ctx.output(&a.out);
    m.config = json!({
        "code": a.code,
        "code_definition": code.to_file(),
        "ebno_db": cfg.ebno_db,
        "decoder": format!("{:?}", decoder).to_lowercase(),
        "schedule": cfg.schedule.as_ref().map(|s| s.to_file()),
        "seed": cfg.seed,
        "stop": cfg.stop,
        "chunk_frames": cfg.chunk_frames,
        "lfsr": cfg.lfsr,
        "out": out,
    });
    m.write_output(&out, sweep.to_csv().as_bytes())?;
    for p in &sweep.points {
        eprintln!(
            "{:>6.2} dB  frames {:>9}  fe {:>5}  FER {:.3e}  BER {:.3e}  ({:.1} s)",
            p.ebno_db,
            p.stats.frames,
            p.stats.frame_errors,
            p.stats.fer(),
            p.stats.ber(),
            p.stats.wall_time_s
        );
    }
    println!("wrote {}", out.display());
    m.finish(&ctx.manifest_path("simulate"))
}

/// Unrolled graph plus its calibration for the architecture commands.
struct Model {
    code: PolarCode,
    delays: DelayModel,
    graph: UnrolledGraph,
    cal: Calibration,
    target: usize,
    reference_mhz: f64,
}

fn model_code(a: &ArchModelArgs) -> CliResult<PolarCode> {
    match &a.code {
        Some(p) => load_code(p),
        None => Ok(PolarCode::construct(a.n.unwrap_or(10), a.k.unwrap_or(854), DEFAULT_DESIGN_SNR_DB)?),
    }
}

fn build_model(ctx: &Ctx, a: &ArchModelArgs) -> CliResult<Model> {
    let f = &ctx.file.arch;
    let code = model_code(a)?;
    let delays = match a.delay_model.clone().or_else(|| f.delay_model.clone()) {
        Some(p) => {
            let text = String::from_utf8(read(&p)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            DelayModel::from_json(&text)?
        }
        None => DelayModel::default(),
    };
    let leaves = detect_shortcuts(&code, &ShortcutCaps::default())?;
    let graph = build_unrolled_graph(&code, &leaves, &delays)?;
    let target = a.calibrate_target.or(f.calibrate_target).unwrap_or(DEFAULT_CALIBRATION_DEPTH);
    let reference_mhz = a.reference_mhz.or(f.reference_mhz).unwrap_or(DEFAULT_REFERENCE_MHZ);
    let cal = calibrate(&graph, target, reference_mhz * 1e6)?;
    Ok(Model {
        code,
        delays,
        graph,
        cal,
        target,
        reference_mhz,
    })
}

fn model_json(m: &Model) -> serde_json::Value {
    json!({
        "code": m.code.to_file(),
        "delay_model": m.delays,
        "calibrate_target": m.target,
        "reference_mhz": m.reference_mhz,
        "seconds_per_unit": m.cal.seconds_per_unit,
        "graph_nodes": m.graph.nodes.len(),
        "graph_edges": m.graph.edges.len(),
    })
}

/// Code dimensions for the closed forms when no graph is needed.
fn arch_dims(a: &ArchModelArgs) -> CliResult<(usize, usize)> {
    if a.code.is_some() {
        let c = model_code(a)?;
        return Ok((c.len(), c.k()));
    }
    let n = a.n.unwrap_or(10);
    if n > 24 {
        return Err(CliError::Usage(format!("n = {n} outside 1..=24")));
    }
    Ok((1usize << n, a.k.unwrap_or(854)))
}

fn arch(ctx: &Ctx, a: ArchArgs) -> CliResult<()> {
    let f = &ctx.file.arch;
    let cores = a.cores.or(f.cores).unwrap_or(1);
    let core_mhz = a.core_mhz.or(f.core_mhz).unwrap_or(DEFAULT_REFERENCE_MHZ);
    let theta = a.theta.or(f.theta);
    let io_period_ns = a.io_period_ns.or(f.io_period_ns);

    let (depth, per_stage_ns, model, dims) = match a.depth.or(f.depth) {
        Some(d) => (d, Vec::new(), None, arch_dims(&a.model)?),
        None => {
            let model = build_model(ctx, &a.model)?;
            let sched = rrb_schedule(&model.graph, model.cal.budget_for(core_mhz * 1e6))?;
            let per: Vec<f64> = sched
                .per_stage_delay
                .iter()
                .map(|d| d * model.cal.seconds_per_unit * 1e9)
                .collect();
            let dims = (model.code.len(), model.code.k());
            (sched.depth, per, Some(model), dims)
        }
    };

    let mut cfg = ArchConfig::new(cores, core_mhz * 1e6, depth, dims.0, dims.1);
    if let Some(t) = io_period_ns {
        cfg = cfg.with_io_period(t * 1e-9);
    }
    if let Some(t) = theta {
        cfg = cfg.with_theta(t);
    }
    let lat = latency(&cfg)?;
    let tp = throughput(&cfg)?;
    let report = json!({
        "cores": cores,
        "core_mhz": core_mhz,
        "io_period_ns": cfg.io_period_s * 1e9,
        "theta_deg": theta,
        "depth": depth,
        "latency_ns_min": lat.min_s * 1e9,
        "latency_ns_max": lat.max_s * 1e9,
        "info_gbps": tp.info_bps / 1e9,
        "coded_gbps": tp.coded_bps / 1e9,
        "per_stage_delays": per_stage_ns,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    print!("{text}");

    let out = ctx.output(&a.out);
    let mut m = RunManifest::new("arch", ctx.seed);
    m.config = json!({
        "cores": cores, "core_mhz": core_mhz, "depth": depth, "theta_deg": theta,
        "io_period_ns": cfg.io_period_s * 1e9, "n": dims.0, "k": dims.1,
        "model": model.as_ref().map(model_json), "out": out,
    });
    m.write_output(&out, text.as_bytes())?;
    m.finish(&ctx.manifest_path("arch"))
}

fn sweep_arch(ctx: &Ctx, a: SweepArchArgs) -> CliResult<()> {
    if a.cores.is_empty() || a.core_mhz.is_empty() {
        return Err(CliError::Usage("--cores and --core-mhz need at least one value".into()));
    }
    let model = if a.depth.is_empty() {
        Some(build_model(ctx, &a.model)?)
    } else {
        None
    };
    let (n, k) = match &model {
        Some(m) => (m.code.len(), m.code.k()),
        None => arch_dims(&a.model)?,
    };
    let mut csv = String::from("cores,core_mhz,depth,latency_ns_min,latency_ns_max,info_gbps,coded_gbps\n");
    for &mhz in &a.core_mhz {
        let depths = match &model {
            Some(m) => vec![rrb_schedule(&m.graph, m.cal.budget_for(mhz * 1e6))?.depth],
            None => a.depth.clone(),
        };
        for &p in &a.cores {
            for &d in &depths {
                let mut cfg = ArchConfig::new(p, mhz * 1e6, d, n, k);
                if let Some(t) = a.theta {
                    cfg = cfg.with_theta(t);
                }
                let lat = latency(&cfg)?;
                let tp = throughput(&cfg)?;
                writeln!(
                    csv,
                    "{p},{mhz},{d},{},{},{},{}",
                    lat.min_s * 1e9,
                    lat.max_s * 1e9,
                    tp.info_bps / 1e9,
                    tp.coded_bps / 1e9
                )
                .unwrap();
            }
        }
    }
    let out = ctx.output(&a.out);
    let mut m = RunManifest::new("sweep-arch", ctx.seed);
    m.config = json!({
        "cores": a.cores, "core_mhz": a.core_mhz, "depth": a.depth, "theta_deg": a.theta,
        "n": n, "k": k, "model": model.as_ref().map(model_json), "out": out,
    });
    m.write_output(&out, csv.as_bytes())?;
    print!("{csv}");
    m.finish(&ctx.manifest_path("sweep-arch"))
}
