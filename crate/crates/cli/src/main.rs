use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod frames;
mod manifest;

/// Polar SC decoding toolkit: code construction, frame encode/decode,
/// AWGN link simulation and multicore architecture analysis.
#[derive(Debug, Parser)]
#[command(name = "mcsc", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for relative output paths and the default manifest.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Manifest path (default: <out-dir>/<command>.manifest.json).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// TOML configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code by Gaussian-approximation density evolution.
    Construct(ConstructArgs),
    /// Systematically encode packed data frames.
    Encode(EncodeArgs),
    /// Decode LLR frames into packed data bits.
    Decode(DecodeArgs),
    /// Monte-Carlo FER/BER sweep over AWGN.
    Simulate(SimulateArgs),
    /// Latency, throughput and pipeline depth of one configuration.
    Arch(ArchArgs),
    /// Architecture metrics over a grid of cores, clocks and depths.
    SweepArch(SweepArchArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// log2 of the block length.
    #[arg(long)]
    pub n: u32,
    /// Number of information bits.
    #[arg(long)]
    pub k: usize,
    /// Design Eb/No in dB.
    #[arg(long, default_value_t = polar_mcsc::code::DEFAULT_DESIGN_SNR_DB)]
    pub design_snr: f64,
    #[arg(long, default_value = "code.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FrameFormat {
    /// Packed codeword bits.
    Bits,
    /// Noiseless BPSK LLRs as little-endian f32.
    Llr,
    /// Noiseless LLRs quantized to the schedule's channel format, one byte each.
    Qllr,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Packed data frames, K bits each.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "encoded.bin")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FrameFormat::Bits)]
    pub format: FrameFormat,
    /// LLR magnitude for the llr and qllr formats.
    #[arg(long, default_value_t = 8.0)]
    pub amplitude: f64,
    /// Schedule file for the qllr format (default: adaptive schedule).
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DecoderArg {
    /// Reference SC recursion.
    Float,
    /// Shortcut SC decoder.
    Fast,
    /// Quantized shortcut decoder.
    Quant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LlrFormat {
    F32,
    Q8,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "decoded.bin")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = DecoderArg::Fast)]
    pub decoder: DecoderArg,
    #[arg(long, value_enum, default_value_t = LlrFormat::F32)]
    pub input_format: LlrFormat,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// `start:step:stop` or a comma-separated list, in dB.
    #[arg(long)]
    pub ebno: Option<String>,
    #[arg(long, value_enum)]
    pub decoder: Option<DecoderArg>,
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Stop a point after this many frame errors.
    #[arg(long)]
    pub min_fe: Option<u64>,
    /// Stop a point after this many frames.
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub chunk_frames: Option<u64>,
    #[arg(long, default_value = "results.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct ArchModelArgs {
    /// Code file for the unrolled graph (default: GA (1024, 854) at 6 dB).
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Delay model JSON (default: built-in unit delays).
    #[arg(long)]
    pub delay_model: Option<PathBuf>,
    /// Depth the model is calibrated to at the reference clock.
    #[arg(long)]
    pub calibrate_target: Option<usize>,
    #[arg(long)]
    pub reference_mhz: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ArchArgs {
    #[arg(long)]
    pub cores: Option<u32>,
    #[arg(long)]
    pub core_mhz: Option<f64>,
    /// Pipeline depth; when absent it comes from the calibrated schedule.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Core clock phase in degrees; when absent the latency spans all phases.
    #[arg(long)]
    pub theta: Option<f64>,
    /// IO clock period; defaults to 1 / (cores * core clock).
    #[arg(long)]
    pub io_period_ns: Option<f64>,
    #[command(flatten)]
    pub model: ArchModelArgs,
    #[arg(long, default_value = "arch.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub cores: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "150,300,600,1200")]
    pub core_mhz: Vec<f64>,
    /// Depths to sweep; when absent each clock uses its calibrated depth.
    #[arg(long, value_delimiter = ',')]
    pub depth: Vec<usize>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[command(flatten)]
    pub model: ArchModelArgs,
    #[arg(long, default_value = "sweep_arch.csv")]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mcsc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
