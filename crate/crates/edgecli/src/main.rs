//! Command-line surface: edge detection runs on PGM images, bit-exactness
//! verification against the convolution oracle, FPGA resource reports, and
//! per-cycle datapath traces.
//!
//! Exit codes: 0 ok, 1 I/O failure, 2 bad arguments or malformed input
//! format, 3 invalid image, 4 verification mismatch.

mod pgm;
mod render;

use clap::{Parser, Subcommand, ValueEnum};
use edgecore::datapath::{process_frame_with_fault, trace_frame};
use edgecore::golden::sobel_golden;
use edgecore::resource::{estimate_resources, DesignParams};
use edgecore::{process_frame, CompressorFault, EdgeParams, Image, Norm, Variant};
use std::path::PathBuf;
use std::process::ExitCode;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const EXIT_IO: u8 = 1;
const EXIT_BAD_ARGS: u8 = 2;
const EXIT_INVALID_IMAGE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "edgecli",
    version,
    about = "Streaming Sobel edge detection with bit-accurate datapath variants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    AdderTree,
    Separated,
    Compressor,
    LookaheadCompressor,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::AdderTree => Variant::AdderTree,
            VariantArg::Separated => Variant::Separated,
            VariantArg::Compressor => Variant::Compressor,
            VariantArg::LookaheadCompressor => Variant::LookaheadCompressor,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    L2,
    L1,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::L2 => Norm::L2,
            NormArg::L1 => Norm::L1,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Detect edges in a binary PGM image and write the result as PGM
    Detect {
        /// Input image, binary PGM (P5), maxval 255
        #[arg(short, long)]
        input: PathBuf,
        /// Output edge image path
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::LookaheadCompressor)]
        variant: VariantArg,
        /// Binarize: 255 where magnitude >= threshold, else 0
        #[arg(long)]
        threshold: Option<u8>,
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
    },
    /// Run all four variants against the convolution oracle on random frames
    Verify {
        #[arg(long, default_value_t = 100)]
        frames: u32,
        #[arg(long, default_value_t = 64)]
        width: u32,
        #[arg(long, default_value_t = 64)]
        height: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Flip one compressor bit in every window to prove mismatches are caught
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print modeled FPGA resource usage next to the published values
    Report {
        /// Variant to report; omit for all four
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Report all four variants, ordered by modeled total LEs
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 512)]
        width: u32,
        #[arg(long, default_value_t = 512)]
        height: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Dump per-cycle datapath state for a tiny image (at most 16x16)
    Trace {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::LookaheadCompressor)]
        variant: VariantArg,
        #[arg(long)]
        threshold: Option<u8>,
        #[arg(long, value_enum, default_value_t = NormArg::L2)]
        norm: NormArg,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn read_image(path: &PathBuf) -> Result<Image, Failure> {
    let data = std::fs::read(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    pgm::parse(&data).map_err(|e| Failure::new(EXIT_BAD_ARGS, format!("{}: {e}", path.display())))
}

fn cmd_detect(
    input: PathBuf,
    output: PathBuf,
    variant: Variant,
    params: EdgeParams,
) -> Result<(), Failure> {
    let image = read_image(&input)?;
    let edges = process_frame(&image, variant, &params)
        .map_err(|e| Failure::new(EXIT_INVALID_IMAGE, e.to_string()))?;
    std::fs::write(&output, pgm::encode(&edges))
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", output.display())))?;
    Ok(())
}

struct Mismatch {
    frame: u32,
    variant: Variant,
    row: u32,
    col: u32,
    expected: u8,
    actual: u8,
}

fn check_frame(
    frame: u32,
    width: u32,
    height: u32,
    seed: u64,
    fault: Option<CompressorFault>,
) -> Option<Mismatch> {
    let params = EdgeParams::default();
    let image = Image::seeded(width, height, seed.wrapping_add(u64::from(frame)));
    let oracle = sobel_golden(&image, &params).expect("dimensions validated");
    for variant in Variant::ALL {
        let out = process_frame_with_fault(&image, variant, &params, fault)
            .expect("dimensions validated");
        for r in 0..height {
            for c in 0..width {
                if out.get(r, c) != oracle.get(r, c) {
                    return Some(Mismatch {
                        frame,
                        variant,
                        row: r,
                        col: c,
                        expected: oracle.get(r, c),
                        actual: out.get(r, c),
                    });
                }
            }
        }
    }
    None
}

fn cmd_verify(
    frames: u32,
    width: u32,
    height: u32,
    seed: u64,
    inject_fault: bool,
) -> Result<(), Failure> {
    if width < 3 || height < 3 {
        return Err(Failure::new(
            EXIT_BAD_ARGS,
            format!("verify dimensions {width}x{height} below the 3x3 minimum"),
        ));
    }
    let fault = inject_fault.then_some(CompressorFault { bit: 0, location: None });

    let run = |i: u32| check_frame(i, width, height, seed, fault);
    #[cfg(feature = "parallel")]
    let results: Vec<Option<Mismatch>> = (0..frames).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Option<Mismatch>> = (0..frames).map(run).collect();

    // Results are ordered by frame index, so the report is deterministic
    // regardless of scheduling.
    if let Some(m) = results.into_iter().flatten().next() {
        println!(
            "mismatch: frame {}, variant {}, pixel ({},{}): expected {}, got {}",
            m.frame, m.variant, m.row, m.col, m.expected, m.actual
        );
        return Err(Failure::new(EXIT_MISMATCH, "verification failed"));
    }
    println!(
        "verified {frames} frames ({width}x{height}, seed {seed}): \
         all variants match the convolution oracle ({} comparisons)",
        u64::from(frames) * 4
    );
    Ok(())
}

fn cmd_report(
    variant: Option<Variant>,
    all: bool,
    width: u32,
    height: u32,
    format: FormatArg,
) -> Result<(), Failure> {
    let chosen: Vec<Variant> = match (variant, all) {
        (Some(v), false) => vec![v],
        _ => Variant::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for v in chosen {
        let mut params = DesignParams::new(v);
        params.width = width;
        params.height = height;
        let report = estimate_resources(&params)
            .map_err(|e| Failure::new(EXIT_BAD_ARGS, e.to_string()))?;
        reports.push(report);
    }
    reports.sort_by_key(|r| r.total_les);
    match format {
        FormatArg::Text => print!("{}", render::text_report(&reports)),
        FormatArg::Machine => print!("{}", render::machine_report(&reports)),
    }
    Ok(())
}

fn cmd_trace(input: PathBuf, variant: Variant, params: EdgeParams) -> Result<(), Failure> {
    let image = read_image(&input)?;
    if image.width() > 16 || image.height() > 16 {
        return Err(Failure::new(
            EXIT_BAD_ARGS,
            format!(
                "trace input is {}x{}; at most 16x16 is supported",
                image.width(),
                image.height()
            ),
        ));
    }
    let trace = trace_frame(&image, variant, &params)
        .map_err(|e| Failure::new(EXIT_INVALID_IMAGE, e.to_string()))?;
    print!("{}", render::trace_dump(&trace));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect { input, output, variant, threshold, norm } => {
            let params = EdgeParams { norm: norm.into(), threshold };
            cmd_detect(input, output, variant.into(), params)
        }
        Command::Verify { frames, width, height, seed, inject_fault } => {
            cmd_verify(frames, width, height, seed, inject_fault)
        }
        Command::Report { variant, all, width, height, format } => {
            cmd_report(variant.map(Into::into), all, width, height, format)
        }
        Command::Trace { input, variant, threshold, norm } => {
            let params = EdgeParams { norm: norm.into(), threshold };
            cmd_trace(input, variant.into(), params)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
