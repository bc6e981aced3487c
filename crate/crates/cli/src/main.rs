use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use locsamp::graph::{write_coords, write_graph};
use locsamp::harness::{
    derive_seed, first_full_success, kernel_label, load_config, run_error_curve_on, run_fm_curve_on,
    run_frame_check_on, run_image_experiment, write_curve_csv, write_image_outputs, DistributionFactory,
    DistributionKind, ExperimentConfig, KernelContext, Setup,
};
use locsamp::reconstruct::{reconstruct_bandlimited_ls, reconstruct_tikhonov};
use locsamp::sampling::{draw_plan, SamplePlan};
use locsamp::spectral::synth_bandlimited;

/// Seed path components for draws made by the `sample` subcommand.
const SAMPLE_SIGNAL: u64 = 0x5349;
const SAMPLE_DRAW: u64 = 0x4452;

#[derive(Parser)]
#[command(
    name = "locsamp",
    version,
    about = "Sampling and reconstruction of bandlimited graph signals from local measurements"
)]
struct Cli {
    /// Experiment configuration (`key = value` lines); defaults apply when omitted.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Overrides `out.dir` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the configured graph and write `graph.txt` and `coords.txt`.
    GenGraph,
    /// Write every configured distribution for every kernel as `dist_<kernel>_<name>.csv`.
    Dist,
    /// Synthesize a bandlimited signal and draw one measurement plan.
    Sample {
        /// Number of measurements.
        #[arg(long)]
        m: usize,
        /// Distribution to draw from; defaults to the first configured one.
        #[arg(long)]
        distribution: Option<DistributionKind>,
        /// Zero-based index into the configured kernel list.
        #[arg(long, default_value_t = 0)]
        kernel: usize,
    },
    /// Decode a plan written by `sample` and write `reconstruction.csv`.
    Reconstruct {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, value_enum, default_value_t = DecoderArg::Tikhonov)]
        decoder: DecoderArg,
        #[arg(long, default_value_t = 0)]
        kernel: usize,
        /// Ground-truth signal (`vertex,value`) for reporting the relative error.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Success probability of the embedding bound over the m grid (`fm_curve.csv`).
    FmCurve,
    /// Mean relative reconstruction error over the m grid (`error_curve.csv`).
    ErrorCurve,
    /// Image reconstruction on a pixel graph (`snr_report.csv`, energy table, PGMs).
    Image {
        /// Binary PGM input; overrides `image.path`.
        #[arg(long)]
        image: Option<PathBuf>,
    },
    /// Monte Carlo check of the frame bound at the required number of measurements (`frame_check.csv`).
    FrameCheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Tikhonov,
    BandlimitedLs,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.out_dir = out;
    }
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir).with_context(|| format!("creating {}", cfg.out_dir.display()))?;

    match cli.command {
        Command::GenGraph => gen_graph(&cfg),
        Command::Dist => dist(&cfg),
        Command::Sample { m, distribution, kernel } => sample(&cfg, m, distribution, kernel),
        Command::Reconstruct { plan, decoder, kernel, truth } => {
            reconstruct(&cfg, &plan, decoder, kernel, truth.as_deref())
        }
        Command::FmCurve => {
            let setup = Setup::new(&cfg)?;
            let table = run_fm_curve_on(&cfg, &setup)?;
            let path = cfg.out_dir.join("fm_curve.csv");
            write_curve_csv(&table, &path)?;
            for poly in &cfg.kernels {
                for kind in &cfg.distributions {
                    let label = kernel_label(poly);
                    let m = first_full_success(&table, &label, &kind.to_string());
                    let m = m.map_or_else(|| "not reached".to_string(), |m| m.to_string());
                    println!("kernel [{label}] {kind}: smallest m with f(m) = 1: {m}");
                }
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::ErrorCurve => {
            let setup = Setup::new(&cfg)?;
            let table = run_error_curve_on(&cfg, &setup)?;
            let path = cfg.out_dir.join("error_curve.csv");
            write_curve_csv(&table, &path)?;
            let failures: usize = table.rows.iter().map(|r| r.failures).sum();
            if failures > 0 {
                eprintln!("warning: {failures} trials failed to decode and were excluded from the means");
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Image { image } => {
            let path =
                image.or_else(|| cfg.image.path.clone()).context("no image given (use --image or image.path)")?;
            let report = run_image_experiment(&cfg, &path)?;
            write_image_outputs(&report, &cfg.out_dir)?;
            println!(
                "{}x{} image, k = {} (energy ratio {:.4}), m = {}",
                report.width, report.height, report.k, report.energy, report.m
            );
            for r in &report.rows {
                let snr = r.snr_db.map_or_else(|| "decoder failed".to_string(), |s| format!("{s:.2} dB"));
                println!("kernel [{}] {}: {snr}", r.kernel, r.distribution);
            }
            println!("wrote results to {}", cfg.out_dir.display());
            Ok(())
        }
        Command::FrameCheck => {
            let setup = Setup::new(&cfg)?;
            let report = run_frame_check_on(&cfg, &setup)?;
            let path = cfg.out_dir.join("frame_check.csv");
            let mut out = BufWriter::new(File::create(&path)?);
            report.write_csv(&mut out)?;
            out.flush()?;
            println!(
                "m = {}, violations {}/{} (rate {:.4}, allowed {:.4})",
                report.m,
                report.violations,
                report.trials,
                report.violation_rate(),
                report.allowed_rate()
            );
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn kernel_slug(cfg: &ExperimentConfig, idx: usize) -> String {
    kernel_label(&cfg.kernels[idx]).replace(' ', "_")
}

fn check_kernel(cfg: &ExperimentConfig, idx: usize) -> Result<()> {
    if idx >= cfg.kernels.len() {
        bail!("kernel index {idx} out of range ({} configured)", cfg.kernels.len());
    }
    Ok(())
}

fn gen_graph(cfg: &ExperimentConfig) -> Result<()> {
    let (graph, coords) = locsamp::harness::build_graph(cfg)?;
    let path = cfg.out_dir.join("graph.txt");
    let mut out = create(&path)?;
    write_graph(&graph, &mut out)?;
    out.flush()?;
    println!("n = {}, {} edges, connected: {}", graph.n(), graph.edges().len(), graph.is_connected());
    println!("wrote {}", path.display());
    if let Some(coords) = coords {
        let path = cfg.out_dir.join("coords.txt");
        let mut out = create(&path)?;
        write_coords(&coords, &mut out)?;
        out.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn dist(cfg: &ExperimentConfig) -> Result<()> {
    let setup = Setup::new(cfg)?;
    let mut factory = DistributionFactory::new(cfg, &setup, cfg.k);
    for (ki, poly) in cfg.kernels.iter().enumerate() {
        let ctx = KernelContext::new(&setup, poly, cfg.k)?;
        for &kind in &cfg.distributions {
            let p = factory.get(ki, &ctx, kind)?;
            let path = cfg.out_dir.join(format!("dist_{}_{kind}.csv", kernel_slug(cfg, ki)));
            let mut out = create(&path)?;
            p.write_csv(&mut out)?;
            out.flush()?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn sample(cfg: &ExperimentConfig, m: usize, distribution: Option<DistributionKind>, kernel: usize) -> Result<()> {
    check_kernel(cfg, kernel)?;
    let kind = distribution.unwrap_or(cfg.distributions[0]);
    let setup = Setup::new(cfg)?;
    let ctx = KernelContext::new(&setup, &cfg.kernels[kernel], cfg.k)?;
    let p = DistributionFactory::new(cfg, &setup, cfg.k).get(kernel, &ctx, kind)?;
    let signal = synth_bandlimited(&setup.basis, cfg.k, derive_seed(cfg.seed, &[SAMPLE_SIGNAL]))?;
    let plan = draw_plan(&ctx.op, &p, m, signal.values.as_slice(), derive_seed(cfg.seed, &[SAMPLE_DRAW, m as u64]))?;

    let signal_path = cfg.out_dir.join("signal.csv");
    write_vector(&signal_path, signal.values.as_slice())?;
    let plan_path = cfg.out_dir.join("plan.csv");
    let mut out = create(&plan_path)?;
    plan.write_csv(&mut out)?;
    out.flush()?;
    println!("drew {m} samples from {kind} with kernel [{}]", kernel_label(&cfg.kernels[kernel]));
    println!("wrote {} and {}", signal_path.display(), plan_path.display());
    Ok(())
}

fn reconstruct(
    cfg: &ExperimentConfig,
    plan_path: &Path,
    decoder: DecoderArg,
    kernel: usize,
    truth: Option<&Path>,
) -> Result<()> {
    check_kernel(cfg, kernel)?;
    let setup = Setup::new(cfg)?;
    let ctx = KernelContext::new(&setup, &cfg.kernels[kernel], cfg.k)?;
    let file = File::open(plan_path).with_context(|| format!("opening {}", plan_path.display()))?;
    let (omega, p_omega, y) = SamplePlan::read_csv(BufReader::new(file))?;
    let plan = SamplePlan::from_measurements(&ctx.op, omega, p_omega, y)?;
    let mut result = match decoder {
        DecoderArg::Tikhonov => reconstruct_tikhonov(&plan, &setup.laplacian)?,
        DecoderArg::BandlimitedLs => reconstruct_bandlimited_ls(&plan, &setup.basis, cfg.k)?,
    };
    if let Some(truth) = truth {
        result = result.with_truth(&read_vector(truth)?)?;
    }
    let path = cfg.out_dir.join("reconstruction.csv");
    write_vector(&path, result.x.as_slice())?;
    println!("{} decoder, weighted residual {:.3e}", result.decoder, result.residual_norm);
    if let Some(e) = result.relative_error {
        println!("relative error {e:.6e}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// `vertex,value` rows with 1-based vertices.
fn write_vector(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "vertex,value")?;
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{},{v:e}", i + 1)?;
    }
    out.flush()?;
    Ok(())
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("vertex") {
            continue;
        }
        let (vertex, value) =
            t.split_once(',').with_context(|| format!("{}:{}: expected `vertex,value`", path.display(), idx + 1))?;
        let vertex: usize =
            vertex.trim().parse().with_context(|| format!("{}:{}: bad vertex", path.display(), idx + 1))?;
        if vertex != values.len() + 1 {
            bail!("{}:{}: vertices must be listed in order starting at 1", path.display(), idx + 1);
        }
        values.push(value.trim().parse().with_context(|| format!("{}:{}: bad value", path.display(), idx + 1))?);
    }
    Ok(values)
}
