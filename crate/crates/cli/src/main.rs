//! Command-line front end: run-probability tables, region listings and SVG
//! renders, factor-vs-determinantal verification, sampling, and Monte Carlo
//! spot checks.
//!
//! Exit codes: 0 on success, 1 when a verification check fails (a comparison
//! over tolerance or a Monte Carlo |z| > 4), 2 on usage or validation errors.
//! All reports embed the configuration, tool version and seed; identical
//! invocations produce byte-identical output.

mod report;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{
    entries_csv, probs_csv, sweep_csv, to_json_line, write_output, ConfigEcho, Envelope,
    RegionReport, SampleReport, SweepSummary,
};
use std::path::PathBuf;
use std::process::ExitCode;
use svg::render_region_svg;
use trigdet::{
    build_region, build_transfer, compare_patterns, mc_estimate, region_area, run_length_table,
    sample_factor, sample_window, sweep_grid, Pattern, TrigSymbolDeg1,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "trigdet",
    version,
    about = "Degree-1 trigonometric determinantal processes and their two-block-factor form"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate P(k+1 consecutive ones) by determinant, recurrence, closed
    /// form and transfer matrices
    Probs(ProbsArgs),
    /// List the box region realizing the process, optionally rendered as SVG
    Region(RegionArgs),
    /// Compare factor and determinantal pattern probabilities
    Verify(VerifyArgs),
    /// Draw a window of process bits
    Sample(SampleArgs),
    /// Monte Carlo check of one pattern probability
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> String {
        match self {
            Self::Json => "json".to_string(),
            Self::Csv => "csv".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Source {
    /// Independent uniforms pushed through the region indicator
    Factor,
    /// Sequential conditioning on kernel determinant ratios
    Determinantal,
}

impl Source {
    fn name(self) -> String {
        match self {
            Self::Factor => "factor".to_string(),
            Self::Determinantal => "determinantal".to_string(),
        }
    }
}

/// Symbol parameters `f(x) = b + 2|a| cos(2 pi x - phase)`. The lag-one
/// coefficient can be given in polar (`--a-mag`/`--a-phase`) or cartesian
/// (`--a-re`/`--a-im`) form.
#[derive(Args)]
struct SymbolArgs {
    /// Constant Fourier coefficient
    #[arg(long)]
    b: f64,
    /// Magnitude of the lag-one Fourier coefficient
    #[arg(long, default_value_t = 0.0, conflicts_with_all = ["a_re", "a_im"])]
    a_mag: f64,
    /// Phase of the lag-one Fourier coefficient, in radians
    #[arg(long, default_value_t = 0.0, conflicts_with_all = ["a_re", "a_im"])]
    a_phase: f64,
    /// Real part of the lag-one coefficient (alternative to polar form)
    #[arg(long, requires = "a_im")]
    a_re: Option<f64>,
    /// Imaginary part of the lag-one coefficient
    #[arg(long, requires = "a_re")]
    a_im: Option<f64>,
}

impl SymbolArgs {
    fn resolve(&self) -> Result<TrigSymbolDeg1, String> {
        resolve_symbol(self.b, self.a_mag, self.a_phase, self.a_re, self.a_im)
    }
}

fn resolve_symbol(
    b: f64,
    a_mag: f64,
    a_phase: f64,
    a_re: Option<f64>,
    a_im: Option<f64>,
) -> Result<TrigSymbolDeg1, String> {
    let (mag, phase) = match (a_re, a_im) {
        (Some(re), Some(im)) => (re.hypot(im), im.atan2(re)),
        _ => (a_mag, a_phase),
    };
    TrigSymbolDeg1::new(b, mag, phase).map_err(|e| e.to_string())
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Largest run index k to tabulate (at most 30)
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Also render the region to this SVG file
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify every symbol of the built-in grid instead of one symbol
    #[arg(long)]
    sweep: bool,
    /// Constant Fourier coefficient
    #[arg(long, required_unless_present = "sweep", conflicts_with = "sweep")]
    b: Option<f64>,
    /// Magnitude of the lag-one Fourier coefficient
    #[arg(long, default_value_t = 0.0, conflicts_with_all = ["sweep", "a_re", "a_im"])]
    a_mag: f64,
    /// Phase of the lag-one Fourier coefficient, in radians
    #[arg(long, default_value_t = 0.0, conflicts_with_all = ["sweep", "a_re", "a_im"])]
    a_phase: f64,
    /// Real part of the lag-one coefficient (alternative to polar form)
    #[arg(long, requires = "a_im", conflicts_with = "sweep")]
    a_re: Option<f64>,
    /// Imaginary part of the lag-one coefficient
    #[arg(long, requires = "a_re", conflicts_with = "sweep")]
    a_im: Option<f64>,
    /// Longest pattern length to enumerate (1..=12)
    #[arg(long, default_value_t = 10)]
    window: usize,
    /// Largest allowed per-pattern deviation
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for the sweep (default: machine parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Number of bits to draw
    #[arg(long)]
    n: usize,
    /// RNG seed
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Source::Factor)]
    source: Source,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    /// Pattern to check: 1, 0 and . (free), e.g. "1.1"
    #[arg(long)]
    pattern: String,
    /// Number of replications (at least 1000)
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// RNG seed
    #[arg(long)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Probs(args) => run_probs(args),
        Command::Region(args) => run_region(args),
        Command::Verify(args) => run_verify(args),
        Command::Sample(args) => run_sample(args),
        Command::Mc(args) => run_mc(args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_probs(args: ProbsArgs) -> Result<ExitCode, String> {
    let symbol = args.symbol.resolve()?;
    if args.k_max > 30 {
        return Err(format!(
            "k_max = {} violates k_max <= 30 (direct determinant route)",
            args.k_max
        ));
    }
    let rows = run_length_table(&symbol, args.k_max);
    let config = ConfigEcho {
        subcommand: "probs",
        b: Some(symbol.b()),
        a_mag: Some(symbol.a_mag()),
        a_phase: Some(symbol.a_phase()),
        k_max: Some(args.k_max),
        format: args.format.name(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let bytes = match args.format {
        Format::Json => to_json_line(&Envelope {
            config,
            version: VERSION,
            seed: None,
            results: &rows,
            pass: true,
        }),
        Format::Csv => probs_csv(&rows),
    };
    write_output(&bytes, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_region(args: RegionArgs) -> Result<ExitCode, String> {
    let symbol = args.symbol.resolve()?;
    let region = build_region(&symbol);
    let transfer = build_transfer(&region).map_err(|e| e.to_string())?;
    if let Some(path) = &args.svg {
        let doc = render_region_svg(&region, transfer.breakpoints());
        std::fs::write(path, doc).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let config = ConfigEcho {
        subcommand: "region",
        b: Some(symbol.b()),
        a_mag: Some(symbol.a_mag()),
        a_phase: Some(symbol.a_phase()),
        format: "json".to_string(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        svg: args.svg.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let bytes = to_json_line(&Envelope {
        config,
        version: VERSION,
        seed: None,
        results: RegionReport {
            area: region_area(&region),
            breakpoints: transfer.breakpoints(),
            region: &region,
        },
        pass: true,
    });
    write_output(&bytes, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    if !(1..=12).contains(&args.window) {
        return Err(format!(
            "window = {} violates 1 <= window <= 12 (pattern enumeration is exponential)",
            args.window
        ));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(format!("tol = {} violates tol > 0", args.tol));
    }
    let config = ConfigEcho {
        subcommand: "verify",
        b: args.b,
        a_mag: args.b.map(|_| args.a_mag),
        a_phase: args.b.map(|_| args.a_phase),
        window: Some(args.window),
        tol: Some(args.tol),
        sweep: Some(args.sweep),
        jobs: args.jobs,
        format: args.format.name(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    if args.sweep {
        let reports = match args.jobs {
            Some(jobs) => rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| format!("cannot build a {jobs}-thread pool: {e}"))?
                .install(|| sweep_grid(args.window, args.tol)),
            None => sweep_grid(args.window, args.tol),
        };
        let summaries: Vec<SweepSummary> = reports.iter().map(SweepSummary::from).collect();
        let pass = reports.iter().all(|r| r.pass);
        let bytes = match args.format {
            Format::Json => to_json_line(&Envelope {
                config,
                version: VERSION,
                seed: None,
                results: &summaries,
                pass,
            }),
            Format::Csv => sweep_csv(&summaries),
        };
        write_output(&bytes, args.out.as_deref())?;
        return Ok(if pass {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }
    let symbol = resolve_symbol(
        args.b.expect("clap requires --b without --sweep"),
        args.a_mag,
        args.a_phase,
        args.a_re,
        args.a_im,
    )?;
    let report = compare_patterns(&symbol, args.window, args.tol);
    let pass = report.pass;
    let bytes = match args.format {
        Format::Json => to_json_line(&Envelope {
            config,
            version: VERSION,
            seed: None,
            results: std::slice::from_ref(&report),
            pass,
        }),
        Format::Csv => entries_csv(&report),
    };
    write_output(&bytes, args.out.as_deref())?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_sample(args: SampleArgs) -> Result<ExitCode, String> {
    if args.n == 0 {
        return Err("n = 0 violates n >= 1".to_string());
    }
    let symbol = args.symbol.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let bits = match args.source {
        Source::Factor => sample_factor(&build_region(&symbol), args.n, &mut rng),
        Source::Determinantal => sample_window(&symbol, args.n, &mut rng).map_err(|e| e.to_string())?,
    };
    let config = ConfigEcho {
        subcommand: "sample",
        b: Some(symbol.b()),
        a_mag: Some(symbol.a_mag()),
        a_phase: Some(symbol.a_phase()),
        n: Some(args.n),
        seed: Some(args.seed),
        source: Some(args.source.name()),
        format: "json".to_string(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let bytes = to_json_line(&Envelope {
        config,
        version: VERSION,
        seed: Some(args.seed),
        results: SampleReport {
            source: args.source.name(),
            n: args.n,
            bits: bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect(),
        },
        pass: true,
    });
    write_output(&bytes, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_mc(args: McArgs) -> Result<ExitCode, String> {
    if args.n < 1000 {
        return Err(format!(
            "n = {} violates n >= 1000 (z-scores need replication)",
            args.n
        ));
    }
    let pattern = Pattern::parse(&args.pattern).map_err(|e| e.to_string())?;
    let symbol = args.symbol.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let estimate = mc_estimate(&build_region(&symbol), &pattern, args.n, &mut rng);
    let pass = estimate.z_score.abs() <= 4.0;
    let config = ConfigEcho {
        subcommand: "mc",
        b: Some(symbol.b()),
        a_mag: Some(symbol.a_mag()),
        a_phase: Some(symbol.a_phase()),
        n: Some(args.n),
        seed: Some(args.seed),
        pattern: Some(args.pattern.clone()),
        format: "json".to_string(),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    };
    let bytes = to_json_line(&Envelope {
        config,
        version: VERSION,
        seed: Some(args.seed),
        results: &estimate,
        pass,
    });
    write_output(&bytes, args.out.as_deref())?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
