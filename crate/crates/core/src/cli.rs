//! The `tfnorm` command line: norms, operator application, experiments and
//! sample files.
//!
//! Sample files are plain CSV: a `# grid: dim=<d> period=<L> samples=<M>`
//! header, an optional `# wgrid: …` header for symbols, then one `re,im`
//! pair per line (row-major, `x` outer, for symbols).

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, TfError};
use crate::exponent::Exponent;
use crate::grid::{gaussian, GridSpec, SampledFunction, SampledSymbol, C64};
use crate::harness::{self, find, run_experiment, EXPERIMENT_NAMES};
use crate::norms::{SpaceKind, SpaceSpec, WindowKind};
use crate::quantize::{kernel_apply, weyl_apply_direct, Quantization};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SPEC: i32 = 3;
pub const EXIT_GRID: i32 = 4;
pub const EXIT_FAIL: i32 = 5;
pub const EXIT_GUARD: i32 = 6;

/// Exit code for an error.
pub fn exit_code(e: &TfError) -> i32 {
    match e {
        TfError::Parse(_) | TfError::Io(_) | TfError::NonFinite(_) => EXIT_PARSE,
        TfError::GridMismatch(_) | TfError::LengthMismatch { .. } => EXIT_GRID,
        e if e.is_guard() => EXIT_GUARD,
        _ => EXIT_SPEC,
    }
}

/// Either kind of sample file.
#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    Function(SampledFunction),
    Symbol(SampledSymbol),
}

fn parse_grid_line(line: &str) -> Result<GridSpec> {
    let mut dim = 1usize;
    let (mut period, mut samples) = (None, None);
    for field in line.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| TfError::Parse(format!("bad grid field `{field}`")))?;
        let bad = || TfError::Parse(format!("bad value in `{field}`"));
        match k {
            "dim" => dim = v.parse().map_err(|_| bad())?,
            "period" => period = Some(v.parse::<f64>().map_err(|_| bad())?),
            "samples" => samples = Some(v.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(TfError::Parse(format!("unknown grid field `{k}`"))),
        }
    }
    match (period, samples) {
        (Some(p), Some(m)) => GridSpec::with_dim(dim, p, m),
        _ => Err(TfError::Parse("grid header needs period and samples".into())),
    }
}

pub fn parse_samples(text: &str) -> Result<Samples> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
    let header = lines.next().ok_or_else(|| TfError::Parse("empty file".into()))?;
    let grid = parse_grid_line(
        header
            .strip_prefix("# grid:")
            .ok_or_else(|| TfError::Parse("missing `# grid:` header".into()))?,
    )?;
    let wgrid = match lines.peek().and_then(|l| l.strip_prefix("# wgrid:")) {
        Some(rest) => {
            let g = parse_grid_line(rest)?;
            lines.next();
            Some(g)
        }
        None => None,
    };
    let mut values = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.starts_with('#') {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| TfError::Parse(format!("sample line {}: expected `re,im`", n + 1)))?;
        let re: f64 = re.trim().parse().map_err(|_| TfError::Parse(format!("sample line {}: `{re}`", n + 1)))?;
        let im: f64 = im.trim().parse().map_err(|_| TfError::Parse(format!("sample line {}: `{im}`", n + 1)))?;
        values.push(C64::new(re, im));
    }
    match wgrid {
        None => Ok(Samples::Function(SampledFunction::new(grid, values)?)),
        Some(w) => Ok(Samples::Symbol(SampledSymbol::dense(grid, w, values)?)),
    }
}

pub fn read_samples(path: &Path) -> Result<Samples> {
    let text = fs::read_to_string(path).map_err(|e| TfError::Io(format!("{}: {e}", path.display())))?;
    parse_samples(&text)
}

fn grid_header(tag: &str, g: GridSpec) -> String {
    format!("# {tag}: dim={} period={} samples={}\n", g.dim, g.period, g.samples)
}

fn push_values(out: &mut String, values: &[C64]) {
    for v in values {
        let _ = writeln!(out, "{:e},{:e}", v.re, v.im);
    }
}

pub fn format_function(f: &SampledFunction) -> String {
    let mut out = grid_header("grid", f.grid);
    push_values(&mut out, &f.values);
    out
}

pub fn format_symbol(a: &SampledSymbol) -> String {
    let mut out = grid_header("grid", a.xgrid);
    out.push_str(&grid_header("wgrid", a.wgrid));
    push_values(&mut out, &a.values());
    out
}

pub fn format_samples(s: &Samples) -> String {
    match s {
        Samples::Function(f) => format_function(f),
        Samples::Symbol(a) => format_symbol(a),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| TfError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(name = "tfnorm", version, about = "Time-frequency norms, quantizations and boundedness experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WindowArg {
    Gaussian,
    Bandlimited,
    Bump,
}

impl From<WindowArg> for WindowKind {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Gaussian => WindowKind::Gaussian,
            WindowArg::Bandlimited => WindowKind::BandLimited,
            WindowArg::Bump => WindowKind::Bump,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SampleKind {
    Gaussian,
    Box,
    Bump,
    Chirp,
    Delta,
    Random,
    IdentitySymbol,
    TensorSymbol,
    RandomSymbol,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of a function or symbol file.
    Norm {
        /// One of Lp, Lpq, LpLq, WLpLq, FLp, WFLpLq, M.
        #[arg(long)]
        space: String,
        #[arg(long)]
        p: String,
        /// Defaults to `p`.
        #[arg(long)]
        q: Option<String>,
        /// Window for phase-space norms of symbols.
        #[arg(long, value_enum, default_value = "gaussian")]
        window: WindowArg,
        file: PathBuf,
    },
    /// Apply a symbol to a function.
    Apply {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        function: PathBuf,
        /// `kn` or `weyl`.
        #[arg(long, default_value = "kn")]
        quantization: String,
        /// Also apply the integral kernel and print the discrepancy.
        #[arg(long)]
        check_dual_path: bool,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run registered scaling experiments.
    Experiment {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        /// Also write gnuplot data and an SVG per report.
        #[arg(long)]
        plot: bool,
    },
    /// Write a sample function or symbol file.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[arg(long, default_value_t = 8.0)]
        period: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Chirp rate.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(TfError::from),
    }
}

fn cmd_norm(
    out: &mut dyn Write,
    space: &str,
    p: &str,
    q: Option<&str>,
    window: WindowArg,
    file: &Path,
) -> Result<()> {
    let samples = read_samples(file)?;
    let kind: SpaceKind = space.parse()?;
    let p: Exponent = p.parse()?;
    let q: Exponent = q.map(str::parse).transpose()?.unwrap_or(p);
    let spec = SpaceSpec::new(kind, p, q).with_symbol_window(window.into());
    let (value, grid) = match &samples {
        Samples::Function(f) => (spec.function_norm(f)?, f.grid.to_string()),
        Samples::Symbol(a) => (spec.symbol_norm(a)?, format!("x: {} w: {}", a.xgrid, a.wgrid)),
    };
    writeln!(out, "{:.12e}", value.value)?;
    writeln!(out, "# {} [{grid}]", value.note)?;
    Ok(())
}

fn cmd_apply(
    out: &mut dyn Write,
    symbol: &Path,
    function: &Path,
    quantization: &str,
    check: bool,
    dest: Option<&Path>,
) -> Result<()> {
    let a = match read_samples(symbol)? {
        Samples::Symbol(a) => a,
        Samples::Function(_) => return Err(TfError::Parse(format!("{}: expected a symbol file", symbol.display()))),
    };
    let f = match read_samples(function)? {
        Samples::Function(f) => f,
        Samples::Symbol(_) => return Err(TfError::Parse(format!("{}: expected a function file", function.display()))),
    };
    let quant: Quantization = quantization.parse().map_err(|e: TfError| TfError::Domain(e.to_string()))?;
    let g = quant.apply(&a, &f)?;
    if check {
        let k = match quant {
            Quantization::Weyl => weyl_apply_direct(&a, &f)?,
            Quantization::KohnNirenberg => kernel_apply(&quant.kernel(&a)?, &f)?,
        };
        let scale = g.max_abs().max(f64::MIN_POSITIVE);
        let d = g.values.iter().zip(&k.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale;
        writeln!(out, "# dual-path discrepancy: {d:.3e}")?;
    }
    emit(out, dest, &format_function(&g))
}

fn sample(kind: SampleKind, grid: GridSpec, lambda: f64, seed: u64) -> Result<Samples> {
    use crate::families::{chirp_h, delta_spike, Envelope};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = |n: usize| -> Vec<C64> {
        (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    };
    let pi = std::f64::consts::PI;
    Ok(match kind {
        SampleKind::Gaussian => Samples::Function(gaussian(grid)),
        SampleKind::Box => Samples::Function(SampledFunction::from_real_fn(grid, |x| {
            if (-0.5..0.5).contains(&x) {
                1.0
            } else {
                0.0
            }
        })),
        SampleKind::Bump => Samples::Function(Envelope::RaisedCosine.sample(grid)?),
        SampleKind::Chirp => Samples::Function(chirp_h(lambda, Envelope::SmoothBump, grid)?),
        SampleKind::Delta => Samples::Function(delta_spike(grid)),
        SampleKind::Random => Samples::Function(SampledFunction::new(grid, random(grid.samples))?),
        SampleKind::IdentitySymbol => Samples::Symbol(SampledSymbol::constant(grid, grid.dual(), C64::new(1.0, 0.0))),
        SampleKind::TensorSymbol => {
            let u = SampledFunction::from_real_fn(grid, |x| (-pi * x * x / 4.0).exp());
            let v = SampledFunction::from_real_fn(grid.dual(), |w| (-pi * w * w).exp());
            Samples::Symbol(SampledSymbol::tensor(&u, &v).to_dense())
        }
        SampleKind::RandomSymbol => {
            let n = grid.samples * grid.samples;
            Samples::Symbol(SampledSymbol::dense(grid, grid.dual(), random(n))?)
        }
    })
}

/// Outcome of one `experiment` invocation.
fn cmd_experiment(out: &mut dyn Write, name: Option<&str>, all: bool, dir: &Path, plot: bool) -> Result<i32> {
    let names: Vec<String> = match (name, all) {
        (_, true) => EXPERIMENT_NAMES.iter().map(|s| s.to_string()).collect(),
        (Some(n), false) => vec![n.to_string()],
        (None, false) => return Err(TfError::Domain("give an experiment name or --all".into())),
    };
    // resolve every name before running anything
    let experiments = names.iter().map(|n| find(n)).collect::<Result<Vec<_>>>()?;
    let mut code = 0;
    for exp in &experiments {
        match run_experiment(exp) {
            Ok(report) => {
                report.write(dir)?;
                if plot {
                    report.write_plot(dir)?;
                }
                out.write_all(report.text().as_bytes())?;
                if !report.passed() && code == 0 {
                    code = EXIT_FAIL;
                }
            }
            Err(e) if e.is_guard() => {
                writeln!(out, "GUARD {}: {e}", exp.name)?;
                code = EXIT_GUARD;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(code)
}

fn cap_threads() {
    if let Some(n) = std::env::var("TFNORM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    cap_threads();
    let result = match &cli.command {
        Command::Norm {
            space,
            p,
            q,
            window,
            file,
        } => cmd_norm(out, space, p, q.as_deref(), *window, file).map(|_| 0),
        Command::Apply {
            symbol,
            function,
            quantization,
            check_dual_path,
            out: dest,
        } => cmd_apply(out, symbol, function, quantization, *check_dual_path, dest.as_deref()).map(|_| 0),
        Command::Experiment {
            name,
            all,
            out: dir,
            plot,
        } => cmd_experiment(out, name.as_deref(), *all, dir, *plot),
        Command::Sample {
            kind,
            period,
            samples,
            lambda,
            seed,
            out: dest,
        } => GridSpec::new(*period, *samples)
            .and_then(|g| sample(*kind, g, *lambda, *seed))
            .and_then(|s| emit(out, dest.as_deref(), &format_samples(&s)))
            .map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Directory listing helper for report consumers.
pub fn report_paths(dir: &Path) -> Vec<PathBuf> {
    harness::EXPERIMENT_NAMES.iter().map(|n| dir.join(format!("{n}.csv"))).collect()
}
