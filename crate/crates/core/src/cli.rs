//! The `schmidt` command-line tool.
//!
//! Every command produces a CSV document (comment lines start with `#`) and, on request, an
//! SVG rendering of the same data. Output is a pure function of the arguments, so repeated
//! runs give byte-identical files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ensemble::{compare, exact_fixtures, ComparisonReport, EnsembleStats, FixtureKind};
use crate::error::{Error, Result};
use crate::linalg::laguerre_zeros;
use crate::plot::{render, Panel, Series};
use crate::sampler::{sample_ensemble, SamplerConfig};
use crate::theory::{eta_for_retained_count, f_of_x, lambda_min_conjecture};
use crate::types::{x_of_index, BipartiteDims};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_SEED: u64 = 1;
/// Half-width of the fixture acceptance bands, in standard errors.
pub const FIXTURE_BAND_SIGMAS: f64 = 3.0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "schmidt", version, about = "Average Schmidt spectra of random bipartite pure states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo mean, standard error and width of each eigenvalue
    Sample {
        #[command(flatten)]
        cut: CutArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Theoretical scaled spectrum f(x) and lambda(x) = f(x)/N
    Theory {
        #[command(flatten)]
        cut: CutArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Use x = j/(G-1), including both endpoints, instead of midpoints
        #[arg(long)]
        endpoints: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Truncation error eta(x) on x = j/(G-1)
    Eta {
        #[command(flatten)]
        cut: CutArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Add the column y = x N / sqrt(N K)
        #[arg(long)]
        rescaled: bool,
        /// Also report eta when the m largest eigenvalues are kept
        #[arg(long, value_name = "m")]
        retained: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo means against the large-N theory
    Compare {
        #[command(flatten)]
        cut: CutArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Fail (exit 1) if the max relative error over i <= N-2 exceeds this value
        #[arg(long, value_name = "TOL")]
        max_rel_err: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scaled zeros of L_N^(K-N+1) against f((i+1/2)/N)
    Laguerre {
        #[command(flatten)]
        cut: CutArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo check of the exact small-N means and the 1/N^3 smallest mean
    Fixtures {
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CutArgs {
    /// Subsystem dimensions N K
    #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with_all = ["qubits", "r"])]
    pub dims: Option<Vec<usize>>,
    /// Total number of qubits n; the cut is n/2-r and n/2+r qubits
    #[arg(long, value_name = "n")]
    pub qubits: Option<u32>,
    #[arg(long, value_name = "r", requires = "qubits")]
    pub r: Option<u32>,
}

impl CutArgs {
    pub fn dims(&self) -> Result<BipartiteDims> {
        match (&self.dims, self.qubits) {
            (Some(d), _) => BipartiteDims::new(d[0], d[1]),
            (None, Some(n)) => BipartiteDims::from_qubits(n, self.r.unwrap_or(0)),
            (None, None) => Err(Error::InvalidArgument("one of --dims or --qubits is required".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (results do not depend on this)
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output path; CSV goes to stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Add a semi-log panel to SVG output
    #[arg(long)]
    pub log_y: bool,
}

/// One pass/fail check requested by a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub csv: String,
    pub svg: Option<String>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Formats a float so that it parses back to the same value.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn header(command: &str, extra: &[String]) -> String {
    let mut s = format!("# schmidt-spectrum {} command={command}\n", env!("CARGO_PKG_VERSION"));
    for line in extra {
        let _ = writeln!(s, "# {line}");
    }
    s
}

fn dims_meta(d: BipartiteDims) -> String {
    format!("dims={},{} w={}", d.n_a(), d.n_b(), num(d.ratio()))
}

fn run_sampling(dims: BipartiteDims, s: &SamplingArgs) -> Result<EnsembleStats> {
    let cfg = SamplerConfig::new(dims, s.samples, s.seed)?;
    sample_ensemble(&cfg, s.workers, None)
}

pub fn cmd_sample(cut: &CutArgs, sampling: &SamplingArgs, output: &OutputArgs) -> Result<Outcome> {
    let dims = cut.dims()?;
    let stats = run_sampling(dims, sampling)?;
    let n = dims.n_a();
    let widths = if stats.count() >= 2 { stats.widths()? } else { vec![0.0; n] };
    let stderr = if stats.count() >= 2 { stats.stderrs()? } else { vec![0.0; n] };
    let mut csv = header(
        "sample",
        &[format!("{} seed={} samples={}", dims_meta(dims), sampling.seed, sampling.samples)],
    );
    csv.push_str("index,x,mean,stderr,width\n");
    let mut mc = Vec::with_capacity(n);
    for i in 0..n {
        let x = x_of_index(i, n)?;
        let m = stats.means()[i];
        mc.push((x, m * n as f64));
        let _ = writeln!(csv, "{i},{},{},{},{}", num(x), num(m), num(stderr[i]), num(widths[i]));
    }
    let svg = wants_svg(output).then(|| {
        let w = dims.ratio();
        let theory: Vec<(f64, f64)> = (0..=200)
            .map(|j| {
                let x = j as f64 / 200.0;
                (x, f_of_x(x, w).unwrap_or(f64::NAN))
            })
            .collect();
        let base = Panel::new(format!("N={} K={}", dims.n_a(), dims.n_b()), "x = (i+1/2)/N", "N <lambda_i>")
            .with(Series::points("Monte Carlo", mc))
            .with(Series::line("f(x)", theory));
        panels(base, output.log_y)
    });
    Ok(Outcome { csv, svg, checks: Vec::new() })
}

pub fn cmd_theory(cut: &CutArgs, grid: usize, endpoints: bool, output: &OutputArgs) -> Result<Outcome> {
    let dims = cut.dims()?;
    let w = dims.ratio();
    let n = dims.n_a() as f64;
    let curve = crate::theory::f_curve(grid, w, endpoints)?;
    let mut csv = header(
        "theory",
        &[format!(
            "{} grid={grid} {}",
            dims_meta(dims),
            if endpoints { "endpoints" } else { "midpoints" }
        )],
    );
    csv.push_str("x,f,lambda\n");
    for &(x, f) in &curve.points {
        let _ = writeln!(csv, "{},{},{}", num(x), num(f), num(f / n));
    }
    let svg = wants_svg(output).then(|| {
        let base = Panel::new(format!("f(x), w={}", num(w)), "x", "f(x) = N lambda(x)")
            .with(Series::line("f(x)", curve.points.clone()));
        panels(base, output.log_y)
    });
    Ok(Outcome { csv, svg, checks: Vec::new() })
}

pub fn cmd_eta(
    cut: &CutArgs,
    grid: usize,
    rescaled: bool,
    retained: Option<f64>,
    output: &OutputArgs,
) -> Result<Outcome> {
    let dims = cut.dims()?;
    let w = dims.ratio();
    let curve = crate::theory::eta_curve(grid, w, true)?;
    let mut meta = vec![format!("{} grid={grid} endpoints", dims_meta(dims))];
    if let Some(m) = retained {
        let e = eta_for_retained_count(m, dims)?;
        meta.push(format!("retained={} eta_retained={}", num(m), num(e)));
    }
    let mut csv = header("eta", &meta);
    let scale = w.sqrt();
    csv.push_str(if rescaled { "x,y,eta\n" } else { "x,eta\n" });
    for &(x, e) in &curve.points {
        if rescaled {
            let _ = writeln!(csv, "{},{},{}", num(x), num(x * scale), num(e));
        } else {
            let _ = writeln!(csv, "{},{}", num(x), num(e));
        }
    }
    let svg = wants_svg(output).then(|| {
        let pts: Vec<(f64, f64)> = if rescaled {
            curve.points.iter().map(|&(x, e)| (x * scale, e)).collect()
        } else {
            curve.points.clone()
        };
        let xl = if rescaled { "y = xN/sqrt(NK)" } else { "x" };
        let base = Panel::new(format!("eta, w={}", num(w)), xl, "eta").with(Series::line("eta", pts));
        panels(base, output.log_y)
    });
    Ok(Outcome { csv, svg, checks: Vec::new() })
}

fn report_csv(report: &ComparisonReport, sampling: &SamplingArgs) -> String {
    let mut csv = header(
        "compare",
        &[format!("{} seed={} samples={}", dims_meta(report.dims), sampling.seed, sampling.samples)],
    );
    csv.push_str("index,x,mc_mean,stderr,theory,rel_err\n");
    for r in &report.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.index,
            num(r.x),
            num(r.mc_mean),
            num(r.mc_stderr),
            num(r.theory_mean),
            num(r.relative_error)
        );
    }
    let _ = writeln!(csv, "# summary all max_rel_err={} median_rel_err={}", num(report.all.max), num(report.all.median));
    if let Some(s) = report.without_last {
        let _ = writeln!(csv, "# summary without_last max_rel_err={} median_rel_err={}", num(s.max), num(s.median));
    }
    if let Some(c) = report.conjectured_min {
        let last = report.rows.last().expect("nonempty");
        let _ = writeln!(
            csv,
            "# smallest mc={} theory={} conjecture={} (conjecture: <lambda_min> = 1/N^3)",
            num(last.mc_mean),
            num(last.theory_mean),
            num(c)
        );
    }
    csv
}

pub fn cmd_compare(
    cut: &CutArgs,
    sampling: &SamplingArgs,
    max_rel_err: Option<f64>,
    output: &OutputArgs,
) -> Result<Outcome> {
    let dims = cut.dims()?;
    let stats = run_sampling(dims, sampling)?;
    let report = compare(&stats)?;
    let csv = report_csv(&report, sampling);
    let mut checks = Vec::new();
    if let Some(tol) = max_rel_err {
        let observed = report.without_last.map(|s| s.max).unwrap_or(0.0);
        checks.push(Check {
            name: "max_rel_err_without_last".into(),
            passed: observed < tol,
            detail: format!("observed={} limit={}", num(observed), num(tol)),
        });
    }
    let svg = wants_svg(output).then(|| {
        let pts: Vec<(f64, f64)> = report.rows.iter().map(|r| (r.x, r.relative_error)).collect();
        let base = Panel::new(format!("N={} K={}", dims.n_a(), dims.n_b()), "x", "relative error")
            .with(Series::points("|mc - theory| / theory", pts));
        panels(base, output.log_y)
    });
    Ok(Outcome { csv, svg, checks })
}

/// `(index, x, scaled_zero, f, rel_dev)`
pub type LaguerreRow = (usize, f64, f64, f64, f64);

/// Pairs the descending scaled Laguerre zeros with `f((i + 1/2)/N)`.
pub fn laguerre_rows(dims: BipartiteDims) -> Result<Vec<LaguerreRow>> {
    let n = dims.n_a();
    let k = dims.n_b();
    let alpha = (k - n + 1) as f64;
    let mut zeros = laguerre_zeros(n, alpha)?;
    zeros.reverse();
    let w = dims.ratio();
    zeros
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = x_of_index(i, n)?;
            let scaled = z / k as f64;
            let f = f_of_x(x, w)?;
            Ok((i, x, scaled, f, (scaled - f).abs() / f))
        })
        .collect()
}

pub fn cmd_laguerre(cut: &CutArgs, output: &OutputArgs) -> Result<Outcome> {
    let dims = cut.dims()?;
    let rows = laguerre_rows(dims)?;
    let mut csv = header(
        "laguerre",
        &[format!("{} alpha={}", dims_meta(dims), dims.n_b() - dims.n_a() + 1)],
    );
    csv.push_str("index,x,scaled_zero,f,rel_dev\n");
    for &(i, x, z, f, d) in &rows {
        let _ = writeln!(csv, "{i},{},{},{},{}", num(x), num(z), num(f), num(d));
    }
    let max = rows.iter().map(|r| r.4).fold(0.0, f64::max);
    let _ = writeln!(csv, "# summary max_rel_dev={}", num(max));
    let svg = wants_svg(output).then(|| {
        let zs: Vec<(f64, f64)> = rows.iter().map(|r| (r.1, r.2)).collect();
        let fs: Vec<(f64, f64)> = rows.iter().map(|r| (r.1, r.3)).collect();
        let base = Panel::new(format!("N={} K={}", dims.n_a(), dims.n_b()), "x", "scaled value")
            .with(Series::points("Laguerre zeros / K", zs))
            .with(Series::line("f(x)", fs));
        panels(base, output.log_y)
    });
    Ok(Outcome { csv, svg, checks: Vec::new() })
}

pub fn cmd_fixtures(sampling: &SamplingArgs, _output: &OutputArgs) -> Result<Outcome> {
    let mut csv = header(
        "fixtures",
        &[format!(
            "seed={} samples={} band={}sigma",
            sampling.seed, sampling.samples, FIXTURE_BAND_SIGMAS
        )],
    );
    csv.push_str("n,index,kind,exact,mc_mean,stderr,band,passed\n");
    let mut checks = Vec::new();
    let table = exact_fixtures();
    let mut ns: Vec<usize> = table.iter().map(|f| f.n).filter(|&n| n <= 5).collect();
    ns.dedup();
    for n in ns {
        let dims = BipartiteDims::new(n, n)?;
        let stats = run_sampling(dims, sampling)?;
        let stderr = stats.stderrs()?;
        for f in table.iter().filter(|f| f.n == n) {
            let mc = stats.means()[f.index];
            let band = FIXTURE_BAND_SIGMAS * stderr[f.index];
            let passed = (mc - f.value()).abs() <= band;
            let kind = match f.kind {
                FixtureKind::Exact => "exact",
                FixtureKind::Conjecture => "conjecture",
            };
            let _ = writeln!(
                csv,
                "{n},{},{kind},{},{},{},{},{passed}",
                f.index,
                num(f.value()),
                num(mc),
                num(stderr[f.index]),
                num(band)
            );
            checks.push(Check {
                name: format!("fixture_n{n}_i{}", f.index),
                passed,
                detail: format!("exact={}/{} mc={} band={}", f.numerator, f.denominator, num(mc), num(band)),
            });
        }
    }
    let _ = writeln!(csv, "# note: rows of kind=conjecture test <lambda_min> = 1/N^3 = {} at N=5", num(lambda_min_conjecture(5)));
    Ok(Outcome { csv, svg: None, checks })
}

fn wants_svg(o: &OutputArgs) -> bool {
    matches!(o.format, Format::Svg | Format::Both)
}

fn panels(base: Panel, log_y: bool) -> String {
    if log_y {
        let log = Panel { title: format!("{} (semi-log)", base.title), ..base.clone() }.log_y(true);
        render(&[base, log])
    } else {
        render(&[base])
    }
}

fn svg_path(out: &Path, format: Format) -> PathBuf {
    match format {
        Format::Svg => out.to_path_buf(),
        _ => out.with_extension("svg"),
    }
}

fn execute(cli: &Cli) -> Result<(Outcome, OutputArgs)> {
    Ok(match &cli.command {
        Command::Sample { cut, sampling, output } => (cmd_sample(cut, sampling, output)?, output.clone()),
        Command::Theory { cut, grid, endpoints, output } => {
            (cmd_theory(cut, *grid, *endpoints, output)?, output.clone())
        }
        Command::Eta { cut, grid, rescaled, retained, output } => {
            (cmd_eta(cut, *grid, *rescaled, *retained, output)?, output.clone())
        }
        Command::Compare { cut, sampling, max_rel_err, output } => {
            (cmd_compare(cut, sampling, *max_rel_err, output)?, output.clone())
        }
        Command::Laguerre { cut, output } => (cmd_laguerre(cut, output)?, output.clone()),
        Command::Fixtures { sampling, output } => (cmd_fixtures(sampling, output)?, output.clone()),
    })
}

fn write_outputs(outcome: &Outcome, output: &OutputArgs, stdout: &mut dyn Write) -> std::io::Result<()> {
    match (&output.out, output.format) {
        (None, Format::Csv) => stdout.write_all(outcome.csv.as_bytes()),
        (None, _) => Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "--format svg|both needs --out")),
        (Some(path), format) => {
            if format != Format::Svg || outcome.svg.is_none() {
                std::fs::write(path, &outcome.csv)?;
            }
            if let Some(svg) = &outcome.svg {
                std::fs::write(svg_path(path, format), svg)?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (outcome, output) = match execute(&cli) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = write_outputs(&outcome, &output, stdout) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    let failed: Vec<&Check> = outcome.checks.iter().filter(|c| !c.passed).collect();
    for c in &outcome.checks {
        let _ = writeln!(stderr, "{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if failed.is_empty() {
        EXIT_OK
    } else {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        let _ = writeln!(stderr, "failed_checks={}", names.join(","));
        EXIT_CHECK_FAILED
    }
}
