//! The `latspec` command line.
//!
//! Exit codes: `0` success, `1` a `check` disagreement, `2` usage, I/O or
//! parse errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::ck::CkExample;
use crate::config::AnalysisConfig;
use crate::expr;
use crate::frechet::{cluster_points, quotient_norm};
use crate::operator::CenterOperator;
use crate::oracle::{
    cluster_oracle, compact_tail_check, finite_section_values, quotient_norm_oracle,
};
use crate::report::{analyze, describe_set, TextReport};
use crate::specfile::OperatorSpecFile;
use crate::spectra::SpectralSet;
use crate::symbol::AtomicSymbol;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable that replaces the default exact tolerance.
pub const TOL_ENV: &str = "LATSPEC_TOL";

/// Largest quotient-norm gap accepted for exact symbols in `check`.
pub const EXACT_GAP: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "latspec",
    version,
    about = "Spectral analysis of multiplication operators on Banach lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the spectral report for an operator spec file.
    Analyze(AnalyzeArgs),
    /// Compare closed-form quantities with brute-force oracles.
    Check(CheckArgs),
    /// Build a worked example.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Tolerance for exact inputs (overrides the file and LATSPEC_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Sample horizon for generator symbols.
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Number of atoms the quotient-norm oracle may remove.
    #[arg(long, default_value_t = 64)]
    budget: usize,
    /// Cluster radius; defaults to 1e-6, or the sampled tolerance for generators.
    #[arg(long)]
    eps: Option<f64>,
    /// Finite section length for exact symbols.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Write the quotient-norm oracle history here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ExampleCommand {
    /// Multiplication by p on C(K), K = ∪ I_n ∪ {x_n} ∪ {0}.
    Ck(CkArgs),
}

#[derive(Debug, Args)]
struct CkArgs {
    /// Real polynomial or expression in x.
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 30)]
    n_max: usize,
    #[arg(long, default_value_t = 65)]
    samples_per_interval: usize,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
}

/// Error reported on stderr with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

/// Runs the CLI with `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Check(a) => cmd_check(&a, out, err),
        Command::Example {
            which: ExampleCommand::Ck(a),
        } => cmd_example_ck(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn base_config(tol: Option<f64>) -> Result<AnalysisConfig, Failure> {
    let mut cfg = AnalysisConfig::default();
    if let Ok(text) = std::env::var(TOL_ENV) {
        cfg.tolerance = text
            .trim()
            .parse()
            .map_err(|_| Failure(format!("{TOL_ENV}: not a number: `{text}`")))?;
    }
    if let Some(t) = tol {
        cfg.tolerance = t;
    }
    Ok(cfg)
}

fn load(path: &Path, common: &Common) -> Result<(CenterOperator, AnalysisConfig), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let spec = OperatorSpecFile::from_json(&text)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let base = base_config(None)?;
    let (op, mut cfg) = spec
        .build(&base, common.horizon)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    if let Some(t) = common.tol {
        cfg.tolerance = t;
    }
    cfg.validate()?;
    Ok((op, cfg))
}

fn emit_report(
    op: &CenterOperator,
    cfg: &AnalysisConfig,
    output: Output,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let report = analyze(op, cfg)?;
    match output {
        Output::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        Output::Text => write!(
            out,
            "{}",
            TextReport {
                report: &report,
                limit: cfg.spectrum_points,
            }
        )?,
    }
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let (op, cfg) = load(&args.file, &args.common)?;
    emit_report(&op, &cfg, args.output, out)?;
    Ok(EXIT_OK)
}

struct Row {
    quantity: &'static str,
    formula: String,
    oracle: String,
    gap: String,
    ok: bool,
}

fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_way = |xs: &[Complex64], ys: &[Complex64]| {
        xs.iter()
            .map(|x| {
                ys.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    match (a.is_empty(), b.is_empty()) {
        (true, true) => 0.0,
        (false, false) => one_way(a, b).max(one_way(b, a)),
        _ => f64::INFINITY,
    }
}

fn cmd_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (op, cfg) = load(&args.file, &args.common)?;
    let sym = op.atomic_part().ok_or_else(|| {
        Failure(format!(
            "{}: check needs an atomic part",
            args.file.display()
        ))
    })?;
    let sampled = sym.is_estimated();
    let tol = cfg.tolerance_for(sampled);
    let eps = args.eps.unwrap_or(if sampled {
        cfg.sampled_tolerance
    } else {
        EXACT_GAP
    });
    let gap_tol = if sampled {
        cfg.sampled_tolerance
    } else {
        EXACT_GAP
    };

    // Generators are compared on their tail window; exact symbols on a
    // finite section long enough to show the modelled tail.
    let samples: Vec<Complex64> = match sym {
        AtomicSymbol::Generator(g) => g.window().to_vec(),
        _ => {
            let start = sym.analytic_tail_start().unwrap_or(0);
            let n = args.samples.max(4 * start + 16 * cfg.checkpoints);
            finite_section_values(sym, n)?
        }
    };
    let finite = matches!(sym, AtomicSymbol::Finite { .. });
    let mut rows = Vec::new();

    let formula = quotient_norm(sym);
    let (oracle_value, history) = if finite && args.budget >= samples.len() {
        (0.0, None)
    } else {
        let res = quotient_norm_oracle(&samples, args.budget)?;
        (res.value, Some(res))
    };
    let gap = (formula - oracle_value).abs();
    rows.push(Row {
        quantity: "quotient_norm",
        formula: format!("{formula}"),
        oracle: format!("{oracle_value}"),
        gap: format!("{gap:.3e}"),
        ok: gap <= gap_tol,
    });
    if let (Some(path), Some(res)) = (&args.csv, &history) {
        let file =
            fs::File::create(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        res.write_csv(file)?;
    }

    let formula_pts = cluster_points(sym, &cfg).points;
    let oracle_pts = if finite {
        Vec::new()
    } else if sampled {
        // The window is already the tail; cluster_oracle would halve it again.
        crate::oracle::block_clusters(&samples, eps, cfg.checkpoints)
    } else {
        cluster_oracle(&samples, eps, cfg.checkpoints)?
    };
    let cluster_gap = hausdorff(&formula_pts, &oracle_pts);
    let cluster_tol = if sampled { 2.0 * eps } else { eps };
    rows.push(Row {
        quantity: "cluster_points",
        formula: summarize(&formula_pts),
        oracle: summarize(&oracle_pts),
        gap: format!("{cluster_gap:.3e}"),
        ok: cluster_gap <= cluster_tol,
    });

    let cutoffs: Vec<usize> = match sym {
        AtomicSymbol::Generator(g) => {
            let h = g.horizon();
            let mut c: Vec<usize> = std::iter::successors(Some(10usize), |n| n.checked_mul(10))
                .take_while(|&n| n < h)
                .collect();
            c.push(h - g.window().len());
            c
        }
        _ => vec![10, 100, 1000, sym.analytic_tail_start().unwrap_or(0)],
    };
    let tail = compact_tail_check(sym, &cutoffs, tol);
    let formula_compact = quotient_norm(sym) <= tol;
    let last = tail.bounds.last().map_or(0.0, |b| b.1);
    rows.push(Row {
        quantity: "compact",
        formula: yes_no(formula_compact).into(),
        oracle: format!("{} (tail bound {last:e})", yes_no(tail.compact_consistent)),
        gap: "-".into(),
        ok: formula_compact == tail.compact_consistent,
    });

    write_table(out, &rows)?;
    let bad: Vec<&str> = rows.iter().filter(|r| !r.ok).map(|r| r.quantity).collect();
    if bad.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "disagreement: {}", bad.join(", "))?;
        Ok(EXIT_DISAGREE)
    }
}

/// Short listing for the table; long clouds collapse to a count.
fn summarize(points: &[Complex64]) -> String {
    if points.len() <= 4 {
        return describe_set(&SpectralSet::points(points.iter().copied()), 4);
    }
    let max = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    format!("{} points, max |z| {max}", points.len())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_table(out: &mut dyn Write, rows: &[Row]) -> std::io::Result<()> {
    let header = ["quantity", "formula", "oracle", "gap", "status"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.quantity.to_string(),
                r.formula.clone(),
                r.oracle.clone(),
                r.gap.clone(),
                if r.ok { "ok".into() } else { "MISMATCH".into() },
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: [&str; 5]| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(widths).enumerate() {
            if i + 1 == cols.len() {
                s.push_str(c);
            } else {
                let _ = write!(s, "{c}{}  ", " ".repeat(w - c.chars().count()));
            }
        }
        s
    };
    writeln!(out, "{}", line(header))?;
    for row in &cells {
        writeln!(
            out,
            "{}",
            line([&row[0], &row[1], &row[2], &row[3], &row[4]].map(String::as_str))
        )?;
    }
    Ok(())
}

fn cmd_example_ck(args: &CkArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = expr::parse(&args.p, "x").map_err(|e| Failure(format!("--p `{}`: {e}", args.p)))?;
    let example = CkExample::new(p, args.n_max, args.samples_per_interval)?;
    let op = example.operator()?;
    let cfg = base_config(args.tol)?;
    cfg.validate()?;
    emit_report(&op, &cfg, args.output, out)?;
    if args.output == Output::Text {
        writeln!(out, "σ_e(T_p) = {{p(x): x ∈ ∪I_n ∪ {{0}}}}")?;
        writeln!(
            out,
            "‖T_p‖_e = max |p| over ∪I_n ∪ {{0}} = {}",
            op.essential_norm()
        )?;
        match op.decompose(&cfg) {
            Ok(_) => writeln!(out, "decompose: T_p = T1 + T2 with T1 compact (p(0) = 0)")?,
            Err(e) => writeln!(out, "decompose: fails: {e}")?,
        }
    }
    Ok(EXIT_OK)
}
