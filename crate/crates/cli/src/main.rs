//! `stlstar`: monitor, simulate and inspect STL* satisfaction sets.
//!
//! Exit codes: `monitor` returns 0 for SAT, 1 for UNSAT and 2 for BOUNDARY;
//! `oracle-diff` returns 0 when engine and oracle agree and 1 otherwise.
//! Every command returns 3 for a signal shorter than the formula needs, 4
//! for a formula that does not parse, 5 for any other error and 64 for bad
//! command-line usage.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stlstar_core::formula::{parse_with_warnings, Formula, ParseError};
use stlstar_core::oracle::{compare, GridSpec, OracleError};
use stlstar_core::simulate::{self, RepressilatorParams};
use stlstar_core::time::{format_time, parse_time};
use stlstar_core::{monitor, LengthCheck, MonitorError, MonitorOptions, Signal, Verdict};
use stlstar_geometry::svg;

#[derive(Parser)]
#[command(
    name = "stlstar",
    version,
    about = "Offline STL* monitoring over piecewise-linear signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its required signal length.
    Check(CheckArgs),
    /// Decide whether a signal satisfies a formula.
    Monitor(MonitorArgs),
    /// Simulate the repressilator and write the sampled trace as CSV.
    Simulate(SimulateArgs),
    /// Monitor a list of formulas over a grid of repressilator parameters.
    Sweep(SweepArgs),
    /// Draw one satisfaction set as SVG.
    Render(RenderArgs),
    /// Insert evenly spaced samples into every segment.
    Refine(RefineArgs),
    /// Compare the polygon engine with the lattice oracle.
    OracleDiff(OracleDiffArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormulaSource {
    /// Formula text.
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// File holding the formula.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

impl FormulaSource {
    fn text(&self) -> Result<String> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) => Ok(fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
            (None, None) => bail!("no formula given"),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    formula: FormulaSource,
    /// Signal whose header names the variables and whose length is checked.
    #[arg(short, long)]
    signal: Option<PathBuf>,
    /// Variable names when no signal is given, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "m1,m2,m3,p1,p2,p3")]
    vars: Vec<String>,
}

#[derive(Args)]
struct MonitorArgs {
    #[arg(short, long)]
    signal: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    /// Geometric tolerance relative to the signal length.
    #[arg(long, default_value_t = stlstar_geometry::DEFAULT_REL_EPS)]
    eps: f64,
    /// Monitor even when the signal is shorter than the formula needs.
    #[arg(long)]
    allow_short: bool,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
    /// Include every subformula's region in the JSON report.
    #[arg(long, requires = "json")]
    all_nodes: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 400.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    alpha0: f64,
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 2.0)]
    n: f64,
    #[arg(long, default_value = "300")]
    t_end: String,
    #[arg(long, default_value_t = simulate::DEFAULT_SAMPLES)]
    samples: usize,
    /// Integration step.
    #[arg(long, default_value_t = simulate::DEFAULT_DT)]
    dt: f64,
    /// Initial `m1,m2,m3,p1,p2,p3`.
    #[arg(long, value_delimiter = ',', num_args = 6, default_values_t = [0.1, 0.3, 0.2, 0.2, 0.1, 0.3])]
    init: Vec<f64>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// CSV with columns `alpha,alpha0,beta,n` and optionally `t_end,samples,dt`.
    #[arg(long)]
    grid: PathBuf,
    /// One formula per line; blank lines and lines starting with `#` are skipped.
    #[arg(long)]
    formulas: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(short, long)]
    signal: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    /// `root`, a node id, or `list` to print the available nodes.
    #[arg(long, default_value = "root")]
    node: String,
    #[arg(long, default_value_t = stlstar_geometry::DEFAULT_REL_EPS)]
    eps: f64,
    #[arg(long)]
    allow_short: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RefineArgs {
    #[arg(short, long)]
    signal: PathBuf,
    /// Every segment is split into this many pieces.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    factor: u32,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleDiffArgs {
    #[arg(short, long)]
    signal: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    /// Lattice step; one eighth of the shortest segment when absent.
    #[arg(long, value_parser = positive_f64)]
    delta: Option<f64>,
    #[arg(long, default_value_t = stlstar_geometry::DEFAULT_REL_EPS)]
    eps: f64,
    /// Print every disagreement instead of the first ten.
    #[arg(long)]
    all: bool,
    /// Replace the engine's region by its complement.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be positive".to_string())
    }
}

fn main() -> ExitCode {
    // clap's own usage code would collide with BOUNDARY
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ParseError>().is_some() {
        4
    } else if matches!(e.downcast_ref::<MonitorError>(), Some(MonitorError::ShortSignal { .. }))
        || matches!(e.downcast_ref::<OracleError>(), Some(OracleError::ShortSignal { .. }))
    {
        3
    } else {
        5
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Check(a) => check(a),
        Command::Monitor(a) => cmd_monitor(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Render(a) => cmd_render(a),
        Command::Refine(a) => cmd_refine(a),
        Command::OracleDiff(a) => cmd_oracle_diff(a),
    }
}

fn load_signal(path: &Path) -> Result<Signal> {
    Signal::load_csv(path).with_context(|| format!("loading {}", path.display()))
}

fn load_formula(src: &FormulaSource, signal: &Signal) -> Result<Formula> {
    let text = src.text()?;
    let (f, warnings) = parse_with_warnings(text.trim(), signal.schema())?;
    for w in warnings {
        eprintln!("warning at offset {}: {}", w.pos, w.message);
    }
    Ok(f)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn check(a: CheckArgs) -> Result<u8> {
    let signal = match &a.signal {
        Some(p) => load_signal(p)?,
        None => {
            // a two-sample placeholder only supplies the variable names
            let header = a.vars.join(",");
            let zeros = vec!["0"; a.vars.len()].join(",");
            Signal::from_csv_reader(format!("time,{header}\n0,{zeros}\n1,{zeros}\n").as_bytes())?
        }
    };
    let f = load_formula(&a.formula, &signal)?;
    println!("formula: {}", f.display(signal.schema()));
    println!("core form: {}", f.desugar().display(signal.schema()));
    println!("depth: {}", f.depth());
    println!("required length: {}", format_time(&f.required_length()));
    if a.signal.is_some() {
        match signal.check_length(&f) {
            LengthCheck::Ok => println!("signal length: {} (ok)", format_time(&signal.len_time())),
            LengthCheck::Short { needed, have } => {
                return Err(MonitorError::ShortSignal { needed, have }.into());
            }
        }
    }
    Ok(0)
}

fn cmd_monitor(a: MonitorArgs) -> Result<u8> {
    let signal = load_signal(&a.signal)?;
    let f = load_formula(&a.formula, &signal)?;
    let opts = MonitorOptions {
        eps_rel: a.eps,
        keep_intermediate: a.all_nodes,
        allow_short: a.allow_short,
    };
    let report = monitor(&signal, &f, &opts)?;
    if let Some(msg) = &report.short {
        eprintln!("warning: {msg}; the verdict may be wrong");
    }
    let out = if a.json {
        serde_json::to_string(&report)? + "\n"
    } else {
        let mut out = format!("{}\n", report.verdict);
        if report.verdict == Verdict::Boundary {
            out += &format!("closed-set membership of (0, 0): {}\n", report.closed);
        }
        out + &format!("polygons (peak): {}\n", report.stats.polygons_peak)
    };
    write_output(None, &out)?;
    Ok(match report.verdict {
        Verdict::Sat => 0,
        Verdict::Unsat => 1,
        Verdict::Boundary => 2,
    })
}

fn params_time(text: &str) -> Result<stlstar_core::Time> {
    parse_time(text).ok_or_else(|| anyhow!("not a time value: {text:?}"))
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    let p = RepressilatorParams {
        alpha: a.alpha,
        alpha0: a.alpha0,
        beta: a.beta,
        n: a.n,
        init: a.init.try_into().map_err(|_| anyhow!("--init takes six values"))?,
        t_end: params_time(&a.t_end)?,
        dt: a.dt,
        samples: a.samples,
    };
    let s = simulate::integrate(&p)?;
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    write_output(a.output.as_deref(), std::str::from_utf8(&buf)?)?;
    Ok(0)
}

fn read_grid(path: &Path) -> Result<Vec<RepressilatorParams>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let required = ["alpha", "alpha0", "beta", "n"].map(|c| col(c).ok_or_else(|| anyhow!("grid lacks column {c}")));
    let [alpha, alpha0, beta, n] = required;
    let (alpha, alpha0, beta, n) = (alpha?, alpha0?, beta?, n?);
    let (t_end, samples, dt) = (col("t_end"), col("samples"), col("dt"));
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let get = |k: usize| -> Result<f64> {
            let v = rec.get(k).unwrap_or("").trim();
            v.parse()
                .with_context(|| format!("grid row {}: bad number {v:?}", row + 1))
        };
        let mut p = RepressilatorParams {
            alpha: get(alpha)?,
            alpha0: get(alpha0)?,
            beta: get(beta)?,
            n: get(n)?,
            ..Default::default()
        };
        if let Some(k) = t_end {
            p.t_end = params_time(rec.get(k).unwrap_or("").trim())?;
        }
        if let Some(k) = samples {
            p.samples = get(k)? as usize;
        }
        if let Some(k) = dt {
            p.dt = get(k)?;
        }
        out.push(p);
    }
    Ok(out)
}

fn cmd_sweep(a: SweepArgs) -> Result<u8> {
    let grid = read_grid(&a.grid)?;
    let text = fs::read_to_string(&a.formulas).with_context(|| format!("reading {}", a.formulas.display()))?;
    let formulas: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    let rows = simulate::sweep(&grid, &formulas);
    write_output(a.output.as_deref(), &simulate::sweep_csv_string(&rows))?;
    Ok(0)
}

fn cmd_render(a: RenderArgs) -> Result<u8> {
    let signal = load_signal(&a.signal)?;
    let f = load_formula(&a.formula, &signal)?;
    let opts = MonitorOptions {
        eps_rel: a.eps,
        keep_intermediate: true,
        allow_short: a.allow_short,
    };
    let report = monitor(&signal, &f, &opts)?;
    if a.node == "list" {
        for n in &report.nodes {
            println!("{}\t{}\t{} polygons", n.id, n.formula, n.region.len());
        }
        return Ok(0);
    }
    let node = if a.node == "root" {
        report.root()
    } else {
        let id: usize = a
            .node
            .parse()
            .map_err(|_| anyhow!("node must be `root`, `list` or an id, got {:?}", a.node))?;
        report
            .node(id)
            .ok_or_else(|| anyhow!("unknown node {id}; valid ids are 0..{}", report.nodes.len()))?
    };
    write_output(a.output.as_deref(), &svg::render(&node.region, &node.formula))?;
    Ok(0)
}

fn cmd_refine(a: RefineArgs) -> Result<u8> {
    let s = load_signal(&a.signal)?.refine(a.factor as usize);
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    write_output(a.output.as_deref(), std::str::from_utf8(&buf)?)?;
    Ok(0)
}

fn cmd_oracle_diff(a: OracleDiffArgs) -> Result<u8> {
    let signal = load_signal(&a.signal)?;
    let f = load_formula(&a.formula, &signal)?;
    let spec = match a.delta {
        Some(d) => GridSpec::new(d)?,
        None => GridSpec::default_for(&signal),
    };
    let opts = MonitorOptions {
        eps_rel: a.eps,
        ..Default::default()
    };
    let report = monitor(&signal, &f, &opts)?;
    let mut region = report.root().region.clone();
    if a.inject_fault {
        region = region.complement();
    }
    let diffs = compare(&signal, &f, spec, &region)?;
    let mut out = format!("lattice step {}: {} disagreements\n", spec.delta(), diffs.len());
    let shown = if a.all { diffs.len() } else { diffs.len().min(10) };
    for d in &diffs[..shown] {
        out += &format!("t={} t*={} oracle={} engine={}\n", d.t, d.tstar, d.oracle, d.engine);
    }
    write_output(None, &out)?;
    Ok(if diffs.is_empty() { 0 } else { 1 })
}
