//! Command-line front end for ausolab. [`run`] executes one invocation and
//! returns the process exit code: 0 on success, 1 on failure, 2 on usage errors.

pub mod config;
pub mod experiment;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ausolab::bounds::{
    bound_f_check, bound_sheet, check_dehn_sommerville, check_unimodal, cube_reach_bound, entropy_sum_check,
    hsqrt_inequality_check, ReachGen,
};
use ausolab::orientations::{
    dual_stacked_linear_auso, klee_minty_auso, linear_auso_cube, load_auso, random_linear_auso_cube, save_auso,
    validate, write_auso,
};
use ausolab::polytopes::{build_dual_stacked, load_graph, save_graph};
use ausolab::reach::{gamma_brute, gamma_enumeration_estimate, gamma_lower_formula, reach_boundary, reach_report, t_reach};
use ausolab::walks::{exact_expected_visits, monte_carlo, DpMode, ExpectedVisits, PivotRule};
use ausolab::{Auso, PolytopeGraph, Rational, RngStream};
use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use config::ExperimentConfig;

/// Stream used to draw instance parameters from a seed.
pub const GENERATION_STREAM: u64 = u64::MAX - 1;
/// Stream used to draw a random start vertex.
pub const START_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    CubeLinear,
    KleeMinty,
    DualStacked,
    File,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::CubeLinear => "cube-linear",
            Family::KleeMinty => "klee-minty",
            Family::DualStacked => "dual-stacked",
            Family::File => "file",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cube-linear" => Ok(Family::CubeLinear),
            "km" | "klee-minty" => Ok(Family::KleeMinty),
            "dual-stacked" => Ok(Family::DualStacked),
            "file" => Ok(Family::File),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Source,
    Id(usize),
    Random,
}

impl FromStr for Start {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "source" => Ok(Start::Source),
            "random" => Ok(Start::Random),
            _ => s
                .strip_prefix("id:")
                .and_then(|v| v.parse().ok())
                .map(Start::Id)
                .ok_or_else(|| format!("start must be source, random or id:<v>, not `{s}`")),
        }
    }
}

impl Start {
    pub fn resolve(self, auso: &Auso, seed: u64) -> ausolab::Result<usize> {
        let n = auso.vertex_count();
        match self {
            Start::Source => Ok(auso.source()),
            Start::Id(v) if v < n => Ok(v),
            Start::Id(v) => Err(ausolab::Error::Domain(format!("start vertex {v} out of range for n = {n}"))),
            Start::Random => Ok(RngStream::new(seed, START_STREAM).draw_below(n as u64) as usize),
        }
    }
}

pub struct Instance {
    pub auso: Auso,
    /// Explicit graph for non-cube families.
    pub graph: Option<PolytopeGraph>,
}

/// Builds one instance of `family`. `weights` fixes a cube-linear objective;
/// otherwise it is drawn from `seed`.
pub fn generate(family: Family, d: usize, cuts: usize, seed: u64, weights: Option<&[i64]>) -> ausolab::Result<Instance> {
    let stream = RngStream::new(seed, GENERATION_STREAM);
    match family {
        Family::CubeLinear => {
            let auso = match weights {
                Some(w) => linear_auso_cube(d, w)?,
                None => random_linear_auso_cube(d, stream)?,
            };
            Ok(Instance { auso, graph: None })
        }
        Family::KleeMinty => Ok(Instance { auso: klee_minty_auso(d)?.0, graph: None }),
        Family::DualStacked => {
            let (graph, geometry) = build_dual_stacked(d, cuts, seed)?;
            let (auso, _) = dual_stacked_linear_auso(&graph, &geometry, stream)?;
            Ok(Instance { auso, graph: Some(graph) })
        }
        Family::File => Err(ausolab::Error::Domain("the file family is loaded, not generated".into())),
    }
}

/// Loads an AUSO v1 file. Without `graph`, a `kind=general` file looks for its
/// graph next to it with the `.graph` extension.
pub fn load_input(auso: &Path, graph: Option<&Path>) -> ausolab::Result<Auso> {
    match graph {
        Some(g) => load_auso(auso, Some(&load_graph(g)?)),
        None => match load_auso(auso, None) {
            Err(ausolab::Error::Domain(msg)) => {
                let sibling = auso.with_extension("graph");
                if sibling.exists() {
                    load_auso(auso, Some(&load_graph(sibling)?))
                } else {
                    Err(ausolab::Error::Domain(msg))
                }
            }
            other => other,
        },
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ausolab::Error),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Experiment(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Validation(_) => "validation",
            CliError::Experiment(_) => "experiment",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ausolab", version, about = "Pivot-rule laboratory for acyclic unique sink orientations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance and write it as AUSO v1
    Gen(GenArgs),
    /// Check the AUSO axioms of a file
    Validate(ValidateArgs),
    /// Monte Carlo walk statistics
    Walk(WalkArgs),
    /// Exact expected Random-Edge path length
    Exact(ExactArgs),
    /// Bound sheet of an instance, or the cube reach bound with --cube-d
    Bounds(BoundsArgs),
    /// Reach structure: good vertices, f(t,k) and g(t,k)
    Reach(ReachArgs),
    /// Neighborhood size gamma(t,k) by enumeration and by formula
    Gamma(GammaArgs),
    /// Batch run over a config file, writing CSV
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct Input {
    /// AUSO v1 file
    #[arg(long)]
    auso: PathBuf,
    /// GRAPH v1 file for kind=general orientations
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl Input {
    fn load(&self) -> ausolab::Result<Auso> {
        load_input(&self.auso, self.graph.as_deref())
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    /// cube-linear, km (klee-minty) or dual-stacked
    #[arg(long)]
    family: Family,
    #[arg(long)]
    d: usize,
    /// Number of stacking steps for dual-stacked
    #[arg(long, default_value_t = 5)]
    cuts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed cube-linear weights instead of random ones
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<i64>>,
    /// Output file; standard output when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Where to write the GRAPH v1 file of a dual-stacked instance
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    auso: PathBuf,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "random-edge")]
    rule: PivotRule,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// source, random or id:<v>
    #[arg(long, default_value = "source")]
    start: Start,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum ModeArg {
    Float,
    Exact,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "source")]
    start: Start,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, required_unless_present = "cube_d", conflicts_with = "cube_d")]
    auso: Option<PathBuf>,
    #[arg(long, requires = "auso")]
    graph: Option<PathBuf>,
    /// Dimension for the instance-free cube bounds
    #[arg(long)]
    cube_d: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Skip the exact expectation
    #[arg(long)]
    no_exact: bool,
}

#[derive(Args, Debug)]
struct ReachArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    k: usize,
    /// Also list the t-reach and boundary of this vertex
    #[arg(long)]
    vertex: Option<usize>,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    config: PathBuf,
    /// CSV output; overrides the config's `output`, standard output when neither is set
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Runs one invocation with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let summary: Vec<&str> = msg.lines().take_while(|l| !l.trim().is_empty()).map(str::trim).collect();
            let _ = writeln!(err, "error:usage: {}", summary.join(" ").trim_start_matches("error: "));
            return 2;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error:{}: {e}", e.kind());
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Walk(a) => cmd_walk(a, out),
        Command::Exact(a) => cmd_exact(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Reach(a) => cmd_reach(a, out),
        Command::Gamma(a) => cmd_gamma(a, out),
        Command::Experiment(a) => cmd_experiment(a, out),
    }
}

fn show(r: &Rational) -> String {
    format!("{r} ({:.6})", r.to_f64().unwrap_or(f64::NAN))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.family == Family::File {
        return Err(CliError::Usage("gen needs a generated family".into()));
    }
    if a.weights.is_some() && a.family != Family::CubeLinear {
        return Err(CliError::Usage("--weights applies to cube-linear only".into()));
    }
    let graph_path = match (a.family, &a.graph_out, &a.output) {
        (Family::DualStacked, Some(g), _) => Some(g.clone()),
        (Family::DualStacked, None, Some(o)) => Some(o.with_extension("graph")),
        (Family::DualStacked, None, None) => {
            return Err(CliError::Usage("dual-stacked output needs -o or --graph-out".into()));
        }
        _ => None,
    };
    let instance = generate(a.family, a.d, a.cuts, a.seed, a.weights.as_deref())?;
    if let (Some(path), Some(graph)) = (&graph_path, &instance.graph) {
        save_graph(graph, path)?;
    }
    match &a.output {
        Some(path) => {
            save_auso(&instance.auso, path)?;
            writeln!(
                out,
                "wrote {} family={} d={} n={}",
                path.display(),
                a.family,
                instance.auso.dim(),
                instance.auso.vertex_count()
            )?;
            if let Some(g) = graph_path {
                writeln!(out, "wrote {}", g.display())?;
            }
        }
        None => write_auso(&instance.auso, &mut *out)?,
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let auso = load_input(&a.auso, a.graph.as_deref())?;
    let report = validate(&auso)?;
    let hvec = auso.h_vector();
    writeln!(out, "kind={} d={} n={}", auso.graph().kind(), auso.dim(), auso.vertex_count())?;
    writeln!(out, "faces_checked={}", report.faces_checked)?;
    writeln!(out, "violating_faces={}", report.violating_faces)?;
    for v in &report.examples {
        writeln!(
            out,
            "violation fixed_mask={} fixed_values={} sinks={}",
            v.face.fixed_mask, v.face.fixed_values, v.sinks
        )?;
    }
    writeln!(out, "global_sinks={}", report.global_sinks)?;
    writeln!(out, "h_vector={}", join(&hvec.0, ","))?;
    writeln!(out, "dehn_sommerville={}", check_dehn_sommerville(&hvec))?;
    writeln!(out, "unimodal={}", check_unimodal(&hvec))?;
    if report.pass() {
        writeln!(out, "result=PASS")?;
        Ok(())
    } else {
        writeln!(out, "result=FAIL")?;
        Err(CliError::Validation(format!(
            "{} violating faces, {} global sinks",
            report.violating_faces, report.global_sinks
        )))
    }
}

fn cmd_walk(a: WalkArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let auso = a.input.load()?;
    let start = a.start.resolve(&auso, a.seed)?;
    let stats = monte_carlo(&auso, start, a.rule, a.trials, a.seed)?;
    writeln!(out, "rule={}", a.rule)?;
    writeln!(out, "start={start}")?;
    writeln!(out, "trials={}", stats.trials)?;
    writeln!(out, "seed={}", a.seed)?;
    writeln!(out, "mean={:.6}", stats.mean)?;
    writeln!(out, "stderr={:.6}", stats.stderr)?;
    writeln!(out, "min={}", stats.min)?;
    writeln!(out, "max={}", stats.max)?;
    writeln!(out, "histogram={}", join(stats.histogram.iter().map(|(l, c)| format!("{l}:{c}")), ","))?;
    writeln!(out, "visits_by_out_degree={}", join(&stats.visits_by_out_degree, ","))?;
    let skip = stats
        .skip_tally
        .iter()
        .enumerate()
        .filter(|(_, t)| t.visits > 0)
        .map(|(k, t)| format!("{k}:{}/{}", t.skipped_half, t.visits));
    writeln!(out, "skipped_half_by_out_degree={}", join(skip, ","))?;
    writeln!(out, "disjointness_violations={}", stats.disjointness_violations)?;
    if a.trials == 1 {
        let trace = ausolab::walks::run_rule(&auso, start, a.rule, RngStream::new(a.seed, 0))?;
        writeln!(out, "trace={}", join(&trace.vertices, " "))?;
    }
    Ok(())
}

fn cmd_exact(a: ExactArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let auso = a.input.load()?;
    let start = a.start.resolve(&auso, a.seed)?;
    let mode = match a.mode {
        ModeArg::Float => DpMode::Float,
        ModeArg::Exact => DpMode::Exact,
    };
    match exact_expected_visits(&auso, start, mode)? {
        ExpectedVisits::Float(x) => writeln!(out, "{x}")?,
        ExpectedVisits::Exact(r) => writeln!(out, "{}/{}", r.numer(), r.denom())?,
    }
    Ok(())
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(d) = a.cube_d {
        return cube_bounds(d, &a.t, out);
    }
    let path = a.auso.as_deref().expect("clap group requires one target");
    let auso = load_input(path, a.graph.as_deref())?;
    let tks: Vec<(usize, usize)> = a.t.iter().flat_map(|&t| a.k.iter().map(move |&k| (t, k))).collect();
    let exact = (!a.no_exact && auso.vertex_count() <= ausolab::walks::MAX_EXACT_DP_VERTICES).then_some(DpMode::Exact);
    let sheet = bound_sheet(&auso, &path.display().to_string(), exact, &tks)?;
    writeln!(out, "instance={} d={} n={}", sheet.family, sheet.d, sheet.n)?;
    writeln!(out, "h_vector={}", join(&sheet.hvec.0, ","))?;
    writeln!(out, "dehn_sommerville={}", check_dehn_sommerville(&sheet.hvec))?;
    writeln!(out, "unimodal={}", check_unimodal(&sheet.hvec))?;
    if let Some(e) = &sheet.exact_expected {
        writeln!(out, "exact={}", show(e))?;
    }
    if let Some(b) = &sheet.theorem1 {
        writeln!(out, "theorem1={b}")?;
    }
    writeln!(out, "maxmin={}", show(&sheet.maxmin))?;
    for (y, v) in &sheet.dual {
        writeln!(out, "dual y={y}: {}", show(v))?;
    }
    for tk in &sheet.per_tk {
        let g = tk.g.map_or_else(|| "inf".to_string(), |g| g.to_string());
        let fb = bound_f_check(&auso, tk.t, tk.k);
        let fb = fb.map_or_else(|e| e.to_string(), |c| format!("{} ok={}", c.f_bound, c.ok));
        let rg = match &tk.reachgen {
            Some(ReachGen::Value(v)) => show(v),
            Some(ReachGen::Inapplicable(why)) => format!("inapplicable ({why})"),
            None => "inapplicable (t < 2)".to_string(),
        };
        writeln!(out, "t={} k={}: f={} f_bound={fb} g={g} reachgen={rg}", tk.t, tk.k, tk.f)?;
    }
    let violations = sheet.violations();
    writeln!(out, "violations={}", if violations.is_empty() { "none".to_string() } else { violations.join(",") })?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("bounds below the exact expectation: {}", violations.join(","))))
    }
}

fn cube_bounds(d: u64, ts: &[usize], out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "cube d={d}")?;
    if d >= 8 {
        let e = entropy_sum_check(d)?;
        writeln!(out, "entropy h_below={} log2_bound={:.6} ok={}", e.h_below, e.bound_log2, e.ok)?;
    }
    if d > 64 {
        writeln!(out, "hsqrt ok={}", hsqrt_inequality_check(d)?)?;
    }
    for &t in ts {
        match cube_reach_bound(d, t) {
            Ok(r) => {
                let bound = match &r.bound {
                    ReachGen::Value(v) => show(v),
                    ReachGen::Inapplicable(why) => format!("inapplicable ({why})"),
                };
                writeln!(
                    out,
                    "t={t} k={}: g_lb={} f_ub={} bound={bound} below_2^d={}",
                    r.k,
                    r.g_lb,
                    r.f_ub,
                    r.below_vertex_count.map_or_else(|| "n/a".to_string(), |b| b.to_string())
                )?;
            }
            Err(e) => writeln!(out, "t={t}: {e}")?,
        }
    }
    Ok(())
}

fn cmd_reach(a: ReachArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let auso = a.input.load()?;
    let report = reach_report(&auso, a.t, a.k);
    writeln!(out, "t={} k={}", report.t, report.k)?;
    writeln!(out, "good={}", report.good_count)?;
    writeln!(out, "f={}", report.f)?;
    writeln!(out, "g={}", report.g.map_or_else(|| "inf".to_string(), |g| g.to_string()))?;
    writeln!(
        out,
        "boundary_histogram={}",
        join(report.boundary_histogram.iter().map(|(s, c)| format!("{s}:{c}")), ",")
    )?;
    if let Some(v) = a.vertex {
        if v >= auso.vertex_count() {
            return Err(ausolab::Error::Domain(format!("vertex {v} out of range")).into());
        }
        writeln!(out, "vertex={v} good={}", report.good[v])?;
        writeln!(out, "reach={}", join(t_reach(&auso, v, a.t), " "))?;
        writeln!(out, "boundary={}", join(reach_boundary(&auso, v, a.t), " "))?;
    }
    Ok(())
}

fn cmd_gamma(a: GammaArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let formula = gamma_lower_formula(a.d, a.t, a.k);
    writeln!(out, "d={} t={} k={}", a.d, a.t, a.k)?;
    writeln!(out, "formula={}", show(&formula))?;
    writeln!(out, "estimate={:e}", gamma_enumeration_estimate(a.d, a.t, a.k))?;
    match gamma_brute(a.d, a.t, a.k) {
        Ok(g) => writeln!(out, "brute={g}")?,
        Err(e @ (ausolab::Error::GuardExceeded { .. } | ausolab::Error::DimensionTooLarge { .. })) => {
            writeln!(out, "brute=skipped ({e})")?
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.config)?;
    let cfg = ExperimentConfig::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", a.config.display())))?;
    let rows = experiment::run_experiment(&cfg);
    match a.output.as_ref().or(cfg.output.as_ref()) {
        Some(path) => {
            experiment::write_csv(&rows, std::io::BufWriter::new(std::fs::File::create(path)?))?;
            let mut meta = path.clone().into_os_string();
            meta.push(".meta");
            experiment::write_meta(&cfg, Path::new(&meta))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
        }
        None => experiment::write_csv(&rows, &mut *out)?,
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(CliError::Experiment(format!("{failed} of {} rows failed", rows.len())));
    }
    Ok(())
}

/// Sizes the global rayon pool from `AUSOLAB_THREADS` when it is set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("AUSOLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| format!("AUSOLAB_THREADS must be a number, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}
