use clap::{Args, Parser, Subcommand, ValueEnum};
use nlperim::bounds::{self, BoundKind, PipelineOptions};
use nlperim::cache::{self, ConstantsCache};
use nlperim::engine::{self, AccuracySpec, Backend, Estimate};
use nlperim::error::Error;
use nlperim::geometry::{hausdorff_distance, BodySpec, ConvexBody};
use nlperim::kernels::Kernel;
use nlperim::optimizer::{self, ProfileProblem};
use nlperim::report;
use nlperim::suite::{self, Scale};
use nlperim::symmetry;
use nlperim::vector::{self as v, Vector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAILURE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "nlperim", version, about = "Non-local perimeters of convex bodies")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Global {
    /// JSON file with defaults for the global options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    abs_floor: Option<f64>,
    #[arg(long, global = true)]
    max_samples: Option<u64>,
    #[arg(long, global = true, value_enum)]
    backend: Option<BackendArg>,
    /// Constants cache file (default: $NLPERIM_CACHE or the user cache directory).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BackendArg {
    Auto,
    Oned,
    Chord,
    Slice,
    Montecarlo,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::Oned => Backend::Oned,
            BackendArg::Chord => Backend::Chord,
            BackendArg::Slice => Backend::Slice,
            BackendArg::Montecarlo => Backend::Montecarlo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Cor14,
    Cor15,
    Optimize,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Non-local perimeter of a body.
    Perimeter {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        kernel: String,
    },
    /// Interaction between two bodies.
    Interaction {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        kernel: String,
    },
    /// Hausdorff distance between nested bodies.
    Hausdorff {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
    },
    /// Schwartz symmetral about an axis, as a profile body.
    Symmetrize {
        #[arg(long)]
        body: PathBuf,
        /// Axis direction, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        nu: Vec<f64>,
        #[arg(long, default_value_t = 512)]
        nodes: usize,
    },
    /// Perimeter deficit of nested bodies.
    Monotonicity {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        kernel: String,
    },
    /// Quantitative lower bounds on the deficit.
    Deficit {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        kernel: String,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Direction of the construction, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        nu: Option<Vec<f64>>,
        /// Optimizer grid size.
        #[arg(long, default_value_t = optimizer::DEFAULT_NODES)]
        nodes: usize,
    },
    /// Segments on the line: perimeters, deficit and the two-decreasing bound.
    Oned {
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        inner_length: f64,
        #[arg(long)]
        outer_length: f64,
    },
    /// Maximal interaction with the cone and the resulting f.
    OptimizeF {
        #[arg(long)]
        kernel: String,
        /// Cone base radius.
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        height: f64,
        /// Volume of the competitor.
        #[arg(long)]
        volume: f64,
        #[arg(long, default_value_t = optimizer::DEFAULT_NODES)]
        nodes: usize,
        /// Also write the solver trace as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
        /// Only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    rel_tol: Option<f64>,
    abs_floor: Option<f64>,
    max_samples: Option<u64>,
    backend: Option<BackendArg>,
    cache: Option<PathBuf>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

struct RunConfig {
    spec: AccuracySpec,
    cache: PathBuf,
    output: Option<PathBuf>,
    format: Format,
    format_given: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::SingularEvaluation(_) | Error::NonConvergence { .. } | Error::Io(_) => EXIT_FAILURE,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_VALIDATION, message: msg.into() }
}

type Res<T> = std::result::Result<T, Failure>;

fn resolve(g: &Global) -> Res<RunConfig> {
    let file = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))?
        }
        None => ConfigFile::default(),
    };
    let mut spec = AccuracySpec::default();
    if let Some(x) = g.seed.or(file.seed) {
        spec.seed = x;
    }
    if let Some(x) = g.rel_tol.or(file.rel_tol) {
        if x.is_nan() || x <= 0.0 {
            return Err(invalid("rel_tol must be positive"));
        }
        spec.rel_tol = x;
    }
    if let Some(x) = g.abs_floor.or(file.abs_floor) {
        if x.is_nan() || x < 0.0 {
            return Err(invalid("abs_floor must be non-negative"));
        }
        spec.abs_floor = x;
    }
    if let Some(x) = g.max_samples.or(file.max_samples) {
        spec.max_samples = x;
    }
    if let Some(b) = g.backend.or(file.backend) {
        spec.backend = b.into();
    }
    Ok(RunConfig {
        spec,
        cache: g.cache.clone().or(file.cache).unwrap_or_else(cache::default_path),
        output: g.output.clone().or(file.output),
        format: g.format.or(file.format).unwrap_or(Format::Json),
        format_given: g.format.or(file.format).is_some(),
    })
}

/// `frac:N:S`, or `table:N:FILE` with a JSON list of `[r, phi(r)]` pairs.
fn parse_kernel(spec: &str) -> Res<Kernel> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    let bad = || invalid(format!("kernel {spec:?}: expected frac:N:S or table:N:FILE"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: usize = parts[1].parse().map_err(|_| bad())?;
    match parts[0] {
        "frac" => {
            let s: f64 = parts[2].parse().map_err(|_| bad())?;
            Ok(Kernel::fractional(n, s)?)
        }
        "table" => {
            let text = std::fs::read_to_string(parts[2]).map_err(|e| invalid(format!("{}: {e}", parts[2])))?;
            let table: Vec<[f64; 2]> = serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", parts[2])))?;
            Ok(Kernel::tabulated(n, table)?)
        }
        _ => Err(bad()),
    }
}

fn read_body(path: &Path) -> Res<ConvexBody> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    BodySpec::from_json(&text).map_err(|e| {
        let f: Failure = e.into();
        invalid(format!("{}: {}", path.display(), f.message))
    })
}

fn direction(n: usize, xs: &[f64]) -> Res<Vector> {
    if xs.len() != n {
        return Err(invalid(format!("direction has {} components, expected {n}", xs.len())));
    }
    v::normalize(&v::from_slice(xs)).ok_or_else(|| invalid("direction must be non-zero"))
}

fn est(e: &Estimate) -> Value {
    serde_json::to_value(e).expect("estimate serializes")
}

fn run(cli: &Cli, cfg: &RunConfig) -> Res<(&'static str, Value)> {
    let spec = cfg.spec;
    Ok(match &cli.cmd {
        Cmd::Perimeter { body, kernel } => {
            let k = parse_kernel(kernel)?;
            let b = read_body(body)?;
            let p = engine::perimeter(&k, &b, &spec)?;
            ("perimeter", json!({ "kernel": kernel, "perimeter": est(&p) }))
        }
        Cmd::Interaction { body, other, kernel } => {
            let k = parse_kernel(kernel)?;
            let (e, f) = (read_body(body)?, read_body(other)?);
            let l = engine::interaction(&k, &e, &f, &spec)?;
            ("interaction", json!({ "kernel": kernel, "interaction": est(&l) }))
        }
        Cmd::Hausdorff { inner, outer } => {
            let (a, b) = (read_body(inner)?, read_body(outer)?);
            let h = hausdorff_distance(&a, &b)?;
            let n = b.dim();
            ("hausdorff", json!({ "h": h.h, "a": &h.a[..n], "b": &h.b[..n], "maximizers": h.maximizers }))
        }
        Cmd::Symmetrize { body, nu, nodes } => {
            let e = read_body(body)?;
            let nu = direction(e.dim(), nu)?;
            let s = symmetry::symmetrize_with_report(&e, &nu, *nodes)?;
            let vol = symmetry::profile_volume(&s.profile);
            let out = BodySpec::describe(&ConvexBody::profile(s.profile)?);
            ("symmetrize", json!({ "volume": e.volume(), "symmetral_volume": vol, "adjustment": s.adjustment, "symmetral": out }))
        }
        Cmd::Monotonicity { inner, outer, kernel } => {
            let k = parse_kernel(kernel)?;
            let (a, b) = (read_body(inner)?, read_body(outer)?);
            let (d, pass) = bounds::check_monotonicity(&k, &a, &b, &spec)?;
            ("monotonicity", json!({ "kernel": kernel, "deficit": est(&d), "pass": pass }))
        }
        Cmd::Deficit { inner, outer, kernel, method, nu, nodes } => {
            let k = parse_kernel(kernel)?;
            let (a, b) = (read_body(inner)?, read_body(outer)?);
            let nu = nu.as_ref().map(|x| direction(b.dim(), x)).transpose()?;
            let mut opts = PipelineOptions { spec, nu, nodes: *nodes, c_iso: None };
            let kinds: &[BoundKind] = match method {
                MethodArg::Cor14 => &[BoundKind::Cor14],
                MethodArg::Cor15 => &[BoundKind::Cor15],
                MethodArg::Optimize => &[BoundKind::Thm13Optimized],
                MethodArg::All => &[BoundKind::Cor15, BoundKind::Cor14, BoundKind::Thm13Optimized],
            };
            if kinds.contains(&BoundKind::Cor15) && b.dim() >= 2 {
                if let Some(s) = k.fractional_order() {
                    let mut c = ConstantsCache::load(&cfg.cache)?;
                    opts.c_iso = Some(c.c_iso(b.dim(), s)?);
                    if let Err(e) = c.save() {
                        log::warn!("could not write constants cache: {e}");
                    }
                }
            }
            let mut reports = Vec::new();
            for kind in kinds {
                let r = bounds::deficit_report(&k, &a, &b, *kind, &opts)?;
                let key = serde_json::to_value(r.bound_kind).expect("kind serializes");
                reports.push((key.as_str().unwrap_or("bound").to_string(), serde_json::to_value(&r).expect("report serializes")));
                if b.dim() == 1 {
                    break;
                }
            }
            let map: serde_json::Map<String, Value> = reports.into_iter().collect();
            ("deficit", json!({ "kernel": kernel, "reports": map }))
        }
        Cmd::Oned { kernel, inner_length, outer_length } => {
            let k = parse_kernel(kernel)?;
            if k.dim() != 1 {
                return Err(invalid("oned needs a one-dimensional kernel"));
            }
            let (la, lb) = (*inner_length, *outer_length);
            if !(la > 0.0 && lb >= la) {
                return Err(Error::NotNested { excess: la - lb }.into());
            }
            let a = ConvexBody::cuboid(1, [0.0; 3], [la, 0.0, 0.0])?;
            let b = ConvexBody::cuboid(1, [0.0; 3], [lb, 0.0, 0.0])?;
            let pa = engine::perimeter(&k, &a, &spec)?;
            let pb = engine::perimeter(&k, &b, &spec)?;
            let mut out = json!({ "kernel": kernel, "inner": est(&pa), "outer": est(&pb), "deficit": est(&pb.minus(&pa)) });
            if let Some(s) = k.fractional_order() {
                let c = 2.0 / (s * (1.0 - s));
                out["closed_form"] = json!(c * (lb.powf(1.0 - s) - la.powf(1.0 - s)));
                let psi = move |x: f64| x.powf(1.0 - s);
                let p = bounds::bound_prop16(&k, &psi, la, lb)?;
                out["two_decreasing"] = serde_json::to_value(p).expect("bound serializes");
            }
            ("oned", out)
        }
        Cmd::OptimizeF { kernel, radius, height, volume, nodes, trace } => {
            let k = parse_kernel(kernel)?;
            let p = ProfileProblem::new(&k, *radius, *height, *volume)?.with_nodes(*nodes).with_seed(spec.seed);
            let f = optimizer::f_value_for(&p, &spec)?;
            let sol = f.solution.as_ref().expect("solver ran");
            if let Some(path) = trace {
                let mut lines = String::new();
                for row in &sol.trace {
                    lines.push_str(&report::to_json(row)?);
                    lines.push('\n');
                }
                std::fs::write(path, lines).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            }
            let m = BodySpec::describe(&ConvexBody::profile(sol.profile.clone())?);
            (
                "optimize-f",
                json!({
                    "kernel": kernel,
                    "f": est(&f.f),
                    "cone_perimeter": est(&f.cone_perimeter),
                    "m": est(&sol.m),
                    "objective": sol.objective,
                    "clamped": f.clamped,
                    "suspicious": f.suspicious,
                    "start": sol.start,
                    "iterations": sol.iterations,
                    "converged": sol.converged,
                    "maximizer": m,
                }),
            )
        }
        Cmd::Selftest { .. } => unreachable!(),
    })
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    seed: u64,
    result: Value,
}

fn emit(cfg: &RunConfig, text: &str) -> Res<()> {
    match &cfg.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure { code: EXIT_FAILURE, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render<T: Serialize>(cfg: &RunConfig, rows: &[T], single: bool) -> Res<String> {
    Ok(match cfg.format {
        Format::Json if single => report::to_json(&rows[0])? + "\n",
        Format::Json => report::to_json(&rows)? + "\n",
        Format::Csv => report::to_csv(rows)?,
    })
}

#[derive(Serialize)]
struct SuiteRow<'a> {
    seed: u64,
    suite: Scale,
    #[serde(flatten)]
    result: &'a suite::CriterionResult,
}

fn selftest(cfg: &RunConfig, which: SuiteArg, criteria: &Option<Vec<u8>>) -> Res<bool> {
    let c = ConstantsCache::load(&cfg.cache)?;
    if !c.invalidated.is_empty() {
        eprintln!("constants cache {} failed validation: {}", c.path().display(), c.invalidated.join(", "));
        return Ok(false);
    }
    let scale = match which {
        SuiteArg::Fast => Scale::Fast,
        SuiteArg::Full => Scale::Full,
    };
    let ids: Vec<u8> = criteria.clone().unwrap_or_else(|| (1..=11).collect());
    if let Some(bad) = ids.iter().find(|i| !(1..=11).contains(*i)) {
        return Err(invalid(format!("no criterion {bad}")));
    }
    let mut results = Vec::new();
    for id in ids {
        let r = suite::run_criterion(id, scale, cfg.spec.seed);
        eprintln!("{}", suite::summary_line(&r));
        results.push(r);
    }
    let rows: Vec<SuiteRow> = results.iter().map(|r| SuiteRow { seed: cfg.spec.seed, suite: scale, result: r }).collect();
    let text = if which == SuiteArg::Full && !cfg.format_given { report::to_csv(&rows)? } else { render(cfg, &rows, false)? };
    emit(cfg, &text)?;
    Ok(results.iter().all(|r| r.passed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = resolve(&cli.global).and_then(|cfg| match &cli.cmd {
        Cmd::Selftest { suite, criteria } => selftest(&cfg, *suite, criteria).map(|ok| if ok { 0 } else { EXIT_FAILURE }),
        _ => {
            let (command, result) = run(&cli, &cfg)?;
            let env = Envelope { command, seed: cfg.spec.seed, result };
            emit(&cfg, &render(&cfg, &[env], true)?)?;
            Ok(0)
        }
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
