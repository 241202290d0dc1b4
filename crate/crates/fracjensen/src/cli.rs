//! Batch front-end: flat `key = value` job files (section headers in
//! brackets are grouping only), executed as integration, inequality-check,
//! sweep, or falsification jobs, with text or CSV artifacts.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::jensen::{
    self, falsify, FalsifyConfig, InequalityId, InequalityReport, PhiWithEndpoints,
    ProbabilityMeasure, Relaxation, Verdict,
};
use crate::kernel::{
    make_g_weighted, make_hadamard, make_riemann_liouville, Alpha, KernelSpec,
};
use crate::operators::{self, OperatorRequest, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Integrate,
    Derive,
    Check,
    Sweep,
    Falsify,
}

impl Command {
    pub fn parse(s: &str) -> Result<Command> {
        match s {
            "integrate" => Ok(Command::Integrate),
            "derive" => Ok(Command::Derive),
            "check" => Ok(Command::Check),
            "sweep" => Ok(Command::Sweep),
            "falsify" => Ok(Command::Falsify),
            other => Err(Error::Config(format!("unknown command `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Integrate => "integrate",
            Command::Derive => "derive",
            Command::Check => "check",
            Command::Sweep => "sweep",
            Command::Falsify => "falsify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone)]
pub enum ValueOrGrid {
    Value(f64),
    Grid { start: f64, stop: f64, steps: usize },
}

impl ValueOrGrid {
    fn parse(key: &str, s: &str) -> Result<ValueOrGrid> {
        if let Some((start, rest)) = s.split_once(':') {
            let (stop, steps) = rest
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("{key}: grid must be start:stop:steps")))?;
            let start = parse_f64(key, start)?;
            let stop = parse_f64(key, stop)?;
            let steps: usize = steps
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{key}: bad step count `{steps}`")))?;
            if steps < 1 {
                return Err(Error::Config(format!("{key}: grids need steps >= 1")));
            }
            Ok(ValueOrGrid::Grid { start, stop, steps })
        } else {
            Ok(ValueOrGrid::Value(parse_f64(key, s)?))
        }
    }

    /// Linear grid inclusive of both endpoints.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            ValueOrGrid::Value(v) => vec![v],
            ValueOrGrid::Grid { start, stop, steps } => {
                if steps == 1 {
                    vec![start]
                } else {
                    (0..steps)
                        .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
                        .collect()
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum KernelChoice {
    Rl,
    Hadamard,
    GWeighted { g: String, gprime: String },
}

#[derive(Debug, Clone)]
pub enum MeasureSpec {
    Discrete { points: Vec<f64>, weights: Vec<f64> },
    Uniform,
    Density { expr: String },
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub kernel: KernelChoice,
    pub phi: Option<String>,
    pub f: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub t: Option<f64>,
    pub side: Side,
    pub alpha: Option<ValueOrGrid>,
    pub m: Option<ValueOrGrid>,
    pub measure: Option<MeasureSpec>,
    pub inequality: Option<InequalityId>,
    pub relaxation: Relaxation,
    pub tolerance: f64,
    pub seed: u64,
    pub budget: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: not a number: `{}`", s.trim())))
}

fn parse_list(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| parse_f64(key, tok))
        .collect()
}

/// Parse a job file: `key = value` lines, `[section]` grouping headers, `#`
/// comments; defaults tolerance 1e-9, seed 42, budget 10^4.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut kv: HashMap<String, String> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || (line.starts_with('[') && line.ends_with(']'))
        {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if kv.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("{key}: duplicate key")));
        }
    }
    job_from_map(kv)
}

fn job_from_map(kv: HashMap<String, String>) -> Result<JobSpec> {
    let get = |k: &str| kv.get(k).map(String::as_str);
    let command = Command::parse(
        get("command").ok_or_else(|| Error::Config("command: missing".into()))?,
    )?;
    let kernel = match get("kernel").unwrap_or("rl") {
        "rl" => KernelChoice::Rl,
        "hadamard" => KernelChoice::Hadamard,
        "gweighted" => KernelChoice::GWeighted {
            g: get("g")
                .ok_or_else(|| Error::Config("g: required for kernel = gweighted".into()))?
                .to_string(),
            gprime: get("gprime")
                .ok_or_else(|| Error::Config("gprime: required for kernel = gweighted".into()))?
                .to_string(),
        },
        other => return Err(Error::Config(format!("kernel: unknown `{other}`"))),
    };
    let opt_f64 = |k: &str| -> Result<Option<f64>> {
        get(k).map(|v| parse_f64(k, v)).transpose()
    };
    let side = match get("side").unwrap_or("right") {
        "right" => Side::Right,
        "left" => Side::Left,
        other => return Err(Error::Config(format!("side: unknown `{other}`"))),
    };
    let measure = match get("measure") {
        None => {
            if let Some(p) = get("points") {
                let points = parse_list("points", p)?;
                let weights = match get("weights") {
                    Some(w) => parse_list("weights", w)?,
                    None => vec![1.0 / points.len() as f64; points.len()],
                };
                if weights.len() != points.len() {
                    return Err(Error::Config("weights: length must match points".into()));
                }
                Some(MeasureSpec::Discrete { points, weights })
            } else {
                None
            }
        }
        Some("uniform") => Some(MeasureSpec::Uniform),
        Some("density") => Some(MeasureSpec::Density {
            expr: get("density")
                .ok_or_else(|| Error::Config("density: required for measure = density".into()))?
                .to_string(),
        }),
        Some("discrete") => {
            let points = parse_list(
                "points",
                get("points").ok_or_else(|| Error::Config("points: missing".into()))?,
            )?;
            let weights = match get("weights") {
                Some(w) => parse_list("weights", w)?,
                None => vec![1.0 / points.len() as f64; points.len()],
            };
            if weights.len() != points.len() {
                return Err(Error::Config("weights: length must match points".into()));
            }
            Some(MeasureSpec::Discrete { points, weights })
        }
        Some(other) => return Err(Error::Config(format!("measure: unknown `{other}`"))),
    };
    let inequality = get("inequality").map(InequalityId::parse).transpose()?;
    let relaxation = get("relaxation")
        .map(Relaxation::parse)
        .transpose()?
        .unwrap_or(Relaxation::None);
    let tolerance = opt_f64("tolerance")?.unwrap_or(1e-9);
    if !(tolerance > 0.0) {
        return Err(Error::Config("tolerance: must be > 0".into()));
    }
    let seed = match get("seed") {
        Some(s) => s
            .parse()
            .map_err(|_| Error::Config(format!("seed: not an integer: `{s}`")))?,
        None => 42,
    };
    let budget = match get("budget") {
        Some(s) => s
            .parse()
            .map_err(|_| Error::Config(format!("budget: not an integer: `{s}`")))?,
        None => 10_000,
    };
    if budget < 1 {
        return Err(Error::Config("budget: must be >= 1".into()));
    }
    let format = match get("format").unwrap_or("text") {
        "text" => OutputFormat::Text,
        "csv" => OutputFormat::Csv,
        other => return Err(Error::Config(format!("format: unknown `{other}`"))),
    };
    let job = JobSpec {
        command,
        kernel,
        phi: get("phi").map(str::to_string),
        f: get("f").map(str::to_string),
        a: opt_f64("a")?,
        b: opt_f64("b")?,
        c: opt_f64("c")?,
        d: opt_f64("d")?,
        t: opt_f64("t")?,
        side,
        alpha: get("alpha").map(|v| ValueOrGrid::parse("alpha", v)).transpose()?,
        m: get("m").map(|v| ValueOrGrid::parse("m", v)).transpose()?,
        measure,
        inequality,
        relaxation,
        tolerance,
        seed,
        budget,
        output: get("output").map(PathBuf::from),
        format,
    };
    validate_job(&job)?;
    Ok(job)
}

fn require<T: Copy>(field: Option<T>, key: &str) -> Result<T> {
    field.ok_or_else(|| Error::Config(format!("{key}: required by this command")))
}

fn validate_job(job: &JobSpec) -> Result<()> {
    match job.command {
        Command::Integrate | Command::Derive => {
            require(job.f.as_deref().map(|_| ()), "f")?;
            require(job.a, "a")?;
            require(job.b, "b")?;
            require(job.t, "t")?;
            if job.alpha.is_none() {
                return Err(Error::Config("alpha: required by this command".into()));
            }
        }
        Command::Check | Command::Sweep => {
            let id = job
                .inequality
                .ok_or_else(|| Error::Config("inequality: required by this command".into()))?;
            if job.phi.is_none() {
                return Err(Error::Config("phi: required by this command".into()));
            }
            check_requirements(job, id)?;
        }
        Command::Falsify => {
            if job.inequality.is_none() {
                return Err(Error::Config("inequality: required by this command".into()));
            }
        }
    }
    Ok(())
}

fn check_requirements(job: &JobSpec, id: InequalityId) -> Result<()> {
    use InequalityId::*;
    let needs_measure = matches!(
        id,
        JensenClassical | MJensenDiscrete | MJensenContinuous | MercerMContinuous
            | MercerContinuous | JensenSandwich
    );
    if needs_measure && job.measure.is_none() {
        return Err(Error::Config("points: a measure is required (points or measure =)".into()));
    }
    let needs_points = matches!(id, MercerDiscrete | MercerMDiscrete | MercerMEndpoints);
    if needs_points
        && !matches!(job.measure, Some(MeasureSpec::Discrete { .. }))
    {
        return Err(Error::Config("points: this inequality needs a discrete point list".into()));
    }
    if matches!(
        id,
        MercerMEndpoints | MercerMContinuous | MercerContinuous | JensenSandwich
            | FractionalMercer
    ) {
        require(job.a, "a")?;
        require(job.b, "b")?;
    }
    if matches!(id, FractionalMercer) {
        require(job.c, "c")?;
        require(job.d, "d")?;
        if job.alpha.is_none() {
            return Err(Error::Config("alpha: required by fractional_mercer".into()));
        }
        require(job.f.as_deref().map(|_| ()), "f")?;
    }
    let needs_m = matches!(
        id,
        MJensenDiscrete | MJensenContinuous | MercerMDiscrete | MercerMEndpoints
            | MercerMContinuous
    );
    if needs_m && job.m.is_none() {
        return Err(Error::Config("m: required by this inequality".into()));
    }
    Ok(())
}

fn build_kernel(job: &JobSpec) -> Result<KernelSpec> {
    match &job.kernel {
        KernelChoice::Rl => Ok(make_riemann_liouville()),
        KernelChoice::Hadamard => Ok(make_hadamard()),
        KernelChoice::GWeighted { g, gprime } => {
            let g = ScalarFunction::parse(g)?;
            let gp = ScalarFunction::parse(gprime)?;
            make_g_weighted(g, gp)
        }
    }
}

fn build_measure(job: &JobSpec) -> Result<ProbabilityMeasure> {
    match &job.measure {
        Some(MeasureSpec::Discrete { points, weights }) => {
            ProbabilityMeasure::discrete_normalized(points.clone(), weights.clone())
        }
        Some(MeasureSpec::Uniform) => {
            let c = require(job.c.or(job.a), "c")?;
            let d = require(job.d.or(job.b), "d")?;
            ProbabilityMeasure::uniform(c, d)
        }
        Some(MeasureSpec::Density { expr }) => {
            let c = require(job.c.or(job.a), "c")?;
            let d = require(job.d.or(job.b), "d")?;
            ProbabilityMeasure::density(c, d, ScalarFunction::parse(expr)?, job.tolerance)
        }
        None => Err(Error::Config("points: a measure is required".into())),
    }
}

#[derive(Debug, Clone)]
pub struct CsvRow {
    pub alpha: f64,
    pub m: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub quadrature_error: f64,
    pub verdict: String,
}

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub text: String,
    pub rows: Vec<CsvRow>,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn verdict_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Holds => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::HypothesisFailed => EXIT_HYPOTHESIS,
    }
}

fn row_from_report(alpha: f64, m: f64, r: &InequalityReport) -> CsvRow {
    CsvRow {
        alpha,
        m,
        lhs: r.lhs,
        rhs: r.rhs,
        slack: r.slack,
        quadrature_error: r.quadrature_error,
        verdict: r.verdict.as_str().to_string(),
    }
}

fn evaluate_check(job: &JobSpec, alpha: f64, m: f64) -> Result<InequalityReport> {
    use InequalityId::*;
    let id = job.inequality.unwrap();
    let mut phi = ScalarFunction::parse(job.phi.as_deref().unwrap())?;
    if let (Some(a), Some(b)) = (job.a, job.b) {
        phi = phi.with_domain_hint(a, b);
    }
    let f = match &job.f {
        Some(src) => ScalarFunction::parse(src)?,
        None => ScalarFunction::parse("x")?,
    };
    let tol = job.tolerance;
    match id {
        JensenClassical => jensen::jensen_classical(&phi, &f, &build_measure(job)?, tol),
        MJensenDiscrete => jensen::mjensen_discrete(&phi, &build_measure(job)?, m, tol),
        MJensenContinuous => {
            jensen::mjensen_continuous(&phi, &f, &build_measure(job)?, m, tol)
        }
        MercerDiscrete | MercerMDiscrete | MercerMEndpoints => {
            let Some(MeasureSpec::Discrete { points, weights }) = &job.measure else {
                return Err(Error::Config("points: missing".into()));
            };
            match id {
                MercerDiscrete => jensen::mercer_discrete(&phi, points, weights, tol),
                MercerMDiscrete => jensen::mercer_m_discrete(&phi, points, weights, m, tol),
                _ => jensen::mercer_m_endpoints(
                    &phi,
                    job.a.unwrap(),
                    job.b.unwrap(),
                    points,
                    weights,
                    m,
                    tol,
                ),
            }
        }
        MercerMContinuous => jensen::mercer_m_continuous(
            &phi,
            &f,
            &build_measure(job)?,
            job.a.unwrap(),
            job.b.unwrap(),
            m,
            tol,
        ),
        MercerContinuous => jensen::mercer_continuous(
            &PhiWithEndpoints::plain(phi),
            &f,
            &build_measure(job)?,
            job.a.unwrap(),
            job.b.unwrap(),
            tol,
        ),
        JensenSandwich => jensen::jensen_sandwich(
            &phi,
            &f,
            &build_measure(job)?,
            job.a.unwrap(),
            job.b.unwrap(),
            tol,
        )
        .map(|s| s.to_report()),
        FractionalMercer => jensen::fractional_mercer(
            &build_kernel(job)?,
            &phi,
            &f,
            job.c.unwrap(),
            job.d.unwrap(),
            Alpha::new(alpha)?,
            job.a.unwrap(),
            job.b.unwrap(),
            m,
            tol,
        ),
    }
}

fn run_integrate(job: &JobSpec) -> Result<Outcome> {
    let kernel = build_kernel(job)?;
    let f = ScalarFunction::parse(job.f.as_deref().unwrap())?;
    let alpha_values = job.alpha.as_ref().unwrap().values();
    let mut rows = Vec::new();
    let mut text = String::new();
    for alpha in alpha_values {
        let req = OperatorRequest {
            kernel: kernel.clone(),
            f: f.clone(),
            a: job.a.unwrap(),
            b: job.b.unwrap(),
            side: job.side,
            alpha: Alpha::new(alpha)?,
            t: job.t.unwrap(),
            tol: job.tolerance,
        };
        let (value, err) = match job.command {
            Command::Integrate => {
                let q = operators::frac_integral(&req)?;
                (q.value, q.error_estimate)
            }
            _ => {
                let h = operators::default_derivative_step(job.tolerance);
                let v = operators::frac_derivative(&req, h)?;
                (v, h * h)
            }
        };
        let op = if job.command == Command::Integrate { "J" } else { "D" };
        writeln!(
            text,
            "{op}^{alpha} f({t}) = {value:.10} (error estimate {err:.3e})",
            t = req.t
        )
        .unwrap();
        rows.push(CsvRow {
            alpha,
            m: 1.0,
            lhs: value,
            rhs: value,
            slack: 0.0,
            quadrature_error: err,
            verdict: "holds".to_string(),
        });
    }
    Ok(Outcome {
        exit_code: EXIT_OK,
        text,
        rows,
    })
}

fn describe_report(text: &mut String, alpha: f64, m: f64, r: &InequalityReport) {
    writeln!(
        text,
        "{}: alpha = {alpha}, m = {m}\n  lhs = {:.10}\n  rhs = {:.10}\n  slack = {:.10} (quadrature error {:.3e})\n  verdict: {}",
        r.inequality_id, r.lhs, r.rhs, r.slack, r.quadrature_error, r.verdict.as_str()
    )
    .unwrap();
    for c in &r.hypothesis_checks {
        writeln!(text, "    [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name).unwrap();
    }
}

fn run_check_or_sweep(job: &JobSpec) -> Result<Outcome> {
    let alphas = job
        .alpha
        .clone()
        .unwrap_or(ValueOrGrid::Value(1.0))
        .values();
    let ms = job.m.clone().unwrap_or(ValueOrGrid::Value(1.0)).values();
    let grid: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| ms.iter().map(move |&m| (a, m)))
        .collect();
    let mut results: Vec<(usize, Result<InequalityReport>)> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &(alpha, m))| (i, evaluate_check(job, alpha, m)))
        .collect();
    results.sort_by_key(|(i, _)| *i);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut exit = EXIT_OK;
    for (i, res) in results {
        let (alpha, m) = grid[i];
        let report = res?;
        describe_report(&mut text, alpha, m, &report);
        rows.push(row_from_report(alpha, m, &report));
        exit = exit.max(verdict_exit(report.verdict));
    }
    Ok(Outcome {
        exit_code: exit,
        text,
        rows,
    })
}

fn run_falsify(job: &JobSpec) -> Result<Outcome> {
    let config = FalsifyConfig {
        id: job.inequality.unwrap(),
        relaxation: job.relaxation,
        budget: job.budget,
        seed: job.seed,
        tolerance: job.tolerance.max(1e-9),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    match falsify(&config) {
        Some(cex) => {
            writeln!(
                text,
                "counterexample at instance {} ({} shrink steps): {:?}",
                cex.index, cex.shrink_steps, cex.kind
            )
            .unwrap();
            writeln!(text, "  {}", cex.instance).unwrap();
            writeln!(text, "  witness: {}", cex.witness).unwrap();
            if let Some(r) = &cex.report {
                describe_report(&mut text, cex.instance.alpha, cex.instance.m, r);
                rows.push(row_from_report(cex.instance.alpha, cex.instance.m, r));
            }
            Ok(Outcome {
                exit_code: EXIT_VIOLATED,
                text,
                rows,
            })
        }
        None => {
            writeln!(
                text,
                "no counterexample for {} (relaxation {}) in {} instances",
                config.id.name(),
                config.relaxation.name(),
                config.budget
            )
            .unwrap();
            Ok(Outcome {
                exit_code: EXIT_OK,
                text,
                rows,
            })
        }
    }
}

pub fn execute(job: &JobSpec) -> Result<Outcome> {
    match job.command {
        Command::Integrate | Command::Derive => run_integrate(job),
        Command::Check | Command::Sweep => run_check_or_sweep(job),
        Command::Falsify => run_falsify(job),
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exactly the contract header, 17 significant digits, LF endings.
pub fn emit_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from("alpha,m,lhs,rhs,slack,quadrature_error,verdict\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_num(r.alpha),
            fmt_num(r.m),
            fmt_num(r.lhs),
            fmt_num(r.rhs),
            fmt_num(r.slack),
            fmt_num(r.quadrature_error),
            r.verdict
        ));
    }
    out
}

pub struct Overrides {
    pub command: Option<Command>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

/// Full front-end entry point; returns the process exit code.
pub fn run(job_path: &std::path::Path, overrides: &Overrides) -> i32 {
    let text = match std::fs::read_to_string(job_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", job_path.display());
            return EXIT_CONFIG;
        }
    };
    let job = match parse_job(&text) {
        Ok(mut job) => {
            if let Some(cmd) = overrides.command {
                if cmd != job.command {
                    eprintln!(
                        "error: command: job file says `{}` but the command line says `{}`",
                        job.command.name(),
                        cmd.name()
                    );
                    return EXIT_CONFIG;
                }
            }
            if let Some(o) = &overrides.output {
                job.output = Some(o.clone());
            }
            if let Some(f) = overrides.format {
                job.format = f;
            }
            if let Some(s) = overrides.seed {
                job.seed = s;
            }
            if let Some(t) = overrides.tolerance {
                if !(t > 0.0) {
                    eprintln!("error: tolerance: must be > 0");
                    return EXIT_CONFIG;
                }
                job.tolerance = t;
            }
            job
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let outcome = match execute(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let payload = match job.format {
        OutputFormat::Text => outcome.text.clone(),
        OutputFormat::Csv => emit_csv(&outcome.rows),
    };
    match &job.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, payload) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => print!("{payload}"),
    }
    outcome.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    const INTEGRATE_JOB: &str = "\
[job]
command = integrate
kernel = rl
f = x
a = 0
b = 2
t = 1
alpha = 0.5
";

    #[test]
    fn parse_minimal_integrate_job() {
        let job = parse_job(INTEGRATE_JOB).unwrap();
        assert_eq!(job.command, Command::Integrate);
        assert_eq!(job.tolerance, 1e-9);
        assert_eq!(job.seed, 42);
        assert_eq!(job.budget, 10_000);
    }

    #[test]
    fn integrate_job_value() {
        let job = parse_job(INTEGRATE_JOB).unwrap();
        let out = execute(&job).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        // Gamma(2)/Gamma(2.5) = 0.7522527780636750
        assert!((out.rows[0].lhs - 0.752252778).abs() < 1e-6);
    }

    #[test]
    fn missing_phi_names_the_key() {
        let text = "command = check\ninequality = mercer_discrete\npoints = 0,0.5,1\n";
        match parse_job(text) {
            Err(Error::Config(msg)) => assert!(msg.starts_with("phi"), "{msg}"),
            other => panic!("expected ConfigError(phi), got {other:?}"),
        }
    }

    #[test]
    fn alpha_grid_is_linear_inclusive() {
        let g = ValueOrGrid::parse("alpha", "0.1:0.9:9").unwrap();
        let vals = g.values();
        assert_eq!(vals.len(), 9);
        assert!((vals[0] - 0.1).abs() < 1e-12);
        assert!((vals[8] - 0.9).abs() < 1e-12);
        assert!((vals[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn check_mercer_discrete_hand_value() {
        let text = "\
command = check
inequality = mercer_discrete
phi = x^2
points = 0, 0.5, 1
";
        let job = parse_job(text).unwrap();
        let out = execute(&job).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert!((out.rows[0].slack - 1.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn falsify_concave_control_exits_violated() {
        let text = "\
command = falsify
inequality = jensen_classical
relaxation = drop_convexity
budget = 100
seed = 42
";
        let job = parse_job(text).unwrap();
        let out = execute(&job).unwrap();
        assert_eq!(out.exit_code, EXIT_VIOLATED);
        assert!(out.text.contains("counterexample"));
    }

    #[test]
    fn csv_header_and_shape() {
        let rows = vec![CsvRow {
            alpha: 0.5,
            m: 1.0,
            lhs: 1.0 / 3.0,
            rhs: 0.5,
            slack: 0.5 - 1.0 / 3.0,
            quadrature_error: 1e-12,
            verdict: "holds".to_string(),
        }];
        let out = emit_csv(&rows);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "alpha,m,lhs,rhs,slack,quadrature_error,verdict");
        assert!(!out.contains('\r'));
        // 17-significant-digit round trip
        let lhs: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(lhs, 1.0 / 3.0);
    }

    #[test]
    fn every_inequality_reachable_from_check_and_falsify() {
        for id in InequalityId::ALL {
            let mut text = format!(
                "command = check\ninequality = {}\nphi = x^2\npoints = 0.1, 0.5, 0.9\n",
                id.name()
            );
            text.push_str("a = -1\nb = 1\nc = 0\nd = 1\nm = 0.5\nalpha = 0.5\nf = x\n");
            if matches!(
                id,
                InequalityId::JensenClassical
                    | InequalityId::MJensenContinuous
                    | InequalityId::MercerMContinuous
                    | InequalityId::MercerContinuous
                    | InequalityId::JensenSandwich
            ) {
                text = text.replace("points = 0.1, 0.5, 0.9\n", "measure = uniform\n");
            }
            let job = parse_job(&text).unwrap_or_else(|e| panic!("{}: {e}", id.name()));
            let out = execute(&job).unwrap_or_else(|e| panic!("{}: {e}", id.name()));
            assert_eq!(out.rows.len(), 1, "{}", id.name());

            let ftext = format!(
                "command = falsify\ninequality = {}\nbudget = 5\nseed = 1\n",
                id.name()
            );
            let fjob = parse_job(&ftext).unwrap();
            let fout = execute(&fjob).unwrap();
            assert_eq!(fout.exit_code, EXIT_OK, "{}", id.name());
        }
    }

    #[test]
    fn sweep_rows_follow_grid_order() {
        let text = "\
command = sweep
inequality = mercer_m_discrete
phi = x^2
points = -0.5, 0.25, 0.75
a = -1
b = 1
m = 0.25:1:4
";
        let job = parse_job(text).unwrap();
        let out = execute(&job).unwrap();
        assert_eq!(out.rows.len(), 4);
        let ms: Vec<f64> = out.rows.iter().map(|r| r.m).collect();
        assert_eq!(ms, vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn duplicate_key_rejected() {
        assert!(matches!(
            parse_job("command = check\ncommand = sweep\n"),
            Err(Error::Config(_))
        ));
    }
}
