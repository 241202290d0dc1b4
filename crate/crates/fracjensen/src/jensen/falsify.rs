//! Randomized negative controls: sample instances of an inequality under a
//! chosen hypothesis relaxation and hunt for slack violations or
//! domain-membership witnesses. Deterministic for a fixed seed, including
//! under parallel execution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::kernel::{make_riemann_liouville, Alpha};

use super::ops::{self, PhiWithEndpoints};
use super::{InequalityId, InequalityReport, ProbabilityMeasure};

const VIOLATION_THRESHOLD: f64 = -1e-6;
const CHUNK: usize = 256;
const SHRINK_STEPS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relaxation {
    None,
    DropConvexity,
    DropZeroInI,
    DropRange,
}

impl Relaxation {
    pub fn parse(s: &str) -> Result<Relaxation> {
        match s {
            "none" => Ok(Relaxation::None),
            "drop_convexity" => Ok(Relaxation::DropConvexity),
            "drop_zero_in_I" | "drop_zero_in_i" => Ok(Relaxation::DropZeroInI),
            "drop_range" => Ok(Relaxation::DropRange),
            other => Err(Error::Config(format!("unknown relaxation `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Relaxation::None => "none",
            Relaxation::DropConvexity => "drop_convexity",
            Relaxation::DropZeroInI => "drop_zero_in_I",
            Relaxation::DropRange => "drop_range",
        }
    }

    /// Hypothesis checks this relaxation deliberately abandons; a
    /// counterexample must still satisfy every check not listed here.
    fn ignored(&self) -> &'static [&'static str] {
        match self {
            Relaxation::None => &[],
            Relaxation::DropConvexity => &["phi_convex", "phi_m_convex"],
            Relaxation::DropZeroInI => {
                // the m-convexity definition itself needs 0 in I, and the
                // argument-membership claim is exactly what we are probing
                &["zero_in_interval", "phi_m_convex", "argument_in_interval"]
            }
            Relaxation::DropRange => &["f_range", "points_in_interval", "argument_in_interval"],
        }
    }
}

#[derive(Debug, Clone)]
pub struct FalsifyConfig {
    pub id: InequalityId,
    pub relaxation: Relaxation,
    pub budget: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl FalsifyConfig {
    pub fn new(id: InequalityId, relaxation: Relaxation, budget: usize, seed: u64) -> Self {
        FalsifyConfig {
            id,
            relaxation,
            budget,
            seed,
            tolerance: 1e-7,
        }
    }
}

/// Everything needed to replay one sampled instance of any inequality.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: InequalityId,
    pub phi: ScalarFunction,
    pub f: ScalarFunction,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// The theorem's interval [a, b].
    pub interval: (f64, f64),
    /// Measure support [c, d] for continuous instances.
    pub support: (f64, f64),
    pub m: f64,
    pub alpha: f64,
    pub continuous: bool,
}

impl std::fmt::Display for Instance {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            out,
            "{}: phi = {}, f = {}, interval = [{}, {}], m = {}, alpha = {}",
            self.id.name(),
            self.phi.source(),
            self.f.source(),
            self.interval.0,
            self.interval.1,
            self.m,
            self.alpha
        )?;
        if !self.points.is_empty() {
            write!(out, ", points = {:?}, weights = {:?}", self.points, self.weights)?;
        }
        if self.continuous {
            write!(out, ", support = [{}, {}]", self.support.0, self.support.1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleKind {
    SlackViolation,
    DomainWitness,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub index: usize,
    pub kind: CounterexampleKind,
    pub instance: Instance,
    pub report: Option<InequalityReport>,
    pub witness: String,
    pub shrink_steps: usize,
}

fn normalized_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1_f64..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|r| r / sum).collect();
    let residual = 1.0 - w.iter().sum::<f64>();
    let last = w.len() - 1;
    w[last] += residual;
    w
}

/// Nonnegative combination of convex atoms, shifted so phi(0) = 0; convex
/// with phi(0) <= 0, hence m-convex for every m in (0, 1] once 0 is in play.
fn convex_phi(rng: &mut ChaCha8Rng, interval: (f64, f64)) -> ScalarFunction {
    let c: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0_f64..1.5)).collect();
    let s = rng.gen_range(interval.0..=interval.1);
    // max(u, 0) = (u + |u|)/2
    let text = format!(
        "{}*x^2 + {}*x^4 + {}*exp(x) + {}*abs(x) + {}*((x - {s}) + abs(x - {s}))/2",
        c[0], c[1], c[2], c[3], c[4]
    );
    let phi = ScalarFunction::parse(&text).unwrap();
    let at_zero = phi.eval(0.0).unwrap();
    let shifted = ScalarFunction::parse(&format!("{text} - {at_zero}")).unwrap();
    shifted.with_domain_hint(interval.0, interval.1)
}

fn concave_phi(rng: &mut ChaCha8Rng, interval: (f64, f64)) -> ScalarFunction {
    let a = rng.gen_range(0.5_f64..2.0);
    let b = rng.gen_range(-1.0_f64..1.0);
    ScalarFunction::parse(&format!("0 - {a}*x^2 + {b}*x"))
        .unwrap()
        .with_domain_hint(interval.0, interval.1)
}

fn needs_zero(id: InequalityId) -> bool {
    use InequalityId::*;
    matches!(
        id,
        MJensenDiscrete
            | MJensenContinuous
            | MercerMDiscrete
            | MercerMEndpoints
            | MercerMContinuous
            | FractionalMercer
    )
}

fn is_continuous(id: InequalityId) -> bool {
    use InequalityId::*;
    matches!(
        id,
        MJensenContinuous | MercerMContinuous | MercerContinuous | JensenSandwich
            | FractionalMercer
    )
}

/// One instance whose hypothesis checks pass by construction (under
/// `Relaxation::None`), or that deliberately breaks the relaxed hypothesis.
pub fn random_instance(
    id: InequalityId,
    relaxation: Relaxation,
    rng: &mut ChaCha8Rng,
) -> Instance {
    let m = if needs_zero(id) {
        rng.gen_range(0.1_f64..=1.0)
    } else {
        1.0
    };
    let interval = if relaxation == Relaxation::DropZeroInI {
        let lo = rng.gen_range(0.5_f64..1.5);
        (lo, lo + rng.gen_range(0.5_f64..1.5))
    } else if needs_zero(id) && m < 1.0 {
        (-rng.gen_range(0.05_f64..2.0), rng.gen_range(0.05_f64..2.0))
    } else {
        let lo = rng.gen_range(-2.0_f64..0.5);
        (lo, lo + rng.gen_range(0.5_f64..2.5))
    };
    let (a, b) = interval;
    let phi = match relaxation {
        Relaxation::DropConvexity => concave_phi(rng, interval),
        Relaxation::DropZeroInI => {
            let center = 0.5 * (a + b) + rng.gen_range(-0.2_f64..0.2);
            ScalarFunction::parse(&format!("(x - {center})^2 + 0.1"))
                .unwrap()
                .with_domain_hint(a, b)
        }
        _ => convex_phi(rng, interval),
    };
    let n = rng.gen_range(1_usize..=6);
    let points: Vec<f64> = (0..n).map(|_| rng.gen_range(a..=b)).collect();
    let weights = normalized_weights(rng, n);
    let c = rng.gen_range(0.0_f64..1.0);
    let d = c + rng.gen_range(0.5_f64..2.0);
    let continuous = is_continuous(id);
    // f maps [c, d] strictly inside [a, b] unless the range check is dropped
    let (rlo, rhi) = if relaxation == Relaxation::DropRange {
        let w = b - a;
        (a - rng.gen_range(0.1 * w..0.5 * w), b + rng.gen_range(0.0..0.5 * w))
    } else {
        let w = b - a;
        (a + 0.02 * w, b - 0.02 * w)
    };
    let p = if rng.gen_bool(0.5) { 1 } else { 2 };
    let f = ScalarFunction::parse(&format!(
        "{rlo} + {} * ((x - {c})/{})^{p}",
        rhi - rlo,
        d - c
    ))
    .unwrap();
    let alpha = rng.gen_range(0.3_f64..=1.0);
    Instance {
        id,
        phi,
        f,
        points,
        weights,
        interval,
        support: (c, d),
        m,
        alpha,
        continuous,
    }
}

/// Run the instance through its operation.
pub fn evaluate(inst: &Instance, tol: f64) -> Result<InequalityReport> {
    use InequalityId::*;
    let discrete =
        || ProbabilityMeasure::discrete(inst.points.clone(), inst.weights.clone());
    let uniform = || ProbabilityMeasure::uniform(inst.support.0, inst.support.1);
    let (a, b) = inst.interval;
    match inst.id {
        JensenClassical => {
            if inst.continuous {
                ops::jensen_classical(&inst.phi, &inst.f, &uniform()?, tol)
            } else {
                let id = ScalarFunction::parse("x").unwrap();
                ops::jensen_classical(&inst.phi, &id, &discrete()?, tol)
            }
        }
        MJensenDiscrete => ops::mjensen_discrete(&inst.phi, &discrete()?, inst.m, tol),
        MJensenContinuous => {
            ops::mjensen_continuous(&inst.phi, &inst.f, &uniform()?, inst.m, tol)
        }
        MercerDiscrete => ops::mercer_discrete(&inst.phi, &inst.points, &inst.weights, tol),
        MercerMDiscrete => {
            ops::mercer_m_discrete(&inst.phi, &inst.points, &inst.weights, inst.m, tol)
        }
        MercerMEndpoints => ops::mercer_m_endpoints(
            &inst.phi,
            a,
            b,
            &inst.points,
            &inst.weights,
            inst.m,
            tol,
        ),
        MercerMContinuous => {
            ops::mercer_m_continuous(&inst.phi, &inst.f, &uniform()?, a, b, inst.m, tol)
        }
        MercerContinuous => ops::mercer_continuous(
            &PhiWithEndpoints::plain(inst.phi.clone()),
            &inst.f,
            &uniform()?,
            a,
            b,
            tol,
        ),
        JensenSandwich => {
            ops::jensen_sandwich(&inst.phi, &inst.f, &uniform()?, a, b, tol)
                .map(|s| s.to_report())
        }
        FractionalMercer => ops::fractional_mercer(
            &make_riemann_liouville(),
            &inst.phi,
            &inst.f,
            inst.support.0,
            inst.support.1,
            Alpha::new(inst.alpha)?,
            a,
            b,
            inst.m,
            tol,
        ),
    }
}

fn classify(
    inst: &Instance,
    relaxation: Relaxation,
    tol: f64,
) -> Option<(CounterexampleKind, Option<InequalityReport>, String)> {
    let ignored = relaxation.ignored();
    match evaluate(inst, tol) {
        Ok(report) => {
            let required_ok = report
                .hypothesis_checks
                .iter()
                .filter(|c| !ignored.contains(&c.name.as_str()))
                .all(|c| c.passed);
            if !required_ok {
                return None;
            }
            if relaxation == Relaxation::DropZeroInI
                && report.check("argument_in_interval") == Some(false)
            {
                let witness =
                    "argument of phi leaves the stated interval".to_string();
                return Some((CounterexampleKind::DomainWitness, Some(report), witness));
            }
            if report.slack < VIOLATION_THRESHOLD - report.quadrature_error {
                let witness = format!("slack = {:.6e}", report.slack);
                return Some((CounterexampleKind::SlackViolation, Some(report), witness));
            }
            None
        }
        Err(Error::Domain(msg)) | Err(Error::Hypothesis(msg))
            if relaxation == Relaxation::DropZeroInI || relaxation == Relaxation::DropRange =>
        {
            Some((CounterexampleKind::DomainWitness, None, msg))
        }
        Err(_) => None,
    }
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn shrink_candidates(inst: &Instance) -> Vec<Instance> {
    let mut out = Vec::new();
    if inst.points.len() > 1 {
        for drop in 0..inst.points.len() {
            let mut next = inst.clone();
            next.points.remove(drop);
            next.weights.remove(drop);
            let sum: f64 = next.weights.iter().sum();
            for w in &mut next.weights {
                *w /= sum;
            }
            out.push(next);
        }
    }
    let (a, b) = inst.interval;
    if b - a > 1e-3 {
        let mut next = inst.clone();
        next.interval = (a + 0.125 * (b - a), b - 0.125 * (b - a));
        out.push(next);
    }
    let (c, d) = inst.support;
    if inst.continuous && d - c > 1e-3 {
        let mut next = inst.clone();
        next.support = (c, c + 0.75 * (d - c));
        out.push(next);
    }
    out
}

fn shrink(
    mut inst: Instance,
    kind: CounterexampleKind,
    relaxation: Relaxation,
    tol: f64,
) -> (Instance, Option<InequalityReport>, String, usize) {
    let mut report = None;
    let mut witness = String::new();
    let mut steps = 0;
    'outer: for _ in 0..SHRINK_STEPS {
        for candidate in shrink_candidates(&inst) {
            if let Some((k, r, w)) = classify(&candidate, relaxation, tol) {
                if k == kind {
                    inst = candidate;
                    report = r;
                    witness = w;
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        break;
    }
    (inst, report, witness, steps)
}

/// Search `config.budget` seeded instances; returns the counterexample of
/// lowest index, shrunk, or `None` if the inequality survives.
pub fn falsify(config: &FalsifyConfig) -> Option<Counterexample> {
    let mut start = 0;
    while start < config.budget {
        let end = (start + CHUNK).min(config.budget);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|index| {
                let mut rng = instance_rng(config.seed, index);
                let inst = random_instance(config.id, config.relaxation, &mut rng);
                classify(&inst, config.relaxation, config.tolerance)
                    .map(|(kind, report, witness)| (index, inst, kind, report, witness))
            })
            .min_by_key(|(index, ..)| *index);
        if let Some((index, inst, kind, report, witness)) = hit {
            let (inst, shrunk_report, shrunk_witness, steps) =
                shrink(inst.clone(), kind, config.relaxation, config.tolerance);
            let (report, witness) = if steps > 0 {
                (shrunk_report, shrunk_witness)
            } else {
                (report, witness)
            };
            return Some(Counterexample {
                index,
                kind,
                instance: inst,
                report,
                witness,
                shrink_steps: steps,
            });
        }
        start = end;
    }
    None
}
