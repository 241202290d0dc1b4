//! The ten report-producing inequality operations plus the per-point lemma
//! transform. Each operation computes both sides, runs its hypothesis
//! checks empirically, and returns a slack certificate; a failed check
//! downgrades the verdict instead of erroring so relaxations can be studied.

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::kernel::{Alpha, KernelSpec};

use super::{
    hyp_mconvex, weighted_integral, HypothesisCheck, InequalityId, InequalityReport,
    ProbabilityMeasure, Verdict,
};

fn check(name: &str, passed: bool) -> HypothesisCheck {
    HypothesisCheck {
        name: name.into(),
        passed,
    }
}

fn in_interval(x: f64, (lo, hi): (f64, f64)) -> bool {
    let eps = 1e-9 * (1.0 + (hi - lo).abs());
    x >= lo - eps && x <= hi + eps
}

fn weights_normalized(weights: &[f64]) -> bool {
    !weights.is_empty()
        && weights.iter().all(|w| *w > 0.0)
        && (weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12
}

/// Stable sort of points with weights permuted alongside; NaN points are an
/// error because the theorem statements require an ordering.
fn sort_points(points: &[f64], weights: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if points.iter().any(|x| x.is_nan()) {
        return Err(Error::UnsortedPoints);
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[i].total_cmp(&points[j]));
    Ok((
        idx.iter().map(|&i| points[i]).collect(),
        idx.iter().map(|&i| weights[i]).collect(),
    ))
}

fn hull(points: &[f64]) -> (f64, f64) {
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn interval_of(phi: &ScalarFunction, fallback: (f64, f64)) -> (f64, f64) {
    phi.domain_hint().unwrap_or(fallback)
}

/// First-order propagation of a mean error through phi.
fn phi_sensitivity(phi: &ScalarFunction, x: f64, err: f64) -> f64 {
    if err == 0.0 {
        return 0.0;
    }
    let h = (x.abs() * 1e-6).max(1e-6);
    match (phi.eval(x + h), phi.eval(x - h)) {
        (Ok(p), Ok(q)) => ((p - q).abs() / (2.0 * h) + 1.0) * err,
        _ => err,
    }
}

/// Classical Jensen: phi(int f dmu) <= int phi(f) dmu for convex phi.
pub fn jensen_classical(
    phi: &ScalarFunction,
    f: &ScalarFunction,
    mu: &ProbabilityMeasure,
    tol: f64,
) -> Result<InequalityReport> {
    let (mean_f, e1) = mu.mean(|x| f.eval(x), tol)?;
    let (mean_phif, e2) = mu.mean(|x| phi.eval(f.eval(x)?), tol)?;
    let hull = mu.range_hull(f)?;
    let checks = vec![hyp_mconvex(phi, interval_of(phi, hull), 1.0)];
    let lhs = phi.eval(mean_f)?;
    let qerr = e2 + phi_sensitivity(phi, mean_f, e1);
    Ok(InequalityReport::finish(
        InequalityId::JensenClassical,
        lhs,
        mean_phif,
        checks,
        qerr,
        tol,
    ))
}

/// Discrete m-Jensen: phi(m sum w_k x_k) <= m sum w_k phi(x_k).
pub fn mjensen_discrete(
    phi: &ScalarFunction,
    mu: &ProbabilityMeasure,
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let ProbabilityMeasure::Discrete { points, weights } = mu else {
        return Err(Error::Domain("mjensen_discrete needs a discrete measure".into()));
    };
    let interval = interval_of(phi, hull(points));
    let zero_ok = m == 1.0 || in_interval(0.0, interval);
    let mean: f64 = points.iter().zip(weights).map(|(x, w)| w * x).sum();
    let arg = m * mean;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check("weights_normalized", weights_normalized(weights)),
        check("points_in_interval", points.iter().all(|x| in_interval(*x, interval))),
        check("argument_in_interval", in_interval(arg, interval)),
        hyp_mconvex(phi, interval, m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", zero_ok));
    }
    let lhs = phi.eval(arg)?;
    let rhs: f64 = m * points
        .iter()
        .zip(weights)
        .map(|(x, w)| Ok(w * phi.eval(*x)?))
        .sum::<Result<f64>>()?;
    Ok(InequalityReport::finish(
        InequalityId::MJensenDiscrete,
        lhs,
        rhs,
        checks,
        0.0,
        tol,
    ))
}

/// Continuous m-Jensen: phi(m int f dmu) <= m int phi(f) dmu.
pub fn mjensen_continuous(
    phi: &ScalarFunction,
    f: &ScalarFunction,
    mu: &ProbabilityMeasure,
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let hull = mu.range_hull(f)?;
    let interval = interval_of(phi, hull);
    let (mean_f, e1) = mu.mean(|x| f.eval(x), tol)?;
    let (mean_phif, e2) = mu.mean(|x| phi.eval(f.eval(x)?), tol)?;
    let arg = m * mean_f;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check("argument_in_interval", in_interval(arg, interval)),
        hyp_mconvex(phi, interval, m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", in_interval(0.0, interval)));
    }
    let lhs = phi.eval(arg)?;
    let rhs = m * mean_phif;
    let qerr = m * e2 + phi_sensitivity(phi, arg, m * e1);
    Ok(InequalityReport::finish(
        InequalityId::MJensenContinuous,
        lhs,
        rhs,
        checks,
        qerr,
        tol,
    ))
}

/// Discrete Mercer for convex phi on [x_1, x_n].
pub fn mercer_discrete(
    phi: &ScalarFunction,
    points: &[f64],
    weights: &[f64],
    tol: f64,
) -> Result<InequalityReport> {
    let (points, weights) = sort_points(points, weights)?;
    let (x1, xn) = (points[0], points[points.len() - 1]);
    let checks = vec![
        check("weights_normalized", weights_normalized(&weights)),
        hyp_mconvex(phi, (x1, xn), 1.0),
    ];
    let mean: f64 = points.iter().zip(&weights).map(|(x, w)| w * x).sum();
    let lhs = phi.eval(x1 + xn - mean)?;
    let mean_phi: f64 = points
        .iter()
        .zip(&weights)
        .map(|(x, w)| Ok(w * phi.eval(*x)?))
        .sum::<Result<f64>>()?;
    let rhs = phi.eval(x1)? + phi.eval(xn)? - mean_phi;
    Ok(InequalityReport::finish(
        InequalityId::MercerDiscrete,
        lhs,
        rhs,
        checks,
        0.0,
        tol,
    ))
}

/// Per-point defects of the lemma
/// phi(x_1 + m x_n - m x_k) <= phi(x_1) + m phi(x_n) - phi(m x_k).
pub fn lemma_transform(
    phi: &ScalarFunction,
    points: &[f64],
    m: f64,
    _tol: f64,
) -> Result<Vec<f64>> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::Domain(format!("m must lie in (0, 1], got {m}")));
    }
    let weights = vec![1.0 / points.len() as f64; points.len()];
    let (points, _) = sort_points(points, &weights)?;
    let interval = interval_of(phi, hull(&points));
    if m < 1.0 && !in_interval(0.0, interval) {
        return Err(Error::Hypothesis(format!(
            "m = {m} < 1 requires 0 in the interval {interval:?}"
        )));
    }
    let (x1, xn) = (points[0], points[points.len() - 1]);
    points
        .iter()
        .map(|&xk| {
            let lhs = phi.eval(x1 + m * xn - m * xk)?;
            let rhs = phi.eval(x1)? + m * phi.eval(xn)? - phi.eval(m * xk)?;
            Ok(lhs - rhs)
        })
        .collect()
}

/// Discrete m-Mercer:
/// phi(m x_1 + m^2 x_n - m^2 sum w_k x_k)
///   <= m phi(x_1) + m^2 phi(x_n) - m sum w_k phi(m x_k).
pub fn mercer_m_discrete(
    phi: &ScalarFunction,
    points: &[f64],
    weights: &[f64],
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    let (points, weights) = sort_points(points, weights)?;
    let interval = interval_of(phi, hull(&points));
    let (x1, xn) = (points[0], points[points.len() - 1]);
    let mean: f64 = points.iter().zip(&weights).map(|(x, w)| w * x).sum();
    let arg = m * x1 + m * m * xn - m * m * mean;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check("weights_normalized", weights_normalized(&weights)),
        // the membership claim proved alongside the theorem
        check("argument_in_interval", in_interval(arg, interval)),
        hyp_mconvex(phi, interval, m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", in_interval(0.0, interval)));
    }
    let lhs = phi.eval(arg)?;
    let mean_phi_m: f64 = points
        .iter()
        .zip(&weights)
        .map(|(x, w)| Ok(w * phi.eval(m * x)?))
        .sum::<Result<f64>>()?;
    let rhs = m * phi.eval(x1)? + m * m * phi.eval(xn)? - m * mean_phi_m;
    Ok(InequalityReport::finish(
        InequalityId::MercerMDiscrete,
        lhs,
        rhs,
        checks,
        0.0,
        tol,
    ))
}

/// Endpoint m-Mercer on [a, b] for continuous m-convex phi; the points need
/// not include the endpoints.
#[allow(clippy::too_many_arguments)]
pub fn mercer_m_endpoints(
    phi: &ScalarFunction,
    a: f64,
    b: f64,
    points: &[f64],
    weights: &[f64],
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(a <= b) {
        return Err(Error::Domain(format!("need a <= b, got [{a}, {b}]")));
    }
    let (points, weights) = sort_points(points, weights)?;
    let interval = (a, b);
    let mean: f64 = points.iter().zip(&weights).map(|(x, w)| w * x).sum();
    let arg = m * a + m * m * b - m * m * mean;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check("weights_normalized", weights_normalized(&weights)),
        check(
            "points_in_interval",
            points.iter().all(|x| in_interval(*x, interval)),
        ),
        check("argument_in_interval", in_interval(arg, interval)),
        hyp_mconvex(phi, interval, m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", a <= 0.0 && b >= 0.0));
    }
    let lhs = phi.eval(arg)?;
    let mean_phi_m: f64 = points
        .iter()
        .zip(&weights)
        .map(|(x, w)| Ok(w * phi.eval(m * x)?))
        .sum::<Result<f64>>()?;
    let rhs = m * phi.eval(a)? + m * m * phi.eval(b)? - m * mean_phi_m;
    Ok(InequalityReport::finish(
        InequalityId::MercerMEndpoints,
        lhs,
        rhs,
        checks,
        0.0,
        tol,
    ))
}

/// Continuous m-Mercer:
/// phi(m a + m^2 b - m^2 int f dmu)
///   <= m phi(a) + m^2 phi(b) - m int phi(m f) dmu.
#[allow(clippy::too_many_arguments)]
pub fn mercer_m_continuous(
    phi: &ScalarFunction,
    f: &ScalarFunction,
    mu: &ProbabilityMeasure,
    a: f64,
    b: f64,
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(a <= b) {
        return Err(Error::Domain(format!("need a <= b, got [{a}, {b}]")));
    }
    let (flo, fhi) = mu.range_hull(f)?;
    let (mean_f, e1) = mu.mean(|x| f.eval(x), tol)?;
    let (mean_phimf, e2) = mu.mean(|x| phi.eval(m * f.eval(x)?), tol)?;
    let arg = m * a + m * m * b - m * m * mean_f;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check(
            "f_range",
            in_interval(flo, (a, b)) && in_interval(fhi, (a, b)),
        ),
        check("argument_in_interval", in_interval(arg, (a, b))),
        hyp_mconvex(phi, (a, b), m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", a <= 0.0 && b >= 0.0));
    }
    let lhs = phi.eval(arg)?;
    let rhs = m * phi.eval(a)? + m * m * phi.eval(b)? - m * mean_phimf;
    let qerr = m * e2 + phi_sensitivity(phi, arg, m * m * e1);
    Ok(InequalityReport::finish(
        InequalityId::MercerMContinuous,
        lhs,
        rhs,
        checks,
        qerr,
        tol,
    ))
}

/// Convex phi given by its interior expression plus (possibly larger)
/// endpoint values; the jumps are tracked on atoms as in the regularization
/// argument of the continuity-free Mercer theorem.
#[derive(Debug, Clone)]
pub struct PhiWithEndpoints {
    pub interior: ScalarFunction,
    pub at_a: Option<f64>,
    pub at_b: Option<f64>,
}

impl PhiWithEndpoints {
    pub fn plain(interior: ScalarFunction) -> Self {
        PhiWithEndpoints {
            interior,
            at_a: None,
            at_b: None,
        }
    }

    fn value(&self, x: f64, a: f64, b: f64) -> Result<f64> {
        if x == a {
            if let Some(v) = self.at_a {
                return Ok(v);
            }
        }
        if x == b {
            if let Some(v) = self.at_b {
                return Ok(v);
            }
        }
        self.interior.eval(x)
    }
}

/// Mercer for convex phi without continuity at the endpoints:
/// phi(a + b - int f dmu) <= phi(a) + phi(b) - int phi(f) dmu,
/// where int phi(f) dmu = int phi*(f) dmu + Delta_a mu{f=a} + Delta_b mu{f=b}.
pub fn mercer_continuous(
    phi: &PhiWithEndpoints,
    f: &ScalarFunction,
    mu: &ProbabilityMeasure,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    let star = &phi.interior;
    let delta_a = match phi.at_a {
        Some(v) => v - star.eval(a)?,
        None => 0.0,
    };
    let delta_b = match phi.at_b {
        Some(v) => v - star.eval(b)?,
        None => 0.0,
    };
    let (flo, fhi) = mu.range_hull(f)?;
    let (mean_f, e1) = mu.mean(|x| f.eval(x), tol)?;
    let (mean_phistar, e2) = mu.mean(|x| star.eval(f.eval(x)?), tol)?;
    let fx = |x: f64| f.eval(x);
    let mean_phif =
        mean_phistar + delta_a * mu.atom_mass(&fx, a)? + delta_b * mu.atom_mass(&fx, b)?;
    let checks = vec![
        check(
            "f_range",
            in_interval(flo, (a, b)) && in_interval(fhi, (a, b)),
        ),
        check("endpoint_jumps_nonneg", delta_a >= -1e-12 && delta_b >= -1e-12),
        hyp_mconvex(star, (a, b), 1.0),
    ];
    let arg = a + b - mean_f;
    let lhs = phi.value(arg, a, b)?;
    let rhs = phi.value(a, a, b)? + phi.value(b, a, b)? - mean_phif;
    let qerr = e2 + phi_sensitivity(star, arg, e1);
    Ok(InequalityReport::finish(
        InequalityId::MercerContinuous,
        lhs,
        rhs,
        checks,
        qerr,
        tol,
    ))
}

/// Three-term chain phi(mean) <= mean of phi <= phi(a)+phi(b)-phi(a+b-mean).
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub chain: [f64; 3],
    pub lower_gap: f64,
    pub upper_gap: f64,
    pub hypothesis_checks: Vec<HypothesisCheck>,
    pub verdict: Verdict,
    pub quadrature_error: f64,
}

impl SandwichReport {
    /// Collapse onto the tighter of the two gaps, so slack = rhs - lhs.
    pub fn to_report(&self) -> InequalityReport {
        let (lhs, rhs) = if self.lower_gap <= self.upper_gap {
            (self.chain[0], self.chain[1])
        } else {
            (self.chain[1], self.chain[2])
        };
        InequalityReport {
            inequality_id: InequalityId::JensenSandwich.name().to_string(),
            lhs,
            rhs,
            slack: rhs - lhs,
            hypothesis_checks: self.hypothesis_checks.clone(),
            verdict: self.verdict,
            quadrature_error: self.quadrature_error,
        }
    }
}

/// Jensen plus its Mercer converse as one chain.
pub fn jensen_sandwich(
    phi: &ScalarFunction,
    f: &ScalarFunction,
    mu: &ProbabilityMeasure,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<SandwichReport> {
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
    }
    let (flo, fhi) = mu.range_hull(f)?;
    let (mean_f, e1) = mu.mean(|x| f.eval(x), tol)?;
    let (mean_phif, e2) = mu.mean(|x| phi.eval(f.eval(x)?), tol)?;
    let checks = vec![
        check(
            "f_range",
            in_interval(flo, (a, b)) && in_interval(fhi, (a, b)),
        ),
        hyp_mconvex(phi, (a, b), 1.0),
    ];
    let t1 = phi.eval(mean_f)?;
    let t2 = mean_phif;
    let t3 = phi.eval(a)? + phi.eval(b)? - phi.eval(a + b - mean_f)?;
    let qerr = e2
        + phi_sensitivity(phi, mean_f, e1).max(phi_sensitivity(phi, a + b - mean_f, e1));
    let lower_gap = t2 - t1;
    let upper_gap = t3 - t2;
    let all_pass = checks.iter().all(|c| c.passed);
    let budget = tol + qerr;
    let verdict = if !all_pass {
        Verdict::HypothesisFailed
    } else if lower_gap >= -budget && upper_gap >= -budget {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(SandwichReport {
        chain: [t1, t2, t3],
        lower_gap,
        upper_gap,
        hypothesis_checks: checks,
        verdict,
        quadrature_error: qerr,
    })
}

/// Mercer inequality for the fractional-kernel weighted mean:
/// phi(m a + m^2 b - m^2 Jf/T) <= m phi(a) + m^2 phi(b) - m J(phi(m f))/T,
/// where J is the weighted integral against 1/T(d, s, alpha) over [c, d].
#[allow(clippy::too_many_arguments)]
pub fn fractional_mercer(
    kernel: &KernelSpec,
    phi: &ScalarFunction,
    f: &ScalarFunction,
    c: f64,
    d: f64,
    alpha: Alpha,
    a: f64,
    b: f64,
    m: f64,
    tol: f64,
) -> Result<InequalityReport> {
    if !(c < d) {
        return Err(Error::Domain(format!("need c < d, got [{c}, {d}]")));
    }
    if !(a <= b) {
        return Err(Error::Domain(format!("need a <= b, got [{a}, {b}]")));
    }
    let mass = kernel.normalizer(c, d, alpha, tol)?;
    let wf = weighted_integral(kernel, |s| f.eval(s), c, d, alpha, tol * mass.value)?;
    let wphi = weighted_integral(
        kernel,
        |s| phi.eval(m * f.eval(s)?),
        c,
        d,
        alpha,
        tol * mass.value,
    )?;
    let mean_f = wf.value / mass.value;
    let mean_phi = wphi.value / mass.value;
    let rel_mass_err = mass.error_estimate / mass.value;
    let e1 = wf.error_estimate / mass.value + mean_f.abs() * rel_mass_err;
    let e2 = wphi.error_estimate / mass.value + mean_phi.abs() * rel_mass_err;

    let mut flo = f64::INFINITY;
    let mut fhi = f64::NEG_INFINITY;
    for i in 0..=256 {
        let s = c + (d - c) * i as f64 / 256.0;
        let v = f.eval(s)?;
        flo = flo.min(v);
        fhi = fhi.max(v);
    }
    let arg = m * a + m * m * b - m * m * mean_f;
    let mut checks = vec![
        check("m_in_range", m > 0.0 && m <= 1.0),
        check("normalizer_finite", mass.converged && mass.value.is_finite()),
        check(
            "f_range",
            in_interval(flo, (a, b)) && in_interval(fhi, (a, b)),
        ),
        check("argument_in_interval", in_interval(arg, (a, b))),
        hyp_mconvex(phi, (a, b), m),
    ];
    if m < 1.0 {
        checks.push(check("zero_in_interval", a <= 0.0 && b >= 0.0));
    }
    let lhs = phi.eval(arg)?;
    let rhs = m * phi.eval(a)? + m * m * phi.eval(b)? - m * mean_phi;
    let qerr = m * e2 + phi_sensitivity(phi, arg, m * m * e1);
    Ok(InequalityReport::finish(
        InequalityId::FractionalMercer,
        lhs,
        rhs,
        checks,
        qerr,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::make_riemann_liouville;
    use approx::assert_relative_eq;

    fn phi(s: &str) -> ScalarFunction {
        ScalarFunction::parse(s).unwrap()
    }

    fn uniform01() -> ProbabilityMeasure {
        ProbabilityMeasure::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn jensen_classical_moments() {
        let r = jensen_classical(&phi("x^2"), &phi("x"), &uniform01(), 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-9);
        assert_relative_eq!(r.rhs, 1.0 / 3.0, epsilon = 1e-9);
        assert_relative_eq!(r.slack, 1.0 / 12.0, epsilon = 1e-8);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn jensen_classical_affine_has_zero_slack() {
        let r = jensen_classical(&phi("2*x + 1"), &phi("x"), &uniform01(), 1e-10).unwrap();
        assert!(r.slack.abs() < 1e-10, "slack {}", r.slack);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn jensen_classical_concave_fails_hypothesis() {
        let r = jensen_classical(&phi("neg_square"), &phi("x"), &uniform01(), 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert_relative_eq!(r.slack, -1.0 / 12.0, epsilon = 1e-8);
    }

    #[test]
    fn mjensen_discrete_hand_value() {
        let mu = ProbabilityMeasure::discrete_normalized(vec![0.0, 1.0, 2.0], vec![1.0; 3]).unwrap();
        let f = phi("x^2").with_domain_hint(0.0, 2.0);
        let r = mjensen_discrete(&f, &mu, 0.5, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 5.0 / 6.0, epsilon = 1e-12);
        assert_relative_eq!(r.slack, 0.5833333333, epsilon = 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mjensen_discrete_m_one() {
        let mu = ProbabilityMeasure::discrete(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let r = mjensen_discrete(&phi("x^2"), &mu, 1.0, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 0.5, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mjensen_single_zero_point() {
        let mu = ProbabilityMeasure::discrete(vec![0.0], vec![1.0]).unwrap();
        let r = mjensen_discrete(&phi("x^2"), &mu, 0.7, 1e-9).unwrap();
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn mjensen_continuous_hand_value() {
        let f = phi("x^2").with_domain_hint(0.0, 1.0);
        let r = mjensen_continuous(&f, &phi("x"), &uniform01(), 0.5, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.0625, epsilon = 1e-9);
        assert_relative_eq!(r.rhs, 1.0 / 6.0, epsilon = 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mjensen_continuous_reduces_to_classical_at_m_one() {
        let a = mjensen_continuous(&phi("x^2"), &phi("x"), &uniform01(), 1.0, 1e-10).unwrap();
        let b = jensen_classical(&phi("x^2"), &phi("x"), &uniform01(), 1e-10).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12);
        assert!((a.rhs - b.rhs).abs() < 1e-12);
    }

    #[test]
    fn mercer_discrete_hand_value() {
        let r = mercer_discrete(
            &phi("x^2"),
            &[0.0, 0.5, 1.0],
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
            1e-9,
        )
        .unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 1.0 - 5.0 / 12.0, epsilon = 1e-12);
        assert_relative_eq!(r.slack, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn mercer_discrete_boundary_cases() {
        // all weight on x1: lhs = phi(x_n) = rhs
        let r = mercer_discrete(&phi("x^2"), &[0.0, 1.0], &[1.0 - 1e-13, 1e-13], 1e-9).unwrap();
        assert!(r.slack.abs() < 1e-10);
        // n = 1
        let r = mercer_discrete(&phi("x^2"), &[0.7], &[1.0], 1e-9).unwrap();
        assert_eq!(r.slack, 0.0);
        // unsorted input is sorted internally
        let r = mercer_discrete(&phi("x^2"), &[1.0, 0.0, 0.5], &[0.2, 0.5, 0.3], 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(matches!(
            mercer_discrete(&phi("x^2"), &[f64::NAN, 0.0], &[0.5, 0.5], 1e-9),
            Err(Error::UnsortedPoints)
        ));
    }

    #[test]
    fn lemma_transform_hand_values() {
        let f = phi("x^2").with_domain_hint(0.0, 2.0);
        let defects = lemma_transform(&f, &[0.0, 1.0, 2.0], 0.5, 1e-9).unwrap();
        // k = 2 (middle point): lhs = phi(0.5) = 0.25, rhs = 0 + 0.5*4 - 0.25
        assert_relative_eq!(defects[1], 0.25 - 1.75, epsilon = 1e-12);
        // k = n: lhs = phi(x1) = 0, rhs = 0 + 0.5*4 - phi(1)
        let last = *defects.last().unwrap();
        assert_relative_eq!(last, 0.0 - 1.0, epsilon = 1e-12);
        assert!(defects.iter().all(|d| *d <= 1e-12));
    }

    #[test]
    fn mercer_m_discrete_hand_value() {
        let f = phi("x^2").with_domain_hint(0.0, 2.0);
        let w = [1.0 / 3.0; 3];
        let r = mercer_m_discrete(&f, &[0.0, 1.0, 2.0], &w, 0.5, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.0625, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 0.7916666666666666, epsilon = 1e-10);
        assert_relative_eq!(r.slack, 0.7291666666666666, epsilon = 1e-10);
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.check("argument_in_interval"), Some(true));
    }

    #[test]
    fn mercer_m_discrete_reduces_at_m_one() {
        let pts = [0.1, 0.7, 1.3];
        let w = [0.2, 0.3, 0.5];
        let a = mercer_m_discrete(&phi("exp(x)"), &pts, &w, 1.0, 1e-9).unwrap();
        let b = mercer_discrete(&phi("exp(x)"), &pts, &w, 1e-9).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12);
        assert!((a.rhs - b.rhs).abs() < 1e-12);
    }

    #[test]
    fn mercer_m_endpoints_hand_value() {
        let f = phi("x^2");
        let r = mercer_m_endpoints(&f, -1.0, 1.0, &[0.5], &[1.0], 0.5, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.140625, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 0.71875, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mercer_m_endpoints_on_endpoints_m_one() {
        let r = mercer_m_endpoints(&phi("x^2"), -1.0, 1.0, &[-1.0, 1.0], &[0.5, 0.5], 1.0, 1e-9)
            .unwrap();
        assert_relative_eq!(r.lhs, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mercer_m_endpoints_is_epsilon_limit_of_discrete() {
        // replay the proof's construction with endpoint weights eps/2
        let f = phi("x^2").with_domain_hint(-1.0, 1.0);
        let (a, b, m) = (-1.0, 1.0, 0.5);
        let direct = mercer_m_endpoints(&f, a, b, &[0.5], &[1.0], m, 1e-9).unwrap();
        let eps = 1e-6;
        let pts = [a, 0.5, b];
        let w = [eps / 2.0, 1.0 - eps, eps / 2.0];
        let via_discrete = mercer_m_discrete(&f, &pts, &w, m, 1e-9).unwrap();
        assert!((direct.lhs - via_discrete.lhs).abs() <= 1e-4);
        assert!((direct.rhs - via_discrete.rhs).abs() <= 1e-4);
    }

    #[test]
    fn mercer_m_continuous_hand_value() {
        let f = phi("x^2").with_domain_hint(0.0, 1.0);
        let r = mercer_m_continuous(&f, &phi("x"), &uniform01(), 0.0, 1.0, 0.5, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.015625, epsilon = 1e-9);
        assert_relative_eq!(r.rhs, 0.20833333333, epsilon = 1e-8);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mercer_m_continuous_m_one_moments() {
        let r = mercer_m_continuous(&phi("x^2"), &phi("x"), &uniform01(), 0.0, 1.0, 1.0, 1e-9)
            .unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-9);
        assert_relative_eq!(r.rhs, 2.0 / 3.0, epsilon = 1e-8);
    }

    #[test]
    fn mercer_m_continuous_constant_b() {
        // f = b with m = 1 gives exactly zero slack
        let r = mercer_m_continuous(&phi("x^2"), &phi("1"), &uniform01(), 0.0, 1.0, 1.0, 1e-9)
            .unwrap();
        assert!(r.slack.abs() < 1e-9, "slack {}", r.slack);
    }

    #[test]
    fn mercer_continuous_matches_m_one() {
        let p = PhiWithEndpoints::plain(phi("x^2"));
        let r = mercer_continuous(&p, &phi("x"), &uniform01(), 0.0, 1.0, 1e-9).unwrap();
        assert_relative_eq!(r.slack, 5.0 / 12.0, epsilon = 1e-8);
    }

    #[test]
    fn mercer_continuous_atom_bookkeeping() {
        // phi = square on (0,1) with a jump phi(0) = 0.5; mass 1/2 at 0 and 1
        let p = PhiWithEndpoints {
            interior: phi("x^2"),
            at_a: Some(0.5),
            at_b: None,
        };
        let mu = ProbabilityMeasure::discrete(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let r = mercer_continuous(&p, &phi("x"), &mu, 0.0, 1.0, 1e-9).unwrap();
        assert_relative_eq!(r.lhs, 0.25, epsilon = 1e-12);
        assert_relative_eq!(r.rhs, 0.75, epsilon = 1e-12);
        assert_relative_eq!(r.slack, 0.5, epsilon = 1e-12);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn mercer_continuous_f_equals_a() {
        let p = PhiWithEndpoints::plain(phi("exp(x)"));
        let mu = ProbabilityMeasure::discrete(vec![0.0], vec![1.0]).unwrap();
        let r = mercer_continuous(&p, &phi("0"), &mu, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn zero_jump_equals_plain_path() {
        let with_jumps = PhiWithEndpoints {
            interior: phi("x^2"),
            at_a: Some(0.0),
            at_b: Some(1.0),
        };
        let plain = PhiWithEndpoints::plain(phi("x^2"));
        let mu = ProbabilityMeasure::discrete(vec![0.0, 0.4, 1.0], vec![0.25, 0.5, 0.25]).unwrap();
        let a = mercer_continuous(&with_jumps, &phi("x"), &mu, 0.0, 1.0, 1e-9).unwrap();
        let b = mercer_continuous(&plain, &phi("x"), &mu, 0.0, 1.0, 1e-9).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-12);
        assert!((a.rhs - b.rhs).abs() < 1e-12);
    }

    #[test]
    fn sandwich_chain() {
        let r = jensen_sandwich(&phi("x^2"), &phi("x"), &uniform01(), 0.0, 1.0, 1e-9).unwrap();
        assert_relative_eq!(r.chain[0], 0.25, epsilon = 1e-9);
        assert_relative_eq!(r.chain[1], 1.0 / 3.0, epsilon = 1e-9);
        assert_relative_eq!(r.chain[2], 0.75, epsilon = 1e-9);
        assert_eq!(r.verdict, Verdict::Holds);
        let rep = r.to_report();
        assert_relative_eq!(rep.slack, r.lower_gap.min(r.upper_gap), epsilon = 1e-14);
    }

    #[test]
    fn sandwich_affine_gaps_vanish() {
        let r = jensen_sandwich(&phi("3*x - 2"), &phi("x"), &uniform01(), 0.0, 1.0, 1e-10)
            .unwrap();
        assert!(r.lower_gap.abs() < 1e-10);
        assert!(r.upper_gap.abs() < 1e-10);
    }

    #[test]
    fn sandwich_concave_fails() {
        let r = jensen_sandwich(&phi("neg_square"), &phi("x"), &uniform01(), 0.0, 1.0, 1e-9)
            .unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert!(r.lower_gap < 0.0);
    }

    #[test]
    fn fractional_mercer_rl_hand_value() {
        let kernel = make_riemann_liouville();
        let r = fractional_mercer(
            &kernel,
            &phi("x^2"),
            &phi("x"),
            0.0,
            1.0,
            Alpha::new(0.5).unwrap(),
            0.0,
            1.0,
            1.0,
            1e-9,
        )
        .unwrap();
        assert_relative_eq!(r.lhs, 1.0 / 9.0, epsilon = 1e-6);
        assert_relative_eq!(r.rhs, 7.0 / 15.0, epsilon = 1e-6);
        assert_relative_eq!(r.slack, 16.0 / 45.0, epsilon = 1e-6);
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn fractional_mercer_constant_f_matches_discrete() {
        let kernel = make_riemann_liouville();
        let k0 = 0.4;
        let r = fractional_mercer(
            &kernel,
            &phi("x^2"),
            &phi("0.4"),
            0.0,
            1.0,
            Alpha::new(0.5).unwrap(),
            0.0,
            1.0,
            1.0,
            1e-9,
        )
        .unwrap();
        let sq = phi("x^2");
        let expected_lhs = sq.eval(0.0 + 1.0 - k0).unwrap();
        let expected_rhs = sq.eval(0.0).unwrap() + sq.eval(1.0).unwrap() - sq.eval(k0).unwrap();
        assert_relative_eq!(r.lhs, expected_lhs, epsilon = 1e-9);
        assert_relative_eq!(r.rhs, expected_rhs, epsilon = 1e-9);
    }
}
