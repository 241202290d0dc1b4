//! Slack certificates for the discrete Jensen, m-Jensen, and Mercer
//! inequalities on a small point set.

use fracjensen::jensen::{
    jensen_classical, mercer_discrete, mercer_m_discrete, mjensen_discrete, ProbabilityMeasure,
};
use fracjensen::ScalarFunction;

fn show(label: &str, r: &fracjensen::jensen::InequalityReport) {
    println!(
        "{label:<18} lhs = {:>12.6} rhs = {:>12.6} slack = {:>12.6} [{}]",
        r.lhs,
        r.rhs,
        r.slack,
        r.verdict.as_str()
    );
}

fn main() -> fracjensen::Result<()> {
    let phi = ScalarFunction::parse("x^2")?.with_domain_hint(0.0, 2.0);
    let points = vec![0.0, 1.0, 2.0];
    let weights = vec![1.0 / 3.0; 3];
    let mu = ProbabilityMeasure::discrete(points.clone(), weights.clone())?;
    let tol = 1e-9;

    show("jensen", &jensen_classical(&phi, &ScalarFunction::parse("x")?, &mu, tol)?);
    show("mercer", &mercer_discrete(&phi, &points, &weights, tol)?);
    for m in [1.0, 0.75, 0.5] {
        show(
            &format!("m-jensen m={m}"),
            &mjensen_discrete(&phi, &mu, m, tol)?,
        );
        show(
            &format!("m-mercer m={m}"),
            &mercer_m_discrete(&phi, &points, &weights, m, tol)?,
        );
    }
    Ok(())
}
