//! Empirical certification or refutation of m-convexity on an interval.
//!
//! A function phi is m-convex on an interval I containing zero when
//! phi(t x + m(1-t) y) <= t phi(x) + m(1-t) phi(y) for all x, y in I and
//! t in [0, 1]. Grid checks can refute this or give evidence for it; they
//! are not a proof, and reports say so.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;

/// Defects larger than this count as violations; smaller positive defects
/// are attributed to double-precision noise in phi.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Default lattice size per axis.
pub const DEFAULT_GRID: usize = 33;

/// Default number of extra seeded random triples.
pub const DEFAULT_RANDOM_TRIPLES: usize = 10_000;

#[derive(Debug, Clone)]
pub struct MConvexityReport {
    pub m: f64,
    pub interval: (f64, f64),
    /// Max over tested triples of lhs - rhs, clamped at 0 when no triple
    /// violates.
    pub worst_violation: f64,
    /// Triple (x, y, t) attaining the worst violation, present only when
    /// `worst_violation` exceeds [`VIOLATION_TOL`].
    pub witness: Option<(f64, f64, f64)>,
    pub samples: usize,
    /// Whether 0 lies in the tested interval (tracked because the m < 1
    /// statements hypothesize it).
    pub zero_in_interval: bool,
    /// Grid evidence, not a proof.
    pub certified: bool,
}

impl MConvexityReport {
    pub fn passes(&self) -> bool {
        self.worst_violation <= VIOLATION_TOL
    }
}

fn check_m(m: f64) -> Result<()> {
    if m > 0.0 && m <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("m must lie in (0, 1], got {m}")))
    }
}

/// Signed defect phi(t x + m(1-t) y) - [t phi(x) + m(1-t) phi(y)].
/// Non-positive means the m-convexity inequality holds at this triple.
pub fn check_point(phi: &ScalarFunction, x: f64, y: f64, t: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0, 1], got {t}")));
    }
    let combined = t * x + m * (1.0 - t) * y;
    let lhs = phi.eval(combined)?;
    let rhs = t * phi.eval(x)? + m * (1.0 - t) * phi.eval(y)?;
    Ok(lhs - rhs)
}

/// Defect of the equivalent arrangement
/// phi(m t x + (1-t) y) <= m t phi(x) + (1-t) phi(y); identical to
/// `check_point` with (x, y, t) -> (y, x, 1-t).
pub fn check_equivalent_form(
    phi: &ScalarFunction,
    x: f64,
    y: f64,
    t: f64,
    m: f64,
) -> Result<f64> {
    check_point(phi, y, x, 1.0 - t, m)
}

/// Max defect over an n^3 lattice of (x, y, t) plus `random` seeded triples.
/// Deterministic given the seed.
pub fn certify_grid(
    phi: &ScalarFunction,
    interval: (f64, f64),
    m: f64,
    n: usize,
    random: usize,
    seed: u64,
) -> Result<MConvexityReport> {
    check_m(m)?;
    let (lo, hi) = interval;
    if !(lo <= hi) {
        return Err(Error::Domain(format!("bad interval [{lo}, {hi}]")));
    }
    let zero_in_interval = lo <= 0.0 && hi >= 0.0;
    if m < 1.0 && !zero_in_interval {
        return Err(Error::Hypothesis(format!(
            "m = {m} < 1 requires 0 in the interval [{lo}, {hi}]"
        )));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (lo, lo, 0.0);
    let mut samples = 0usize;
    let consider = |x: f64, y: f64, t: f64, worst: &mut f64, witness: &mut (f64, f64, f64)| -> Result<()> {
        let defect = check_point(phi, x, y, t, m)?;
        if defect > *worst {
            *worst = defect;
            *witness = (x, y, t);
        }
        Ok(())
    };
    let grid = |i: usize, n: usize, lo: f64, hi: f64| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    for i in 0..n.max(1) {
        let x = grid(i, n, lo, hi);
        for j in 0..n.max(1) {
            let y = grid(j, n, lo, hi);
            for k in 0..n.max(1) {
                let t = grid(k, n, 0.0, 1.0);
                consider(x, y, t, &mut worst, &mut witness)?;
                samples += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let x = rng.gen_range(lo..=hi);
        let y = rng.gen_range(lo..=hi);
        let t = rng.gen_range(0.0..=1.0);
        consider(x, y, t, &mut worst, &mut witness)?;
        samples += 1;
    }
    let worst_violation = worst.max(0.0);
    Ok(MConvexityReport {
        m,
        interval,
        worst_violation,
        witness: (worst_violation > VIOLATION_TOL).then_some(witness),
        samples,
        zero_in_interval,
        certified: worst_violation <= VIOLATION_TOL,
    })
}

/// Largest m in (0, 1] for which the grid check passes, found by bisection
/// to width `tol`. Returns 1 when phi already passes at m = 1 and
/// `Error::ReturnsZero` when every tested m >= tol fails.
pub fn max_m(phi: &ScalarFunction, interval: (f64, f64), n: usize, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tol must lie in (0, 1), got {tol}")));
    }
    const SEED: u64 = 0xC0FFEE;
    const RANDOM: usize = 1000;
    let passes = |m: f64| -> Result<bool> {
        Ok(certify_grid(phi, interval, m, n, RANDOM, SEED)?.passes())
    };
    if passes(1.0)? {
        return Ok(1.0);
    }
    if !passes(tol)? {
        return Err(Error::ReturnsZero);
    }
    let mut lo = tol;
    let mut hi = 1.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
