//! Dyadic simple-function approximation f_n of a function f: the staircase
//! built from the level sets E_{n,k} = {x : a + k 2^-n (b-a) <= f(x) <
//! a + (k+1) 2^-n (b-a)}. Satisfies f - 2^-n (b-a) < f_n <= f pointwise,
//! hence |int f_n - int f| <= 2^-n (b-a) against any probability measure.

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::quad;

use super::ProbabilityMeasure;

const SCAN_CELLS: usize = 2048;

#[derive(Debug, Clone)]
pub struct SimpleApproximation {
    pub n: u32,
    /// Bin floors a + k 2^-n (b-a), k = 0..=2^n; the value f_n takes on E_{n,k}.
    pub levels: Vec<f64>,
    /// mu(E_{n,k}); sums to 1.
    pub masses: Vec<f64>,
    /// int f_n dmu.
    pub integral: f64,
    /// int f dmu, for comparison.
    pub reference: f64,
    /// The proof's bound 2^-n (b-a).
    pub bound: f64,
    pub quadrature_error: f64,
}

impl SimpleApproximation {
    pub fn within_bound(&self) -> bool {
        let slop = self.quadrature_error + 1e-12;
        let gap = self.reference - self.integral;
        gap >= -slop && gap <= self.bound + slop
    }
}

fn bin_of(v: f64, a: f64, b: f64, step: f64, bins: usize) -> Result<usize> {
    let slop = 1e-9 * (1.0 + (b - a).abs());
    if !v.is_finite() || v < a - slop || v > b + slop {
        return Err(Error::Range(format!(
            "f value {v} outside the stated range [{a}, {b}]"
        )));
    }
    let k = ((v - a) / step).floor() as isize;
    Ok(k.clamp(0, bins as isize) as usize)
}

/// Bisect f(x) = level inside a bracketing cell.
fn refine_crossing(f: &ScalarFunction, level: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f.eval(lo)? - level;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let fm = f.eval(mid)? - level;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (flo < 0.0) == (fm < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Level-set masses, the staircase integral int f_n dmu, and the reference
/// int f dmu.
pub fn simple_approximation(
    f: &ScalarFunction,
    a: f64,
    b: f64,
    n: u32,
    mu: &ProbabilityMeasure,
) -> Result<SimpleApproximation> {
    if !(a < b) {
        return Err(Error::Range(format!("need a < b, got [{a}, {b}]")));
    }
    if n == 0 || n > 20 {
        return Err(Error::Range(format!("n must lie in 1..=20, got {n}")));
    }
    let bins = 1usize << n;
    let step = (b - a) / bins as f64;
    let levels: Vec<f64> = (0..=bins).map(|k| a + k as f64 * step).collect();
    let mut masses = vec![0.0; bins + 1];

    match mu {
        ProbabilityMeasure::Discrete { points, weights } => {
            let mut integral = 0.0;
            let mut reference = 0.0;
            for (x, w) in points.iter().zip(weights) {
                let v = f.eval(*x)?;
                let k = bin_of(v, a, b, step, bins)?;
                masses[k] += w;
                integral += w * levels[k];
                reference += w * v;
            }
            Ok(SimpleApproximation {
                n,
                levels,
                masses,
                integral,
                reference,
                bound: step,
                quadrature_error: 0.0,
            })
        }
        ProbabilityMeasure::Density { c, d, weight, .. } => {
            // sample f once, then locate each threshold crossing by bisection
            let mut xs = Vec::with_capacity(SCAN_CELLS + 1);
            let mut vs = Vec::with_capacity(SCAN_CELLS + 1);
            for i in 0..=SCAN_CELLS {
                let x = c + (d - c) * i as f64 / SCAN_CELLS as f64;
                let v = f.eval(x)?;
                bin_of(v, a, b, step, bins)?;
                xs.push(x);
                vs.push(v);
            }
            let mut cuts = vec![*c, *d];
            for k in 1..bins {
                let level = levels[k];
                for i in 0..SCAN_CELLS {
                    let (p, q) = (vs[i] - level, vs[i + 1] - level);
                    if p == 0.0 {
                        cuts.push(xs[i]);
                    } else if (p < 0.0) != (q < 0.0) {
                        cuts.push(refine_crossing(f, level, xs[i], xs[i + 1])?);
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();

            let panel_tol = 1e-12_f64.max(1e-11 / cuts.len() as f64);
            let mut raw = vec![0.0; bins + 1];
            let mut total = 0.0;
            let mut err = 0.0;
            for pair in cuts.windows(2) {
                let (u, v) = (pair[0], pair[1]);
                if v - u <= 0.0 {
                    continue;
                }
                let k = bin_of(f.eval(0.5 * (u + v))?, a, b, step, bins)?;
                let q = quad::integrate(&|x| weight.eval(x), u, v, panel_tol)?;
                raw[k] += q.value;
                total += q.value;
                err += q.error_estimate;
            }
            if total <= 0.0 {
                return Err(Error::Range("density has no mass on the interval".into()));
            }
            for (m, r) in masses.iter_mut().zip(&raw) {
                *m = r / total;
            }
            let integral: f64 = masses.iter().zip(&levels).map(|(m, l)| m * l).sum();
            let (reference, ref_err) = mu.mean(|x| f.eval(x), 1e-11)?;
            Ok(SimpleApproximation {
                n,
                levels,
                masses,
                integral,
                reference,
                bound: step,
                quadrature_error: err / total + ref_err + b.abs().max(a.abs()) * err / total,
            })
        }
        ProbabilityMeasure::FractionalKernel { .. } => Err(Error::Domain(
            "simple_approximation supports discrete and density measures only".into(),
        )),
    }
}
