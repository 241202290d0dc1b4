//! Adaptive quadrature on compact intervals, a graded geometric mesh for
//! endpoint singularities of type x^(lambda-1) with lambda in (0,1], and the
//! gamma function.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance inherited by every operator-level default.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Grading ratio of the geometric mesh toward a weak singularity.
pub const GRADING_RATIO: f64 = 0.15;

/// Maximum number of grading levels.
pub const MAX_LEVELS: usize = 40;

/// Maximum number of panels for the adaptive smooth rule.
pub const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

impl QuadratureResult {
    pub fn exact_zero() -> Self {
        QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One G7/K15 application on [a, b]: returns (kronrod value, |K15 - G7|).
fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand(x));
        }
        Ok(v)
    };
    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let fa = eval(center - half * x)?;
        let fb = eval(center + half * x)?;
        kronrod += WGK[j] * (fa + fb);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fa + fb);
        }
    }
    kronrod *= half;
    gauss *= half;
    Ok((kronrod, (kronrod - gauss).abs()))
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive bisection with an embedded G7/K15 rule per panel.
///
/// The integrand must be finite on (a, b); non-finite values are an error,
/// not skipped.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_inner(&f, a, b, tol, false)
}

// panels of a graded mesh are analytic; if 200 splits are not enough the
// panel is noise-dominated and more work cannot help
const SOFT_SUBDIVISIONS: usize = 200;

fn integrate_inner<F>(f: &F, a: f64, b: f64, tol: f64, soft: bool) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a < b) {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let (value, error) = gauss_kronrod(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value,
        error,
    });
    let mut total_err = error;
    let mut subdivisions = 1usize;
    let cap = if soft { SOFT_SUBDIVISIONS } else { MAX_SUBDIVISIONS };
    while total_err > tol {
        if subdivisions >= cap {
            if soft {
                break;
            }
            return Err(Error::MaxSubdivisions);
        }
        let worst = heap.pop().expect("heap non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; accept the estimate
            heap.push(worst);
            break;
        }
        let (lv, le) = gauss_kronrod(&f, worst.a, mid)?;
        let (rv, re) = gauss_kronrod(&f, mid, worst.b)?;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        subdivisions += 1;
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error_estimate: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        subdivisions,
        converged: error_estimate <= tol,
    })
}

/// Integrates f over [a, b] when f behaves like (distance to the given
/// endpoint)^(lambda-1) times a smooth factor, lambda in (0, 1].
///
/// A geometric mesh with ratio [`GRADING_RATIO`] is refined toward the
/// singular endpoint; the remaining tail is extrapolated geometrically from
/// the observed level contraction. Levels that fail to contract by at least
/// a factor 1.1 signal a (numerically) divergent integral.
pub fn integrate_endpoint_singular<F>(
    f: F,
    a: f64,
    b: f64,
    endpoint: Endpoint,
    lambda: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a < b) {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "singular exponent lambda = {lambda} outside (0, 1]"
        )));
    }
    match endpoint {
        Endpoint::Left => graded_left(&f, a, b, tol),
        Endpoint::Right => {
            // mirror x -> a + b - x so the singularity sits at the left end
            let g = |x: f64| f(a + b - x);
            graded_left(&g, a, b, tol)
        }
    }
}

fn graded_left<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    const CONTRACTION: f64 = 1.0 / 1.1;
    let width = b - a;
    // below this distance from the singularity, cancellation when the
    // integrand forms (t - s) internally corrupts evaluations; stop the
    // descent and rely on the validated tail instead
    let noise_floor = 1e4 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut subdivisions = 0usize;
    let mut prev_increment: Option<f64> = None;
    let mut slack_levels = 0usize;
    let mut ratio: f64 = GRADING_RATIO;
    // tail predicted at the previous level; comparing it against what level
    // l actually delivered measures the extrapolation error empirically
    let mut predicted_tail: Option<f64> = None;
    let mut tail_defect = f64::INFINITY;
    for level in 0..MAX_LEVELS {
        let hi = a + width * GRADING_RATIO.powi(level as i32);
        let lo = a + width * GRADING_RATIO.powi(level as i32 + 1);
        if lo - a < noise_floor || hi - lo < f64::EPSILON * width {
            break;
        }
        let panel = integrate_soft(f, lo, hi, tol * 0.05)?;
        subdivisions += panel.subdivisions;
        let last = panel.value;
        if let Some(prev) = prev_increment {
            if prev != 0.0 {
                let q = last.abs() / prev.abs();
                if q > CONTRACTION {
                    slack_levels += 1;
                    if slack_levels >= 2 && level >= 3 {
                        return Err(Error::DivergentIntegral);
                    }
                } else {
                    slack_levels = 0;
                    ratio = q;
                }
            }
        }
        if level >= 2 && panel.error_estimate > 0.1 * panel.value.abs() {
            // evaluation noise dominates the panel; its value is
            // untrustworthy, so close with the tail predicted before it
            break;
        }
        value += panel.value;
        error += panel.error_estimate;
        prev_increment = Some(last);
        let tail = tail_extrapolation(last, ratio.min(0.95));
        if let Some(pred) = predicted_tail {
            // what the previous tail claimed vs what this level realized
            tail_defect = (pred - (last + tail)).abs();
        }
        predicted_tail = Some(tail);
        let tail_error = 2.0 * tail_defect / (1.0 - ratio.min(0.95));
        if level >= 2 && tail_error <= tol * 0.5 {
            value += tail;
            error += tail_error + f64::EPSILON * value.abs();
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                subdivisions,
                converged: error <= tol,
            });
        }
    }
    // ran out of resolvable levels: close with the last validated tail
    if let Some(pred) = predicted_tail {
        let r = ratio.min(0.95);
        let tail_error = if tail_defect.is_finite() {
            2.0 * tail_defect / (1.0 - r)
        } else {
            pred.abs()
        };
        value += pred;
        error += tail_error + f64::EPSILON * value.abs();
    }
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        subdivisions,
        converged: error <= tol,
    })
}

/// Like [`integrate`] but reports failure to converge through the
/// `converged` flag instead of erroring, for callers that can recover.
fn integrate_soft<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate_inner(f, a, b, tol, true)
}

fn tail_extrapolation(last_increment: f64, ratio: f64) -> f64 {
    last_increment * ratio / (1.0 - ratio)
}

/// Gamma function for x > 0 (Lanczos approximation, ~1e-14 relative error).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x).exp())
}

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const COF: [f64; 14] = [
        57.156_235_665_862_923_5,
        -59.597_960_355_475_491_2,
        14.136_097_974_741_747_1,
        -0.491_913_816_097_620_199,
        0.339_946_499_848_118_887e-4,
        0.465_236_289_270_485_756e-4,
        -0.983_744_753_048_795_646e-4,
        0.158_088_703_224_912_494e-3,
        -0.210_264_441_724_104_883e-3,
        0.217_439_618_115_212_643e-3,
        -0.164_318_106_536_763_890e-3,
        0.844_182_239_838_527_433e-4,
        -0.261_908_384_015_814_087e-4,
        0.368_991_826_595_316_234e-5,
    ];
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    for (j, c) in COF.iter().enumerate() {
        ser += c / (x + (j + 1) as f64);
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}
