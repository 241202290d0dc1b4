//! Fractional integral operators J built on a kernel T, and the generalized
//! derivative D of order alpha in (0,1), taken as a central difference of
//! the order-(1-alpha) integral scaled by 1/g'(t).

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::kernel::{self, Alpha, KernelSpec};
use crate::quad::{self, Endpoint, QuadratureResult};

/// Which operator: `Right` is J_{a+} (integrate over [a, t]), `Left` is
/// J_{b-} (integrate over [t, b]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone)]
pub struct OperatorRequest {
    pub kernel: KernelSpec,
    pub f: ScalarFunction,
    pub a: f64,
    pub b: f64,
    pub side: Side,
    pub alpha: Alpha,
    pub t: f64,
    pub tol: f64,
}

impl OperatorRequest {
    fn validate(&self) -> Result<()> {
        if !(self.a < self.b) {
            return Err(Error::Domain(format!(
                "need a < b, got [{}, {}]",
                self.a, self.b
            )));
        }
        if !(self.t >= self.a && self.t <= self.b) {
            return Err(Error::Domain(format!(
                "t = {} outside [{}, {}]",
                self.t, self.a, self.b
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// J_{T,a+}^alpha f(t) = int_a^t f(s)/T(t,s,alpha) ds, or the mirrored
/// J_{T,b-}^alpha for `Side::Left`. Exactly zero on an empty range.
pub fn frac_integral(req: &OperatorRequest) -> Result<QuadratureResult> {
    req.validate()?;
    if req.kernel.name() == "gweighted" {
        req.kernel.validate_interval(req.a, req.b)?;
    }
    let (lo, hi, singular_end) = match req.side {
        Side::Right => (req.a, req.t, Endpoint::Right),
        Side::Left => (req.t, req.b, Endpoint::Left),
    };
    if lo == hi {
        return Ok(QuadratureResult::exact_zero());
    }
    let f = req.f.clone();
    match weighted_quadrature(
        &req.kernel,
        |s| f.eval(s),
        lo,
        hi,
        req.t,
        req.alpha,
        singular_end,
        req.tol,
    ) {
        Ok(r) => Ok(r),
        Err(Error::DivergentIntegral) => {
            // distinguish f outside L^1_T from a genuinely divergent kernel mass
            match weighted_quadrature(
                &req.kernel,
                |s| Ok(f.eval(s)?.abs()),
                lo,
                hi,
                req.t,
                req.alpha,
                singular_end,
                req.tol,
            ) {
                Err(Error::DivergentIntegral) => Err(Error::L1Violation),
                _ => Err(Error::DivergentIntegral),
            }
        }
        Err(e) => Err(e),
    }
}

/// Quadrature of f(s)/T(t, s, alpha) over [lo, hi] with the weak singularity
/// (if any) at the endpoint where s = t.
#[allow(clippy::too_many_arguments)]
pub(crate) fn weighted_quadrature<F>(
    kernel: &KernelSpec,
    f: F,
    lo: f64,
    hi: f64,
    t: f64,
    alpha: Alpha,
    singular_end: Endpoint,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let integrand = |s: f64| -> Result<f64> { Ok(f(s)? / kernel.kernel_t(t, s, alpha)?) };
    match kernel.singular_exponent(alpha)? {
        Some(lambda) => {
            quad::integrate_endpoint_singular(integrand, lo, hi, singular_end, lambda, tol)
        }
        None => quad::integrate(integrand, lo, hi, tol),
    }
}

/// Named Hadamard convenience; identical to `frac_integral` with the
/// Hadamard kernel.
#[allow(clippy::too_many_arguments)]
pub fn hadamard_integral(
    f: &ScalarFunction,
    a: f64,
    b: f64,
    side: Side,
    alpha: Alpha,
    t: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "Hadamard integral requires 0 < a, got a = {a}"
        )));
    }
    frac_integral(&OperatorRequest {
        kernel: kernel::make_hadamard(),
        f: f.clone(),
        a,
        b,
        side,
        alpha,
        t,
        tol,
    })
}

/// Default central-difference step for the generalized derivative.
pub fn default_derivative_step(tol: f64) -> f64 {
    (1e-5f64).max(tol.cbrt())
}

/// D_{T,a+}^alpha f(t) = (1/g'(t)) d/dt J_{T,a+}^{1-alpha} f(t); the left
/// side carries a minus sign. The t-derivative is a central difference with
/// step h, so the map t -> J^{1-alpha} f(t) is assumed C^1 near t.
pub fn frac_derivative(req: &OperatorRequest, h: f64) -> Result<f64> {
    req.validate()?;
    let alpha = Alpha::for_derivative(req.alpha.value())?;
    if !(h > 0.0) {
        return Err(Error::Domain("step h must be positive".into()));
    }
    if req.t - h <= req.a || req.t + h >= req.b {
        return Err(Error::StepTooLarge);
    }
    let inner = Alpha::new(1.0 - alpha.value())?;
    let at = |t: f64| -> Result<f64> {
        let r = frac_integral(&OperatorRequest {
            t,
            alpha: inner,
            ..req.clone()
        })?;
        Ok(r.value)
    };
    let diff = (at(req.t + h)? - at(req.t - h)?) / (2.0 * h);
    let gp = req.kernel.g_prime(req.t)?;
    let sign = match req.side {
        Side::Right => 1.0,
        Side::Left => -1.0,
    };
    Ok(sign * diff / gp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{make_hadamard, make_riemann_liouville};
    use crate::quad::gamma_fn;
    use approx::assert_relative_eq;

    fn rl_request(f: &str, a: f64, b: f64, side: Side, alpha: f64, t: f64) -> OperatorRequest {
        OperatorRequest {
            kernel: make_riemann_liouville(),
            f: ScalarFunction::parse(f).unwrap(),
            a,
            b,
            side,
            alpha: Alpha::new(alpha).unwrap(),
            t,
            tol: 1e-9,
        }
    }

    #[test]
    fn rl_of_constant() {
        // J^alpha 1 (t) = (t-a)^alpha / Gamma(alpha+1)
        let req = rl_request("1", 0.0, 2.0, Side::Right, 0.5, 1.0);
        let r = frac_integral(&req).unwrap();
        assert_relative_eq!(r.value, 1.0 / gamma_fn(1.5).unwrap(), max_relative = 1e-7);
    }

    #[test]
    fn rl_of_identity() {
        // J^0.5 s (1) = Gamma(2)/Gamma(2.5)
        let req = rl_request("x", 0.0, 2.0, Side::Right, 0.5, 1.0);
        let r = frac_integral(&req).unwrap();
        assert_relative_eq!(
            r.value,
            gamma_fn(2.0).unwrap() / gamma_fn(2.5).unwrap(),
            max_relative = 1e-7
        );
    }

    #[test]
    fn empty_range_is_exactly_zero() {
        let req = rl_request("x^2", 0.0, 2.0, Side::Right, 0.5, 0.0);
        let r = frac_integral(&req).unwrap();
        assert_eq!(r.value, 0.0);
        let req = rl_request("x^2", 0.0, 2.0, Side::Left, 0.5, 2.0);
        assert_eq!(frac_integral(&req).unwrap().value, 0.0);
    }

    #[test]
    fn rl_closed_forms_for_monomials() {
        // J^alpha (s-a)^beta (t) = Gamma(beta+1)/Gamma(alpha+beta+1) (t-a)^(alpha+beta)
        for &beta in &[0.0, 1.0, 2.0] {
            for &alpha in &[0.25, 0.5, 0.75] {
                for &t in &[0.3, 1.0, 1.7] {
                    let f = format!("x^{beta}");
                    let req = rl_request(&f, 0.0, 2.0, Side::Right, alpha, t);
                    let r = frac_integral(&req)
                        .unwrap_or_else(|e| panic!("beta={beta} alpha={alpha} t={t}: {e}"));
                    let oracle = gamma_fn(beta + 1.0).unwrap()
                        / gamma_fn(alpha + beta + 1.0).unwrap()
                        * t.powf(alpha + beta);
                    assert_relative_eq!(r.value, oracle, max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn linearity() {
        let alpha = 0.5;
        let t = 1.3;
        let j = |expr: &str| {
            frac_integral(&rl_request(expr, 0.0, 2.0, Side::Right, alpha, t))
                .unwrap()
                .value
        };
        let combined = j("3*sin(x) + 2*x^2");
        assert_relative_eq!(combined, 3.0 * j("sin(x)") + 2.0 * j("x^2"), epsilon = 1e-8);
    }

    #[test]
    fn split_additivity() {
        // direct [a, t] equals the sum of quadratures split at an interior c
        let req = rl_request("exp(x)", 0.0, 2.0, Side::Right, 0.5, 1.5);
        let direct = frac_integral(&req).unwrap();
        let kernel = make_riemann_liouville();
        let alpha = Alpha::new(0.5).unwrap();
        let f = req.f.clone();
        let c = 0.6;
        let outer = quad::integrate(
            |s| Ok(f.eval(s)? / kernel.kernel_t(1.5, s, alpha)?),
            0.0,
            c,
            1e-10,
        )
        .unwrap();
        let inner = quad::integrate_endpoint_singular(
            |s| Ok(f.eval(s)? / kernel.kernel_t(1.5, s, alpha)?),
            c,
            1.5,
            quad::Endpoint::Right,
            0.5,
            1e-10,
        )
        .unwrap();
        let budget = direct.error_estimate + outer.error_estimate + inner.error_estimate;
        assert!((direct.value - outer.value - inner.value).abs() <= budget.max(1e-10) * 3.0);
    }

    #[test]
    fn right_left_mirror() {
        // f even about the midpoint of [0, 2]
        let f = "(x-1)^2";
        let delta = 0.4;
        let right = frac_integral(&rl_request(f, 0.0, 2.0, Side::Right, 0.5, 0.0 + 2.0 - delta));
        let right = right.unwrap().value;
        let left = frac_integral(&rl_request(f, 0.0, 2.0, Side::Left, 0.5, delta))
            .unwrap()
            .value;
        // J_{a+} at b - delta mirrors J_{b-} at a + delta
        assert_relative_eq!(right, left, epsilon = 1e-8);
    }

    #[test]
    fn hadamard_oracle() {
        // H^alpha 1 (t) = (log(t/a))^alpha / Gamma(alpha+1), a = 1
        let one = ScalarFunction::parse("1").unwrap();
        let e = std::f64::consts::E;
        for &(alpha, t) in &[(0.5, e), (0.5, e * e), (1.0, e), (1.0, e * e)] {
            let r = hadamard_integral(
                &one,
                1.0,
                e * e + 1.0,
                Side::Right,
                Alpha::new(alpha).unwrap(),
                t,
                1e-9,
            )
            .unwrap();
            let oracle = (t.ln()).powf(alpha) / gamma_fn(alpha + 1.0).unwrap();
            assert_relative_eq!(r.value, oracle, max_relative = 1e-6);
        }
        // t = a gives exactly zero
        let r = hadamard_integral(
            &one,
            1.0,
            e,
            Side::Right,
            Alpha::new(0.5).unwrap(),
            1.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn hadamard_equals_generic_path() {
        let f = ScalarFunction::parse("x^2").unwrap();
        let alpha = Alpha::new(0.6).unwrap();
        let via_named = hadamard_integral(&f, 1.0, 4.0, Side::Right, alpha, 3.0, 1e-11)
            .unwrap()
            .value;
        let via_kernel = frac_integral(&OperatorRequest {
            kernel: make_hadamard(),
            f,
            a: 1.0,
            b: 4.0,
            side: Side::Right,
            alpha,
            t: 3.0,
            tol: 1e-11,
        })
        .unwrap()
        .value;
        assert_relative_eq!(via_named, via_kernel, epsilon = 1e-10);
    }

    #[test]
    fn derivative_of_zero_is_zero() {
        let req = rl_request("0", 0.0, 2.0, Side::Right, 0.5, 1.0);
        let d = frac_derivative(&req, 1e-4).unwrap();
        assert!(d.abs() < 1e-8, "{d}");
    }

    #[test]
    fn rl_derivative_of_identity() {
        // D^0.5 s (t) = t^0.5 / Gamma(1.5)
        let req = rl_request("x", 0.0, 2.0, Side::Right, 0.5, 1.0);
        let d = frac_derivative(&req, 1e-4).unwrap();
        assert!((d - 1.0 / gamma_fn(1.5).unwrap()).abs() < 1e-4, "{d}");
    }

    #[test]
    fn derivative_inverts_integral() {
        // D^alpha J^alpha f = f for the RL kernel; f(s) = s^2 at t = 0.7
        let kernel = make_riemann_liouville();
        let alpha = Alpha::new(0.5).unwrap();
        let inner_req = rl_request("x^2", 0.0, 2.0, Side::Right, 0.5, 0.7);
        let j_of_f = ScalarFunction::native("J^a f", move |t| {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let r = frac_integral(&OperatorRequest {
                kernel: kernel.clone(),
                f: ScalarFunction::parse("x^2").unwrap(),
                a: 0.0,
                b: 2.0,
                side: Side::Right,
                alpha,
                t,
                tol: 1e-10,
            })?;
            Ok(r.value)
        });
        let req = OperatorRequest {
            f: j_of_f,
            ..inner_req
        };
        let d = frac_derivative(&req, 1e-4).unwrap();
        assert!((d - 0.49).abs() < 1e-3, "{d}");
    }

    #[test]
    fn step_too_large() {
        let req = rl_request("x", 0.0, 2.0, Side::Right, 0.5, 1.9);
        assert!(matches!(
            frac_derivative(&req, 0.5),
            Err(Error::StepTooLarge)
        ));
    }

    use crate::quad;
}
