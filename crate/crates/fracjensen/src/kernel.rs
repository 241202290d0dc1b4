//! Kernel data (g, g', G) for the generalized fractional integral operators,
//! the kernel evaluation T(t, s, alpha) = G(|g(t) - g(s)|, alpha) / g'(s),
//! and the normalizing constant that turns 1/T(d, ., alpha) into a
//! probability density on [c, d].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::ScalarFunction;
use crate::quad::{self, Endpoint, QuadratureResult};

/// Fractional order. Positive for integrals; restricted to (0, 1) where a
/// derivative of order 1 - alpha is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Alpha(value))
        } else {
            Err(Error::Domain(format!("alpha must be positive, got {value}")))
        }
    }

    pub fn for_derivative(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::Domain(format!(
                "derivative order must lie in (0, 1), got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Clone)]
enum BigG {
    /// G(x, alpha) = Gamma(alpha) x^(1 - alpha), shared by the built-in
    /// Riemann-Liouville, Hadamard and g-weighted kernels.
    PowerLaw,
    Custom(Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>),
}

/// The triple (g, g', G) plus a name tag.
#[derive(Clone)]
pub struct KernelSpec {
    name: String,
    g: ScalarFunction,
    g_prime: ScalarFunction,
    big_g: BigG,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec").field("name", &self.name).finish()
    }
}

/// Riemann-Liouville kernel: g(t) = t, T(t,s,alpha) = Gamma(alpha)|t-s|^(1-alpha).
pub fn make_riemann_liouville() -> KernelSpec {
    KernelSpec {
        name: "rl".into(),
        g: ScalarFunction::parse("x").unwrap(),
        g_prime: ScalarFunction::parse("1").unwrap(),
        big_g: BigG::PowerLaw,
    }
}

/// Hadamard kernel: g(t) = log t, T(t,s,alpha) = Gamma(alpha) s |log(t/s)|^(1-alpha).
/// The g'(s) = 1/s factor carries the f(s)/s weight of the classical
/// Hadamard integral.
pub fn make_hadamard() -> KernelSpec {
    KernelSpec {
        name: "hadamard".into(),
        g: ScalarFunction::parse("log(x)").unwrap(),
        g_prime: ScalarFunction::parse("1/x").unwrap(),
        big_g: BigG::PowerLaw,
    }
}

/// Kernel for the fractional integral with respect to an increasing g:
/// T(t,s,alpha) = Gamma(alpha) |g(t)-g(s)|^(1-alpha) / g'(s).
///
/// If g carries a domain hint, monotonicity and positivity of g' are
/// spot-checked on a 64-point grid right away; otherwise the check runs when
/// an operator fixes the working interval.
pub fn make_g_weighted(g: ScalarFunction, g_prime: ScalarFunction) -> Result<KernelSpec> {
    let spec = KernelSpec {
        name: "gweighted".into(),
        g,
        g_prime,
        big_g: BigG::PowerLaw,
    };
    if let Some((lo, hi)) = spec.g.domain_hint() {
        spec.validate_interval(lo, hi)?;
    }
    Ok(spec)
}

/// Kernel with a caller-supplied G(x, alpha).
pub fn make_custom<G>(
    name: &str,
    g: ScalarFunction,
    g_prime: ScalarFunction,
    big_g: G,
) -> KernelSpec
where
    G: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
{
    KernelSpec {
        name: name.into(),
        g,
        g_prime,
        big_g: BigG::Custom(Arc::new(big_g)),
    }
}

impl KernelSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self, t: f64) -> Result<f64> {
        self.g.eval(t)
    }

    /// g'(s); errors if the derivative is not strictly positive there.
    pub fn g_prime(&self, s: f64) -> Result<f64> {
        let v = self.g_prime.eval(s)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Validation(format!("g'({s}) = {v} is not positive")))
        }
    }

    pub fn big_g(&self, x: f64, alpha: Alpha) -> Result<f64> {
        let v = match &self.big_g {
            BigG::PowerLaw => quad::gamma_fn(alpha.value())? * x.powf(1.0 - alpha.value()),
            BigG::Custom(f) => f(x, alpha.value())?,
        };
        if x > 0.0 && !(v > 0.0) {
            return Err(Error::Validation(format!(
                "G({x}, {}) = {v} is not positive",
                alpha.value()
            )));
        }
        Ok(v)
    }

    /// T(t, s, alpha) = G(|g(t) - g(s)|, alpha) / g'(s).
    pub fn kernel_t(&self, t: f64, s: f64, alpha: Alpha) -> Result<f64> {
        let gp = self.g_prime(s)?;
        let x = (self.g(t)? - self.g(s)?).abs();
        if x == 0.0 {
            let g0 = self.big_g(0.0, alpha)?;
            if g0 == 0.0 || !g0.is_finite() {
                return Err(Error::SingularKernel);
            }
            return Ok(g0 / gp);
        }
        Ok(self.big_g(x, alpha)? / gp)
    }

    /// Exponent lambda such that 1/T(t, s, alpha) ~ |t - s|^(lambda - 1)
    /// near s = t, or None when the integrand is regular there.
    ///
    /// For the power-law G this is alpha itself; for a custom G the local
    /// behavior G(x, alpha) ~ x^p is probed numerically over p in {0, 1-alpha}.
    pub fn singular_exponent(&self, alpha: Alpha) -> Result<Option<f64>> {
        match &self.big_g {
            BigG::PowerLaw => {
                if alpha.value() < 1.0 {
                    Ok(Some(alpha.value()))
                } else {
                    Ok(None)
                }
            }
            BigG::Custom(f) => {
                let probe = |p: f64| -> Result<f64> {
                    // variation of G(x)/x^p between two small x; flat means good fit
                    let x1 = 1e-4;
                    let x2 = 1e-6;
                    let r1 = f(x1, alpha.value())? / x1.powf(p);
                    let r2 = f(x2, alpha.value())? / x2.powf(p);
                    if r1 <= 0.0 || r2 <= 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    Ok((r1 / r2).ln().abs())
                };
                let flat0 = probe(0.0)?;
                let p_sing = 1.0 - alpha.value();
                if p_sing <= 0.0 {
                    return Ok(None);
                }
                let flat_sing = probe(p_sing)?;
                if flat0 <= flat_sing {
                    Ok(None)
                } else {
                    Ok(Some(alpha.value()))
                }
            }
        }
    }

    /// Spot-checks on a 64-point grid that g is increasing with positive
    /// derivative on [lo, hi]. Returns warnings for soft conditions
    /// (positivity of g itself).
    pub fn validate_interval(&self, lo: f64, hi: f64) -> Result<Vec<String>> {
        if !(lo < hi) {
            return Err(Error::Validation(format!("bad interval [{lo}, {hi}]")));
        }
        let n = 64;
        let mut warnings = Vec::new();
        let mut prev: Option<f64> = None;
        let mut warned_positive = false;
        for i in 0..=n {
            // stay strictly inside: g' need only exist on the open interval
            let frac = (i as f64 + 0.5) / (n as f64 + 1.0);
            let s = lo + (hi - lo) * frac;
            let gv = self.g(s)?;
            self.g_prime(s)?;
            if let Some(p) = prev {
                if gv <= p {
                    return Err(Error::Validation(format!(
                        "g is not increasing near s = {s}"
                    )));
                }
            }
            if gv <= 0.0 && !warned_positive {
                warnings.push(format!("g({s}) = {gv} is not positive (allowed, see case A)"));
                warned_positive = true;
            }
            prev = Some(gv);
        }
        Ok(warnings)
    }

    /// Normalizer of the fractional-kernel probability density on [c, d]:
    /// the total mass of 1/T(d, s, alpha) ds, computed in the substituted
    /// variable x = g(d) - g(s) to tame the endpoint singularity.
    pub fn normalizer(&self, c: f64, d: f64, alpha: Alpha, tol: f64) -> Result<QuadratureResult> {
        if !(c < d) {
            return Err(Error::Domain(format!("need c < d, got [{c}, {d}]")));
        }
        let upper = self.g(d)? - self.g(c)?;
        if !(upper > 0.0) {
            return Err(Error::Validation(
                "g(d) - g(c) must be positive for the normalizer".into(),
            ));
        }
        let integrand = |x: f64| -> Result<f64> {
            let g = self.big_g(x, alpha)?;
            if g <= 0.0 {
                return Err(Error::Validation(format!("G({x}) not positive")));
            }
            Ok(1.0 / g)
        };
        match self.singular_exponent(alpha)? {
            Some(lambda) => {
                quad::integrate_endpoint_singular(integrand, 0.0, upper, Endpoint::Left, lambda, tol)
            }
            None => quad::integrate(integrand, 0.0, upper, tol),
        }
    }
}
