//! Riemann-Liouville fractional integral of monomials, compared against the
//! closed form Gamma(b+1)/Gamma(a+b+1) * t^(a+b).

use fracjensen::operators::{frac_integral, OperatorRequest, Side};
use fracjensen::{gamma_fn, make_riemann_liouville, Alpha, ScalarFunction};

fn main() -> fracjensen::Result<()> {
    let kernel = make_riemann_liouville();
    println!("{:>6} {:>6} {:>6} {:>22} {:>22} {:>10}", "beta", "alpha", "t", "computed", "exact", "rel err");
    for beta in [0.0, 1.0, 2.0] {
        for alpha in [0.25, 0.5, 0.75] {
            for t in [0.3, 1.0, 1.7] {
                let r = frac_integral(&OperatorRequest {
                    kernel: kernel.clone(),
                    f: ScalarFunction::parse(&format!("x^{beta}"))?,
                    a: 0.0,
                    b: 2.0,
                    side: Side::Right,
                    alpha: Alpha::new(alpha)?,
                    t,
                    tol: 1e-9,
                })?;
                let exact = gamma_fn(beta + 1.0)? / gamma_fn(alpha + beta + 1.0)? * t.powf(alpha + beta);
                println!(
                    "{beta:>6} {alpha:>6} {t:>6} {:>22.15e} {exact:>22.15e} {:>10.2e}",
                    r.value,
                    (r.value - exact).abs() / exact
                );
            }
        }
    }
    Ok(())
}
