//! Mercer's inequality under the fractional-integral mean: the measure is
//! the Riemann-Liouville weight on [c, d], and the slack is reported over a
//! grid of (alpha, m).

use fracjensen::jensen::fractional_mercer;
use fracjensen::{make_riemann_liouville, Alpha, ScalarFunction};

fn main() -> fracjensen::Result<()> {
    let kernel = make_riemann_liouville();
    let phi = ScalarFunction::parse("x^2")?;
    let f = ScalarFunction::parse("x")?;
    let (c, d) = (0.0, 1.0);
    let (a, b) = (0.0, 1.0);

    println!("{:>6} {:>6} {:>14} {:>14} {:>14} {:>10}", "alpha", "m", "lhs", "rhs", "slack", "quad err");
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        for m in [0.5, 0.75, 1.0] {
            let r = fractional_mercer(&kernel, &phi, &f, c, d, Alpha::new(alpha)?, a, b, m, 1e-9)?;
            println!(
                "{alpha:>6} {m:>6} {:>14.8} {:>14.8} {:>14.8} {:>10.2e}",
                r.lhs, r.rhs, r.slack, r.quadrature_error
            );
        }
    }
    println!("\nat alpha = 0.5, m = 1 the slack equals 16/45 = {:.10}", 16.0 / 45.0);
    Ok(())
}
