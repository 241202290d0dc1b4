//! The fractional derivative undoes the fractional integral: applying
//! D^alpha to J^alpha f recovers f pointwise.

use fracjensen::operators::{frac_derivative, frac_integral, OperatorRequest, Side};
use fracjensen::{make_riemann_liouville, Alpha, ScalarFunction};

fn main() -> fracjensen::Result<()> {
    let kernel = make_riemann_liouville();
    let alpha = Alpha::new(0.5)?;
    let j_of_f = ScalarFunction::native("J^0.5 x^2", {
        let kernel = kernel.clone();
        move |t| {
            if t <= 0.0 {
                return Ok(0.0);
            }
            Ok(frac_integral(&OperatorRequest {
                kernel: kernel.clone(),
                f: ScalarFunction::parse("x^2")?,
                a: 0.0,
                b: 2.0,
                side: Side::Right,
                alpha,
                t,
                tol: 1e-10,
            })?
            .value)
        }
    });
    println!("{:>6} {:>22} {:>22} {:>10}", "t", "D(J f)(t)", "f(t)", "abs err");
    for i in 0..10 {
        let t = 0.2 + 1.6 * i as f64 / 9.0;
        let d = frac_derivative(
            &OperatorRequest {
                kernel: kernel.clone(),
                f: j_of_f.clone(),
                a: 0.0,
                b: 2.0,
                side: Side::Right,
                alpha,
                t,
                tol: 1e-9,
            },
            1e-4,
        )?;
        println!("{t:>6.3} {d:>22.15e} {:>22.15e} {:>10.2e}", t * t, (d - t * t).abs());
    }
    Ok(())
}
