//! Hadamard fractional integral of f = 1: the exact value is
//! log(t/a)^alpha / Gamma(alpha + 1).

use fracjensen::operators::{hadamard_integral, Side};
use fracjensen::{gamma_fn, Alpha, ScalarFunction};

fn main() -> fracjensen::Result<()> {
    let one = ScalarFunction::parse("1")?;
    let a = 1.0;
    println!("{:>6} {:>8} {:>22} {:>22} {:>10}", "alpha", "t", "computed", "exact", "rel err");
    for alpha in [0.3, 0.5, 0.8, 1.0] {
        for t in [1.5, std::f64::consts::E, 5.0] {
            let r = hadamard_integral(&one, a, 6.0, Side::Right, Alpha::new(alpha)?, t, 1e-9)?;
            let exact = (t / a).ln().powf(alpha) / gamma_fn(alpha + 1.0)?;
            println!(
                "{alpha:>6} {t:>8.4} {:>22.15e} {exact:>22.15e} {:>10.2e}",
                r.value,
                (r.value - exact).abs() / exact
            );
        }
    }
    Ok(())
}
