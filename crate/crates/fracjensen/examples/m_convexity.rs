//! m-convexity certification on a classic function that is m-convex for
//! m near 16/17 but not convex: (x^4 - 5x^3 + 9x^2 - 5x) / 12 on [0, 2].

use fracjensen::mconvex::{certify_grid, max_m};
use fracjensen::ScalarFunction;

fn main() -> fracjensen::Result<()> {
    let phi = ScalarFunction::parse("(x^4 - 5*x^3 + 9*x^2 - 5*x) / 12")?;
    let interval = (0.0, 2.0);

    for m in [1.0, 16.0 / 17.0, 0.5] {
        let report = certify_grid(&phi, interval, m, 25, 2000, 7)?;
        print!("m = {m:.6}: ");
        if report.passes() {
            println!("passes on {} sampled triples", report.samples);
        } else {
            let (x, y, t) = report.witness.unwrap();
            println!(
                "violated by {:.3e} at x = {x:.4}, y = {y:.4}, t = {t:.4}",
                report.worst_violation
            );
        }
    }

    let m_star = max_m(&phi, interval, 25, 1e-4)?;
    println!("largest certified m: {m_star:.6} (16/17 = {:.6})", 16.0 / 17.0);
    Ok(())
}
