//! The normalizing constant T(alpha) = integral of 1/T(d, s, alpha) over [c, d]
//! for the three built-in kernel families. For the power-law G all of them
//! reduce to (g(d) - g(c))^alpha / Gamma(alpha + 1).

use fracjensen::{gamma_fn, make_g_weighted, make_hadamard, make_riemann_liouville, Alpha, ScalarFunction};

fn main() -> fracjensen::Result<()> {
    let kernels = [
        (make_riemann_liouville(), 0.0, 1.0),
        (make_hadamard(), 1.0, std::f64::consts::E),
        (make_g_weighted(ScalarFunction::parse("x^2")?, ScalarFunction::parse("2*x")?)?, 1.0, 2.0),
    ];
    println!("{:>10} {:>6} {:>22} {:>22} {:>10}", "kernel", "alpha", "computed", "exact", "abs err");
    for (kernel, c, d) in &kernels {
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let r = kernel.normalizer(*c, *d, Alpha::new(alpha)?, 1e-9)?;
            let span = kernel.g(*d)? - kernel.g(*c)?;
            let exact = span.powf(alpha) / gamma_fn(alpha + 1.0)?;
            println!(
                "{:>10} {alpha:>6} {:>22.15e} {exact:>22.15e} {:>10.2e}",
                kernel.name(),
                r.value,
                (r.value - exact).abs()
            );
        }
    }
    Ok(())
}
