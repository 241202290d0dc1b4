//! Monotone simple-function approximation: the dyadic staircase f_n
//! satisfies 0 <= int f dmu - int f_n dmu <= 2^-n (b - a).

use fracjensen::jensen::{simple_approximation, ProbabilityMeasure};
use fracjensen::ScalarFunction;

fn main() -> fracjensen::Result<()> {
    let f = ScalarFunction::parse("x^2")?;
    let mu = ProbabilityMeasure::uniform(0.0, 1.0)?;
    println!("{:>4} {:>18} {:>18} {:>12} {:>12}", "n", "int f_n", "int f", "gap", "bound");
    for n in 1..=12 {
        let r = simple_approximation(&f, 0.0, 1.0, n, &mu)?;
        println!(
            "{n:>4} {:>18.12} {:>18.12} {:>12.3e} {:>12.3e}",
            r.integral,
            r.reference,
            r.reference - r.integral,
            r.bound
        );
    }
    Ok(())
}
