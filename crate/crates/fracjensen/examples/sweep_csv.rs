//! Job-file driven parameter sweep, emitting the same CSV the `fracjensen`
//! binary writes. Runs are deterministic for a fixed seed.

use fracjensen::cli::{emit_csv, execute, parse_job};

const JOB: &str = "\
command = sweep
inequality = fractional_mercer
phi = x^2
f = x
a = 0
b = 1
c = 0
d = 1
alpha = 0.25:1:4
m = 0.25:1:4
seed = 42
format = csv
";

fn main() -> fracjensen::Result<()> {
    let spec = parse_job(JOB)?;
    let outcome = execute(&spec)?;
    print!("{}", emit_csv(&outcome.rows));
    eprintln!("exit code would be {}", outcome.exit_code);
    Ok(())
}
