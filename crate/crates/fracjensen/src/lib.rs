//! Numerical toolkit for generalized Riemann-Liouville-type fractional
//! integral operators and for slack certificates of Jensen- and Mercer-type
//! inequalities for convex and m-convex functions.
//!
//! The crate is organized around six pieces:
//!
//! - [`expr`]: a small parser/evaluator for scalar functions of one variable,
//!   so test functions can be given as text (`"x^2"`, `"exp(x)"`, ...).
//! - [`quad`]: adaptive quadrature, including a graded geometric mesh for
//!   endpoint singularities of type x^(lambda-1), and the gamma function.
//! - [`kernel`]: the kernel triple (g, g', G), the weight
//!   T(t,s,alpha) = G(|g(t)-g(s)|,alpha)/g'(s), and its normalizer.
//! - [`operators`]: the fractional integral J and generalized derivative D
//!   built on that kernel, with Riemann-Liouville and Hadamard
//!   specializations.
//! - [`mconvex`]: empirical certification/refutation of m-convexity.
//! - [`jensen`]: both sides and the slack of every Jensen/Mercer-type
//!   inequality handled here, over discrete, density and fractional-kernel
//!   probability measures, plus a seeded counterexample search.
//!
//! The [`cli`] module drives all of the above from line-oriented job files;
//! see the `fracjensen` binary and the `examples/` directory.

pub mod cli;
pub mod error;
pub mod expr;
pub mod jensen;
pub mod kernel;
pub mod mconvex;
pub mod operators;
pub mod quad;

pub use error::{Error, Result};
pub use expr::ScalarFunction;
pub use kernel::{make_g_weighted, make_hadamard, make_riemann_liouville, Alpha, KernelSpec};
pub use quad::{gamma_fn, QuadratureResult};
