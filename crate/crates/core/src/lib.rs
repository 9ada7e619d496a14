//! Legendre spectral-collocation solver for second-kind fractional integral
//! equations
//!
//! ```text
//! y(x) = a(x) · I^α{b(x) y(x)} + f(x),   x ∈ [0, T],   0 < α < 1,
//! ```
//!
//! where `I^α` is the Riemann–Liouville fractional integral.
//!
//! The numerical core is generic over the scalar type through [`Real`]
//! (implemented for `f32` and `f64`). The aliases below fix the scalar to
//! `f64`, which is what the benchmarks and the command-line tool use.
//!
//! ```
//! use fracspec::{builtin, solve};
//!
//! let problem = builtin::<f64>(1).unwrap();
//! let solution = solve(&problem, 12).unwrap();
//! let exact = problem.exact().unwrap();
//! assert!((solution.eval(0.5).unwrap() - exact(0.5)).abs() < 1e-8);
//! ```

// `!(x > lo)` is used throughout to reject NaN together with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fracops;
pub mod linalg;
pub mod orthopoly;
pub mod problems;
pub mod quadrature;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use fracops::{erfc, gamma_fn, rl_monomial, rl_numeric, rl_poly, MonomialTerm};
pub use orthopoly::{
    jacobi_eval, jacobi_norm, legendre_deriv, legendre_eval_all, nodal_to_modal, series_eval, LegendreSeries,
};
pub use problems::{builtin, convergence_study, error_norms, parse_expr, parsed_problem, Expr, ParseError};
pub use quadrature::{
    gauss_jacobi, gauss_legendre, gauss_lobatto_legendre, integrate, jacobi_recurrence, Family, QuadratureRule,
};
pub use scalar::Real;
pub use solver::{
    assemble, constant, eval_solution, field, map_problem, residual, solve, solve_linear, CollocationSystem, Field,
    MappedProblem, ProblemSpec, SpectralSolution,
};

pub type Rule = QuadratureRule<f64>;
pub type Series = LegendreSeries<f64>;
pub type Problem = ProblemSpec<f64>;
pub type Mapped = MappedProblem<f64>;
pub type System = CollocationSystem<f64>;
pub type Solution = SpectralSolution<f64>;
pub type Report = problems::ConvergenceReport<f64>;
pub type Term = MonomialTerm<f64>;
