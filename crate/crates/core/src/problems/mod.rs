//! Benchmark problems, user-defined problems, error norms and convergence studies.

pub mod expr;

use rayon::prelude::*;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::fracops::{erfc, gamma_fn};
use crate::quadrature::gauss_legendre;
use crate::scalar::Real;
use crate::solver::{constant, field, solve, ProblemSpec, SpectralSolution};

pub use expr::{parse_expr, EvalError, Expr, ParseError};

/// The three benchmark equations on `[0, 1]`:
///
/// 1. `α = 1/2`, `a = 0.01 t^{5/2}`, `b = 1`, `y = √π (1+t)^{-3/2}`
/// 2. `α = 2/3`, `a = 1/27`, `b(s) = s`, `y = Γ(2/3) t`
/// 3. `α = 1/2`, `a = -1`, `b = 1`, `f = 2√(t/π)`, `y = 1 - e^t erfc(√t)`
pub fn builtin<T: Real>(id: u32) -> Result<ProblemSpec<T>> {
    let lit = T::lit;
    let one = T::one();
    match id {
        1 => {
            let sqrt_pi = T::PI().sqrt();
            let exact = move |t: T| sqrt_pi * (one + t).powf(lit(-1.5));
            ProblemSpec::new(
                lit(0.5),
                one,
                field(move |t: T| lit(0.01) * t.powf(lit(2.5))),
                constant(one),
                field(move |t: T| exact(t) - lit(0.02) * t * t * t / (one + t)),
            )
            .map(|p| p.with_exact(field(exact)).with_name("example-1"))
        }
        2 => {
            let g = gamma_fn(lit(2.0) / lit(3.0))?;
            ProblemSpec::new(
                lit(2.0) / lit(3.0),
                one,
                constant(one / lit(27.0)),
                field(|s: T| s),
                field(move |t: T| g * t - t.powf(lit(8.0) / lit(3.0)) / lit(40.0)),
            )
            .map(|p| p.with_exact(field(move |t: T| g * t)).with_name("example-2"))
        }
        3 => {
            let pi = T::PI();
            ProblemSpec::new(
                lit(0.5),
                one,
                constant(-one),
                constant(one),
                field(move |t: T| lit(2.0) * (t / pi).sqrt()),
            )
            .map(|p| {
                p.with_exact(field(move |t: T| one - t.exp() * erfc(t.sqrt())))
                    .with_name("example-3")
            })
        }
        other => Err(Error::UnknownProblem(other)),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("cannot parse `{field}` expression: {source}")]
    Parse {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Builds a problem from expression sources in the variable `t`.
pub fn parsed_problem<T: Real>(
    alpha: T,
    t_end: T,
    a: &str,
    b: &str,
    f: &str,
    exact: Option<&str>,
) -> Result<ProblemSpec<T>, ProblemError> {
    let parse =
        |field: &'static str, src: &str| parse_expr(src).map_err(|source| ProblemError::Parse { field, source });
    let (a, b, f) = (parse("a", a)?, parse("b", b)?, parse("f", f)?);
    let mut problem = ProblemSpec::new(alpha, t_end, a.to_field(), b.to_field(), f.to_field())?;
    if let Some(src) = exact {
        problem = problem.with_exact(parse("exact", src)?.to_field());
    }
    Ok(problem)
}

const LINF_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms<T> {
    pub l2: T,
    pub linf: T,
}

/// L2 error by a `(2N + 16)`-point Gauss–Legendre rule on `[0, T]`, and
/// max error on a uniform 1001-point grid.
pub fn error_norms<T: Real, F: Fn(T) -> T + ?Sized>(s: &SpectralSolution<T>, exact: &F) -> Result<ErrorNorms<T>> {
    let t_end = s.t_end();
    let mut linf = T::zero();
    for i in 0..LINF_GRID_POINTS {
        let x = t_end * T::of(i) / T::of(LINF_GRID_POINTS - 1);
        linf = linf.max((s.eval(x)? - exact(x)).abs());
    }
    let rule = gauss_legendre::<T>(2 * s.degree() + 16)?;
    let half = t_end / T::lit(2.0);
    let squared = rule.try_integrate(|xi| {
        let x = half * (xi + T::one());
        let e = s.eval(x)? - exact(x);
        Ok::<T, Error>(e * e)
    })? * half;
    Ok(ErrorNorms {
        l2: squared.sqrt(),
        linf,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement<T> {
    pub l2_error: T,
    pub linf_error: T,
    pub cond_estimate: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord<T> {
    pub n: usize,
    pub outcome: Result<Measurement<T>>,
}

impl<T: Real> ConvergenceRecord<T> {
    pub fn measurement(&self) -> Option<&Measurement<T>> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub problem: String,
    /// Sorted by `n`, one per requested degree.
    pub records: Vec<ConvergenceRecord<T>>,
    /// Least-squares slope of `log10(L2)` against `N`.
    pub slope: Option<T>,
}

const FIT_FLOOR: f64 = 1e-14;

/// Solves at each `N` (in parallel) and measures errors against the exact
/// solution. Per-`N` failures are recorded, not propagated.
pub fn convergence_study<T: Real>(p: &ProblemSpec<T>, ns: &[usize]) -> Result<ConvergenceReport<T>> {
    let exact = p.exact().ok_or(Error::NoExactSolution)?;
    let mut sorted = ns.to_vec();
    sorted.sort_unstable();
    if sorted.is_empty() {
        return Err(Error::Parameter("no collocation degrees requested".into()));
    }
    if sorted[0] == 0 {
        return Err(Error::Parameter("collocation degrees must be at least 1".into()));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parameter("collocation degrees must be distinct".into()));
    }
    let records: Vec<ConvergenceRecord<T>> = sorted
        .par_iter()
        .map(|&n| {
            let outcome = solve(p, n).and_then(|s| {
                let norms = error_norms(&s, exact.as_ref())?;
                Ok(Measurement {
                    l2_error: norms.l2,
                    linf_error: norms.linf,
                    cond_estimate: s.condition().unwrap_or(T::nan()),
                })
            });
            ConvergenceRecord { n, outcome }
        })
        .collect();
    let slope = fit_log_slope(&records);
    Ok(ConvergenceReport {
        problem: p.name().to_string(),
        records,
        slope,
    })
}

fn fit_log_slope<T: Real>(records: &[ConvergenceRecord<T>]) -> Option<T> {
    let points: Vec<(T, T)> = records
        .iter()
        .filter_map(|r| {
            let m = r.measurement()?;
            (m.l2_error.is_finite() && m.l2_error > T::lit(FIT_FLOOR)).then(|| (T::of(r.n), m.l2_error.log10()))
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    let count = T::of(points.len());
    let mean_x = points.iter().map(|p| p.0).sum::<T>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<T>() / count;
    let sxy: T = points.iter().map(|&(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: T = points.iter().map(|&(x, _)| (x - mean_x) * (x - mean_x)).sum();
    Some(sxy / sxx)
}
