//! Legendre spectral collocation for
//!
//! ```text
//! y(x) = a(x) · I^α{b(x) y(x)} + f(x),   x ∈ [0, T],   0 < α < 1.
//! ```
//!
//! The equation is moved to [-1, 1] by `x = T(t + 1)/2`, and the memory
//! integral over `[-1, t]` is rescaled to [-1, 1] through
//! `μ(t, θ) = (t + 1)θ/2 + (t - 1)/2`, which turns the kernel into the
//! Jacobi weight `(1 - θ)^{α-1}`:
//!
//! ```text
//! Y(t) = T^α/(4^α Γ(α)) (t + 1)^α A(t) ∫ (1 - θ)^{α-1} B(μ) Y(μ) dθ + F(t).
//! ```
//!
//! The unknown `U = Σ u_i L_i` is found from the modal system
//! `(I - K) u = f̂`, where `f̂` is the discrete Legendre transform of `F` at
//! the LGL nodes and `K` maps input modes to the transformed integral term,
//! evaluated with an (N+1)-point LGL rule in `t` and an (N+1)-point
//! Gauss–Jacobi(α-1, 0) rule in `θ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fracops::{gamma_fn, rl_numeric};
use crate::linalg::{LuFactors, Matrix};
use crate::orthopoly::{discrete_norm, legendre_values_unchecked, nodal_to_modal, LegendreSeries};
use crate::quadrature::{cached_rule, Family};
use crate::scalar::Real;

/// A real coefficient field of the equation.
pub type Field<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

pub fn field<T, F>(f: F) -> Field<T>
where
    F: Fn(T) -> T + Send + Sync + 'static,
{
    Arc::new(f)
}

pub fn constant<T: Real>(c: T) -> Field<T> {
    Arc::new(move |_| c)
}

/// Equation data on `[0, T]`.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    name: String,
    alpha: T,
    t_end: T,
    a: Field<T>,
    b: Field<T>,
    f: Field<T>,
    exact: Option<Field<T>>,
}

impl<T: Real> ProblemSpec<T> {
    pub fn new(alpha: T, t_end: T, a: Field<T>, b: Field<T>, f: Field<T>) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(Error::Parameter(format!("T must be positive and finite, got {t_end}")));
        }
        Ok(Self {
            name: "custom".into(),
            alpha,
            t_end,
            a,
            b,
            f,
            exact: None,
        })
    }

    pub fn with_exact(mut self, exact: Field<T>) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same problem with the forcing replaced; the exact solution is dropped.
    pub fn with_forcing(&self, f: Field<T>) -> Self {
        Self {
            f,
            exact: None,
            ..self.clone()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn a(&self, x: T) -> T {
        (self.a)(x)
    }

    pub fn b(&self, x: T) -> T {
        (self.b)(x)
    }

    pub fn f(&self, x: T) -> T {
        (self.f)(x)
    }

    pub fn exact(&self) -> Option<&Field<T>> {
        self.exact.as_ref()
    }
}

impl<T: Real> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("t_end", &self.t_end)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// `μ(t, θ) = (t + 1)θ/2 + (t - 1)/2`; maps θ ∈ [-1, 1] onto [-1, t].
pub fn kernel_point<T: Real>(t: T, theta: T) -> T {
    let half = T::lit(0.5);
    (t + T::one()) * half * theta + (t - T::one()) * half
}

/// The problem rewritten on the reference interval [-1, 1].
#[derive(Clone)]
pub struct MappedProblem<T> {
    problem: ProblemSpec<T>,
}

impl<T: Real> fmt::Debug for MappedProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappedProblem").field("problem", &self.problem).finish()
    }
}

impl<T: Real> MappedProblem<T> {
    pub fn alpha(&self) -> T {
        self.problem.alpha
    }

    pub fn t_end(&self) -> T {
        self.problem.t_end
    }

    /// `x = T(t + 1)/2`.
    pub fn to_physical(&self, t: T) -> T {
        self.problem.t_end * (t + T::one()) * T::lit(0.5)
    }

    /// `t = 2x/T - 1`.
    pub fn to_reference(&self, x: T) -> T {
        T::lit(2.0) * x / self.problem.t_end - T::one()
    }

    pub fn coeff_a(&self, t: T) -> T {
        self.problem.a(self.to_physical(t))
    }

    pub fn coeff_b(&self, t: T) -> T {
        self.problem.b(self.to_physical(t))
    }

    pub fn forcing(&self, t: T) -> T {
        self.problem.f(self.to_physical(t))
    }

    /// `T^α / (4^α Γ(α))`, the constant in front of the mapped integral term.
    pub fn kernel_scale(&self) -> Result<T> {
        let alpha = self.alpha();
        Ok(self.t_end().powf(alpha) / (T::lit(4.0).powf(alpha) * gamma_fn(alpha)?))
    }

    pub fn problem(&self) -> &ProblemSpec<T> {
        &self.problem
    }
}

pub fn map_problem<T: Real>(p: &ProblemSpec<T>) -> MappedProblem<T> {
    MappedProblem { problem: p.clone() }
}

/// Modal collocation system `(I - K) u = f̂`.
#[derive(Debug, Clone)]
pub struct CollocationSystem<T> {
    n: usize,
    kernel: Matrix<T>,
    matrix: Matrix<T>,
    rhs: Vec<T>,
    condition: Option<T>,
}

impl<T: Real> CollocationSystem<T> {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// `K`, with `K[(i, m)]` the `L_i` coefficient of the integral term for input `L_m`.
    pub fn kernel(&self) -> &Matrix<T> {
        &self.kernel
    }

    /// `I - K`.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    /// 1-norm condition estimate, available after [`solve_linear`].
    pub fn condition(&self) -> Option<T> {
        self.condition
    }

    /// Builds a system directly from a matrix and right-hand side.
    pub fn from_parts(matrix: Matrix<T>, rhs: Vec<T>) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n || rhs.len() != n || n == 0 {
            return Err(Error::SizeMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut kernel = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                kernel[(i, j)] = kernel[(i, j)] - matrix[(i, j)];
            }
        }
        Ok(Self {
            n: n - 1,
            kernel,
            matrix,
            rhs,
            condition: None,
        })
    }
}

fn finite<T: Real>(v: T, what: &'static str) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn assemble<T: Real>(mp: &MappedProblem<T>, n: usize) -> Result<CollocationSystem<T>> {
    if n == 0 {
        return Err(Error::Parameter("collocation degree N must be at least 1".into()));
    }
    let alpha = mp.alpha();
    let lgl = cached_rule::<T>(Family::GaussLobattoLegendre, n)?;
    let jacobi = cached_rule(
        Family::GaussJacobi {
            q1: alpha - T::one(),
            q2: T::zero(),
        },
        n + 1,
    )?;
    let scale = mp.kernel_scale()?;
    let size = n + 1;
    let mut kernel = Matrix::zeros(size, size);
    let mut forcing = Vec::with_capacity(size);
    let mut row = vec![T::zero(); size];

    for (x, w) in lgl.iter() {
        forcing.push(finite(mp.forcing(x), "forcing term F")?);
        // exactly zero at x = -1
        let front = scale * (x + T::one()).powf(alpha) * finite(mp.coeff_a(x), "coefficient A")?;
        if front == T::zero() {
            continue;
        }
        row.iter_mut().for_each(|r| *r = T::zero());
        for (theta, wj) in jacobi.iter() {
            let mu = kernel_point(x, theta);
            let weight = wj * finite(mp.coeff_b(mu), "coefficient B")?;
            for (r, l) in row.iter_mut().zip(legendre_values_unchecked(n, mu)) {
                *r = *r + weight * l;
            }
        }
        let test = legendre_values_unchecked(n, x);
        for (i, li) in test.into_iter().enumerate() {
            let c = w * li * front / discrete_norm::<T>(i, n);
            for (m, &r) in row.iter().enumerate() {
                kernel[(i, m)] = kernel[(i, m)] + c * r;
            }
        }
    }
    if !kernel.is_finite() {
        return Err(Error::NonFinite("collocation kernel"));
    }
    let rhs = nodal_to_modal(&forcing, &lgl)?.into_coeffs();
    let mut matrix = Matrix::identity(size);
    for i in 0..size {
        for j in 0..size {
            matrix[(i, j)] = matrix[(i, j)] - kernel[(i, j)];
        }
    }
    Ok(CollocationSystem {
        n,
        kernel,
        matrix,
        rhs,
        condition: None,
    })
}

/// LU solve of the modal system; records a condition estimate on `sys`.
pub fn solve_linear<T: Real>(sys: &mut CollocationSystem<T>) -> Result<LegendreSeries<T>> {
    let lu = LuFactors::factor(&sys.matrix)?;
    sys.condition = Some(sys.matrix.norm_one() * lu.inverse_norm_one_estimate());
    LegendreSeries::new(lu.solve(&sys.rhs))
}

/// Collocation solution `U = Σ u_i L_i` on [-1, 1] for a problem on `[0, T]`.
#[derive(Debug, Clone)]
pub struct SpectralSolution<T> {
    series: LegendreSeries<T>,
    alpha: T,
    t_end: T,
    n: usize,
    condition: Option<T>,
}

impl<T: Real> SpectralSolution<T> {
    pub fn series(&self) -> &LegendreSeries<T> {
        &self.series
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn condition(&self) -> Option<T> {
        self.condition
    }

    /// `y_N(x)` for `x ∈ [0, T]`.
    pub fn eval(&self, x: T) -> Result<T> {
        eval_solution(self, x)
    }
}

pub fn solve<T: Real>(p: &ProblemSpec<T>, n: usize) -> Result<SpectralSolution<T>> {
    let mapped = map_problem(p);
    let mut system = assemble(&mapped, n)?;
    let series = solve_linear(&mut system)?;
    Ok(SpectralSolution {
        series,
        alpha: p.alpha(),
        t_end: p.t_end(),
        n,
        condition: system.condition(),
    })
}

pub fn eval_solution<T: Real>(s: &SpectralSolution<T>, x: T) -> Result<T> {
    let slack = T::domain_slack() * s.t_end.max(T::one());
    if x.is_nan() || x < -slack || x > s.t_end + slack {
        return Err(Error::Domain {
            context: "eval_solution",
            value: x.as_f64(),
        });
    }
    let t = (T::lit(2.0) * x / s.t_end - T::one()).max(-T::one()).min(T::one());
    s.series.eval(t)
}

/// `max |y_N(x) - a(x) I^α{b y_N}(x) - f(x)|` over `grid`, with the
/// fractional integral taken by [`rl_numeric`] at tolerance `tol`.
pub fn residual<T: Real>(s: &SpectralSolution<T>, p: &ProblemSpec<T>, grid: &[T], tol: T) -> Result<T> {
    if grid.is_empty() {
        return Err(Error::Parameter("residual grid is empty".into()));
    }
    let mut worst = T::zero();
    for &x in grid {
        let y = eval_solution(s, x)?;
        let integral = rl_numeric(s.alpha, |r| p.b(r) * eval_solution(s, r).unwrap_or(T::nan()), x, tol)?;
        let r = (y - p.a(x) * integral - p.f(x)).abs();
        worst = worst.max(finite(r, "residual")?);
    }
    Ok(worst)
}
