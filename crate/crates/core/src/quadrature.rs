//! Gauss–Legendre, Gauss–Lobatto–Legendre and Gauss–Jacobi rules on [-1, 1].
//!
//! Gauss–Jacobi rules (Gauss–Legendre being the `q1 = q2 = 0` case) come from
//! the Golub–Welsch eigenproblem of the monic Jacobi recurrence. Lobatto
//! interior nodes are the roots of `L'_N`, found by Newton's method.
//!
//! A rule for weight `(1-x)^{q1} (1+x)^{q2}` integrates the smooth factor
//! only: `∫ g(x) (1-x)^{q1} (1+x)^{q2} dx ≈ Σ g(x_j) w_j`.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::fracops::gamma_fn;
use crate::linalg::symmetric_tridiagonal_eigen;
use crate::orthopoly::{check_jacobi_params, legendre_with_derivs};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family<T> {
    GaussLegendre,
    GaussLobattoLegendre,
    GaussJacobi { q1: T, q2: T },
}

impl<T: Real> Family<T> {
    /// `∫ (1-x)^{q1} (1+x)^{q2} dx` over [-1, 1].
    pub fn zeroth_moment(&self) -> Result<T> {
        match *self {
            Family::GaussLegendre | Family::GaussLobattoLegendre => Ok(T::lit(2.0)),
            Family::GaussJacobi { q1, q2 } => jacobi_zeroth_moment(q1, q2),
        }
    }
}

fn jacobi_zeroth_moment<T: Real>(q1: T, q2: T) -> Result<T> {
    let one = T::one();
    // One-sided weights have an elementary moment; avoid the gamma round-off.
    if q1 == T::zero() || q2 == T::zero() {
        let q = q1 + q2 + one;
        return Ok(T::lit(2.0).powf(q) / q);
    }
    Ok(T::lit(2.0).powf(q1 + q2 + one) * gamma_fn(q1 + one)? * gamma_fn(q2 + one)? / gamma_fn(q1 + q2 + T::lit(2.0))?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    family: Family<T>,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn family(&self) -> Family<T> {
        self.family
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ g(x_j) w_j`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut g: F) -> T {
        self.iter().map(|(x, w)| g(x) * w).sum()
    }

    /// Like [`integrate`](Self::integrate) for fallible integrands.
    pub fn try_integrate<E, F: FnMut(T) -> Result<T, E>>(&self, mut g: F) -> Result<T, E> {
        let mut acc = T::zero();
        for (x, w) in self.iter() {
            acc = acc + g(x)? * w;
        }
        Ok(acc)
    }
}

/// `Σ g(x_j) w_j`, with the weight function implicit in the rule.
pub fn integrate<T: Real, F: FnMut(T) -> T>(rule: &QuadratureRule<T>, g: F) -> T {
    rule.integrate(g)
}

/// Monic recurrence coefficients `(α_k, β_k)` for the Jacobi weight.
///
/// `p_{k+1}(x) = (x - α_k) p_k(x) - β_k p_{k-1}(x)`, with `β_0` set to the
/// zeroth moment of the weight.
pub fn jacobi_recurrence<T: Real>(q1: T, q2: T, k: usize) -> Result<(T, T)> {
    check_jacobi_params(q1, q2)?;
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let fk = T::of(k);
    let ab = q1 + q2;
    let c = two * fk + ab;
    let alpha = if k == 0 {
        (q2 - q1) / (ab + two)
    } else {
        (q2 * q2 - q1 * q1) / (c * (c + two))
    };
    let beta = match k {
        0 => jacobi_zeroth_moment(q1, q2)?,
        // Cancelled form, valid also on the q1 + q2 = -1 boundary.
        1 => four * (one + q1) * (one + q2) / ((two + ab) * (two + ab) * (T::lit(3.0) + ab)),
        _ => four * fk * (fk + q1) * (fk + q2) * (fk + ab) / (c * c * (c + one) * (c - one)),
    };
    Ok((alpha, beta))
}

/// `n`-point Gauss–Jacobi rule for `(1-x)^{q1} (1+x)^{q2}`, exact through degree `2n - 1`.
pub fn gauss_jacobi<T: Real>(n: usize, q1: T, q2: T) -> Result<QuadratureRule<T>> {
    golub_welsch(n, q1, q2, Family::GaussJacobi { q1, q2 })
}

/// `n`-point Gauss–Legendre rule.
pub fn gauss_legendre<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    let mut rule = golub_welsch(n, T::zero(), T::zero(), Family::GaussLegendre)?;
    symmetrize(&mut rule.nodes, &mut rule.weights);
    Ok(rule)
}

fn golub_welsch<T: Real>(n: usize, q1: T, q2: T, family: Family<T>) -> Result<QuadratureRule<T>> {
    check_jacobi_params(q1, q2)?;
    if n == 0 {
        return Err(Error::Parameter("a Gauss rule needs at least one point".into()));
    }
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut moment = T::zero();
    for k in 0..n {
        let (a, b) = jacobi_recurrence(q1, q2, k)?;
        diag.push(a);
        if k == 0 {
            moment = b;
        } else {
            off.push(b.sqrt());
        }
    }
    let pairs = symmetric_tridiagonal_eigen(&diag, &off)?;
    let (nodes, weights) = pairs.into_iter().map(|(x, v)| (x, moment * v * v)).unzip();
    Ok(QuadratureRule { family, nodes, weights })
}

/// Forces exact mirror symmetry on a rule symmetric about the origin.
fn symmetrize<T: Real>(nodes: &mut [T], weights: &mut [T]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = (nodes[j] - nodes[i]) / T::lit(2.0);
        let w = (weights[i] + weights[j]) / T::lit(2.0);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
}

/// `(N + 1)`-point Gauss–Lobatto–Legendre rule: `±1` and the roots of `L'_N`,
/// with weights `2 / (N (N + 1) L_N(x_j)^2)`.
pub fn gauss_lobatto_legendre<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    const MAX_NEWTON: usize = 100;
    if n == 0 {
        return Err(Error::Parameter("a Lobatto rule needs N >= 1".into()));
    }
    let tol = T::node_tolerance();
    let mut nodes = vec![T::zero(); n + 1];
    nodes[0] = -T::one();
    nodes[n] = T::one();
    let pi = T::PI();
    let quarter = T::lit(0.25);
    // Interior roots come in ± pairs; solve for the negative half only,
    // bracketed by the previous node and the origin.
    for j in 1..=n / 2 {
        let shifted = T::of(j) + quarter;
        let mut x = -(pi * shifted / T::of(n) - T::lit(3.0) / (T::lit(8.0) * T::of(n) * pi * shifted)).cos();
        let lo = nodes[j - 1];
        let hi = T::zero();
        if !(x > lo && x <= hi) {
            x = (lo + hi) / T::lit(2.0);
        }
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (_, d1, d2) = legendre_with_derivs(n, x);
            let mut step = d1 / d2;
            if !step.is_finite() {
                break;
            }
            let mut next = x - step;
            while !(next > lo && next <= hi) {
                step = step / T::lit(2.0);
                next = x - step;
            }
            x = next;
            if step.abs() <= tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence {
                what: "Lobatto node Newton iteration",
                iterations: MAX_NEWTON,
            });
        }
        nodes[j] = x;
        nodes[n - j] = -x;
    }
    if n.is_multiple_of(2) {
        nodes[n / 2] = T::zero();
    }
    let scale = T::lit(2.0) / (T::of(n) * T::of(n + 1));
    let weights = nodes
        .iter()
        .map(|&x| {
            let l = legendre_with_derivs(n, x).0;
            scale / (l * l)
        })
        .collect();
    Ok(QuadratureRule {
        family: Family::GaussLobattoLegendre,
        nodes,
        weights,
    })
}

/// Builds the rule of the given family. `n` is the point count for Gauss
/// families and the polynomial degree `N` (so `N + 1` points) for Lobatto.
pub fn build_rule<T: Real>(family: Family<T>, n: usize) -> Result<QuadratureRule<T>> {
    match family {
        Family::GaussLegendre => gauss_legendre(n),
        Family::GaussLobattoLegendre => gauss_lobatto_legendre(n),
        Family::GaussJacobi { q1, q2 } => gauss_jacobi(n, q1, q2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum FamilyKey {
    Legendre,
    Lobatto,
    Jacobi(i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CacheKey {
    scalar: TypeId,
    family: FamilyKey,
    n: usize,
}

type RuleCache = RwLock<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn quantize<T: Real>(q: T) -> i64 {
    (q.as_f64() * 1e14).round() as i64
}

/// Shared, memoized [`build_rule`]. Jacobi parameters are keyed at `1e-14`
/// granularity; the first inserted rule for a key wins.
pub fn cached_rule<T: Real>(family: Family<T>, n: usize) -> Result<Arc<QuadratureRule<T>>> {
    let key = CacheKey {
        scalar: TypeId::of::<T>(),
        family: match family {
            Family::GaussLegendre => FamilyKey::Legendre,
            Family::GaussLobattoLegendre => FamilyKey::Lobatto,
            Family::GaussJacobi { q1, q2 } => FamilyKey::Jacobi(quantize(q1), quantize(q2)),
        },
        n,
    };
    let lookup = |entry: &Arc<dyn Any + Send + Sync>| {
        Arc::clone(entry)
            .downcast::<QuadratureRule<T>>()
            .expect("cache entries are keyed by scalar type")
    };
    if let Some(hit) = rule_cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(lookup(hit));
    }
    let fresh: Arc<dyn Any + Send + Sync> = Arc::new(build_rule(family, n)?);
    let mut guard = rule_cache().write().unwrap_or_else(|e| e.into_inner());
    Ok(lookup(guard.entry(key).or_insert(fresh)))
}
