//! Legendre and Jacobi polynomials on [-1, 1].
//!
//! Everything is evaluated through three-term recurrences. Jacobi polynomials
//! use the classical normalization, so that
//! `J_1^{q1,q2}(x) = ((q1 + q2 + 2) x + (q1 - q2)) / 2`.

use crate::error::{Error, Result};
use crate::fracops::gamma_fn;
use crate::quadrature::{Family, QuadratureRule};
use crate::scalar::Real;

fn check_unit_interval<T: Real>(x: T, context: &'static str) -> Result<()> {
    if x.is_nan() || x.abs() > T::one() + T::domain_slack() {
        return Err(Error::Domain {
            context,
            value: x.as_f64(),
        });
    }
    Ok(())
}

pub(crate) fn check_jacobi_params<T: Real>(q1: T, q2: T) -> Result<()> {
    let minus_one = -T::one();
    if !(q1 > minus_one) || !(q2 > minus_one) {
        return Err(Error::Parameter(format!(
            "Jacobi parameters must exceed -1, got q1 = {q1}, q2 = {q2}"
        )));
    }
    Ok(())
}

/// `[L_0(x), ..., L_n(x)]`.
pub fn legendre_eval_all<T: Real>(n: usize, x: T) -> Result<Vec<T>> {
    check_unit_interval(x, "legendre_eval_all")?;
    Ok(legendre_values_unchecked(n, x))
}

pub(crate) fn legendre_values_unchecked<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    if n == 0 {
        return out;
    }
    out.push(x);
    for i in 1..n {
        let fi = T::of(i);
        let next = (T::of(2 * i + 1) * x * out[i] - fi * out[i - 1]) / T::of(i + 1);
        out.push(next);
    }
    out
}

/// Returns `(L_n(x), L'_n(x), L''_n(x))`.
///
/// Derivatives follow `L'_{k+1} = L'_{k-1} + (2k + 1) L_k`, and the same
/// relation differentiated once more. Both are exact at `x = ±1`.
pub(crate) fn legendre_with_derivs<T: Real>(n: usize, x: T) -> (T, T, T) {
    if n == 0 {
        return (T::one(), T::zero(), T::zero());
    }
    // (value, d1, d2) for degree k-1 and k
    let (mut p0, mut d0, mut s0) = (T::one(), T::zero(), T::zero());
    let (mut p1, mut d1, mut s1) = (x, T::one(), T::zero());
    for k in 1..n {
        let fk = T::of(k);
        let two_k1 = T::of(2 * k + 1);
        let p2 = (two_k1 * x * p1 - fk * p0) / T::of(k + 1);
        let d2 = d0 + two_k1 * p1;
        let s2 = s0 + two_k1 * d1;
        (p0, d0, s0) = (p1, d1, s1);
        (p1, d1, s1) = (p2, d2, s2);
    }
    (p1, d1, s1)
}

/// `L'_n(x)`.
pub fn legendre_deriv<T: Real>(n: usize, x: T) -> Result<T> {
    check_unit_interval(x, "legendre_deriv")?;
    Ok(legendre_with_derivs(n, x).1)
}

/// `J_n^{q1,q2}(x)` with classical normalization.
pub fn jacobi_eval<T: Real>(q1: T, q2: T, n: usize, x: T) -> Result<T> {
    check_jacobi_params(q1, q2)?;
    check_unit_interval(x, "jacobi_eval")?;
    let two = T::lit(2.0);
    let one = T::one();
    if n == 0 {
        return Ok(one);
    }
    let mut prev = one;
    let mut cur = ((q1 + q2 + two) * x + (q1 - q2)) / two;
    let ab = q1 + q2;
    for k in 1..n {
        let fk = T::of(k);
        let c = two * fk + ab;
        let lead = two * (fk + one) * (fk + ab + one) * c;
        let mid = (c + one) * ((c + two) * c * x + q1 * q1 - q2 * q2);
        let tail = two * (fk + q1) * (fk + q2) * (c + two);
        let next = (mid * cur - tail * prev) / lead;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Squared weighted norm `γ_n^{q1,q2}` of `J_n^{q1,q2}` under `(1-x)^{q1}(1+x)^{q2}`.
pub fn jacobi_norm<T: Real>(q1: T, q2: T, n: usize) -> Result<T> {
    check_jacobi_params(q1, q2)?;
    let one = T::one();
    let scale = T::lit(2.0).powf(q1 + q2 + one);
    if n == 0 {
        return Ok(scale * gamma_fn(q1 + one)? * gamma_fn(q2 + one)? / gamma_fn(q1 + q2 + T::lit(2.0))?);
    }
    let fnn = T::of(n);
    let num = gamma_fn(fnn + q1 + one)? * gamma_fn(fnn + q2 + one)?;
    let den = (T::lit(2.0) * fnn + q1 + q2 + one) * gamma_fn(fnn + one)? * gamma_fn(fnn + q1 + q2 + one)?;
    Ok(scale * num / den)
}

/// Discrete LGL norm `(L_i, L_i)_N`: `2/(2i+1)` below the top mode, `2/N` at `i = N`.
pub fn discrete_norm<T: Real>(i: usize, n: usize) -> T {
    if i == n && n > 0 {
        T::lit(2.0) / T::of(n)
    } else {
        T::lit(2.0) / T::of(2 * i + 1)
    }
}

/// Legendre coefficients `u_0..u_N` of a polynomial on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Real> LegendreSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter(
                "a Legendre series needs at least one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Legendre coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `Σ u_i L_i(x)`.
    pub fn eval(&self, x: T) -> Result<T> {
        series_eval(self, x)
    }
}

pub fn series_eval<T: Real>(series: &LegendreSeries<T>, x: T) -> Result<T> {
    let values = legendre_eval_all(series.degree(), x)?;
    Ok(series.coeffs.iter().zip(&values).map(|(&u, &l)| u * l).sum())
}

/// Discrete Legendre transform at LGL nodes.
///
/// The top mode is normalized by its discrete norm `2/N`, which makes the
/// returned series interpolate `values` exactly at every node.
pub fn nodal_to_modal<T: Real>(values: &[T], rule: &QuadratureRule<T>) -> Result<LegendreSeries<T>> {
    if rule.family() != Family::GaussLobattoLegendre {
        return Err(Error::Parameter(format!(
            "nodal_to_modal requires a Gauss-Lobatto-Legendre rule, got {:?}",
            rule.family()
        )));
    }
    let count = rule.len();
    if values.len() != count {
        return Err(Error::SizeMismatch {
            expected: count,
            found: values.len(),
        });
    }
    let n = count - 1;
    let mut coeffs = vec![T::zero(); count];
    for ((&x, &w), &v) in rule.nodes().iter().zip(rule.weights()).zip(values) {
        let basis = legendre_values_unchecked(n, x);
        for (c, l) in coeffs.iter_mut().zip(basis) {
            *c = *c + v * l * w;
        }
    }
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c = *c / discrete_norm::<T>(i, n);
    }
    LegendreSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gauss_legendre, gauss_lobatto_legendre};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Explicit factorial expansion of `L_i`, small `i` only.
    fn legendre_explicit(i: u32, x: f64) -> f64 {
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        let mut sum = 0.0;
        for k in 0..=i / 2 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * fact(2 * i - 2 * k) / (fact(k) * fact(i - k) * fact(i - 2 * k)) * x.powi((i - 2 * k) as i32);
        }
        sum / 2f64.powi(i as i32)
    }

    #[test]
    fn legendre_values_small_cases() {
        assert_eq!(legendre_eval_all(1, 0.3).unwrap(), vec![1.0, 0.3]);
        assert_eq!(legendre_eval_all(4, 1.0).unwrap(), vec![1.0; 5]);
        let v = legendre_eval_all(2, 0.5).unwrap();
        assert!(close(v[2], -0.125, 1e-16));
        assert_eq!(legendre_eval_all(0, -0.2).unwrap(), vec![1.0]);
    }

    #[test]
    fn legendre_outside_interval_is_rejected() {
        assert!(matches!(legendre_eval_all(3, 1.0 + 1e-9), Err(Error::Domain { .. })));
        assert!(legendre_eval_all(3, 1.0 + 1e-13).is_ok());
        assert!(legendre_deriv(3, -1.5).is_err());
        assert!(legendre_eval_all(3, f64::NAN).is_err());
    }

    #[test]
    fn derivative_examples() {
        for x in [-1.0, -0.3, 0.0, 0.9] {
            assert_eq!(legendre_deriv(1, x).unwrap(), 1.0);
        }
        assert!(close(legendre_deriv(2, 0.5).unwrap(), 1.5, 1e-15));
        assert_eq!(legendre_deriv(3, 1.0).unwrap(), 6.0);
        for n in 0..30usize {
            let expected = (n * (n + 1) / 2) as f64;
            assert_eq!(legendre_deriv(n, 1.0).unwrap(), expected);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for n in 0..12 {
            for &x in &[-0.8, -0.1, 0.35, 0.7] {
                let fd =
                    (legendre_eval_all(n, x + h).unwrap()[n] - legendre_eval_all(n, x - h).unwrap()[n]) / (2.0 * h);
                assert!(close(legendre_deriv(n, x).unwrap(), fd, 1e-7), "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn endpoint_identities() {
        for n in 0..=40usize {
            let right = legendre_eval_all(n, 1.0).unwrap()[n];
            let left = legendre_eval_all(n, -1.0).unwrap()[n];
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(right, 1.0, 1e-13));
            assert!(close(left, sign, 1e-13));
        }
    }

    #[test]
    fn explicit_expansion_agrees_with_recurrence() {
        for i in 0..=10u32 {
            for k in 0..20 {
                let x = -0.95 + 0.1 * k as f64;
                let rec = legendre_eval_all(i as usize, x).unwrap()[i as usize];
                let exp = legendre_explicit(i, x);
                assert!((rec - exp).abs() <= 1e-10 * exp.abs().max(1.0), "i = {i}, x = {x}");
            }
        }
    }

    #[test]
    fn orthogonality_under_gauss_legendre() {
        let rule = gauss_legendre::<f64>(64).unwrap();
        for j in 0..=10 {
            for k in 0..=10 {
                let integral = rule.integrate(|x| {
                    let v = legendre_values_unchecked(10, x);
                    v[j] * v[k]
                });
                let expected = if j == k { 2.0 / (2 * j + 1) as f64 } else { 0.0 };
                assert!(close(integral, expected, 1e-12), "j = {j}, k = {k}");
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert!(close(jacobi_eval(-0.5, 0.0, 1, 1.0 / 3.0).unwrap(), 0.0, 1e-16));
        assert!(close(jacobi_eval(0.0, 0.0, 2, 0.5).unwrap(), -0.125, 1e-16));
        assert_eq!(jacobi_eval(0.3, -0.7, 0, 0.2).unwrap(), 1.0);
        assert!(matches!(jacobi_eval(-1.0, 0.0, 2, 0.0), Err(Error::Parameter(_))));
        assert!(jacobi_eval(0.0, -1.2, 2, 0.0).is_err());
    }

    #[test]
    fn jacobi_first_degree_matches_closed_form() {
        for &(q1, q2) in &[(-0.5, 0.0), (0.3, -0.7), (-0.9, -0.1), (2.0, 1.5)] {
            for &x in &[-1.0, -0.2, 0.6, 1.0] {
                let expected = 0.5 * (q1 + q2 + 2.0) * x + 0.5 * (q1 - q2);
                assert!(close(jacobi_eval(q1, q2, 1, x).unwrap(), expected, 1e-15));
            }
        }
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        for n in 0..15 {
            for &x in &[-0.9, -0.4, 0.1, 0.75] {
                let j = jacobi_eval(0.0, 0.0, n, x).unwrap();
                let l = legendre_eval_all(n, x).unwrap()[n];
                assert!(close(j, l, 1e-13));
            }
        }
    }

    #[test]
    fn jacobi_norm_examples() {
        assert!(close(jacobi_norm(0.0, 0.0, 0).unwrap(), 2.0, 1e-14));
        assert!(close(jacobi_norm(0.0, 0.0, 2).unwrap(), 0.4, 1e-14));
        assert!(close(jacobi_norm(-0.5, 0.0, 0).unwrap(), 2.0 * 2f64.sqrt(), 1e-12));
        assert!(jacobi_norm(-1.5, 0.0, 1).is_err());
    }

    #[test]
    fn jacobi_orthogonality_matches_norm() {
        // q1 + q2 = -1 exercises the degenerate first-step denominator.
        for &(q1, q2) in &[(-0.5, 0.0), (-1.0 / 3.0, 0.0), (-0.4, -0.6), (0.5, 0.25)] {
            let rule = crate::quadrature::gauss_jacobi::<f64>(20, q1, q2).unwrap();
            for n in 0..8 {
                for m in 0..8 {
                    let ip =
                        rule.integrate(|x| jacobi_eval(q1, q2, n, x).unwrap() * jacobi_eval(q1, q2, m, x).unwrap());
                    let expected = if n == m { jacobi_norm(q1, q2, n).unwrap() } else { 0.0 };
                    assert!(
                        close(ip, expected, 1e-12),
                        "q = ({q1}, {q2}), n = {n}, m = {m}: {ip} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn nodal_to_modal_examples() {
        let rule = gauss_lobatto_legendre::<f64>(6).unwrap();
        let s = nodal_to_modal(&[1.0; 7], &rule).unwrap();
        assert!(close(s.coeffs()[0], 1.0, 1e-14));
        assert!(s.coeffs()[1..].iter().all(|c| c.abs() < 1e-14));

        let rule = gauss_lobatto_legendre::<f64>(2).unwrap();
        let s = nodal_to_modal(&[1.0, 0.0, 1.0], &rule).unwrap();
        for (c, e) in s.coeffs().iter().zip([1.0 / 3.0, 0.0, 2.0 / 3.0]) {
            assert!(close(*c, e, 1e-15));
        }

        let rule = gauss_lobatto_legendre::<f64>(4).unwrap();
        let values: Vec<f64> = rule
            .nodes()
            .iter()
            .map(|&x| legendre_eval_all(4, x).unwrap()[4])
            .collect();
        let s = nodal_to_modal(&values, &rule).unwrap();
        for (c, e) in s.coeffs().iter().zip([0.0, 0.0, 0.0, 0.0, 1.0]) {
            assert!(close(*c, e, 1e-14), "{:?}", s.coeffs());
        }
        for (&x, &v) in rule.nodes().iter().zip(&values) {
            assert!(close(s.eval(x).unwrap(), v, 1e-14));
        }
    }

    #[test]
    fn nodal_to_modal_errors() {
        let rule = gauss_lobatto_legendre::<f64>(4).unwrap();
        assert_eq!(
            nodal_to_modal(&[1.0; 3], &rule),
            Err(Error::SizeMismatch { expected: 5, found: 3 })
        );
        let gl = gauss_legendre::<f64>(5).unwrap();
        assert!(matches!(nodal_to_modal(&[1.0; 5], &gl), Err(Error::Parameter(_))));
    }

    #[test]
    fn series_eval_examples() {
        let c = LegendreSeries::new(vec![2.5]).unwrap();
        assert_eq!(c.eval(-0.4).unwrap(), 2.5);
        let id = LegendreSeries::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(id.eval(0.7).unwrap(), 0.7);
        let sq = LegendreSeries::new(vec![1.0 / 3.0, 0.0, 2.0 / 3.0]).unwrap();
        assert!(close(sq.eval(0.5).unwrap(), 0.25, 1e-15));
        assert!(sq.eval(1.01).is_err());
        assert!(LegendreSeries::<f64>::new(vec![]).is_err());
        assert!(LegendreSeries::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn single_precision_recurrence() {
        let v = legendre_eval_all::<f32>(2, 0.5).unwrap();
        assert!((v[2] + 0.125).abs() < 1e-7);
        assert!(legendre_eval_all::<f32>(2, 1.0 + 1e-7).is_ok());
    }
}
