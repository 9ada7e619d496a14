//! Small dense linear algebra: a row-major matrix, LU with partial pivoting,
//! a 1-norm condition estimator, and a symmetric tridiagonal eigensolver.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::SizeMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `P A = L U` with unit lower-triangular `L`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    /// Factors a square matrix with row pivoting.
    ///
    /// Fails with [`Error::Singular`] when a pivot falls below
    /// `1e-14 * ||A||_inf`.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: a.cols(),
            });
        }
        if !a.is_finite() {
            return Err(Error::NonFinite("matrix to factor"));
        }
        let threshold = T::lit(1e-14) * a.norm_inf();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |best, cand| if cand.1 > best.1 { cand } else { best });
            if !(pivot > threshold) {
                return Err(Error::Singular {
                    column: k,
                    pivot: pivot.as_f64(),
                    threshold: threshold.as_f64(),
                });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / d;
                lu[(i, k)] = factor;
                if factor != T::zero() {
                    for j in k + 1..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] = lu[(i, j)] - factor * v;
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: T = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = x[i] - s;
        }
        for i in (0..n).rev() {
            let s: T = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: T = (0..i).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: T = (i + 1..n).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] = z[i] - s;
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }

    /// Hager's estimate of `||A^{-1}||_1`.
    pub fn inverse_norm_one_estimate(&self) -> T {
        let n = self.dim();
        if n == 0 {
            return T::zero();
        }
        let mut x = vec![T::one() / T::of(n); n];
        let mut estimate = T::zero();
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm: T = y.iter().map(|v| v.abs()).sum();
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let sign: Vec<T> = y
                .iter()
                .map(|&v| if v >= T::zero() { T::one() } else { -T::one() })
                .collect();
            let z = self.solve_transpose(&sign);
            let (j, zmax) =
                z.iter().enumerate().fold(
                    (0, -T::one()),
                    |best, (i, v)| if v.abs() > best.1 { (i, v.abs()) } else { best },
                );
            let ztx: T = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![T::zero(); n];
            x[j] = T::one();
        }
        // Higham's alternating-sign vector guards against underestimates.
        let alt: Vec<T> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                sign * (T::one() + T::of(i) / T::of(n.max(2) - 1))
            })
            .collect();
        let alt_est = T::lit(2.0) * self.solve(&alt).iter().map(|v| v.abs()).sum::<T>() / T::of(3 * n);
        estimate.max(alt_est)
    }
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix, by the implicit-shift QL iteration.
///
/// `diag` has length `n`, `off` has length `n - 1` (`off[i]` couples rows
/// `i` and `i + 1`). Returns eigenpairs sorted by ascending eigenvalue, each
/// with the first component of its unit eigenvector.
pub fn symmetric_tridiagonal_eigen<T: Real>(diag: &[T], off: &[T]) -> Result<Vec<(T, T)>> {
    const MAX_SWEEPS: usize = 60;
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::SizeMismatch {
            expected: n - 1,
            found: off.len(),
        });
    }
    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.to_vec();
    e.push(T::zero());
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::Convergence {
                    what: "tridiagonal QL iteration",
                    iterations: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.abs().copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    let mut pairs: Vec<(T, T)> = d.into_iter().zip(z).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    Ok(pairs)
}
