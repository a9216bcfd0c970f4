//! Polynomials in the Chebyshev-T basis and the exact action of the Askey-Wilson
//! operator D_q on them.

mod breve;

pub use breve::{breve_fn, dq_iterated, dq_pointwise, sin_breve, BreveFn, BreveFunction, SINGULARITY_GUARD};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{QBase, QScalar};
use crate::{Error, Result};

/// Largest degree handled by the exact operations.
pub const DEGREE_CAP: usize = 64;

/// `Σ c_k T_k(x)`. Trailing zeros are kept as given; `degree` ignores them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        ChebSeries { coeffs }
    }

    pub fn zero() -> Self {
        ChebSeries { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        ChebSeries { coeffs: vec![c] }
    }

    /// `T_n`.
    pub fn t(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        ChebSeries { coeffs }
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: f64, c1: f64) -> Self {
        ChebSeries { coeffs: vec![c0, c1] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Coefficient of `T_degree`.
    pub fn leading(&self) -> f64 {
        self.degree().map_or(0.0, |d| self.coeffs[d])
    }

    /// Coefficient of `T_k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn trimmed(mut self) -> Self {
        let len = self.degree().map_or(0, |d| d + 1);
        self.coeffs.truncate(len);
        self
    }

    pub fn scale(&self, s: f64) -> Self {
        ChebSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Clenshaw summation. The recurrence is valid for every real x, so for
    /// |x| > 1 it returns the same value as the cosh extension of T_k.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x)
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        clenshaw(&self.coeffs.iter().map(|&c| Complex64::from(c)).collect::<Vec<_>>(), x)
    }

    /// `f̆(z) = Σ c_k (z^k + z^{-k})/2`.
    pub fn eval_breve(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Err(Error::Domain("breve evaluation at z = 0".into()));
        }
        Ok(self.eval_complex((z + 1.0 / z) * 0.5))
    }

    pub fn mul(&self, other: &ChebSeries) -> ChebSeries {
        ChebSeries { coeffs: cheb_mul(&self.coeffs, &other.coeffs) }
    }

    /// Exact `D_q f`.
    pub fn dq(&self, q: QBase) -> ChebSeries {
        ChebSeries { coeffs: dq_coeffs(&self.coeffs, q.value()) }
    }
}

impl Add for &ChebSeries {
    type Output = ChebSeries;
    fn add(self, rhs: &ChebSeries) -> ChebSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeries { coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect() }
    }
}

impl Sub for &ChebSeries {
    type Output = ChebSeries;
    fn sub(self, rhs: &ChebSeries) -> ChebSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ChebSeries { coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect() }
    }
}

impl Neg for &ChebSeries {
    type Output = ChebSeries;
    fn neg(self) -> ChebSeries {
        self.scale(-1.0)
    }
}

impl Mul for &ChebSeries {
    type Output = ChebSeries;
    fn mul(self, rhs: &ChebSeries) -> ChebSeries {
        ChebSeries::mul(self, rhs)
    }
}

impl Mul<f64> for &ChebSeries {
    type Output = ChebSeries;
    fn mul(self, rhs: f64) -> ChebSeries {
        self.scale(rhs)
    }
}

fn clenshaw<T: QScalar + Copy>(c: &[T], x: T) -> T {
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    let two_x = x + x;
    for k in (1..c.len()).rev() {
        let b0 = c[k] + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    match c.first() {
        Some(&c0) => c0 + x * b1 - b2,
        None => T::zero(),
    }
}

/// Product by `T_m T_n = (T_{m+n} + T_{|m-n|})/2`.
pub(crate) fn cheb_mul<T: QScalar>(f: &[T], g: &[T]) -> Vec<T> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let half = T::half();
    let mut out = vec![T::zero(); f.len() + g.len() - 1];
    for (m, fm) in f.iter().enumerate() {
        if fm.is_zero() {
            continue;
        }
        for (n, gn) in g.iter().enumerate() {
            let p = fm.clone() * gn.clone() * half.clone();
            out[m + n] = out[m + n].clone() + p.clone();
            let d = m.abs_diff(n);
            out[d] = out[d].clone() + p;
        }
    }
    out
}

/// `γ_n = (q^{n/2} - q^{-n/2})/(q^{1/2} - q^{-1/2})`, so that `D_q T_n = γ_n U_{n-1}`.
pub fn gamma_factor(n: usize, q: QBase) -> f64 {
    gamma_raw(n, q.value())
}

fn gamma_raw(n: usize, q: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let s = q.sqrt();
    // (s^n - s^{-n})/(s - 1/s) = s^{1-n} (1 - s^{2n})/(1 - s^2), free of cancellation
    s.powi(1 - n as i32) * (1.0 - s.powi(2 * n as i32)) / (1.0 - s * s)
}

fn dq_coeffs(c: &[f64], q: f64) -> Vec<f64> {
    let n = match c.iter().rposition(|v| *v != 0.0) {
        Some(d) if d >= 1 => d,
        _ => return Vec::new(),
    };
    let mut out = vec![0.0; n];
    for (k, &ck) in c.iter().enumerate().take(n + 1).skip(1) {
        if ck == 0.0 {
            continue;
        }
        let g = ck * gamma_raw(k, q);
        // U_{k-1} = 2 Σ T_{k-1-2j} (index >= 1) + [k odd] T_0
        let m = k - 1;
        let mut idx = m as isize;
        while idx >= 1 {
            out[idx as usize] += 2.0 * g;
            idx -= 2;
        }
        if m % 2 == 0 {
            out[0] += g;
        }
    }
    out
}

/// `Σ c_k T_k(x)`.
pub fn eval_real(f: &ChebSeries, x: f64) -> f64 {
    f.eval(x)
}

pub fn eval_breve(f: &ChebSeries, z: Complex64) -> Result<Complex64> {
    f.eval_breve(z)
}

pub fn poly_mul(f: &ChebSeries, g: &ChebSeries) -> ChebSeries {
    f.mul(g)
}

pub fn dq_exact(f: &ChebSeries, q: QBase) -> ChebSeries {
    f.dq(q)
}

/// Coefficients of `U_m` in the T basis.
pub fn u_in_t(m: usize) -> ChebSeries {
    let mut out = vec![0.0; m + 1];
    let mut idx = m as isize;
    while idx >= 1 {
        out[idx as usize] = 2.0;
        idx -= 2;
    }
    if m % 2 == 0 {
        out[0] = 1.0;
    }
    ChebSeries::new(out)
}
