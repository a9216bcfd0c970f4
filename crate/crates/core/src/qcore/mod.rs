//! q-shifted factorials, basic hypergeometric series and the Jackson q-derivative.

mod identities;
mod scalar;

pub use identities::{check_1psi1, check_q_binomial, check_triple_product, term_count_ladder, NOISE_FLOOR};
pub use scalar::{exact_complex, powi, Exact, ExactComplex, QScalar};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default truncation tolerance for infinite products.
pub const PRODUCT_TOL: f64 = 1e-17;

const MAX_PRODUCT_FACTORS: usize = 1_000_000;

/// Base `q` with `0 < q < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QBase(f64);

impl QBase {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 {
            return Err(Error::Domain(format!("q = {q} must satisfy 0 < q < 1")));
        }
        Ok(QBase(q))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn sqrt(self) -> f64 {
        self.0.sqrt()
    }

    /// `q^e` for real `e`.
    pub fn pow(self, e: f64) -> f64 {
        self.0.powf(e)
    }

    pub fn scalar<T: QScalar>(self) -> T {
        T::from_f64(self.0)
    }
}

impl TryFrom<f64> for QBase {
    type Error = Error;
    fn try_from(q: f64) -> Result<Self> {
        QBase::new(q)
    }
}

impl From<QBase> for f64 {
    fn from(q: QBase) -> f64 {
        q.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QPochOrder {
    Finite(usize),
    Infinite,
}

/// Value of a q-shifted factorial together with the number of factors used.
#[derive(Debug, Clone, PartialEq)]
pub struct QPoch<T> {
    pub value: T,
    pub factors: usize,
}

/// `(a;q)_n` for any scalar type, with `q` supplied in the same type.
pub fn poch<T: QScalar>(a: &T, q: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut aq = a.clone();
    for _ in 0..n {
        acc = acc * (T::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

/// `(a_1, ..., a_k; q)_n`.
pub fn poch_multi<T: QScalar>(a: &[T], q: &T, n: usize) -> T {
    a.iter().fold(T::one(), |acc, ai| acc * poch(ai, q, n))
}

/// `(a;q)_∞` truncated once `|a q^K| < tol`.
pub fn poch_inf<T: QScalar>(a: &T, q: f64, tol: f64) -> Result<QPoch<T>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {a:?}")));
    }
    let qq = T::from_f64(q);
    let mut acc = T::one();
    let mut aq = a.clone();
    let mut mag = a.modulus();
    let mut k = 0;
    while mag >= tol {
        if k >= MAX_PRODUCT_FACTORS {
            return Err(Error::Convergence { terms: k });
        }
        acc = acc * (T::one() - aq.clone());
        aq = aq * qq.clone();
        mag *= q;
        k += 1;
    }
    Ok(QPoch { value: acc, factors: k })
}

/// `(a;q)_n` or `(a;q)_∞`; `tol` is used only for the infinite order.
pub fn qpoch<T: QScalar>(a: T, q: QBase, order: QPochOrder, tol: f64) -> Result<QPoch<T>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {a:?}")));
    }
    match order {
        QPochOrder::Finite(n) => Ok(QPoch { value: poch(&a, &q.scalar(), n), factors: n }),
        QPochOrder::Infinite => {
            if !(tol > 0.0) {
                return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
            }
            poch_inf(&a, q.value(), tol)
        }
    }
}

/// Product of `qpoch` over a list; `factors` reports the largest truncation index.
pub fn qpoch_multi<T: QScalar>(a: &[T], q: QBase, order: QPochOrder, tol: f64) -> Result<QPoch<T>> {
    let mut out = QPoch { value: T::one(), factors: 0 };
    for ai in a {
        let p = qpoch(ai.clone(), q, order, tol)?;
        out.value = out.value * p.value;
        out.factors = out.factors.max(p.factors);
    }
    Ok(out)
}

/// Real infinite product at the default tolerance.
pub fn pinf(a: f64, q: f64) -> f64 {
    // Finite inputs always terminate.
    poch_inf(&a, q, PRODUCT_TOL).map(|p| p.value).unwrap_or(f64::NAN)
}

/// Product of real infinite products.
pub fn pinf_multi(a: &[f64], q: f64) -> f64 {
    a.iter().map(|&x| pinf(x, q)).product()
}

/// Complex infinite product at the default tolerance.
pub fn cinf(a: Complex64, q: f64) -> Complex64 {
    poch_inf(&a, q, PRODUCT_TOL).map(|p| p.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// Sum of a basic hypergeometric series with the number of terms used.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSum<T> {
    pub value: T,
    pub terms: usize,
    pub terminating: bool,
}

fn phi_shape<T>(numerator: &[T], denominator: &[T]) -> Result<()> {
    if numerator.len() != denominator.len() + 1 {
        return Err(Error::InvalidInput(format!(
            "expected r+1 numerator and r denominator parameters, got {} and {}",
            numerator.len(),
            denominator.len()
        )));
    }
    Ok(())
}

/// Sums terms `k = 0..=m` of `r+1φr(numerator; denominator; q, z)`.
fn phi_sum_to<T: QScalar>(numerator: &[T], denominator: &[T], q: &T, z: &T, m: usize) -> Result<T> {
    let mut num_pow: Vec<T> = numerator.to_vec();
    let mut den_pow: Vec<T> = denominator.to_vec();
    let mut qk = q.clone();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..m {
        let mut ratio_num = z.clone();
        for u in num_pow.iter_mut() {
            ratio_num = ratio_num * (T::one() - u.clone());
            *u = u.clone() * q.clone();
        }
        let mut ratio_den = T::one() - qk.clone();
        for b in den_pow.iter_mut() {
            ratio_den = ratio_den * (T::one() - b.clone());
            *b = b.clone() * q.clone();
        }
        if ratio_den.is_zero() {
            return Err(Error::Pole { index: k + 1 });
        }
        term = term * ratio_num / ratio_den;
        sum = sum + term.clone();
        qk = qk * q.clone();
    }
    Ok(sum)
}

/// Terminating series whose first numerator parameter is `q^{-m}`, built from the
/// integer `m` directly. `others` are the remaining numerator parameters.
pub fn phi_terminating<T: QScalar>(m: usize, others: &[T], denominator: &[T], q: &T, z: &T) -> Result<PhiSum<T>> {
    let mut numerator = Vec::with_capacity(others.len() + 1);
    numerator.push(T::one() / powi(q, m));
    numerator.extend_from_slice(others);
    phi_shape(&numerator, denominator)?;
    let value = phi_sum_to(&numerator, denominator, q, z, m)?;
    Ok(PhiSum { value, terms: m + 1, terminating: true })
}

/// General `r+1φr`. Terminates when a numerator parameter equals `q^{-m}` for some
/// `m <= max_terms`; otherwise requires `|z| < 1` and sums until terms drop below
/// `tol` relative to the partial sum.
pub fn phi<T: QScalar>(numerator: &[T], denominator: &[T], q: &T, z: &T, max_terms: usize, tol: f64) -> Result<PhiSum<T>> {
    phi_shape(numerator, denominator)?;
    for v in numerator.iter().chain(denominator).chain([q, z]) {
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite parameter {v:?}")));
        }
    }
    if z.is_zero() {
        return Ok(PhiSum { value: T::one(), terms: 1, terminating: true });
    }
    let qinv = T::one() / q.clone();
    let mut target = T::one();
    for m in 0..=max_terms {
        if numerator.iter().any(|u| u.close_to(&target, 1e-12)) {
            let value = phi_sum_to(numerator, denominator, q, z, m)?;
            return Ok(PhiSum { value, terms: m + 1, terminating: true });
        }
        target = target * qinv.clone();
    }
    if z.modulus() >= 1.0 {
        return Err(Error::Convergence { terms: 0 });
    }
    let mut num_pow: Vec<T> = numerator.to_vec();
    let mut den_pow: Vec<T> = denominator.to_vec();
    let mut qk = q.clone();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..max_terms {
        let mut ratio_num = z.clone();
        for u in num_pow.iter_mut() {
            ratio_num = ratio_num * (T::one() - u.clone());
            *u = u.clone() * q.clone();
        }
        let mut ratio_den = T::one() - qk.clone();
        for b in den_pow.iter_mut() {
            ratio_den = ratio_den * (T::one() - b.clone());
            *b = b.clone() * q.clone();
        }
        if ratio_den.is_zero() {
            return Err(Error::Pole { index: k + 1 });
        }
        term = term * ratio_num / ratio_den;
        sum = sum + term.clone();
        qk = qk * q.clone();
        if term.modulus() <= tol * sum.modulus() {
            return Ok(PhiSum { value: sum, terms: k + 2, terminating: false });
        }
    }
    Err(Error::Convergence { terms: max_terms })
}

/// Jackson q-derivative on power-basis coefficients: `x^n -> (1-q^n)/(1-q) x^{n-1}`.
pub fn jackson_dq(power_coeffs: &[f64], q: QBase) -> Vec<f64> {
    let q = q.value();
    power_coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * (1.0 - q.powi(n as i32)) / (1.0 - q))
        .collect()
}
