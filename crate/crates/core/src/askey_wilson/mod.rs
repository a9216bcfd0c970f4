//! Askey-Wilson polynomials `p_n(x; a, b, c, d | q)`, their weight, norms,
//! eigenvalues and recurrence.

mod identities;
mod poly;

pub use identities::{
    aw_integral_closed, dual_construction_check, lowering_check, raising_check, recurrence_check, rodrigues_check, weight_ratio_check, xi_functional_check,
    RODRIGUES_CAP,
};
pub use poly::{aw_eval_direct, aw_poly, aw_poly_recurrence};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{cinf, poch, poch_inf, QBase};
use crate::{Error, Result};

/// The quadruple `(a, b, c, d)` together with the base `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AWParams {
    pub q: QBase,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl AWParams {
    pub fn new(q: f64, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let q = QBase::new(q)?;
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("parameter {name} = {v} is not finite")));
            }
        }
        Ok(AWParams { q, a, b, c, d })
    }

    /// `(q, a, b, c, d) = (0.5, 0.3, -0.2, 0.4, 0.1)`.
    pub fn canonical() -> Self {
        AWParams::new(0.5, 0.3, -0.2, 0.4, 0.1).expect("valid fixture")
    }

    /// `(1, -1, q^{1/2}, -q^{1/2})`: multiples of `T_n`, weight `(1 - x²)^{-1/2}`.
    pub fn chebyshev_first(q: QBase) -> Self {
        let s = q.sqrt();
        AWParams { q, a: 1.0, b: -1.0, c: s, d: -s }
    }

    /// `(q^{1/2}, -q^{1/2}, q, -q)`: multiples of `U_n`, weight `4 (1 - x²)^{1/2}`.
    pub fn chebyshev_second(q: QBase) -> Self {
        let s = q.sqrt();
        AWParams { q, a: s, b: -s, c: q.value(), d: -q.value() }
    }

    pub fn qv(&self) -> f64 {
        self.q.value()
    }

    pub fn params(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn with_params(&self, p: [f64; 4]) -> Self {
        AWParams { q: self.q, a: p[0], b: p[1], c: p[2], d: p[3] }
    }

    pub fn abcd(&self) -> f64 {
        self.a * self.b * self.c * self.d
    }

    /// `[ab, ac, ad, bc, bd, cd]`.
    pub fn pairs(&self) -> [f64; 6] {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        [a * b, a * c, a * d, b * c, b * d, c * d]
    }

    /// Every parameter multiplied by `q^{1/2}`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    /// Every parameter multiplied by `q^{h/2}`.
    pub fn shift_by(&self, h: usize) -> Self {
        let f = self.q.pow(h as f64 / 2.0);
        self.with_params(self.params().map(|u| u * f))
    }

    /// Parameters admissible for the weight, norms and quadrature: `|u| <= 1`
    /// with no pairwise product equal to 1. The boundary value `|u| = 1` is
    /// needed by the Chebyshev specialisations.
    pub fn check_weight_domain(&self) -> Result<()> {
        for u in self.params() {
            if !(u.abs() <= 1.0) {
                return Err(Error::Domain(format!("parameter {u} outside [-1, 1]")));
            }
        }
        for uv in self.pairs() {
            if uv == 1.0 {
                return Err(Error::Domain("a pairwise parameter product equals 1".into()));
            }
        }
        Ok(())
    }

    /// `|a|, |b|, |c|, |d| < 1`.
    pub fn is_interior(&self) -> bool {
        self.params().iter().all(|u| u.abs() < 1.0)
    }
}

/// `A_n`, `B_n`, `C_n` of `2x p_n = A_n p_{n+1} + B_n p_n + C_n p_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceCoeffs {
    pub n: usize,
    pub a_n: f64,
    pub b_n: f64,
    pub c_n: f64,
}

pub fn recurrence_coeffs(n: usize, p: &AWParams) -> Result<RecurrenceCoeffs> {
    let (a, b, c, d, q) = (p.a, p.b, p.c, p.d, p.qv());
    if a == 0.0 {
        return Err(Error::ParameterRole("recurrence coefficient B_n divides by a; a must be nonzero".into()));
    }
    let abcd = p.abcd();
    let qn = q.powi(n as i32);
    let a_n = (1.0 - abcd * qn / q) / ((1.0 - abcd * qn * qn / q) * (1.0 - abcd * qn * qn));
    let c_n = if n == 0 {
        0.0
    } else {
        let qm = qn / q;
        (1.0 - qn)
            * (1.0 - a * b * qm)
            * (1.0 - a * c * qm)
            * (1.0 - a * d * qm)
            * (1.0 - b * c * qm)
            * (1.0 - b * d * qm)
            * (1.0 - c * d * qm)
            / ((1.0 - abcd * qm * qm) * (1.0 - abcd * qm * qm * q))
    };
    let up = (1.0 - a * b * qn) * (1.0 - a * c * qn) * (1.0 - a * d * qn);
    let down = if n == 0 { 1.0 } else { (1.0 - a * b * qn / q) * (1.0 - a * c * qn / q) * (1.0 - a * d * qn / q) };
    let b_n = a + 1.0 / a - a_n * up / a - if n == 0 { 0.0 } else { c_n * a / down };
    if ![a_n, b_n, c_n].iter().all(|v| v.is_finite()) {
        return Err(Error::Degenerate(format!("recurrence coefficients at n = {n} are not finite")));
    }
    Ok(RecurrenceCoeffs { n, a_n, b_n, c_n })
}

/// `λ_n = 4q(1 - q^{-n})(1 - abcd q^{n-1})/(1 - q)²`.
pub fn eigenvalue_lambda(n: usize, p: &AWParams) -> f64 {
    let q = p.qv();
    4.0 * q * (1.0 - q.powi(-(n as i32))) * (1.0 - p.abcd() * q.powi(n as i32 - 1)) / ((1.0 - q) * (1.0 - q))
}

fn rinf(a: f64, q: f64, tol: f64) -> f64 {
    poch_inf(&a, q, tol).map(|v| v.value).unwrap_or(f64::NAN)
}

/// `ξ_n = 2π (abcd q^{2n}; q)_∞ (abcd q^{n-1}; q)_n / (q^{n+1}, ab q^n, ..., cd q^n; q)_∞`.
pub fn norm_xi(n: usize, p: &AWParams, tol: f64) -> Result<f64> {
    p.check_weight_domain()?;
    let q = p.qv();
    let qn = q.powi(n as i32);
    let abcd = p.abcd();
    let mut den = rinf(qn * q, q, tol);
    for uv in p.pairs() {
        den *= rinf(uv * qn, q, tol);
    }
    let num = 2.0 * PI * rinf(abcd * qn * qn, q, tol) * poch(&(abcd * qn / q), &q, n);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Degenerate(format!("norm denominator vanishes at n = {n}")));
    }
    Ok(num / den)
}

/// `w(x)` on `(-1, 1)`.
pub fn weight(x: f64, p: &AWParams, tol: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("weight needs |x| < 1, got {x}")));
    }
    p.check_weight_domain()?;
    let q = p.qv();
    let z = Complex64::from_polar(1.0, x.acos());
    let ptol = |u: Complex64| poch_inf(&u, q, tol).map(|v| v.value);
    let num = ptol(z * z)?.norm_sqr();
    let mut den = 1.0;
    for u in p.params() {
        den *= ptol(u * z)?.norm_sqr();
    }
    Ok(num / ((1.0 - x * x).sqrt() * den))
}

/// `w̆(z) = -2i z (q z²; q)_∞ (z^{-2}; q)_∞ / Π_u (u z, u/z; q)_∞`, which equals
/// `w(cos θ)` at `z = e^{iθ}` and stays finite at `z = ±1`.
pub fn weight_breve(z: Complex64, p: &AWParams) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("weight_breve at z = 0".into()));
    }
    let q = p.qv();
    let zi = 1.0 / z;
    let num = Complex64::new(0.0, -2.0) * z * cinf(q * z * z, q) * cinf(zi * zi, q);
    let mut den = Complex64::new(1.0, 0.0);
    for u in p.params() {
        den *= cinf(u * z, q) * cinf(u * zi, q);
    }
    if den.norm() == 0.0 {
        return Err(Error::Singularity { point: z });
    }
    Ok(num / den)
}

/// `w(x) √(1 - x²)` in breve form, smooth on the closed unit circle.
pub fn weight_sin_breve(z: Complex64, p: &AWParams) -> Result<Complex64> {
    Ok(weight_breve(z, p)? * crate::chebpoly::sin_breve(z))
}
