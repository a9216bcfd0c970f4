//! Scalar types accepted by the q-series routines.
//!
//! Floating types are used for infinite products and pointwise work. The exact
//! rational types carry terminating sums whose terms cancel over many orders of
//! magnitude (the 4φ3 of an Askey-Wilson polynomial at small q).

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

/// Exact real scalar. Any finite `f64` converts without rounding.
pub type Exact = BigRational;
/// Exact complex scalar.
pub type ExactComplex = Complex<BigRational>;

pub trait QScalar: Clone + Num + Neg<Output = Self> + Debug + Send + Sync {
    /// Lossless for the exact types.
    fn from_f64(x: f64) -> Self;
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    fn to_f64(&self) -> f64 {
        self.to_c64().re
    }

    fn is_finite(&self) -> bool {
        let c = self.to_c64();
        c.re.is_finite() && c.im.is_finite()
    }

    /// Relative closeness used for terminating-parameter recognition.
    fn close_to(&self, other: &Self, rel: f64) -> bool {
        let d = (self.clone() - other.clone()).modulus();
        d == 0.0 || d < rel * self.modulus().max(other.modulus())
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl QScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl QScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite value {x} passed to exact arithmetic"))
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // Fall back to a scaled division when the ratio overflows the direct path.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits() as i64 - d.bits() as i64;
        let scaled = if shift > 0 {
            BigRational::new(n.clone(), d.clone() << (shift as usize))
        } else {
            BigRational::new(n.clone() << ((-shift) as usize), d.clone())
        };
        ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

impl QScalar for BigRational {
    fn from_f64(x: f64) -> Self {
        rational_from_f64(x)
    }
    fn modulus(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn close_to(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }
}

impl QScalar for ExactComplex {
    fn from_f64(x: f64) -> Self {
        Complex::new(rational_from_f64(x), BigRational::zero())
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn close_to(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }
}

/// Exact complex number from floating parts.
pub fn exact_complex(z: Complex64) -> ExactComplex {
    Complex::new(rational_from_f64(z.re), rational_from_f64(z.im))
}

/// `x^n` for a nonnegative integer power.
pub fn powi<T: QScalar>(x: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut base = x.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}
