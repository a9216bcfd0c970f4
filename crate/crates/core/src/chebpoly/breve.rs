//! Functions of `z` with `f̆(z) = f((z + 1/z)/2)` and the pointwise D_q.

use num_complex::Complex64;

use super::ChebSeries;
use crate::qcore::QBase;
use crate::{Error, Result};

/// `dq_pointwise` refuses points with `|z - 1/z|` at or below this.
pub const SINGULARITY_GUARD: f64 = 1e-8;

pub trait BreveFunction: Sync {
    fn breve(&self, z: Complex64) -> Result<Complex64>;
}

impl BreveFunction for ChebSeries {
    fn breve(&self, z: Complex64) -> Result<Complex64> {
        self.eval_breve(z)
    }
}

impl<T: BreveFunction + ?Sized> BreveFunction for &T {
    fn breve(&self, z: Complex64) -> Result<Complex64> {
        (**self).breve(z)
    }
}

/// Closure-backed breve function.
pub struct BreveFn<F>(pub F);

impl<F> BreveFunction for BreveFn<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn breve(&self, z: Complex64) -> Result<Complex64> {
        (self.0)(z)
    }
}

pub fn breve_fn<F>(f: F) -> BreveFn<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    BreveFn(f)
}

/// Breve form of `√(1 - x²)`: `(z - 1/z)/(2i)`, equal to `sin θ` at `z = e^{iθ}`.
pub fn sin_breve(z: Complex64) -> Complex64 {
    (z - 1.0 / z) / Complex64::new(0.0, 2.0)
}

fn guard(z: Complex64) -> Result<Complex64> {
    let d = z - 1.0 / z;
    if !(d.norm() > SINGULARITY_GUARD) {
        return Err(Error::Singularity { point: z });
    }
    Ok(d)
}

/// `(f̆(q^{1/2} z) - f̆(q^{-1/2} z)) / ((q^{1/2} - q^{-1/2})(z - 1/z)/2)`.
pub fn dq_pointwise<F: BreveFunction + ?Sized>(f: &F, z: Complex64, q: QBase) -> Result<Complex64> {
    let d = guard(z)?;
    let s = q.sqrt();
    let num = f.breve(z * s)? - f.breve(z / s)?;
    Ok(num / ((s - 1.0 / s) * d * 0.5))
}

/// `D_q^n f` at `z`, evaluating `f̆` once per lattice point `z q^{j/2}`, `|j| <= n`.
pub fn dq_iterated<F: BreveFunction + ?Sized>(f: &F, z: Complex64, q: QBase, order: usize) -> Result<Complex64> {
    if order == 0 {
        return f.breve(z);
    }
    let s = q.sqrt();
    let n = order as i32;
    let point = |j: i32| z * s.powi(j);
    // level 0 holds f̆ at j = -n, -n+2, ..., n
    let mut vals: Vec<Complex64> = (0..=order).map(|i| f.breve(point(-n + 2 * i as i32))).collect::<Result<_>>()?;
    for level in 1..=order {
        let first = -n + level as i32;
        let mut next = Vec::with_capacity(vals.len() - 1);
        for i in 0..vals.len() - 1 {
            let w = point(first + 2 * i as i32);
            let d = guard(w)?;
            next.push((vals[i + 1] - vals[i]) / ((s - 1.0 / s) * d * 0.5));
        }
        vals = next;
    }
    Ok(vals[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn pointwise_examples() {
        let h = q(0.5);
        let one = ChebSeries::constant(1.0);
        assert_eq!(dq_pointwise(&one, Complex64::new(0.3, 0.8), h).unwrap(), Complex64::new(0.0, 0.0));
        let v = dq_pointwise(&ChebSeries::t(1), Complex64::new(0.0, 1.0), h).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
    }

    #[test]
    fn guard_trips_near_real_axis_unit_points() {
        let h = q(0.5);
        let r = dq_pointwise(&ChebSeries::t(2), Complex64::new(1.0, 1e-10), h);
        assert!(matches!(r, Err(Error::Singularity { .. })));
        let r = dq_pointwise(&ChebSeries::t(2), Complex64::new(-1.0, 0.0), h);
        assert!(matches!(r, Err(Error::Singularity { .. })));
    }

    #[test]
    fn nested_pointwise_matches_exact() {
        let h = q(0.5);
        let t4 = ChebSeries::t(4);
        let exact = t4.dq(h).dq(h);
        let inner = breve_fn(|z| dq_pointwise(&t4, z, h));
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, 0.1 + 0.18 * k as f64);
            let nested = dq_pointwise(&inner, z, h).unwrap();
            let e = exact.eval_breve(z).unwrap();
            assert!((nested - e).norm() < 1e-11 * e.norm().max(1.0));
        }
    }

    #[test]
    fn iterated_examples() {
        let h = q(0.5);
        let t3 = ChebSeries::t(3);
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let one = dq_iterated(&t3, z, h, 1).unwrap();
        assert!((one - dq_pointwise(&t3, z, h).unwrap()).norm() < 1e-15);
        let two = dq_iterated(&t3, z, h, 2).unwrap();
        let e = t3.dq(h).dq(h).eval_breve(z).unwrap();
        assert!((two - e).norm() < 1e-12 * e.norm());
        let four = dq_iterated(&t3, z, h, 4).unwrap();
        assert!(four.norm() < 1e-12);
    }

    #[test]
    fn iterated_reports_lattice_point() {
        // z = q^{1/2} puts the lattice point z q^{-1/2} = 1 on the singular set
        let h = q(0.25);
        let r = dq_iterated(&ChebSeries::t(3), Complex64::new(0.5, 0.0), h, 2);
        match r {
            Err(Error::Singularity { point }) => assert!((point - 1.0).norm() < 1e-15),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn sin_breve_on_circle() {
        for th in [0.2f64, 1.3, 2.9] {
            let v = sin_breve(Complex64::from_polar(1.0, th));
            assert!((v.re - th.sin()).abs() < 1e-15 && v.im.abs() < 1e-15);
        }
    }
}
