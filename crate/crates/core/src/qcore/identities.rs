//! Numerical checks of the q-binomial theorem, Ramanujan's 1ψ1 sum and the Jacobi
//! triple product.

use num_complex::Complex64;

use super::{cinf, QBase};
use crate::{CheckResult, Error, Result};

/// Residuals below this are treated as rounding noise by the convergence ladder.
pub const NOISE_FLOOR: f64 = 1e-14;

/// True when each residual at least halves relative to the previous one, or has
/// reached the noise floor: the larger of `NOISE_FLOOR` and the check's own
/// rounding estimate recorded under `noise_floor`.
pub fn term_count_ladder(results: &[CheckResult]) -> bool {
    results.windows(2).all(|w| {
        let floor = w[1].meta.get("noise_floor").and_then(|v| v.as_f64()).unwrap_or(0.0).max(NOISE_FLOOR);
        w[1].residual <= floor || w[1].residual <= 0.5 * w[0].residual
    })
}

/// Factors needed before `q^k` drops below machine epsilon.
fn product_factors(q: f64) -> f64 {
    (f64::EPSILON.ln() / q.ln()).ceil()
}

/// Relative difference, switching to the absolute term sum when the product side
/// vanishes to rounding. Also returns the rounding floor: the summation plus
/// `products` infinite products of `product_factors(q)` factors each.
fn relative(lhs: Complex64, rhs: Complex64, abs_sum: f64, q: f64, products: usize) -> (f64, &'static str, f64) {
    let d = (lhs - rhs).norm();
    let by_product = rhs.norm() > 1e-14 * abs_sum;
    let scale = if by_product { rhs.norm() } else { abs_sum.max(f64::MIN_POSITIVE) };
    let rounding = 8.0 * abs_sum + products as f64 * product_factors(q) * rhs.norm();
    let noise = f64::EPSILON * rounding / scale;
    (d / scale, if by_product { "product" } else { "absolute term sum" }, noise)
}

/// Partial sum of Σ (b;q)_n/(q;q)_n z^n for n < terms against (bz;q)_∞/(z;q)_∞.
pub fn check_q_binomial(b: impl Into<Complex64>, z: impl Into<Complex64>, q: QBase, terms: usize, tol: f64) -> Result<CheckResult> {
    let (b, z) = (b.into(), z.into());
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("q-binomial needs |z| < 1, got {}", z.norm())));
    }
    let qv = q.value();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut bq = b;
    let mut qn = qv;
    for _ in 0..terms {
        sum += term;
        abs_sum += term.norm();
        term *= (1.0 - bq) / (1.0 - qn) * z;
        bq *= qv;
        qn *= qv;
    }
    let rhs = cinf(b * z, qv) / cinf(z, qv);
    let (residual, scale, noise) = relative(sum, rhs, abs_sum, qv, 2);
    // |(b;q)_n/(q;q)_n| <= (-|b|;q)_∞/(q;q)_∞
    let coeff_bound = cinf((-b.norm()).into(), qv).re / cinf(qv.into(), qv).re;
    let tail = coeff_bound * z.norm().powi(terms as i32) / (1.0 - z.norm());
    Ok(CheckResult::new("q_binomial", "q-binomial theorem", residual, tol)
        .with("terms", terms)
        .with("tail_bound", tail / rhs.norm().max(f64::MIN_POSITIVE))
        .with("scale", scale)
        .with("noise_floor", noise))
}

/// Terms n = -1, ..., -m of Σ (a;q)_n/(b;q)_n z^n, using (a;q)_{-m} = 1/(a q^{-m}; q)_m.
/// Built factor by factor: each step multiplies by (1 - b q^{-j})/((1 - a q^{-j}) z).
fn negative_terms(a: Complex64, b: Complex64, z: Complex64, q: f64, m: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m);
    let mut t = Complex64::new(1.0, 0.0);
    let mut qj = 1.0;
    for _ in 0..m {
        qj /= q;
        t *= (1.0 - b * qj) / ((1.0 - a * qj) * z);
        out.push(t);
    }
    out
}

/// Bilateral sum Σ_{n=-N}^{N} (a;q)_n/(b;q)_n z^n against
/// (q, b/a, az, q/(az); q)_∞ / (b, q/a, z, b/(az); q)_∞.
pub fn check_1psi1(
    a: impl Into<Complex64>,
    b: impl Into<Complex64>,
    z: impl Into<Complex64>,
    q: QBase,
    terms: usize,
    tol: f64,
) -> Result<CheckResult> {
    let (a, b, z) = (a.into(), b.into(), z.into());
    if a.norm() == 0.0 || !((b / a).norm() < z.norm() && z.norm() < 1.0) {
        return Err(Error::Domain("1psi1 needs |b/a| < |z| < 1".into()));
    }
    let qv = q.value();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut aq = a;
    let mut bq = b;
    for _ in 0..=terms {
        sum += term;
        abs_sum += term.norm();
        term *= (1.0 - aq) / (1.0 - bq) * z;
        aq *= qv;
        bq *= qv;
    }
    let mut last_negative = Complex64::new(0.0, 0.0);
    for t in negative_terms(a, b, z, qv, terms) {
        sum += t;
        abs_sum += t.norm();
        last_negative = t;
    }
    let num = cinf(Complex64::from(qv), qv) * cinf(b / a, qv) * cinf(a * z, qv) * cinf(qv / (a * z), qv);
    let den = cinf(b, qv) * cinf(qv / a, qv) * cinf(z, qv) * cinf(b / (a * z), qv);
    let rhs = num / den;
    let (residual, scale, noise) = relative(sum, rhs, abs_sum, qv, 8);
    let r_pos = z.norm();
    let r_neg = (b / (a * z)).norm();
    let tail = term.norm() / (1.0 - r_pos) + last_negative.norm() * r_neg / (1.0 - r_neg);
    Ok(CheckResult::new("one_psi_one", "Ramanujan 1psi1 sum", residual, tol)
        .with("terms", terms)
        .with("tail_estimate", tail / rhs.norm().max(f64::MIN_POSITIVE))
        .with("scale", scale)
        .with("noise_floor", noise))
}

/// Σ_{k=-N}^{N} (-1)^k q^{k²/2} z^k against (q, √q z, √q/z; q)_∞.
pub fn check_triple_product(z: impl Into<Complex64>, q: QBase, terms: usize, tol: f64) -> Result<CheckResult> {
    let z: Complex64 = z.into();
    if z.norm() == 0.0 {
        return Err(Error::Domain("triple product needs z != 0".into()));
    }
    let qv = q.value();
    let sq = qv.sqrt();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in -(terms as i64)..=(terms as i64) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t = sign * qv.powf((k * k) as f64 / 2.0) * z.powi(k as i32);
        sum += t;
        abs_sum += t.norm();
    }
    let rhs = cinf(Complex64::from(qv), qv) * cinf(sq * z, qv) * cinf(sq / z, qv);
    let (residual, scale, noise) = relative(sum, rhs, abs_sum, qv, 3);
    let zmax = z.norm().max(1.0 / z.norm());
    let n1 = terms as f64 + 1.0;
    let first = qv.powf(n1 * n1 / 2.0) * zmax.powf(n1);
    let rho = qv.powf(n1 + 0.5) * zmax;
    let tail = if rho < 1.0 { 2.0 * first / (1.0 - rho) } else { f64::INFINITY };
    Ok(CheckResult::new("triple_product", "Jacobi triple product", residual, tol)
        .with("terms", terms)
        .with("tail_bound", tail / rhs.norm().max(abs_sum))
        .with("scale", scale)
        .with("noise_floor", noise))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn q_binomial_examples() {
        let r = check_q_binomial(0.7, 0.0, q(0.5), 10, 1e-12).unwrap();
        assert_eq!(r.residual, 0.0);
        let r = check_q_binomial(0.3, 0.4, q(0.5), 60, 1e-12).unwrap();
        assert!(r.pass, "{}", r.residual);
        assert!(check_q_binomial(0.3, 1.0, q(0.5), 60, 1e-12).is_err());
    }

    #[test]
    fn q_binomial_at_b_equal_q_is_geometric() {
        // (q;q)_n/(q;q)_n = 1, so the partial sum is geometric
        let (qv, z, n) = (0.5, 0.4f64, 20);
        let r = check_q_binomial(qv, z, q(qv), n, 1.0).unwrap();
        let partial = (1.0 - z.powi(n as i32)) / (1.0 - z);
        let rhs = 1.0 / (1.0 - z);
        assert!((r.residual - (partial - rhs).abs() / rhs).abs() < 1e-15);
    }

    #[test]
    fn one_psi_one_examples() {
        let r = check_1psi1(0.6, 0.1, 0.5, q(0.5), 60, 1e-11).unwrap();
        assert!(r.pass, "{}", r.residual);
        assert!(check_1psi1(0.6, 0.5, 0.5, q(0.5), 60, 1e-11).is_err());
    }

    #[test]
    fn one_psi_one_at_b_equal_q_reduces_to_q_binomial() {
        let (qv, a, z) = (0.5, 0.9, 0.6);
        let p = check_1psi1(a, qv, z, q(qv), 60, 1e-12).unwrap();
        let b = check_q_binomial(a, z, q(qv), 61, 1e-12).unwrap();
        assert!(p.pass && b.pass);
        assert!((p.residual - b.residual).abs() < 1e-14);
    }

    #[test]
    fn one_psi_one_tends_to_triple_product() {
        // b = 0, a -> 1/eps, z -> eps Z; as eps -> 0 the sum approaches
        // Σ (-1)^n q^{n(n-1)/2} Z^n = (q, Z, q/Z; q)_∞, the triple product at z = Z/√q.
        let (qv, zz) = (0.5f64, 0.8f64);
        let eps = 1e-7;
        let a = 1.0 / eps;
        let z = eps * zz;
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut aq = a;
        for _ in 0..=60 {
            sum += term;
            term *= (1.0 - aq) * z;
            aq *= qv;
        }
        for t in negative_terms(a.into(), 0.0.into(), z.into(), qv, 60) {
            sum += t.re;
        }
        let tp = cinf(qv.into(), qv) * cinf(zz.into(), qv) * cinf((qv / zz).into(), qv);
        assert!((sum - tp.re).abs() < 1e-5, "{} vs {}", sum, tp.re);
        let r = check_triple_product(zz / qv.sqrt(), q(qv), 40, 1e-13).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn triple_product_examples() {
        let r = check_triple_product(1.0, q(0.5), 40, 1e-13).unwrap();
        assert!(r.pass, "{}", r.residual);
        let a = check_triple_product(0.7, q(0.3), 40, 1e-13).unwrap();
        let b = check_triple_product(1.0 / 0.7, q(0.3), 40, 1e-13).unwrap();
        assert!(a.pass && b.pass);
        let zero = check_triple_product(0.5f64.sqrt(), q(0.5), 40, 1e-13).unwrap();
        assert!(zero.pass, "{}", zero.residual);
        assert_eq!(zero.meta["scale"], "absolute term sum");
        assert!(check_triple_product(0.0, q(0.5), 40, 1e-13).is_err());
    }

    #[test]
    fn ladder_semantics() {
        let mk = |r: f64| CheckResult::new("x", "r", r, 1.0);
        assert!(term_count_ladder(&[mk(1e-3), mk(4e-4), mk(1e-15), mk(2e-15)]));
        assert!(!term_count_ladder(&[mk(1e-3), mk(9e-4)]));
        assert!(term_count_ladder(&[mk(1e-3), mk(3e-13).with("noise_floor", 5e-13)]));
    }

    #[test]
    fn residuals_halve_under_doubling() {
        let counts = [4usize, 8, 16, 32, 64];
        let qb: Vec<_> = counts.iter().map(|&n| check_q_binomial(0.3, 0.4, q(0.5), n, 1.0).unwrap()).collect();
        let ps: Vec<_> = counts.iter().map(|&n| check_1psi1(0.6, 0.1, 0.5, q(0.5), n, 1.0).unwrap()).collect();
        let tp: Vec<_> = counts.iter().map(|&n| check_triple_product(1.0, q(0.5), n, 1.0).unwrap()).collect();
        assert!(term_count_ladder(&qb), "{qb:?}");
        assert!(term_count_ladder(&ps), "{ps:?}");
        assert!(term_count_ladder(&tp), "{tp:?}");
    }
}
