//! Lowering, raising, Rodrigues and norm identities.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{aw_eval_direct, aw_poly, aw_poly_recurrence, norm_xi, recurrence_coeffs, weight, weight_breve, AWParams};
use crate::check::max_rel_diff;
use crate::chebpoly::{breve_fn, dq_iterated, dq_pointwise, ChebSeries};
use crate::qcore::{pinf, pinf_multi, poch, poch_inf, PRODUCT_TOL};
use crate::{CheckResult, Error, Result};

/// Highest order accepted by `rodrigues_check`.
pub const RODRIGUES_CAP: usize = 5;

/// `Π_{j<n} (1 - 2u q^j x + u² q^{2j})`, i.e. `(u e^{iθ}, u e^{-iθ}; q)_n`.
fn pair_product(u: f64, q: f64, n: usize) -> ChebSeries {
    let mut acc = ChebSeries::constant(1.0);
    let mut uq = u;
    for _ in 0..n {
        acc = acc.mul(&ChebSeries::linear(1.0 + uq * uq, -2.0 * uq));
        uq *= q;
    }
    acc
}

/// `D_q p_n = 2 q^{(1-n)/2} (1 - q^n)(1 - abcd q^{n-1})/(1 - q) · p_{n-1}(shifted)`
/// in coefficient space, together with the factorial form
/// `D_q (a e^{iθ}, a e^{-iθ}; q)_n = -2a (1 - q^n)/(1 - q) (a q^{1/2} e^{iθ}, a q^{1/2} e^{-iθ}; q)_{n-1}`.
pub fn lowering_check(n: usize, p: &AWParams, tol: f64) -> Result<CheckResult> {
    if n == 0 {
        return Err(Error::InvalidInput("lowering needs n >= 1".into()));
    }
    let q = p.qv();
    let qn = q.powi(n as i32);
    let k = 2.0 * q.powf((1.0 - n as f64) / 2.0) * (1.0 - qn) * (1.0 - p.abcd() * qn / q) / (1.0 - q);
    let lhs = aw_poly(n, p)?.dq(p.q);
    let rhs = aw_poly(n - 1, &p.shift())?.scale(k);
    let r_poly = max_rel_diff(lhs.coeffs(), rhs.coeffs(), f64::MIN_POSITIVE);

    let f = pair_product(p.a, q, n).dq(p.q);
    let g = pair_product(p.a * q.sqrt(), q, n - 1).scale(-2.0 * p.a * (1.0 - qn) / (1.0 - q));
    let r_fact = max_rel_diff(f.coeffs(), g.coeffs(), 1e-300);

    Ok(CheckResult::new("lowering", "lowering operator", r_poly.max(r_fact), tol)
        .with("n", n)
        .with("residual_polynomial", r_poly)
        .with("residual_factorial", r_fact)
        .with("constant", k))
}

/// `2 q^{(1-n)/2}/(q - 1) · w p_n = D_q[w(shifted) p_{n-1}(shifted)]` on a θ grid.
pub fn raising_check(n: usize, p: &AWParams, grid: &[f64], tol: f64) -> Result<CheckResult> {
    if n == 0 {
        return Err(Error::InvalidInput("raising needs n >= 1".into()));
    }
    let q = p.qv();
    let s = p.shift();
    let pn = aw_poly(n, p)?;
    let pm = aw_poly(n - 1, &s)?;
    let c = 2.0 * q.powf((1.0 - n as f64) / 2.0) / (q - 1.0);
    let inner = breve_fn(|z| Ok(weight_breve(z, &s)? * pm.eval_breve(z)?));
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for &th in grid {
        let x = th.cos();
        lhs.push(c * weight(x, p, PRODUCT_TOL)? * pn.eval(x));
        rhs.push(dq_pointwise(&inner, Complex64::from_polar(1.0, th), p.q)?.re);
    }
    let r = max_rel_diff(&rhs, &lhs, f64::MIN_POSITIVE);
    Ok(CheckResult::new("raising", "raising operator", r, tol).with("n", n).with("grid", grid.len()))
}

/// `D_q w(shifted) / w = 2/(q - 1) [2(1 - abcd) x - (a+b+c+d) + abc + abd + acd + bcd]`.
pub fn weight_ratio_check(p: &AWParams, grid: &[f64], tol: f64) -> Result<CheckResult> {
    let q = p.qv();
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    let s = p.shift();
    let ws = breve_fn(|z| weight_breve(z, &s));
    let e3 = a * b * c + a * b * d + a * c * d + b * c * d;
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for &th in grid {
        let z = Complex64::from_polar(1.0, th);
        lhs.push((dq_pointwise(&ws, z, p.q)? / weight_breve(z, p)?).re);
        rhs.push(2.0 / (q - 1.0) * (2.0 * (1.0 - p.abcd()) * th.cos() - (a + b + c + d) + e3));
    }
    let r = max_rel_diff(&lhs, &rhs, f64::MIN_POSITIVE);
    Ok(CheckResult::new("weight_ratio", "weight ratio under D_q", r, tol).with("grid", grid.len()))
}

/// `w p_n = ((q - 1)/2)^n q^{n(n-1)/4} D_q^n [w(x; a q^{n/2}, b q^{n/2}, c q^{n/2}, d q^{n/2})]`.
pub fn rodrigues_check(n: usize, p: &AWParams, grid: &[f64], tol: f64) -> Result<CheckResult> {
    if n > RODRIGUES_CAP {
        return Err(Error::InvalidInput(format!("Rodrigues order {n} above cap {RODRIGUES_CAP}")));
    }
    let q = p.qv();
    let pn = aw_poly(n, p)?;
    let sn = p.shift_by(n);
    let w_n = breve_fn(|z| weight_breve(z, &sn));
    let c = ((q - 1.0) / 2.0).powi(n as i32) * q.powf((n * n.saturating_sub(1)) as f64 / 4.0);
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for &th in grid {
        let x = th.cos();
        lhs.push(weight(x, p, PRODUCT_TOL)? * pn.eval(x));
        rhs.push(c * dq_iterated(&w_n, Complex64::from_polar(1.0, th), p.q, n)?.re);
    }
    let r = max_rel_diff(&rhs, &lhs, f64::MIN_POSITIVE);
    Ok(CheckResult::new("rodrigues", "Rodrigues formula", r, tol).with("n", n).with("grid", grid.len()))
}

/// `2x p_n - (A_n p_{n+1} + B_n p_n + C_n p_{n-1})` coefficientwise, relative
/// to the largest coefficient of `2x p_n`, for `n <= nmax`.
pub fn recurrence_check(nmax: usize, p: &AWParams, tol: f64) -> Result<CheckResult> {
    let polys = (0..=nmax + 1).map(|n| aw_poly(n, p)).collect::<Result<Vec<_>>>()?;
    let two_x = ChebSeries::linear(0.0, 2.0);
    let mut worst: f64 = 0.0;
    for n in 0..=nmax {
        let r = recurrence_coeffs(n, p)?;
        let lhs = &two_x * &polys[n];
        let mut rhs = &polys[n + 1].scale(r.a_n) + &polys[n].scale(r.b_n);
        if n > 0 {
            rhs = &rhs + &polys[n - 1].scale(r.c_n);
        }
        worst = worst.max(max_rel_diff(rhs.coeffs(), lhs.coeffs(), f64::MIN_POSITIVE));
    }
    Ok(CheckResult::new("recurrence", "three-term recurrence", worst, tol).with("nmax", nmax))
}

/// `aw_poly` against the recurrence construction (coefficients) and against
/// direct evaluation of the 4φ3 at 8 points, for `n <= nmax`.
pub fn dual_construction_check(nmax: usize, p: &AWParams, tol: f64) -> Result<CheckResult> {
    let mut coeff: f64 = 0.0;
    let mut direct: f64 = 0.0;
    for n in 0..=nmax {
        let f = aw_poly(n, p)?;
        coeff = coeff.max(max_rel_diff(aw_poly_recurrence(n, p)?.coeffs(), f.coeffs(), f64::MIN_POSITIVE));
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for k in 0..8 {
            let th = 0.15 + 0.37 * k as f64;
            let v = f.eval(th.cos());
            num = num.max((v - aw_eval_direct(n, p, th)?).abs());
            den = den.max(v.abs());
        }
        direct = direct.max(num / den.max(f64::MIN_POSITIVE));
    }
    Ok(CheckResult::new("dual_construction", "4φ3 expansion against recurrence and direct sum", coeff.max(direct), tol)
        .with("nmax", nmax)
        .with("recurrence", coeff)
        .with("direct", direct))
}

/// `2π (abcd; q)_∞ / (q, ab, ac, ad, bc, bd, cd; q)_∞`.
pub fn aw_integral_closed(p: &AWParams, tol: f64) -> Result<f64> {
    p.check_weight_domain()?;
    let q = p.qv();
    let inf = |u: f64| poch_inf(&u, q, tol).map(|v| v.value);
    let mut den = inf(q)?;
    for uv in p.pairs() {
        den *= inf(uv)?;
    }
    Ok(2.0 * PI * inf(p.abcd())? / den)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Functional equation for `ξ_0` under `u -> u q^{n/2}`, the one-step relation
/// between `ξ_n` and `ξ_0`, and the limit of the functional equation as the
/// shifted parameters tend to zero.
pub fn xi_functional_check(p: &AWParams, n: usize, tol: f64) -> Result<CheckResult> {
    if n == 0 {
        return Err(Error::InvalidInput("functional equation needs n >= 1".into()));
    }
    let q = p.qv();
    let abcd = p.abcd();
    let pairs = p.pairs();
    let pairs_n = |m: usize| pairs.iter().map(|&u| poch(&u, &q, m)).product::<f64>();
    let prefactor = |m: usize| {
        poch(&(abcd / q), &q, m) * poch(&(abcd * q.powi(m as i32 - 1)), &q, m) * poch(&abcd, &q, 2 * m)
            / (pairs_n(m) * poch(&(abcd / q), &q, 2 * m))
    };
    let xi0 = norm_xi(0, p, PRODUCT_TOL)?;
    let shifted = aw_integral_closed(&p.shift_by(n), PRODUCT_TOL)?;
    let r_shift = rel(prefactor(n) * shifted, xi0);

    let one_step = poch(&q, &q, n) * pairs_n(n) * poch(&(abcd / q), &q, 2 * n)
        / (poch(&(abcd / q), &q, n) * poch(&abcd, &q, 2 * n))
        * xi0;
    let r_step = rel(one_step, norm_xi(n, p, PRODUCT_TOL)?);

    // shift far enough that every shifted pair product is below 1e-17
    let far = (2.0 * (1e-17f64).ln() / q.ln()).ceil().max(2.0) as usize;
    let limit = prefactor(far) * 2.0 * PI / pinf(q, q);
    let closed = 2.0 * PI * pinf(abcd, q) / (pinf(q, q) * pinf_multi(&pairs, q));
    let r_limit = rel(limit, closed);

    let r = r_shift.max(r_step).max(r_limit);
    if !r.is_finite() {
        return Err(Error::Degenerate("functional-equation prefactor is singular for these parameters".into()));
    }
    Ok(CheckResult::new("xi_functional", "norm functional equation", r, tol)
        .with("n", n)
        .with("residual_shift", r_shift)
        .with("residual_one_step", r_step)
        .with("residual_limit", r_limit)
        .with("limit_shift", far))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::askey_wilson::{eigenvalue_lambda, weight_sin_breve};
    use crate::quadrature::interior_thetas;

    #[test]
    fn lowering_canonical() {
        let p = AWParams::canonical();
        for n in 1..=10 {
            let r = lowering_check(n, &p, 1e-11).unwrap();
            assert!(r.pass, "n={n} residual={}", r.residual);
        }
    }

    #[test]
    fn lowering_at_degree_one_is_minus_two_a() {
        let p = AWParams::canonical();
        let f = pair_product(p.a, p.qv(), 1).dq(p.q);
        assert!((f.coeff(0) + 2.0 * p.a).abs() < 1e-15);
    }

    #[test]
    fn double_lowering_composes() {
        let p = AWParams::canonical();
        let q = p.qv();
        let k = |n: usize, pp: &AWParams| {
            let qn = q.powi(n as i32);
            2.0 * q.powf((1.0 - n as f64) / 2.0) * (1.0 - qn) * (1.0 - pp.abcd() * qn / q) / (1.0 - q)
        };
        for n in 2..=8 {
            let lhs = aw_poly(n, &p).unwrap().dq(p.q).dq(p.q);
            let rhs = aw_poly(n - 2, &p.shift_by(2)).unwrap().scale(k(n, &p) * k(n - 1, &p.shift()));
            assert!(max_rel_diff(lhs.coeffs(), rhs.coeffs(), 1e-300) < 1e-11);
        }
    }

    #[test]
    fn raising_and_ratio() {
        let p = AWParams::canonical();
        let grid = interior_thetas(64);
        for n in 1..=6 {
            let r = raising_check(n, &p, &grid, 1e-8).unwrap();
            assert!(r.pass, "n={n} residual={}", r.residual);
        }
        let r = weight_ratio_check(&p, &interior_thetas(32), 1e-10).unwrap();
        assert!(r.pass, "{}", r.residual);
        let z = AWParams::new(0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(weight_ratio_check(&z, &interior_thetas(32), 1e-10).unwrap().pass);
    }

    #[test]
    fn rodrigues_orders() {
        let p = AWParams::canonical();
        let grid = interior_thetas(32);
        let r0 = rodrigues_check(0, &p, &grid, 1e-7).unwrap();
        assert!(r0.residual < 1e-13);
        for n in 1..=4 {
            let r = rodrigues_check(n, &p, &grid, 1e-7).unwrap();
            assert!(r.pass, "n={n} residual={}", r.residual);
        }
        assert!(rodrigues_check(RODRIGUES_CAP + 1, &p, &grid, 1e-7).is_err());
    }

    #[test]
    fn composite_lowering_after_raising_is_constant() {
        // (1/w) D_q [w(shifted) D_q p_n] / p_n is the constant λ_n
        let p = AWParams::canonical();
        let s = p.shift();
        for n in 1..=5 {
            let d = aw_poly(n, &p).unwrap().dq(p.q);
            let inner = breve_fn(|z| Ok(weight_breve(z, &s)? * d.eval_breve(z)?));
            let pn = aw_poly(n, &p).unwrap();
            let lam = eigenvalue_lambda(n, &p);
            for th in interior_thetas(16) {
                let z = Complex64::from_polar(1.0, th);
                let pv = pn.eval(th.cos());
                if pv.abs() < 1e-3 {
                    continue;
                }
                let v = (dq_pointwise(&inner, z, p.q).unwrap() / weight_breve(z, &p).unwrap()).re / pv;
                assert!((v - lam).abs() < 1e-8 * lam.abs(), "n={n}");
            }
        }
    }

    #[test]
    fn recurrence_and_dual() {
        let p = AWParams::canonical();
        let r = recurrence_check(12, &p, 1e-12).unwrap();
        assert!(r.pass, "{}", r.residual);
        let d = dual_construction_check(12, &p, 1e-11).unwrap();
        assert!(d.pass, "{:?}", d.meta);
    }

    #[test]
    fn integral_examples() {
        let p = AWParams::canonical();
        assert!((aw_integral_closed(&p, PRODUCT_TOL).unwrap() - norm_xi(0, &p, PRODUCT_TOL).unwrap()).abs() < 1e-14);
        let z = AWParams::new(0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((aw_integral_closed(&z, PRODUCT_TOL).unwrap() - 2.0 * PI / pinf(0.5, 0.5)).abs() < 1e-13);
        // midpoint rule in θ on w sin θ
        let n = 512;
        let quad: f64 = interior_thetas(n)
            .iter()
            .map(|&t| weight_sin_breve(Complex64::from_polar(1.0, t), &p).unwrap().re)
            .sum::<f64>()
            * PI
            / n as f64;
        assert!(rel(quad, aw_integral_closed(&p, PRODUCT_TOL).unwrap()) < 1e-12);
    }

    #[test]
    fn functional_equation() {
        let p = AWParams::canonical();
        for n in 1..=6 {
            let r = xi_functional_check(&p, n, 1e-11).unwrap();
            assert!(r.pass, "n={n} {:?}", r.meta);
        }
        let z = AWParams::new(0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(xi_functional_check(&z, 1, 1e-13).unwrap().pass);
    }
}
