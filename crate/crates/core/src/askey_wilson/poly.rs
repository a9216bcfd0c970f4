//! Construction and evaluation of `p_n`.
//!
//! The terminating 4φ3 has terms of size roughly `q^{-nk + k²/2}` that cancel
//! down to `O(a^n)`; at `q = 0.5, n = 12` that is twenty orders of magnitude.
//! The sum is therefore formed in exact rational arithmetic (every `f64` input is
//! a dyadic rational) and rounded once at the end.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{recurrence_coeffs, AWParams};
use crate::chebpoly::{cheb_mul, ChebSeries, DEGREE_CAP};
use crate::qcore::{exact_complex, phi_terminating, poch, powi, Exact, ExactComplex, QScalar};
use crate::{Error, Result};

fn check_degree(n: usize) -> Result<()> {
    if n > DEGREE_CAP {
        return Err(Error::InvalidInput(format!("degree {n} exceeds cap {DEGREE_CAP}")));
    }
    Ok(())
}

/// Puts the largest-magnitude parameter in the `a` slot when `a = 0`. The
/// polynomials are symmetric in all four parameters. `None` if all vanish.
fn with_nonzero_a(p: &AWParams) -> Option<AWParams> {
    if p.a != 0.0 {
        return Some(*p);
    }
    let mut v = p.params();
    let (i, _) = v.iter().enumerate().max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))?;
    if v[i] == 0.0 {
        return None;
    }
    v.swap(0, i);
    Some(p.with_params(v))
}

fn to_series(c: Vec<Exact>) -> ChebSeries {
    ChebSeries::new(c.iter().map(QScalar::to_f64).collect())
}

/// `p_n` expanded term by term from its terminating 4φ3 representation:
/// `a^{-n} Σ_k (q^{-n}, abcd q^{n-1}; q)_k q^k / (q; q)_k · (ab q^k, ac q^k, ad q^k; q)_{n-k}
///  · Π_{j<k} (1 - 2a q^j x + a² q^{2j})`,
/// with the `(ab, ac, ad; q)_n` prefactor folded into each term.
pub fn aw_poly(n: usize, p: &AWParams) -> Result<ChebSeries> {
    check_degree(n)?;
    let Some(p) = with_nonzero_a(p) else {
        return Ok(q_hermite_limit(n, p.qv()));
    };
    let e = |v: f64| <Exact as QScalar>::from_f64(v);
    let (q, a, b, c, d) = (e(p.qv()), e(p.a), e(p.b), e(p.c), e(p.d));
    let one = Exact::one();
    let two = &one + &one;
    let abcd = &a * &b * &c * &d;
    let (ab, ac, ad) = (&a * &b, &a * &c, &a * &d);
    let qinv_n = one.clone() / powi(&q, n);
    let abcd_qn1 = &abcd * powi(&q, n) / &q;

    let mut acc: Vec<Exact> = vec![Exact::zero(); n + 1];
    // running (q^{-n}, abcd q^{n-1}; q)_k q^k / (q; q)_k
    let mut t = one.clone();
    let mut qk = one.clone();
    // Π_{j<k} (1 + a² q^{2j} - 2a q^j x)
    let mut prod: Vec<Exact> = vec![one.clone()];
    for k in 0..=n {
        let tail = poch(&(&ab * &qk), &q, n - k) * poch(&(&ac * &qk), &q, n - k) * poch(&(&ad * &qk), &q, n - k);
        let coef = &t * &tail;
        for (slot, v) in acc.iter_mut().zip(&prod) {
            *slot += &coef * v;
        }
        if k == n {
            break;
        }
        let aqk = &a * &qk;
        let factor = vec![&one + &aqk * &aqk, -(&two * &aqk)];
        prod = cheb_mul(&prod, &factor);
        t = t * (&one - &qinv_n * &qk) * (&one - &abcd_qn1 * &qk) * &q / (&one - &qk * &q);
        qk *= &q;
    }
    let scale = one / powi(&a, n);
    Ok(to_series(acc.into_iter().map(|v| v * &scale).collect()))
}

/// All four parameters zero: the `a^n` coefficient of
/// `Σ_k (q^{-n}; q)_k q^k/(q; q)_k Π_{j<k} (1 - 2a q^j x + a² q^{2j})`.
fn q_hermite_limit(n: usize, qf: f64) -> ChebSeries {
    let q = <Exact as QScalar>::from_f64(qf);
    let one = Exact::one();
    let zero = Exact::zero();
    let qinv_n = one.clone() / powi(&q, n);
    // poly[s][m]: coefficient of a^s T_m, powers of a above n dropped
    let mut poly: Vec<Vec<Exact>> = vec![vec![zero.clone(); n + 1]; n + 1];
    poly[0][0] = one.clone();
    let mut acc = vec![zero.clone(); n + 1];
    let mut t = one.clone();
    let mut qk = one.clone();
    for k in 0..=n {
        for (slot, v) in acc.iter_mut().zip(&poly[n]) {
            *slot += &t * v;
        }
        if k == n {
            break;
        }
        let mut next = vec![vec![zero.clone(); n + 1]; n + 1];
        for s in 0..=n {
            for m in 0..=n {
                let v = &poly[s][m];
                if v.is_zero() {
                    continue;
                }
                next[s][m] += v;
                if s + 2 <= n {
                    next[s + 2][m] += v * &qk * &qk;
                }
                if s < n {
                    // -2 q^k x T_m = -q^k (T_{m+1} + T_{|m-1|})
                    let w = -(v * &qk);
                    if m < n {
                        next[s + 1][m + 1] += &w;
                    }
                    if m == 0 {
                        next[s + 1][1] += &w;
                    } else {
                        next[s + 1][m - 1] += &w;
                    }
                }
            }
        }
        poly = next;
        t = t * (&one - &qinv_n * &qk) * &q / (&one - &qk * &q);
        qk *= &q;
    }
    to_series(acc)
}

/// Pointwise `p_n(cos θ)` from the terminating 4φ3 at the complex arguments
/// `a e^{±iθ}`, summed exactly.
pub fn aw_eval_direct(n: usize, p: &AWParams, theta: f64) -> Result<f64> {
    check_degree(n)?;
    let p = with_nonzero_a(p)
        .ok_or_else(|| Error::ParameterRole("direct evaluation needs a nonzero parameter in the a slot".into()))?;
    let e = |v: f64| <ExactComplex as QScalar>::from_f64(v);
    let (q, a, b, c, d) = (e(p.qv()), e(p.a), e(p.b), e(p.c), e(p.d));
    let z = exact_complex(Complex64::from_polar(1.0, theta));
    let zc = z.conj();
    let abcd = a.clone() * b.clone() * c.clone() * d.clone();
    let abcd_qn1 = abcd * powi(&q, n) / q.clone();
    let ab = a.clone() * b;
    let ac = a.clone() * c;
    let ad = a.clone() * d;
    let sum = phi_terminating(
        n,
        &[abcd_qn1, a.clone() * z, a.clone() * zc],
        &[ab.clone(), ac.clone(), ad.clone()],
        &q,
        &q,
    )?;
    let pref = poch(&ab, &q, n) * poch(&ac, &q, n) * poch(&ad, &q, n) / powi(&a, n);
    Ok(QScalar::to_f64(&(pref * sum.value).re))
}

/// `p_n` by the three-term recurrence from `p_0 = 1` and `p_1 = aw_poly(1, p)`.
pub fn aw_poly_recurrence(n: usize, p: &AWParams) -> Result<ChebSeries> {
    check_degree(n)?;
    if p.a == 0.0 {
        return Err(Error::ParameterRole("the recurrence construction needs a nonzero a".into()));
    }
    let p0 = ChebSeries::constant(1.0);
    if n == 0 {
        return Ok(p0);
    }
    let mut prev = p0;
    let mut cur = aw_poly(1, p)?;
    let two_x = ChebSeries::linear(0.0, 2.0);
    for k in 1..n {
        let r = recurrence_coeffs(k, p)?;
        let t = &(&two_x * &cur) - &(&cur.scale(r.b_n) + &prev.scale(r.c_n));
        let next = t.scale(1.0 / r.a_n);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::max_rel_diff;
    use crate::qcore::QBase;

    fn canonical() -> AWParams {
        AWParams::canonical()
    }

    #[test]
    fn degree_zero_and_one() {
        let p = canonical();
        assert_eq!(aw_poly(0, &p).unwrap().coeffs(), &[1.0]);
        // p_1 = 2(1 - abcd) x - (a + b + c + d - abc - abd - acd - bcd)
        let p1 = aw_poly(1, &p).unwrap();
        let (a, b, c, d) = (p.a, p.b, p.c, p.d);
        let s = a + b + c + d - a * b * c - a * b * d - a * c * d - b * c * d;
        assert!((p1.coeff(1) - 2.0 * (1.0 - a * b * c * d)).abs() < 1e-15);
        assert!((p1.coeff(0) + s).abs() < 1e-15);
        for k in 0..8 {
            let th = 0.2 + 0.35 * k as f64;
            assert!((p1.eval(th.cos()) - aw_eval_direct(1, &p, th).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_is_exact() {
        let p = canonical();
        for n in 0..=12 {
            assert_eq!(aw_poly(n, &p).unwrap().degree(), Some(n));
        }
    }

    #[test]
    fn leading_coefficient() {
        // lead in the T basis is 2 (abcd q^{n-1}; q)_n for n >= 1
        let p = canonical();
        let q = p.qv();
        for n in 1..=10 {
            let lead = 2.0 * poch(&(p.abcd() * q.powi(n as i32 - 1)), &q, n);
            let got = aw_poly(n, &p).unwrap().leading();
            assert!((got - lead).abs() < 1e-14 * lead.abs());
        }
    }

    #[test]
    fn direct_evaluation_agrees() {
        let p = canonical();
        for n in 0..=12 {
            let f = aw_poly(n, &p).unwrap();
            let scale = (0..32).map(|k| f.eval((0.1 * k as f64).cos()).abs()).fold(0.0, f64::max);
            for k in 0..8 {
                let th = 0.15 + 0.37 * k as f64;
                let d = aw_eval_direct(n, &p, th).unwrap();
                assert!((f.eval(th.cos()) - d).abs() < 1e-11 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn symmetric_in_bcd_and_ab() {
        let p = canonical();
        for n in [3, 7, 10] {
            let base = aw_poly(n, &p).unwrap();
            for perm in [[p.a, p.c, p.b, p.d], [p.a, p.d, p.b, p.c], [p.b, p.a, p.c, p.d], [p.d, p.c, p.b, p.a]] {
                let other = aw_poly(n, &p.with_params(perm)).unwrap();
                assert!(max_rel_diff(other.coeffs(), base.coeffs(), 1e-300) < 1e-13);
            }
        }
    }

    #[test]
    fn zero_a_rotates() {
        let p = AWParams::new(0.5, 0.0, 0.2, -0.6, 0.3).unwrap();
        let r = p.with_params([-0.6, 0.2, 0.0, 0.3]);
        for n in 0..6 {
            assert_eq!(aw_poly(n, &p).unwrap(), aw_poly(n, &r).unwrap());
        }
    }

    #[test]
    fn all_zero_is_continuous_q_hermite() {
        // 2x H_n = H_{n+1} + (1 - q^n) H_{n-1}, H_0 = 1, H_1 = 2x
        let q = 0.4f64;
        let p = AWParams::new(q, 0.0, 0.0, 0.0, 0.0).unwrap();
        let mut h = vec![ChebSeries::constant(1.0), ChebSeries::linear(0.0, 2.0)];
        for n in 1..9 {
            let next = &(&ChebSeries::linear(0.0, 2.0) * &h[n]) - &h[n - 1].scale(1.0 - q.powi(n as i32));
            h.push(next);
        }
        for (n, hn) in h.iter().enumerate() {
            let got = aw_poly(n, &p).unwrap();
            assert!(max_rel_diff(got.coeffs(), hn.coeffs(), 1e-300) < 1e-13, "n={n}");
        }
        assert!(aw_eval_direct(2, &p, 0.3).is_err());
    }

    #[test]
    fn recurrence_construction_agrees() {
        let p = canonical();
        for n in 0..=12 {
            let a = aw_poly(n, &p).unwrap();
            let b = aw_poly_recurrence(n, &p).unwrap();
            assert!(max_rel_diff(b.coeffs(), a.coeffs(), 1e-300) < 1e-11, "n={n}");
        }
    }

    #[test]
    fn chebyshev_parameters_give_multiples_of_t() {
        let q = QBase::new(0.5).unwrap();
        let p = AWParams::chebyshev_first(q);
        for n in 0..=8 {
            let f = aw_poly(n, &p).unwrap();
            let lead = f.coeff(n);
            for k in 0..n {
                assert!(f.coeff(k).abs() < 1e-13 * lead.abs(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(aw_poly(DEGREE_CAP + 1, &canonical()).is_err());
    }
}
