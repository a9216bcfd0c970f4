//! Gauss-Chebyshev quadrature and the inner products built on it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::askey_wilson::{aw_poly, norm_xi, weight_sin_breve, AWParams};
use crate::chebpoly::{breve_fn, dq_pointwise, sin_breve, BreveFunction, ChebSeries};
use crate::qcore::{QBase, PRODUCT_TOL};
use crate::{CheckResult, Error, Result};

pub const DEFAULT_NODES: usize = 512;

/// `θ_k = (2k - 1)π/(2n)`, `k = 1..=n`.
pub fn interior_thetas(n: usize) -> Vec<f64> {
    (1..=n).map(|k| (2 * k - 1) as f64 * PI / (2 * n) as f64).collect()
}

/// N-point Gauss-Chebyshev rule of the first kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    n: usize,
    theta: Vec<f64>,
    x: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("quadrature needs at least one node".into()));
        }
        let theta = interior_thetas(n);
        let x = theta.iter().map(|t| t.cos()).collect();
        Ok(QuadratureRule { n, theta, x })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    /// Every weight equals `π/N`.
    pub fn weight(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn z(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.theta[k])
    }

    /// Rule with half the nodes, used as a convergence diagnostic.
    pub fn halved(&self) -> Option<Self> {
        (self.n >= 2).then(|| QuadratureRule::new(self.n / 2).expect("nonzero"))
    }

    /// `(π/N) Σ h(z_k)`, real part.
    pub fn sum<H>(&self, mut h: H) -> Result<f64>
    where
        H: FnMut(Complex64) -> Result<Complex64>,
    {
        let mut acc = 0.0;
        for k in 0..self.n {
            acc += h(self.z(k))?.re;
        }
        Ok(acc * self.weight())
    }
}

/// `(π/N) Σ f(x_k) conj(g(x_k))`.
pub fn inner_chebyshev<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> Result<f64>
where
    F: BreveFunction + ?Sized,
    G: BreveFunction + ?Sized,
{
    rule.sum(|z| Ok(f.breve(z)? * g.breve(z)?.conj()))
}

/// `w(x_k) √(1 - x_k²)` at every node.
pub fn weighted_node_values(p: &AWParams, rule: &QuadratureRule) -> Result<Vec<f64>> {
    p.check_weight_domain()?;
    (0..rule.len()).map(|k| weight_sin_breve(rule.z(k), p).map(|v| v.re)).collect()
}

/// `∫ f g w dx` by the Chebyshev rule.
pub fn inner_weighted<F, G>(f: &F, g: &G, p: &AWParams, rule: &QuadratureRule) -> Result<f64>
where
    F: BreveFunction + ?Sized,
    G: BreveFunction + ?Sized,
{
    let w = weighted_node_values(p, rule)?;
    weighted_with(f, g, &w, rule)
}

pub(crate) fn weighted_with<F, G>(f: &F, g: &G, w: &[f64], rule: &QuadratureRule) -> Result<f64>
where
    F: BreveFunction + ?Sized,
    G: BreveFunction + ?Sized,
{
    let mut acc = 0.0;
    for (k, wk) in w.iter().enumerate() {
        let z = rule.z(k);
        acc += (f.breve(z)? * g.breve(z)?.conj()).re * wk;
    }
    Ok(acc * rule.weight())
}

/// Formal adjoint `D_q* g = -√(1 - x²) D_q(g(x)/√(1 - x²))` as a breve function.
/// Boundary values of `g` at `±1` enter `ibp_boundary`; when both vanish,
/// `<D_q f, g> = <f, D_q* g>`.
pub fn dq_adjoint<G: BreveFunction>(g: G, q: QBase) -> impl BreveFunction {
    let inner = breve_fn(move |z| Ok(g.breve(z)? / sin_breve(z)));
    breve_fn(move |z| Ok(-sin_breve(z) * dq_pointwise(&inner, z, q)?))
}

/// `π√q/(1 - q) · {f(X) g(1) - f(-X) g(-1)}` with `X = (q^{1/2} + q^{-1/2})/2`.
pub fn ibp_boundary(f: &ChebSeries, g: &ChebSeries, q: QBase) -> f64 {
    let s = q.sqrt();
    let big_x = (s + 1.0 / s) / 2.0;
    PI * s / (1.0 - q.value()) * (f.eval(big_x) * g.eval(1.0) - f.eval(-big_x) * g.eval(-1.0))
}

fn ibp_raw(f: &ChebSeries, g: &ChebSeries, q: QBase, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let lhs = inner_chebyshev(&f.dq(q), g, rule)?;
    let rhs = ibp_boundary(f, g, q) + inner_chebyshev(f, &dq_adjoint(g, q), rule)?;
    Ok((lhs, rhs))
}

/// Attach a rerun of `run` at `N/2` nodes as a convergence diagnostic.
pub fn with_half_rerun<R>(rule: &QuadratureRule, run: R) -> Result<CheckResult>
where
    R: Fn(&QuadratureRule) -> Result<CheckResult>,
{
    let full = run(rule)?.with("nodes", rule.len());
    Ok(match rule.halved() {
        Some(half) => match run(&half) {
            Ok(h) => full
                .clone()
                .with("residual_half_nodes", h.residual)
                .with("convergence_delta", (full.residual - h.residual).abs()),
            Err(e) => full.with("half_nodes_error", e.to_string()),
        },
        None => full,
    })
}

/// Discrete integration by parts for `D_q`; residual `|L - R|/(1 + |L|)`.
pub fn ibp_residual(f: &ChebSeries, g: &ChebSeries, q: QBase, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    with_half_rerun(rule, |r| {
        let (lhs, rhs) = ibp_raw(f, g, q, r)?;
        Ok(CheckResult::new("ibp", "integration by parts for D_q", (lhs - rhs).abs() / (1.0 + lhs.abs()), tol)
            .with("lhs", lhs)
            .with("rhs", rhs))
    })
}

/// Green's formula `<D_q(p D_q f), √(1-x²) g> = <√(1-x²) f, D_q(p D_q g)>`.
pub fn green_residual<P>(f: &ChebSeries, g: &ChebSeries, p_fn: &P, q: QBase, rule: &QuadratureRule, tol: f64) -> Result<CheckResult>
where
    P: BreveFunction,
{
    let side = |u: &ChebSeries, v: &ChebSeries, r: &QuadratureRule| -> Result<f64> {
        let du = u.dq(q);
        let flux = breve_fn(|z| Ok(p_fn.breve(z)? * du.breve(z)?));
        r.sum(|z| Ok(dq_pointwise(&flux, z, q)? * sin_breve(z) * v.breve(z)?))
    };
    with_half_rerun(rule, |r| {
        let lhs = side(f, g, r)?;
        let rhs = side(g, f, r)?;
        Ok(CheckResult::new("green", "Green's formula", (lhs - rhs).abs() / (1.0 + lhs.abs()), tol)
            .with("lhs", lhs)
            .with("rhs", rhs))
    })
}

/// `G_{mn} = (p_m, p_n)_w` for `m, n <= nmax`.
pub fn gram_matrix(p: &AWParams, nmax: usize, rule: &QuadratureRule) -> Result<Vec<Vec<f64>>> {
    let w = weighted_node_values(p, rule)?;
    let polys = (0..=nmax).map(|n| aw_poly(n, p)).collect::<Result<Vec<_>>>()?;
    // node values once, then plain dot products
    let vals: Vec<Vec<f64>> = polys
        .par_iter()
        .map(|pn| rule.nodes().iter().map(|&x| pn.eval(x)).collect())
        .collect();
    Ok((0..=nmax)
        .into_par_iter()
        .map(|m| {
            (0..=nmax)
                .map(|n| vals[m].iter().zip(&vals[n]).zip(&w).map(|((a, b), c)| a * b * c).sum::<f64>() * rule.weight())
                .collect()
        })
        .collect())
}

/// Largest normalised off-diagonal entry and largest relative diagonal
/// deviation from `ξ_n`.
pub fn gram_orthogonality(p: &AWParams, nmax: usize, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    let xi = (0..=nmax).map(|n| norm_xi(n, p, PRODUCT_TOL)).collect::<Result<Vec<_>>>()?;
    with_half_rerun(rule, |r| {
        let g = gram_matrix(p, nmax, r)?;
        let mut off: f64 = 0.0;
        let mut diag: f64 = 0.0;
        for m in 0..=nmax {
            diag = diag.max((g[m][m] - xi[m]).abs() / xi[m]);
            for n in 0..=nmax {
                if m != n {
                    off = off.max(g[m][n].abs() / (g[m][m] * g[n][n]).sqrt());
                }
            }
        }
        Ok(CheckResult::new("orthogonality", "orthogonality of p_n", off.max(diag), tol)
            .with("nmax", nmax)
            .with("off_diagonal", off)
            .with("diagonal", diag))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::askey_wilson::{aw_integral_closed, weight_breve};
    use proptest::prelude::*;

    fn rule(n: usize) -> QuadratureRule {
        QuadratureRule::new(n).unwrap()
    }

    fn qb(v: f64) -> QBase {
        QBase::new(v).unwrap()
    }

    #[test]
    fn chebyshev_inner_products() {
        let r = rule(32);
        assert!((inner_chebyshev(&ChebSeries::t(0), &ChebSeries::t(0), &r).unwrap() - PI).abs() < 1e-14);
        for m in 0..32 {
            for n in 0..32 {
                let v = inner_chebyshev(&ChebSeries::t(m), &ChebSeries::t(n), &r).unwrap();
                let want = if m != n { 0.0 } else if m == 0 { PI } else { PI / 2.0 };
                assert!((v - want).abs() < 1e-13, "m={m} n={n} v={v}");
            }
        }
    }

    #[test]
    fn monomial_moments_are_exact() {
        let n = 12;
        let r = rule(n);
        for j in 0..2 * n {
            let s: f64 = r.nodes().iter().map(|x| x.powi(j as i32)).sum::<f64>() * r.weight();
            let want = if j % 2 == 1 {
                0.0
            } else {
                // π (j-1)!!/j!!
                (1..=j / 2).fold(PI, |acc, i| acc * (2 * i - 1) as f64 / (2 * i) as f64)
            };
            assert!((s - want).abs() < 1e-13, "j={j}");
        }
        let total: f64 = (0..n).map(|_| r.weight()).sum();
        assert!((total - PI).abs() < 1e-14);
    }

    #[test]
    fn weighted_examples() {
        let p = AWParams::canonical();
        let r = rule(512);
        let one = ChebSeries::constant(1.0);
        let v = inner_weighted(&one, &one, &p, &r).unwrap();
        let c = aw_integral_closed(&p, PRODUCT_TOL).unwrap();
        assert!((v - c).abs() < 1e-9 * c);
        for n in 0..=8 {
            let pn = aw_poly(n, &p).unwrap();
            let xi = norm_xi(n, &p, PRODUCT_TOL).unwrap();
            assert!((inner_weighted(&pn, &pn, &p, &r).unwrap() - xi).abs() < 1e-9 * xi);
            for m in 0..n {
                let pm = aw_poly(m, &p).unwrap();
                assert!(inner_weighted(&pm, &pn, &p, &r).unwrap().abs() / xi < 1e-10);
            }
        }
    }

    #[test]
    fn gram_canonical_and_convergence() {
        let p = AWParams::canonical();
        let r = gram_orthogonality(&p, 8, &rule(512), 1e-9).unwrap();
        assert!(r.pass, "{:?}", r);
        let delta = r.meta["convergence_delta"].as_f64().unwrap();
        let r256 = gram_orthogonality(&p, 8, &rule(256), 1e-9).unwrap();
        assert!((r.residual - r256.residual).abs() < 1e-11 && delta < 1e-11);
    }

    #[test]
    fn gram_chebyshev_first_kind() {
        let p = AWParams::chebyshev_first(qb(0.5));
        let g = gram_matrix(&p, 6, &rule(64)).unwrap();
        for n in 0..=6 {
            let lead = aw_poly(n, &p).unwrap().coeff(n);
            let want = if n == 0 { PI } else { PI / 2.0 };
            assert!((g[n][n] / (lead * lead) - want).abs() < 1e-10, "n={n}");
            for m in 0..n {
                assert!(g[m][n].abs() < 1e-10 * g[n][n]);
            }
        }
    }

    #[test]
    fn ibp_examples() {
        let q = qb(0.25);
        let r = rule(64);
        let one = ChebSeries::constant(1.0);
        assert!(ibp_residual(&one, &one, q, &r, 1e-10).unwrap().pass);
        let c = ibp_residual(&ChebSeries::t(1), &one, q, &r, 1e-10).unwrap();
        assert!((c.meta["lhs"].as_f64().unwrap() - PI).abs() < 1e-13);
        assert!(c.pass, "{:?}", c);
        // f odd: boundary bracket is 2 f(X)
        let s = q.sqrt();
        assert!((ibp_boundary(&ChebSeries::t(1), &one, q) - PI * s / 0.75 * (s + 1.0 / s)).abs() < 1e-13);
    }

    #[test]
    fn adjoint_on_functions_vanishing_at_the_ends() {
        // g = (1 - x²) h vanishes at ±1, so the boundary bracket drops out
        let q = qb(0.5);
        let r = rule(256);
        let one_minus_x2 = ChebSeries::new(vec![0.5, 0.0, -0.5]);
        let mut rng = 0.37f64;
        for _ in 0..10 {
            let mut next = || {
                rng = (rng * 997.0 + 0.123).fract();
                2.0 * rng - 1.0
            };
            let f = ChebSeries::new((0..7).map(|_| next()).collect());
            let h = ChebSeries::new((0..5).map(|_| next()).collect());
            let g = one_minus_x2.mul(&h);
            assert!(ibp_boundary(&f, &g, q).abs() < 1e-14);
            let lhs = inner_chebyshev(&f.dq(q), &g, &r).unwrap();
            let rhs = inner_chebyshev(&f, &dq_adjoint(&g, q), &r).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn green_examples() {
        let p = AWParams::canonical();
        let s = p.shift();
        let pf = breve_fn(|z| weight_breve(z, &s));
        let r = rule(256);
        let (t2, t3) = (ChebSeries::t(2), ChebSeries::t(3));
        let a = green_residual(&t2, &t3, &pf, p.q, &r, 1e-8).unwrap();
        assert!(a.pass, "{:?}", a);
        let b = green_residual(&t3, &t2, &pf, p.q, &r, 1e-8).unwrap();
        assert!((a.residual - b.residual).abs() < 1e-14);
        assert!(green_residual(&t3, &t3, &pf, p.q, &r, 1e-14).unwrap().residual == 0.0);
        let sq = breve_fn(|z| Ok(sin_breve(z)));
        assert!(green_residual(&t2, &t3, &sq, p.q, &r, 1e-8).unwrap().pass);
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = ChebSeries> {
        prop::collection::vec(-1.0f64..1.0, 1..=max_deg + 1).prop_map(ChebSeries::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn ibp_random_pairs(f in poly(10), g in poly(10), qi in 0usize..3) {
            let q = qb([0.3, 0.5, 0.8][qi]);
            let r = ibp_residual(&f, &g, q, &rule(DEFAULT_NODES), 1e-10).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }
}
