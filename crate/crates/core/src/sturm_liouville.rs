//! The q-Sturm-Liouville operator `T f = -(1/w) D_q(p D_q f)` with
//! `w = w(x; a, b, c, d)` and `p = w(x; a q^{1/2}, ..., d q^{1/2})`.
//!
//! Sign convention: `D_q(p D_q p_n) = λ_n w p_n` with `λ_n <= 0`, so `T` has
//! eigenvalues `-λ_n >= 0`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::askey_wilson::{aw_poly, eigenvalue_lambda, norm_xi, weight_breve, weight_sin_breve, AWParams};
use crate::chebpoly::{breve_fn, cheb_mul, dq_pointwise, gamma_factor, sin_breve, ChebSeries};
use crate::qcore::{poch, powi, Exact, QBase, QScalar, PRODUCT_TOL};
use crate::quadrature::{with_half_rerun, QuadratureRule};
use crate::{CheckResult, Error, Result};

/// Relative size of the recursion numerator below which the ansatz is taken
/// to terminate.
pub const TERMINATION_TOL: f64 = 1e-10;

const EIGEN_CONVENTION: &str = "D_q(p D_q y) = lambda w y, lambda <= 0; T = -(1/w) D_q(p D_q .) has eigenvalue -lambda";

/// Weight `w` and inner coefficient `p` of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SLConfig {
    pub p: AWParams,
    pub inner: AWParams,
}

impl SLConfig {
    pub fn new(p: AWParams) -> Result<Self> {
        p.check_weight_domain()?;
        Ok(SLConfig { p, inner: p.shift() })
    }

    pub fn q(&self) -> QBase {
        self.p.q
    }

    pub fn w(&self, z: Complex64) -> Result<Complex64> {
        weight_breve(z, &self.p)
    }

    pub fn p_inner(&self, z: Complex64) -> Result<Complex64> {
        weight_breve(z, &self.inner)
    }

    /// Errors unless `w` and `p` are positive at every `θ` in `grid`.
    pub fn check_positive(&self, grid: &[f64]) -> Result<()> {
        for &th in grid {
            let z = Complex64::from_polar(1.0, th);
            let (w, p) = (self.w(z)?.re, self.p_inner(z)?.re);
            if !(w > 0.0 && p > 0.0) {
                return Err(Error::Domain(format!("weight not positive at theta = {th}: w = {w}, p = {p}")));
            }
        }
        Ok(())
    }
}

/// `D_q(p D_q f)` at `z`.
fn flux_dq(f_dq: &ChebSeries, cfg: &SLConfig, z: Complex64) -> Result<Complex64> {
    let flux = breve_fn(|u| Ok(cfg.p_inner(u)? * f_dq.eval_breve(u)?));
    dq_pointwise(&flux, z, cfg.q())
}

/// `(T f)(cos θ)` for each `θ` in `grid`.
pub fn apply_t(f: &ChebSeries, cfg: &SLConfig, grid: &[f64]) -> Result<Vec<f64>> {
    let d = f.dq(cfg.q());
    grid.par_iter()
        .map(|&th| {
            let z = Complex64::from_polar(1.0, th);
            Ok(-(flux_dq(&d, cfg, z)? / cfg.w(z)?).re)
        })
        .collect()
}

/// `max |(1/w) D_q(p D_q p_n) - λ_n p_n| / (1 + |λ_n p_n|)` over `grid`.
pub fn sl_eigen_residual(n: usize, cfg: &SLConfig, grid: &[f64], tol: f64) -> Result<CheckResult> {
    let pn = aw_poly(n, &cfg.p)?;
    let lam = eigenvalue_lambda(n, &cfg.p);
    let tv = apply_t(&pn, cfg, grid)?;
    let mut r: f64 = 0.0;
    for (&th, t) in grid.iter().zip(&tv) {
        let v = lam * pn.eval(th.cos());
        r = r.max((-t - v).abs() / (1.0 + v.abs()));
    }
    Ok(CheckResult::new("sl_eigen", "q-Sturm-Liouville eigen-equation", r, tol)
        .with("n", n)
        .with("lambda", lam)
        .with("grid", grid.len())
        .with("convention", EIGEN_CONVENTION))
}

/// Coefficients of `f = Σ a_k (a e^{iθ}, a e^{-iθ}; q)_k` with `a_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzCoeffs {
    pub coeffs: Vec<f64>,
    /// `Some(n)` when the recursion numerator cancels at step `n`, so that
    /// `a_k = 0` for every `k > n`.
    pub terminated_at: Option<usize>,
    /// `|a_{n+1}| / max_{j<=n} |a_j|` before truncation, 0 if no termination.
    pub termination_residual: f64,
}

/// Parts of the ratio `a_{k+1}/a_k`: the two numerator terms and the denominator.
fn ansatz_step<T: QScalar>(k: usize, lambda: &T, u: &[T; 4], q: &T) -> (T, T, T) {
    let one = T::one();
    let qk = powi(q, k);
    let abcd = u[0].clone() * u[1].clone() * u[2].clone() * u[3].clone();
    let t1 = if k == 0 {
        T::zero()
    } else {
        q.clone() * (one.clone() - abcd * powi(q, k - 1)) * (one.clone() - qk.clone())
    };
    let qm1 = q.clone() - one.clone();
    let t2 = qk.clone() * qm1.clone() * qm1 * lambda.clone() / (T::two() * T::two());
    let a = &u[0];
    let den = (one.clone() - qk.clone() * q.clone())
        * (one.clone() - a.clone() * u[1].clone() * qk.clone())
        * (one.clone() - a.clone() * u[2].clone() * qk.clone())
        * (one - a.clone() * u[3].clone() * qk);
    (t1, t2, den)
}

fn ansatz_guard(p: &AWParams) -> Result<()> {
    if p.a == 0.0 {
        return Err(Error::ParameterRole("the ansatz expands in powers of (a e^{iθ}, a e^{-iθ}; q)_k and needs a nonzero".into()));
    }
    Ok(())
}

/// The raw recursion `a_0 = 1`, `a_{k+1} = (t1 + t2)/den · a_k` up to `a_K`.
pub fn ansatz_raw<T: QScalar>(lambda: &T, u: &[T; 4], q: &T, k_max: usize) -> Result<Vec<T>> {
    let mut out = vec![T::one()];
    for k in 0..k_max {
        let (t1, t2, den) = ansatz_step(k, lambda, u, q);
        if den.is_zero() || !den.is_finite() {
            return Err(Error::Degenerate(format!("ansatz denominator vanishes at k = {k}")));
        }
        let next = out[k].clone() * (t1 + t2) / den;
        out.push(next);
    }
    Ok(out)
}

/// Runs the recursion in `f64` and truncates at the first step whose
/// numerator cancels to relative `TERMINATION_TOL`.
pub fn ansatz_solve(lambda: f64, p: &AWParams, k_max: usize) -> Result<AnsatzCoeffs> {
    ansatz_guard(p)?;
    let u = p.params();
    let q = p.qv();
    let mut coeffs = vec![1.0];
    let mut big: f64 = 1.0;
    for k in 0..k_max {
        let (t1, t2, den) = ansatz_step(k, &lambda, &u, &q);
        if den == 0.0 || !den.is_finite() {
            return Err(Error::Degenerate(format!("ansatz denominator vanishes at k = {k}")));
        }
        let next = coeffs[k] * (t1 + t2) / den;
        if (t1 + t2).abs() <= TERMINATION_TOL * (t1.abs() + t2.abs()) {
            let termination_residual = next.abs() / big;
            coeffs.resize(k_max + 1, 0.0);
            return Ok(AnsatzCoeffs { coeffs, terminated_at: Some(k), termination_residual });
        }
        big = big.max(next.abs());
        coeffs.push(next);
    }
    Ok(AnsatzCoeffs { coeffs, terminated_at: None, termination_residual: 0.0 })
}

fn exact_params(p: &AWParams) -> (Exact, [Exact; 4]) {
    let e = |v: f64| <Exact as QScalar>::from_f64(v);
    (e(p.qv()), p.params().map(e))
}

/// `λ_n` in exact arithmetic from the (exactly represented) parameters.
fn lambda_exact(n: usize, q: &Exact, u: &[Exact; 4]) -> Exact {
    let one = Exact::one();
    let abcd = &u[0] * &u[1] * &u[2] * &u[3];
    let qm = &one - q;
    let four = <Exact as QScalar>::from_f64(4.0);
    four * q * (&one - one.clone() / powi(q, n)) * (&one - abcd * powi(q, n) / q) / (&qm * &qm)
}

/// `Σ a_k (a e^{iθ}, a e^{-iθ}; q)_k` as a Chebyshev series, summed exactly.
fn ansatz_series(coeffs: &[Exact], a: &Exact, q: &Exact) -> ChebSeries {
    let one = Exact::one();
    let two = &one + &one;
    let mut acc = vec![Exact::zero(); coeffs.len()];
    let mut prod = vec![one.clone()];
    let mut aqk = a.clone();
    for (k, c) in coeffs.iter().enumerate() {
        for (slot, v) in acc.iter_mut().zip(&prod) {
            *slot += c * v;
        }
        if k + 1 < coeffs.len() {
            prod = cheb_mul(&prod, &[&one + &aqk * &aqk, -(&two * &aqk)]);
            aqk *= q;
        }
    }
    ChebSeries::new(acc.iter().map(QScalar::to_f64).collect()).trimmed()
}

/// `a_k = q^k (q^{-n}, abcd q^{n-1}; q)_k / (q, ab, ac, ad; q)_k`.
pub fn ansatz_closed_form<T: QScalar>(n: usize, k: usize, u: &[T; 4], q: &T) -> T {
    let one = T::one();
    let abcd = u[0].clone() * u[1].clone() * u[2].clone() * u[3].clone();
    let num = powi(q, k)
        * poch(&(one.clone() / powi(q, n)), q, k)
        * poch(&(abcd * powi(q, n) / q.clone()), q, k);
    let a = &u[0];
    let den = poch(q, q, k)
        * poch(&(a.clone() * u[1].clone()), q, k)
        * poch(&(a.clone() * u[2].clone()), q, k)
        * poch(&(a.clone() * u[3].clone()), q, k);
    num / den
}

/// Exact recursion at `λ = λ_n`: the coefficients (with `a_{n+1}` exactly 0)
/// and the polynomial they sum to.
pub fn ansatz_at_eigenvalue(n: usize, p: &AWParams, k_max: usize) -> Result<(AnsatzCoeffs, ChebSeries)> {
    ansatz_guard(p)?;
    let (q, u) = exact_params(p);
    let lam = lambda_exact(n, &q, &u);
    let raw = ansatz_raw(&lam, &u, &q, k_max.max(n + 1))?;
    let big = raw[..=n].iter().map(QScalar::modulus).fold(0.0, f64::max);
    let termination_residual = raw[n + 1].modulus() / big;
    let series = ansatz_series(&raw[..=n], &u[0], &q);
    let mut coeffs: Vec<f64> = raw.iter().map(QScalar::to_f64).collect();
    coeffs.truncate(k_max.max(n + 1) + 1);
    let terminated_at = raw[n + 1].is_zero().then_some(n);
    Ok((AnsatzCoeffs { coeffs, terminated_at, termination_residual }, series))
}

/// At `λ = λ_n`: `a_{n+1} = 0`, the coefficients match the closed form, and
/// the sum is a constant multiple of `p_n`, measured normwise on Chebyshev
/// coefficients so that zeros of `p_n` do not amplify rounding.
pub fn ansatz_check(n: usize, p: &AWParams, tol: f64) -> Result<CheckResult> {
    let (coeffs, series) = ansatz_at_eigenvalue(n, p, n + 1)?;
    let (q, u) = exact_params(p);
    let closed: Vec<f64> = (0..=n).map(|k| ansatz_closed_form(n, k, &u, &q).to_f64()).collect();
    let r_closed = crate::check::max_rel_diff(&coeffs.coeffs[..=n], &closed, f64::MIN_POSITIVE);
    let pn = aw_poly(n, p)?;
    let mean = pn.leading() / series.leading();
    let r_ratio = (0..=n)
        .map(|k| (pn.coeff(k) - mean * series.coeff(k)).abs())
        .fold(0.0, f64::max)
        / pn.max_abs_coeff();
    let r = coeffs.termination_residual.max(r_closed).max(r_ratio);
    Ok(CheckResult::new("ansatz", "polynomial solutions of the eigen-equation", r, tol)
        .with("n", n)
        .with("a_next", coeffs.termination_residual)
        .with("closed_form", r_closed)
        .with("ratio_spread", r_ratio)
        .with("ratio", mean))
}

/// Termination dichotomy over `λ_0..λ_6` and 44 values strictly between
/// consecutive eigenvalues, recursion run to `k_max`.
pub fn ansatz_scan(p: &AWParams, k_max: usize, tol: f64) -> Result<CheckResult> {
    let lam: Vec<f64> = (0..=7).map(|n| eigenvalue_lambda(n, p)).collect();
    let mut cases: Vec<(f64, Option<usize>)> = (0..=6).map(|n| (lam[n], Some(n))).collect();
    for i in 0..44 {
        let gap = i % 7;
        let t = (1 + i / 7) as f64 / 8.0 + 0.01 * gap as f64;
        cases.push((lam[gap] + t * (lam[gap + 1] - lam[gap]), None));
    }
    let mut wrong = 0usize;
    let mut worst: f64 = 0.0;
    for &(l, want) in &cases {
        let s = ansatz_solve(l, p, k_max)?;
        if s.terminated_at != want {
            wrong += 1;
        }
        if want.is_some() {
            worst = worst.max(s.termination_residual);
        }
    }
    let r = if wrong > 0 { f64::INFINITY } else { worst };
    Ok(CheckResult::new("ansatz_scan", "termination exactly on the spectrum", r, tol)
        .with("values", cases.len())
        .with("misclassified", wrong)
        .with("k_max", k_max))
}

fn node_weights(p: &AWParams, rule: &QuadratureRule) -> Result<Vec<f64>> {
    crate::quadrature::weighted_node_values(p, rule)
}

/// `(f, g)_w` from precomputed `w √(1-x²)` node values.
fn dot(f: &[f64], g: &[f64], w: &[f64], rule: &QuadratureRule) -> f64 {
    f.iter().zip(g).zip(w).map(|((a, b), c)| a * b * c).sum::<f64>() * rule.weight()
}

fn values(f: &ChebSeries, rule: &QuadratureRule) -> Vec<f64> {
    rule.nodes().iter().map(|&x| f.eval(x)).collect()
}

/// `(T f, g)_w`.
pub fn t_form(f: &ChebSeries, g: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule) -> Result<f64> {
    let w = node_weights(&cfg.p, rule)?;
    Ok(dot(&apply_t(f, cfg, rule.thetas())?, &values(g, rule), &w, rule))
}

/// `∫ p D_q f D_q g dx`.
pub fn dirichlet_form(f: &ChebSeries, g: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule) -> Result<f64> {
    let (df, dg) = (f.dq(cfg.q()), g.dq(cfg.q()));
    rule.sum(|z| Ok(weight_sin_breve(z, &cfg.inner)? * df.eval_breve(z)? * dg.eval_breve(z)?))
}

/// `(T f, f)_w = ∫ p |D_q f|² dx`, both sides nonnegative.
pub fn dirichlet_positivity(f: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    with_half_rerun(rule, |r| {
        let lhs = t_form(f, f, cfg, r)?;
        let rhs = dirichlet_form(f, f, cfg, r)?;
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        let neg = (-lhs.min(rhs)).max(0.0);
        Ok(CheckResult::new("dirichlet", "positivity of T", rel.max(neg), tol)
            .with("t_form", lhs)
            .with("dirichlet", rhs)
            .with("convention", EIGEN_CONVENTION))
    })
}

/// `(f, g)_Q = ∫ p D_q f D_q g dx + (f, g)_w`.
pub fn q_inner(f: &ChebSeries, g: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule) -> Result<f64> {
    let w = node_weights(&cfg.p, rule)?;
    Ok(dirichlet_form(f, g, cfg, rule)? + dot(&values(f, rule), &values(g, rule), &w, rule))
}

/// `([T + I] f, g)_w`.
pub fn q_inner_via_t(f: &ChebSeries, g: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule) -> Result<f64> {
    let w = node_weights(&cfg.p, rule)?;
    let fv = values(f, rule);
    let tf: Vec<f64> = apply_t(f, cfg, rule.thetas())?.iter().zip(&fv).map(|(t, v)| t + v).collect();
    Ok(dot(&tf, &values(g, rule), &w, rule))
}

/// `e_n = p_n / √(ξ_n (1 - λ_n))`, orthonormal for `(·,·)_Q`.
pub fn q_orthonormal(n: usize, p: &AWParams) -> Result<ChebSeries> {
    let xi = norm_xi(n, p, PRODUCT_TOL)?;
    Ok(aw_poly(n, p)?.scale(1.0 / (xi * (1.0 - eigenvalue_lambda(n, p))).sqrt()))
}

/// `(e_m, e_n)_Q = δ_{mn}` for `m, n <= nmax`, and agreement of the two
/// expressions for the Q-inner product.
pub fn q_orthonormality_check(cfg: &SLConfig, nmax: usize, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    let e = (0..=nmax).map(|n| q_orthonormal(n, &cfg.p)).collect::<Result<Vec<_>>>()?;
    with_half_rerun(rule, |r| {
        let mut dev: f64 = 0.0;
        let mut via_t: f64 = 0.0;
        for m in 0..=nmax {
            for n in m..=nmax {
                let v = q_inner(&e[m], &e[n], cfg, r)?;
                let want = if m == n { 1.0 } else { 0.0 };
                dev = dev.max((v - want).abs());
                via_t = via_t.max((q_inner_via_t(&e[m], &e[n], cfg, r)? - v).abs());
            }
        }
        Ok(CheckResult::new("q_orthonormal", "orthonormal basis for the form inner product", dev.max(via_t), tol)
            .with("nmax", nmax)
            .with("deviation", dev)
            .with("via_t", via_t)
            .with("convention", EIGEN_CONVENTION))
    })
}

/// `||f||_Q²` against `Σ_{n<=nmax} (f, e_n)_Q²`.
pub fn parseval_q_check(f: &ChebSeries, cfg: &SLConfig, nmax: usize, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    if f.degree().unwrap_or(0) > nmax {
        return Err(Error::InvalidInput(format!("degree of f exceeds nmax = {nmax}")));
    }
    let e = (0..=nmax).map(|n| q_orthonormal(n, &cfg.p)).collect::<Result<Vec<_>>>()?;
    with_half_rerun(rule, |r| {
        let norm = q_inner(f, f, cfg, r)?;
        let sum = e.iter().map(|en| q_inner(f, en, cfg, r).map(|v| v * v)).sum::<Result<f64>>()?;
        Ok(CheckResult::new("parseval", "Parseval identity in the form norm", (norm - sum).abs() / norm.abs().max(f64::MIN_POSITIVE), tol)
            .with("norm", norm)
            .with("sum", sum)
            .with("nmax", nmax))
    })
}

/// `(T p_n, p_n)_w / (p_n, p_n)_w` for `n <= nmax`.
pub fn rayleigh_quotients(cfg: &SLConfig, nmax: usize, rule: &QuadratureRule) -> Result<Vec<f64>> {
    let w = node_weights(&cfg.p, rule)?;
    (0..=nmax)
        .into_par_iter()
        .map(|n| {
            let pn = aw_poly(n, &cfg.p)?;
            let v = values(&pn, rule);
            Ok(dot(&apply_t(&pn, cfg, rule.thetas())?, &v, &w, rule) / dot(&v, &v, &w, rule))
        })
        .collect()
}

/// Rayleigh quotients against `-λ_n`, relative.
pub fn rayleigh_check(cfg: &SLConfig, nmax: usize, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    with_half_rerun(rule, |r| {
        let rq = rayleigh_quotients(cfg, nmax, r)?;
        let mut worst: f64 = 0.0;
        for (n, v) in rq.iter().enumerate() {
            let want = -eigenvalue_lambda(n, &cfg.p);
            worst = worst.max((v - want).abs() / want.abs().max(1.0));
        }
        Ok(CheckResult::new("rayleigh", "Rayleigh quotients of p_n", worst, tol)
            .with("nmax", nmax)
            .with("convention", EIGEN_CONVENTION))
    })
}

/// `|(T f, g)_w - (f, T g)_w| / (1 + |(T f, g)_w|)`.
///
/// Also records `scaled_residual`, the difference over the Cauchy-Schwarz bound
/// `‖T f‖ ‖g‖ + ‖f‖ ‖T g‖` in the weighted norm. When `(T f, g)` is far below
/// that bound (for a constant `f` it is exactly 0) the pass metric sees
/// rounding of the bound's size.
pub fn symmetry_check(f: &ChebSeries, g: &ChebSeries, cfg: &SLConfig, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    with_half_rerun(rule, |r| {
        let w = node_weights(&cfg.p, r)?;
        let (fv, gv) = (values(f, r), values(g, r));
        let (tf, tg) = (apply_t(f, cfg, r.thetas())?, apply_t(g, cfg, r.thetas())?);
        let a = dot(&tf, &gv, &w, r);
        let b = dot(&fv, &tg, &w, r);
        let norm = |v: &[f64]| dot(v, v, &w, r).abs().sqrt();
        let bound = norm(&tf) * norm(&gv) + norm(&fv) * norm(&tg);
        Ok(CheckResult::new("symmetry", "symmetry of T", (a - b).abs() / (1.0 + a.abs()), tol)
            .with("tf_g", a)
            .with("f_tg", b)
            .with("cauchy_schwarz_bound", bound)
            .with("scaled_residual", (a - b).abs() / bound.max(f64::MIN_POSITIVE)))
    })
}

/// `√(1-x²) D_q(√(1-x²) D_q T_n) + γ_n² T_n = 0` on `grid`.
pub fn chebyshev_case_check(n: usize, q: QBase, grid: &[f64], tol: f64) -> Result<CheckResult> {
    let tn = ChebSeries::t(n);
    let d = tn.dq(q);
    let g2 = gamma_factor(n, q).powi(2);
    let inner = breve_fn(|z| Ok(sin_breve(z) * d.eval_breve(z)?));
    let mut r: f64 = 0.0;
    for &th in grid {
        let z = Complex64::from_polar(1.0, th);
        let lhs = (sin_breve(z) * dq_pointwise(&inner, z, q)?).re;
        let t = tn.eval(th.cos());
        r = r.max((lhs + g2 * t).abs() / (1.0 + g2 * t.abs()));
    }
    Ok(CheckResult::new("chebyshev_case", "Chebyshev case of the operator", r, tol)
        .with("n", n)
        .with("gamma_squared", g2)
        .with("grid", grid.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{interior_thetas, DEFAULT_NODES};
    use proptest::prelude::*;

    fn canonical() -> SLConfig {
        SLConfig::new(AWParams::canonical()).unwrap()
    }

    fn rule(n: usize) -> QuadratureRule {
        QuadratureRule::new(n).unwrap()
    }

    #[test]
    fn config_positive_on_nodes() {
        canonical().check_positive(&interior_thetas(64)).unwrap();
    }

    #[test]
    fn t_annihilates_constants_and_is_linear() {
        let cfg = canonical();
        let grid = interior_thetas(64);
        assert!(apply_t(&ChebSeries::constant(2.5), &cfg, &grid).unwrap().iter().all(|v| *v == 0.0));
        let f = ChebSeries::new(vec![0.1, 0.4, -0.3, 0.2]);
        let g = ChebSeries::new(vec![-0.5, 0.0, 0.7, 0.0, 0.1]);
        let comb = &f.scale(1.5) + &g.scale(-0.25);
        let (tf, tg, tc) = (
            apply_t(&f, &cfg, &grid).unwrap(),
            apply_t(&g, &cfg, &grid).unwrap(),
            apply_t(&comb, &cfg, &grid).unwrap(),
        );
        for k in 0..grid.len() {
            assert!((tc[k] - (1.5 * tf[k] - 0.25 * tg[k])).abs() < 1e-11 * (1.0 + tc[k].abs()));
        }
    }

    #[test]
    fn eigen_residuals() {
        let cfg = canonical();
        let grid = interior_thetas(64);
        assert_eq!(sl_eigen_residual(0, &cfg, &grid, 1e-8).unwrap().residual, 0.0);
        for n in 1..=8 {
            let r = sl_eigen_residual(n, &cfg, &grid, 1e-8).unwrap();
            assert!(r.pass, "n={n} {}", r.residual);
        }
    }

    #[test]
    fn chebyshev_eigenvalues_are_minus_four_gamma_squared() {
        let q = QBase::new(0.5).unwrap();
        let p = AWParams::chebyshev_first(q);
        for n in 0..10 {
            let g = gamma_factor(n, q);
            assert!((eigenvalue_lambda(n, &p) + 4.0 * g * g).abs() < 1e-12 * (1.0 + g * g));
        }
        let cfg = SLConfig::new(p).unwrap();
        for n in 1..=6 {
            assert!(sl_eigen_residual(n, &cfg, &interior_thetas(64), 1e-8).unwrap().pass);
        }
    }

    #[test]
    fn ansatz_zero_eigenvalue() {
        let s = ansatz_solve(0.0, &AWParams::canonical(), 10).unwrap();
        assert_eq!(s.terminated_at, Some(0));
        assert!(s.coeffs[1..].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn ansatz_at_eigenvalues() {
        let p = AWParams::canonical();
        for n in 0..=8 {
            let (c, _) = ansatz_at_eigenvalue(n, &p, n + 3).unwrap();
            assert_eq!(c.terminated_at, Some(n));
            assert!(c.coeffs[n + 1..].iter().all(|v| *v == 0.0));
            let r = ansatz_check(n, &p, 1e-9).unwrap();
            assert!(r.pass, "n={n} {:?}", r.meta);
            let f = ansatz_solve(eigenvalue_lambda(n, &p), &p, 20).unwrap();
            assert_eq!(f.terminated_at, Some(n));
            assert!(f.termination_residual < 1e-10);
        }
    }

    #[test]
    fn ansatz_closed_form_is_exact() {
        let p = AWParams::canonical();
        let (q, u) = exact_params(&p);
        for n in 0..=6 {
            let lam = lambda_exact(n, &q, &u);
            let raw = ansatz_raw(&lam, &u, &q, n + 1).unwrap();
            for (k, v) in raw.iter().enumerate() {
                assert_eq!(*v, ansatz_closed_form(n, k, &u, &q));
            }
        }
    }

    #[test]
    fn ansatz_off_spectrum_never_terminates() {
        let p = AWParams::canonical();
        let l = (eigenvalue_lambda(1, &p) + eigenvalue_lambda(2, &p)) / 2.0;
        let s = ansatz_solve(l, &p, 20).unwrap();
        assert_eq!(s.terminated_at, None);
        assert!(s.coeffs.iter().all(|v| *v != 0.0));
        assert_eq!(s.coeffs.len(), 21);
        let r = ansatz_scan(&p, 20, 1e-10).unwrap();
        assert!(r.pass, "{:?}", r);
        assert!(matches!(ansatz_solve(l, &p.with_params([0.0, 0.1, 0.2, 0.3]), 5), Err(Error::ParameterRole(_))));
    }

    #[test]
    fn dirichlet_examples() {
        let cfg = canonical();
        let r = rule(DEFAULT_NODES);
        let c = dirichlet_positivity(&ChebSeries::constant(1.0), &cfg, &r, 1e-8).unwrap();
        assert_eq!(c.meta["t_form"].as_f64().unwrap(), 0.0);
        for n in 1..=6 {
            let pn = aw_poly(n, &cfg.p).unwrap();
            let d = dirichlet_positivity(&pn, &cfg, &r, 1e-8).unwrap();
            assert!(d.pass, "n={n} {:?}", d);
            let want = -eigenvalue_lambda(n, &cfg.p) * norm_xi(n, &cfg.p, PRODUCT_TOL).unwrap();
            assert!((d.meta["t_form"].as_f64().unwrap() - want).abs() < 1e-8 * want);
        }
    }

    #[test]
    fn q_inner_products() {
        let cfg = canonical();
        let r = rule(DEFAULT_NODES);
        let one = ChebSeries::constant(1.0);
        let xi0 = norm_xi(0, &cfg.p, PRODUCT_TOL).unwrap();
        assert!((q_inner(&one, &one, &cfg, &r).unwrap() - xi0).abs() < 1e-9 * xi0);
        for m in 0..=6 {
            let pm = aw_poly(m, &cfg.p).unwrap();
            for n in m..=6 {
                let pn = aw_poly(n, &cfg.p).unwrap();
                let v = q_inner(&pm, &pn, &cfg, &r).unwrap();
                let scale = (1.0 - eigenvalue_lambda(n, &cfg.p)) * norm_xi(n, &cfg.p, PRODUCT_TOL).unwrap();
                let want = if m == n { scale } else { 0.0 };
                assert!((v - want).abs() < 1e-8 * scale, "m={m} n={n}");
            }
        }
        assert!(q_orthonormality_check(&cfg, 6, &r, 1e-8).unwrap().pass);
    }

    #[test]
    fn parseval_examples() {
        let cfg = canonical();
        let r = rule(DEFAULT_NODES);
        let e3 = q_orthonormal(3, &cfg.p).unwrap();
        let c = parseval_q_check(&e3, &cfg, 6, &r, 1e-8).unwrap();
        assert!(c.pass && (c.meta["norm"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        let f = ChebSeries::new(vec![0.3, -0.2, 0.5, 0.1, -0.4, 0.25, 0.6]);
        let full = parseval_q_check(&f, &cfg, 6, &r, 1e-8).unwrap();
        assert!(full.pass, "{:?}", full);
        // dropping basis elements loses mass
        let e = (0..=6).map(|n| q_orthonormal(n, &cfg.p).unwrap()).collect::<Vec<_>>();
        let partial = |m: usize| e[..=m].iter().map(|en| q_inner(&f, en, &cfg, &r).unwrap().powi(2)).sum::<f64>();
        for m in 0..6 {
            assert!(partial(m) < partial(m + 1));
        }
        assert!(parseval_q_check(&f, &cfg, 5, &r, 1e-8).is_err());
    }

    #[test]
    fn rayleigh_matches_eigenvalues() {
        let cfg = canonical();
        assert!(rayleigh_check(&cfg, 8, &rule(DEFAULT_NODES), 1e-8).unwrap().pass);
    }

    #[test]
    fn chebyshev_case() {
        let grid = interior_thetas(64);
        for qv in [0.3, 0.5, 0.8] {
            let q = QBase::new(qv).unwrap();
            assert_eq!(chebyshev_case_check(0, q, &grid, 1e-10).unwrap().residual, 0.0);
            for n in 1..=10 {
                let r = chebyshev_case_check(n, q, &grid, 1e-10).unwrap();
                assert!(r.pass, "q={qv} n={n} {}", r.residual);
            }
        }
        // n = 1: √(1-x²) D_q √(1-x²) = -x
        let q = QBase::new(0.4).unwrap();
        let s = breve_fn(|z| Ok(sin_breve(z)));
        for &th in &grid {
            let z = Complex64::from_polar(1.0, th);
            let v = (sin_breve(z) * dq_pointwise(&s, z, q).unwrap()).re;
            assert!((v + th.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetry_with_constant_f_near_q_one() {
        // (T 1, g) is exactly 0, (1, T g) is rounding relative to ‖T g‖
        let p = AWParams::new(0.95, 0.3, -0.2, 0.4, 0.1).unwrap();
        let cfg = SLConfig::new(p).unwrap();
        let g = ChebSeries::new(vec![0.2, -0.4, 0.3, 0.5, -0.1, 0.6, 0.2, -0.3, 0.4]);
        let r = symmetry_check(&ChebSeries::constant(0.7), &g, &cfg, &rule(DEFAULT_NODES), 1e-8).unwrap();
        assert_eq!(r.meta["tf_g"].as_f64().unwrap(), 0.0);
        assert!(r.meta["scaled_residual"].as_f64().unwrap() < 1e-13);
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = ChebSeries> {
        prop::collection::vec(-1.0f64..1.0, 1..=max_deg + 1).prop_map(ChebSeries::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn t_is_symmetric_and_positive(f in poly(8), g in poly(8)) {
            let cfg = canonical();
            let r = rule(256);
            prop_assert!(symmetry_check(&f, &g, &cfg, &r, 1e-8).unwrap().pass);
            let d = dirichlet_positivity(&f, &cfg, &r, 1e-8).unwrap();
            prop_assert!(d.meta["t_form"].as_f64().unwrap() >= -1e-10);
            prop_assert!(d.pass || d.meta["t_form"].as_f64().unwrap().abs() < 1e-12, "{:?}", d);
        }
    }
}
