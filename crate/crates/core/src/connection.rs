//! Connection coefficients between the continuous q-Jacobi families
//! `S(a, b) = (a, b, a q^{1/2}, b q^{1/2})` and `T(a, b) = (a q^{1/2}, b q^{1/2}, a q, b q)`:
//! `p_n(x; S) = Σ_j c_{n,j} p_j(x; T)`.

use serde::{Deserialize, Serialize};

use crate::askey_wilson::{aw_poly, norm_xi, weight, AWParams};
use crate::chebpoly::ChebSeries;
use crate::qcore::{poch, QBase, PRODUCT_TOL};
use crate::quadrature::{interior_thetas, weighted_node_values, QuadratureRule};
use crate::{CheckResult, Error, Result};

/// Diagonal ratio above which the triangular solve is refused.
pub const CONDITION_LIMIT: f64 = 1e12;

fn check_ab(a: f64, b: f64) -> Result<()> {
    if !(a.abs() < 1.0 && b.abs() < 1.0) {
        return Err(Error::Domain(format!("connection needs |a|, |b| < 1, got a = {a}, b = {b}")));
    }
    Ok(())
}

pub fn source_params(a: f64, b: f64, q: QBase) -> Result<AWParams> {
    let s = q.sqrt();
    AWParams::new(q.value(), a, b, a * s, b * s)
}

pub fn target_params(a: f64, b: f64, q: QBase) -> Result<AWParams> {
    let s = q.sqrt();
    AWParams::new(q.value(), a * s, b * s, a * q.value(), b * q.value())
}

/// `w(x; T) / w(x; S) = (1 - 2ax + a²)(1 - 2bx + b²) = α_0 + α_1 p_1(x; S) + α_2 p_2(x; S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaConstants {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl AlphaConstants {
    pub fn get(&self, m: usize) -> f64 {
        match m {
            0 => self.alpha0,
            1 => self.alpha1,
            2 => self.alpha2,
            _ => 0.0,
        }
    }
}

pub fn alphas(a: f64, b: f64, q: QBase) -> Result<AlphaConstants> {
    check_ab(a, b)?;
    let qv = q.value();
    let s = q.sqrt();
    let (c, d) = (a * s, b * s);
    let abcd = a * b * c * d;
    let abq = a * b * qv;
    let alpha0 = (b * d - 1.0) * (b * c - 1.0) * (a * d - 1.0) * (a * b - 1.0) * (a * c - 1.0) * (abq - 1.0)
        / ((abcd * qv - 1.0) * (abcd - 1.0));
    let alpha1 = -(abq - 1.0)
        * (a * a * b * c * d * qv + a * b * b * c * d * qv - a * b * d * qv - a * b * c * qv - a * b * d - a * b * c + a + b)
        / ((abcd * qv * qv - 1.0) * (1.0 - abcd));
    let alpha2 = a * b / ((1.0 - abcd * qv) * (1.0 - abcd * qv * qv));
    Ok(AlphaConstants { alpha0, alpha1, alpha2 })
}

/// `c_{n,j}(a, b) / c_{n-1,j-1}(a q^{1/2}, b q^{1/2})
///  = q^{(j-n)/2} (1 - q^n)(1 - a²b² q^n) / ((1 - q^j)(1 - a²b² q^{j+2}))`,
/// the ratio of the lowering constants of the two families.
pub fn step_ratio(n: usize, j: usize, a: f64, b: f64, q: QBase) -> f64 {
    let qv = q.value();
    let ab2 = a * a * b * b;
    q.pow((j as f64 - n as f64) / 2.0) * (1.0 - qv.powi(n as i32)) * (1.0 - ab2 * qv.powi(n as i32))
        / ((1.0 - qv.powi(j as i32)) * (1.0 - ab2 * qv.powi(j as i32 + 2)))
}

/// The same ratio with `(1 - a²b² q^j)` in the denominator, as sometimes
/// quoted; kept to show that it disagrees with the oracles.
pub fn printed_step_ratio(n: usize, j: usize, a: f64, b: f64, q: QBase) -> f64 {
    let qv = q.value();
    let ab2 = a * a * b * b;
    q.pow((j as f64 - n as f64) / 2.0) * (1.0 - qv.powi(n as i32)) * (1.0 - ab2 * qv.powi(n as i32))
        / ((1.0 - qv.powi(j as i32)) * (1.0 - ab2 * qv.powi(j as i32)))
}

/// `c_{m,0} = α_m ξ_m(S) / ξ_0(T)` for `m <= 2`, zero above.
pub fn connection_base(m: usize, a: f64, b: f64, q: QBase) -> Result<f64> {
    if m > 2 {
        return Ok(0.0);
    }
    let al = alphas(a, b, q)?;
    let xs = norm_xi(m, &source_params(a, b, q)?, PRODUCT_TOL)?;
    let xt = norm_xi(0, &target_params(a, b, q)?, PRODUCT_TOL)?;
    Ok(al.get(m) * xs / xt)
}

/// `c_{n,j} = Π_{i<j} step_ratio(n-i, j-i; a q^{i/2}, b q^{i/2}) · c_{n-j,0}(a q^{j/2}, b q^{j/2})`,
/// i.e. `q^{j(j-n)/2} (q^{n-j+1}; q)_j (a²b² q^n; q)_j / ((q; q)_j (a²b² q^{j+2}; q)_j) · c_{n-j,0}`.
pub fn connection_closed(n: usize, j: usize, a: f64, b: f64, q: QBase) -> Result<f64> {
    if j > n {
        return Err(Error::Domain(format!("connection index j = {j} exceeds n = {n}")));
    }
    check_ab(a, b)?;
    if n - j > 2 {
        return Ok(0.0);
    }
    let qv = q.value();
    let ab2 = a * a * b * b;
    let factor = q.pow(j as f64 * (j as f64 - n as f64) / 2.0)
        * poch(&qv.powi((n - j + 1) as i32), &qv, j)
        * poch(&(ab2 * qv.powi(n as i32)), &qv, j)
        / (poch(&qv, &qv, j) * poch(&(ab2 * qv.powi(j as i32 + 2)), &qv, j));
    let h = q.pow(j as f64 / 2.0);
    Ok(factor * connection_base(n - j, a * h, b * h, q)?)
}

/// Closed-form and oracle coefficients `c_{n,0..=n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionTable {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub q: QBase,
    pub closed: Vec<f64>,
    pub quadrature: Vec<f64>,
    pub solve: Vec<f64>,
    /// Ratio of largest to smallest leading coefficient in the solve.
    pub condition: f64,
}

impl ConnectionTable {
    pub fn scale(&self) -> f64 {
        self.closed.iter().chain(&self.solve).fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `max_j |c_{n,j} - closed_j| / max_j |c_{n,j}|` for each oracle.
    pub fn oracle_residuals(&self) -> (f64, f64) {
        let s = self.scale().max(f64::MIN_POSITIVE);
        let diff = |o: &[f64]| self.closed.iter().zip(o).map(|(c, v)| (c - v).abs()).fold(0.0, f64::max) / s;
        (diff(&self.quadrature), diff(&self.solve))
    }

    /// Largest `|c_{n,j}| / max |c|` over `j < n - 2` in either oracle.
    pub fn band_residual(&self) -> f64 {
        let s = self.scale().max(f64::MIN_POSITIVE);
        (0..self.n.saturating_sub(2))
            .map(|j| self.quadrature[j].abs().max(self.solve[j].abs()) / s)
            .fold(0.0, f64::max)
    }

    /// Relative pointwise error of `Σ_j c_j p_j(x; T)` against `p_n(x; S)` on `grid`.
    pub fn reconstruction_residual(&self, grid: &[f64]) -> Result<f64> {
        let src = aw_poly(self.n, &source_params(self.a, self.b, self.q)?)?;
        let tgt = target_params(self.a, self.b, self.q)?;
        let mut sum = ChebSeries::zero();
        for (j, c) in self.closed.iter().enumerate() {
            sum = &sum + &aw_poly(j, &tgt)?.scale(*c);
        }
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for &th in grid {
            let x = th.cos();
            num = num.max((sum.eval(x) - src.eval(x)).abs());
            den = den.max(src.eval(x).abs());
        }
        Ok(num / den.max(f64::MIN_POSITIVE))
    }
}

/// Back substitution of `f` in the basis `basis[j]` (degree `j`).
fn triangular_solve(f: &ChebSeries, basis: &[ChebSeries]) -> Result<(Vec<f64>, f64)> {
    let n = basis.len() - 1;
    let lead: Vec<f64> = basis.iter().enumerate().map(|(j, p)| p.coeff(j)).collect();
    let (lo, hi) = lead.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    let condition = hi / lo;
    if !(condition <= CONDITION_LIMIT) {
        return Err(Error::Conditioning { estimate: condition });
    }
    let mut r = f.clone();
    let mut c = vec![0.0; n + 1];
    for j in (0..=n).rev() {
        c[j] = r.coeff(j) / lead[j];
        r = &r - &basis[j].scale(c[j]);
    }
    Ok((c, condition))
}

/// Both oracles: projection `(p_n(S), p_j(T))_{w(T)} / ξ_j(T)` by quadrature
/// and the triangular solve in the Chebyshev basis.
pub fn connection_oracle(n: usize, a: f64, b: f64, q: QBase, rule: &QuadratureRule) -> Result<ConnectionTable> {
    check_ab(a, b)?;
    let src = aw_poly(n, &source_params(a, b, q)?)?;
    let tgt = target_params(a, b, q)?;
    let basis = (0..=n).map(|j| aw_poly(j, &tgt)).collect::<Result<Vec<_>>>()?;
    let w = weighted_node_values(&tgt, rule)?;
    let sv: Vec<f64> = rule.nodes().iter().map(|&x| src.eval(x)).collect();
    let quadrature = basis
        .iter()
        .enumerate()
        .map(|(j, pj)| {
            let ip: f64 = rule.nodes().iter().zip(&sv).zip(&w).map(|((&x, s), wk)| s * pj.eval(x) * wk).sum::<f64>();
            Ok(ip * rule.weight() / norm_xi(j, &tgt, PRODUCT_TOL)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let (solve, condition) = triangular_solve(&src, &basis)?;
    let closed = (0..=n).map(|j| connection_closed(n, j, a, b, q)).collect::<Result<Vec<_>>>()?;
    Ok(ConnectionTable { n, a, b, q, closed, quadrature, solve, condition })
}

/// Closed form against both oracles, banded structure, and reconstruction,
/// for every `n <= nmax`.
pub fn connection_check(nmax: usize, a: f64, b: f64, q: QBase, rule: &QuadratureRule, tol: f64) -> Result<CheckResult> {
    let grid = interior_thetas(32);
    let mut oracle: f64 = 0.0;
    let mut band: f64 = 0.0;
    let mut recon: f64 = 0.0;
    for n in 0..=nmax {
        let t = connection_oracle(n, a, b, q, rule)?;
        let (rq, rs) = t.oracle_residuals();
        oracle = oracle.max(rq).max(rs);
        band = band.max(t.band_residual());
        recon = recon.max(t.reconstruction_residual(&grid)?);
    }
    Ok(CheckResult::combine(
        "connection",
        "connection coefficients",
        tol,
        &[
            CheckResult::new("oracles", "closed form against both oracles", oracle, tol),
            CheckResult::new("band", "c_{n,j} = 0 for j < n - 2", band, 1e-10),
            CheckResult::new("reconstruction", "resummed expansion", recon, tol),
        ],
    )
    .with("nmax", nmax)
    .with("a", a)
    .with("b", b))
}

/// Pointwise `(1 - 2ax + a²)(1 - 2bx + b²)` against `w(T)/w(S)` and
/// against the α-expansion, relative, on a 32-node grid.
pub fn alpha_check(a: f64, b: f64, q: QBase, tol: f64) -> Result<CheckResult> {
    let al = alphas(a, b, q)?;
    let sp = source_params(a, b, q)?;
    let tp = target_params(a, b, q)?;
    let (p1, p2) = (aw_poly(1, &sp)?, aw_poly(2, &sp)?);
    let mut worst: f64 = 0.0;
    for th in interior_thetas(32) {
        let x = th.cos();
        let ratio = weight(x, &tp, PRODUCT_TOL)? / weight(x, &sp, PRODUCT_TOL)?;
        let expanded = al.alpha0 + al.alpha1 * p1.eval(x) + al.alpha2 * p2.eval(x);
        let direct = (1.0 - 2.0 * a * x + a * a) * (1.0 - 2.0 * b * x + b * b);
        worst = worst.max((expanded - ratio).abs() / ratio.abs()).max((direct - ratio).abs() / ratio.abs());
    }
    Ok(CheckResult::new("alphas", "weight-ratio expansion constants", worst, tol))
}
