//! The full verification suite and table export.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::askey_wilson::{
    aw_integral_closed, aw_poly, dual_construction_check, eigenvalue_lambda, lowering_check, norm_xi, raising_check,
    recurrence_check, recurrence_coeffs, rodrigues_check, weight_breve, weight_ratio_check, xi_functional_check,
    AWParams,
};
use crate::chebpoly::{breve_fn, sin_breve, ChebSeries, DEGREE_CAP};
use crate::connection::{alpha_check, alphas, connection_check, connection_oracle};
use crate::qcore::{check_1psi1, check_q_binomial, check_triple_product, term_count_ladder, QBase, PRODUCT_TOL};
use crate::quadrature::{gram_matrix, gram_orthogonality, ibp_residual, inner_weighted, interior_thetas, green_residual, QuadratureRule};
use crate::sturm_liouville::{
    ansatz_check, ansatz_scan, chebyshev_case_check, dirichlet_positivity, parseval_q_check, q_orthonormality_check,
    rayleigh_check, rayleigh_quotients, sl_eigen_residual, symmetry_check, SLConfig,
};
use crate::{CheckResult, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Check ids in execution order with their stage and default tolerance.
/// Checks within a stage run in parallel; stages run in order.
pub const CHECKS: &[(&str, usize, f64)] = &[
    ("q_binomial", 0, 1e-11),
    ("one_psi_one", 0, 1e-11),
    ("triple_product", 0, 1e-11),
    ("recurrence", 1, 1e-12),
    ("dual_construction", 1, 1e-11),
    ("lowering", 2, 1e-11),
    ("raising", 2, 1e-8),
    ("weight_ratio", 2, 1e-8),
    ("rodrigues", 2, 1e-7),
    ("aw_integral", 3, 1e-9),
    ("xi_functional", 3, 1e-10),
    ("orthogonality", 3, 1e-9),
    ("ibp", 4, 1e-10),
    ("green", 4, 1e-8),
    ("sl_eigen", 5, 1e-8),
    ("rayleigh", 5, 1e-8),
    ("ansatz", 5, 1e-9),
    ("ansatz_scan", 5, 1e-10),
    ("symmetry", 6, 1e-8),
    ("dirichlet", 6, 1e-8),
    ("q_orthonormal", 6, 1e-8),
    ("parseval", 6, 1e-8),
    ("chebyshev_case", 6, 1e-10),
    ("alphas", 7, 1e-9),
    ("connection", 7, 1e-9),
];

/// Highest degree used by the lowering check relative to `nmax`.
const LOWERING_EXTRA: usize = 2;
/// Highest degree used by the recurrence checks relative to `nmax`.
const RECURRENCE_EXTRA: usize = 4;
const RAISING_MAX: usize = 6;
const RODRIGUES_MAX: usize = 4;
const POINT_GRID: usize = 64;
const ANSATZ_K: usize = 20;
const SL_QS: [f64; 3] = [0.3, 0.5, 0.8];

pub fn default_tolerance(id: &str) -> Option<f64> {
    CHECKS.iter().find(|c| c.0 == id).map(|c| c.2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub params: AWParams,
    pub nmax: usize,
    pub nodes: usize,
    /// Tolerance overrides keyed by check id.
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
    pub format: Format,
    /// Check ids to run; empty means all.
    #[serde(default)]
    pub only: Vec<String>,
    /// Seed for the random polynomials and parameter sets.
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            params: AWParams::canonical(),
            nmax: 8,
            nodes: 512,
            tol: BTreeMap::new(),
            format: Format::Json,
            only: Vec::new(),
            seed: 1993,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.check_weight_domain()?;
        if self.nmax + RECURRENCE_EXTRA + 1 > DEGREE_CAP {
            return Err(Error::InvalidInput(format!("nmax = {} too large", self.nmax)));
        }
        if self.nodes < 2 * self.nmax + 2 {
            return Err(Error::InvalidInput(format!(
                "nodes = {} below 2 nmax + 2 = {}",
                self.nodes,
                2 * self.nmax + 2
            )));
        }
        for (id, v) in &self.tol {
            if default_tolerance(id).is_none() {
                return Err(Error::InvalidInput(format!("unknown check id in tolerance override: {id}")));
            }
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::InvalidInput(format!("tolerance for {id} must be positive, got {v}")));
            }
        }
        for id in &self.only {
            if default_tolerance(id).is_none() {
                return Err(Error::InvalidInput(format!("unknown check id: {id}")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, id: &str) -> f64 {
        self.tol.get(id).copied().or_else(|| default_tolerance(id)).unwrap_or(0.0)
    }

    fn selected(&self, id: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|o| o == id)
    }

    fn rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::new(self.nodes)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "paper_ref", "residual", "tolerance", "pass", "wall_ms"])?;
        for c in &self.checks {
            let ms = c.meta.get("wall_ms").map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                c.id.clone(),
                c.paper_ref.clone(),
                format!("{:e}", c.residual),
                format!("{:e}", c.tolerance),
                c.pass.to_string(),
                ms,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s += &format!(
                "{}  {:<18} residual {:<10.3e} tol {:.0e}  {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.residual,
                c.tolerance,
                c.meta.get("error").and_then(|v| v.as_str()).unwrap_or("")
            );
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        s += &format!("{} checks, {} failed: {}\n", self.checks.len(), failed, if self.pass { "PASS" } else { "FAIL" });
        s
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> ChebSeries {
    let deg = rng.gen_range(0..=max_deg);
    ChebSeries::new((0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn worst(id: &str, reference: &str, tol: f64, parts: Vec<CheckResult>) -> CheckResult {
    let key = |p: &CheckResult| if p.residual.is_nan() { f64::INFINITY } else { p.residual };
    let top = parts.iter().max_by(|x, y| key(x).total_cmp(&key(y)));
    let r = top.map_or(0.0, key);
    let failing = parts.iter().filter(|p| !p.pass).count();
    let mut out = CheckResult::new(id, reference, r, tol).with("cases", parts.len()).with("failing_cases", failing);
    if let Some(t) = top.filter(|t| !t.meta.is_empty()) {
        out.set("worst_case", serde_json::to_value(&t.meta).unwrap_or_default());
    }
    out
}

/// Term counts `m, 2m, ..., 16m` with `m = max(4, ⌈1/(1 - q)⌉)`, so that the
/// first rung is past the pre-asymptotic range when q is close to 1.
fn ladder_counts(q: QBase) -> Vec<usize> {
    let m = ((1.0 / (1.0 - q.value())).ceil() as usize).max(4);
    (0..5).map(|i| m << i).collect()
}

fn ladder(id: &str, q: QBase, tol: f64, run: impl Fn(usize) -> Result<CheckResult>) -> Result<CheckResult> {
    let counts = ladder_counts(q);
    let steps = counts.iter().map(|&t| run(t)).collect::<Result<Vec<_>>>()?;
    let ok = term_count_ladder(&steps);
    let last = steps.last().expect("nonempty").clone();
    let residuals: Vec<f64> = steps.iter().map(|s| s.residual).collect();
    let r = if ok { last.residual } else { f64::INFINITY };
    let mut out = CheckResult::new(id, last.paper_ref.clone(), r, tol);
    out.meta = last.meta;
    Ok(out.with("ladder_counts", counts).with("ladder_residuals", residuals).with("ladder_ok", ok))
}

fn run_one(id: &str, cfg: &SuiteConfig) -> Result<CheckResult> {
    let p = cfg.params;
    let q = p.q;
    let tol = cfg.tolerance(id);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ id.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
    let grid = interior_thetas(POINT_GRID);
    let nmax = cfg.nmax;
    match id {
        "q_binomial" => ladder(id, q, tol, |t| check_q_binomial(0.3, 0.4, q, t, tol)),
        // arguments chosen so that the summed terms do not cancel for any q
        "one_psi_one" => ladder(id, q, tol, |t| check_1psi1(-0.8, -0.2, 0.5, q, t, tol)),
        "triple_product" => ladder(id, q, tol, |t| check_triple_product(Complex64::new(-0.7, 0.2), q, t, tol)),
        "recurrence" => recurrence_check(nmax + RECURRENCE_EXTRA, &p, tol),
        "dual_construction" => dual_construction_check(nmax + RECURRENCE_EXTRA, &p, tol),
        "lowering" => {
            let parts = (1..=nmax + LOWERING_EXTRA).map(|n| lowering_check(n, &p, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "lowering operator", tol, parts))
        }
        "raising" => {
            let parts = (1..=nmax.min(RAISING_MAX)).map(|n| raising_check(n, &p, &grid, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "raising operator", tol, parts))
        }
        "weight_ratio" => weight_ratio_check(&p, &grid, tol),
        "rodrigues" => {
            let parts = (0..=nmax.min(RODRIGUES_MAX)).map(|n| rodrigues_check(n, &p, &grid, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "Rodrigues formula", tol, parts))
        }
        "aw_integral" => {
            let rule = cfg.rule()?;
            let one = ChebSeries::constant(1.0);
            let mut sets = vec![p];
            for _ in 0..10 {
                let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.95..0.95));
                sets.push(p.with_params(u));
            }
            let mut r: f64 = 0.0;
            for s in &sets {
                let closed = aw_integral_closed(s, PRODUCT_TOL)?;
                r = r.max((inner_weighted(&one, &one, s, &rule)? - closed).abs() / closed);
            }
            Ok(CheckResult::new(id, "Askey-Wilson integral", r, tol).with("parameter_sets", sets.len()))
        }
        "xi_functional" => {
            let parts = (1..=nmax).map(|n| xi_functional_check(&p, n, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "norm functional equation", tol, parts))
        }
        "orthogonality" => gram_orthogonality(&p, nmax, &cfg.rule()?, tol),
        "ibp" => {
            let rule = cfg.rule()?;
            let mut parts = Vec::new();
            for i in 0..50 {
                let qi = QBase::new(SL_QS[i % 3])?;
                let (f, g) = (random_poly(&mut rng, 10), random_poly(&mut rng, 10));
                parts.push(ibp_residual(&f, &g, qi, &rule, tol)?);
            }
            Ok(worst(id, "integration by parts for D_q", tol, parts))
        }
        "green" => {
            let rule = cfg.rule()?;
            let s = p.shift();
            let aw = breve_fn(|z| weight_breve(z, &s));
            let sq = breve_fn(|z| Ok(sin_breve(z)));
            let mut parts = vec![green_residual(&ChebSeries::t(2), &ChebSeries::t(3), &aw, q, &rule, tol)?];
            for _ in 0..5 {
                let (f, g) = (random_poly(&mut rng, 8), random_poly(&mut rng, 8));
                parts.push(green_residual(&f, &g, &aw, q, &rule, tol)?);
                parts.push(green_residual(&f, &g, &sq, q, &rule, tol)?);
            }
            Ok(worst(id, "Green's formula", tol, parts))
        }
        "sl_eigen" => {
            let sl = SLConfig::new(p)?;
            let parts = (0..=nmax).map(|n| sl_eigen_residual(n, &sl, &grid, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "q-Sturm-Liouville eigen-equation", tol, parts))
        }
        "rayleigh" => rayleigh_check(&SLConfig::new(p)?, nmax, &cfg.rule()?, tol),
        "ansatz" => {
            let parts = (0..=nmax).map(|n| ansatz_check(n, &p, tol)).collect::<Result<Vec<_>>>()?;
            Ok(worst(id, "polynomial solutions of the eigen-equation", tol, parts))
        }
        "ansatz_scan" => ansatz_scan(&p, ANSATZ_K, tol),
        "symmetry" => {
            let (sl, rule) = (SLConfig::new(p)?, cfg.rule()?);
            let mut parts = Vec::new();
            for _ in 0..20 {
                let (f, g) = (random_poly(&mut rng, 8), random_poly(&mut rng, 8));
                parts.push(symmetry_check(&f, &g, &sl, &rule, tol)?);
            }
            Ok(worst(id, "symmetry of T", tol, parts))
        }
        "dirichlet" => {
            let (sl, rule) = (SLConfig::new(p)?, cfg.rule()?);
            let mut parts = Vec::new();
            for n in 1..=nmax {
                parts.push(dirichlet_positivity(&aw_poly(n, &p)?, &sl, &rule, tol)?);
            }
            for _ in 0..20 {
                parts.push(dirichlet_positivity(&random_poly(&mut rng, 8), &sl, &rule, tol)?);
            }
            Ok(worst(id, "positivity of T", tol, parts))
        }
        "q_orthonormal" => q_orthonormality_check(&SLConfig::new(p)?, nmax, &cfg.rule()?, tol),
        "parseval" => {
            let f = ChebSeries::new((0..=nmax).map(|_| rng.gen_range(-1.0..1.0)).collect());
            parseval_q_check(&f, &SLConfig::new(p)?, nmax, &cfg.rule()?, tol)
        }
        "chebyshev_case" => {
            let mut parts = Vec::new();
            for qv in SL_QS {
                for n in 0..=10 {
                    parts.push(chebyshev_case_check(n, QBase::new(qv)?, &grid, tol)?);
                }
            }
            Ok(worst(id, "Chebyshev case of the operator", tol, parts))
        }
        "alphas" => alpha_check(p.a, p.b, q, tol),
        "connection" => connection_check(nmax, p.a, p.b, q, &cfg.rule()?, tol),
        other => Err(Error::InvalidInput(format!("unknown check id: {other}"))),
    }
}

/// Runs every selected check, stage by stage.
pub fn run_verify(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let stages = CHECKS.iter().map(|c| c.1).max().unwrap_or(0);
    let mut checks = Vec::new();
    for stage in 0..=stages {
        let ids: Vec<&str> = CHECKS.iter().filter(|c| c.1 == stage && cfg.selected(c.0)).map(|c| c.0).collect();
        let mut done: Vec<CheckResult> = ids
            .par_iter()
            .map(|id| {
                let start = Instant::now();
                let r = run_one(id, cfg).unwrap_or_else(|e| CheckResult::failed(*id, *id, cfg.tolerance(id), &e));
                r.with("wall_ms", start.elapsed().as_secs_f64() * 1e3)
            })
            .collect();
        checks.append(&mut done);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report { config: cfg.clone(), checks, pass })
}

fn write_csv(path: &Path, header: Option<&[&str]>, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_path(path)?;
    if let Some(h) = header {
        w.write_record(h)?;
    }
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v}")
}

/// Writes the coefficient, recurrence, eigenvalue, norm, Gram, connection and
/// eigen-residual tables plus `constants.json` into `dir`.
pub fn emit_tables(cfg: &SuiteConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(dir)?;
    let p = cfg.params;
    let nmax = cfg.nmax;
    let rule = cfg.rule()?;
    let mut written = Vec::new();
    let mut out = |name: &str, header: Option<&[&str]>, rows: Vec<Vec<String>>| -> Result<()> {
        let path = dir.join(name);
        write_csv(&path, header, &rows)?;
        written.push(path);
        Ok(())
    };

    let polys = (0..=nmax).map(|n| aw_poly(n, &p)).collect::<Result<Vec<_>>>()?;
    out(
        "coefficients.csv",
        None,
        polys
            .iter()
            .enumerate()
            .map(|(n, f)| std::iter::once(n.to_string()).chain(f.coeffs().iter().map(|c| num(*c))).collect())
            .collect(),
    )?;

    let mut rec = Vec::new();
    for n in 0..=nmax {
        let r = recurrence_coeffs(n, &p)?;
        rec.push(vec![n.to_string(), num(r.a_n), num(r.b_n), num(r.c_n)]);
    }
    out("recurrence.csv", Some(&["n", "A", "B", "C"]), rec)?;

    out(
        "eigenvalues.csv",
        Some(&["n", "lambda"]),
        (0..=nmax).map(|n| vec![n.to_string(), num(eigenvalue_lambda(n, &p))]).collect(),
    )?;

    let xi = (0..=nmax).map(|n| norm_xi(n, &p, PRODUCT_TOL)).collect::<Result<Vec<_>>>()?;
    out(
        "norms.csv",
        Some(&["n", "xi"]),
        xi.iter().enumerate().map(|(n, v)| vec![n.to_string(), num(*v)]).collect(),
    )?;

    let g = gram_matrix(&p, nmax, &rule)?;
    let gh: Vec<String> = std::iter::once("m".to_string()).chain((0..=nmax).map(|n| n.to_string())).collect();
    let gh: Vec<&str> = gh.iter().map(String::as_str).collect();
    out(
        "gram.csv",
        Some(&gh),
        g.iter().enumerate().map(|(m, row)| std::iter::once(m.to_string()).chain(row.iter().map(|v| num(*v))).collect()).collect(),
    )?;

    let sl = SLConfig::new(p)?;
    let grid = interior_thetas(POINT_GRID);
    let rq = rayleigh_quotients(&sl, nmax, &rule)?;
    let mut slr = Vec::new();
    for n in 0..=nmax {
        let r = sl_eigen_residual(n, &sl, &grid, cfg.tolerance("sl_eigen"))?;
        slr.push(vec![n.to_string(), num(eigenvalue_lambda(n, &p)), num(r.residual), num(rq[n])]);
    }
    out("sl_residuals.csv", Some(&["n", "lambda", "eigen_residual", "rayleigh"]), slr)?;

    let mut conn = Vec::new();
    for n in 0..=nmax {
        let t = connection_oracle(n, p.a, p.b, p.q, &rule)?;
        let s = t.scale().max(f64::MIN_POSITIVE);
        for j in 0..=n {
            conn.push(vec![
                n.to_string(),
                j.to_string(),
                num(t.closed[j]),
                num(t.quadrature[j]),
                num(t.solve[j]),
                num((t.quadrature[j] - t.closed[j]).abs() / s),
                num((t.solve[j] - t.closed[j]).abs() / s),
            ]);
        }
    }
    out(
        "connection.csv",
        Some(&["n", "j", "closed", "oracle_quadrature", "oracle_solve", "residual_quadrature", "residual_solve"]),
        conn,
    )?;

    let al = alphas(p.a, p.b, p.q)?;
    let constants = serde_json::json!({
        "params": p,
        "aw_integral": aw_integral_closed(&p, PRODUCT_TOL)?,
        "alphas": al,
        "nodes": cfg.nodes,
    });
    let path = dir.join("constants.json");
    fs::write(&path, serde_json::to_string_pretty(&constants)?)?;
    written.push(path);
    Ok(written)
}
