//! The q-Sturm-Liouville operator: eigenvalues, the series ansatz and Rayleigh quotients.

use askey_wilson::askey_wilson::{eigenvalue_lambda, AWParams};
use askey_wilson::quadrature::{interior_thetas, QuadratureRule};
use askey_wilson::sturm_liouville::{ansatz_solve, rayleigh_quotients, sl_eigen_residual, SLConfig};

fn main() -> askey_wilson::Result<()> {
    let p = AWParams::canonical();
    let cfg = SLConfig::new(p)?;
    let rule = QuadratureRule::new(512)?;
    let grid = interior_thetas(64);

    let rq = rayleigh_quotients(&cfg, 6, &rule)?;
    for n in 0..=6 {
        let r = sl_eigen_residual(n, &cfg, &grid, 1e-8)?;
        println!(
            "n = {n}: lambda {:>12.6}  Rayleigh {:>12.6}  eigen residual {:.1e}",
            eigenvalue_lambda(n, &p),
            rq[n],
            r.residual
        );
    }

    // the series terminates on the spectrum and only there
    for lambda in [eigenvalue_lambda(3, &p), eigenvalue_lambda(3, &p) * 1.01, -5.0] {
        let s = ansatz_solve(lambda, &p, 20)?;
        match s.terminated_at {
            Some(k) => println!("lambda {lambda:>10.5}: terminates at degree {k}"),
            None => println!("lambda {lambda:>10.5}: no termination up to k = 20"),
        }
    }
    Ok(())
}
