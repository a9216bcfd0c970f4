//! Lowering, raising, weight ratio and Rodrigues identities on the canonical parameters.

use askey_wilson::askey_wilson::{lowering_check, raising_check, rodrigues_check, weight_ratio_check, AWParams};
use askey_wilson::quadrature::interior_thetas;

fn main() -> askey_wilson::Result<()> {
    let p = AWParams::canonical();
    let grid = interior_thetas(64);

    for n in 1..=6 {
        let lo = lowering_check(n, &p, 1e-11)?;
        let up = raising_check(n, &p, &grid, 1e-8)?;
        println!("n = {n}: lowering {:.2e}, raising {:.2e}", lo.residual, up.residual);
    }
    let ratio = weight_ratio_check(&p, &grid, 1e-8)?;
    println!("weight ratio {:.2e}", ratio.residual);
    for n in 0..=4 {
        let r = rodrigues_check(n, &p, &grid, 1e-7)?;
        println!("Rodrigues n = {n}: {:.2e} {}", r.residual, if r.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
