//! Expansion of p_n(a, b, -a, -b) in p_j(a q^{1/2}, b q^{1/2}, -a, -b).

use askey_wilson::connection::{alphas, connection_oracle};
use askey_wilson::qcore::QBase;
use askey_wilson::quadrature::QuadratureRule;

fn main() -> askey_wilson::Result<()> {
    let (a, b) = (0.3, -0.2);
    let q = QBase::new(0.5)?;
    let rule = QuadratureRule::new(512)?;

    let al = alphas(a, b, q)?;
    println!("alpha_0 {:.12}  alpha_1 {:.12}  alpha_2 {:.12}", al.alpha0, al.alpha1, al.alpha2);

    for n in [4, 6] {
        let t = connection_oracle(n, a, b, q, &rule)?;
        println!("n = {n} (condition {:.1e})", t.condition);
        for j in 0..=n {
            println!("  j = {j}: closed {:>14.6e}  quadrature {:>14.6e}  solve {:>14.6e}", t.closed[j], t.quadrature[j], t.solve[j]);
        }
        let (quad, solve) = t.oracle_residuals();
        println!("  oracle residuals {quad:.1e} {solve:.1e}, band {:.1e}", t.band_residual());
    }
    Ok(())
}
