//! Normalised Gram matrix of p_0..p_6 under the Askey-Wilson weight.

use askey_wilson::askey_wilson::{aw_integral_closed, AWParams};
use askey_wilson::quadrature::{gram_matrix, gram_orthogonality, QuadratureRule};

fn main() -> askey_wilson::Result<()> {
    let p = AWParams::canonical();
    let rule = QuadratureRule::new(512)?;

    println!("integral of w: closed form {:.15}", aw_integral_closed(&p, 1e-17)?);

    let gram = gram_matrix(&p, 6, &rule)?;
    for row in &gram {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>9.2e}")).collect();
        println!("{}", cells.join(" "));
    }
    let check = gram_orthogonality(&p, 8, &rule, 1e-9)?;
    println!("max deviation from identity (n <= 8): {:.2e}", check.residual);
    Ok(())
}
