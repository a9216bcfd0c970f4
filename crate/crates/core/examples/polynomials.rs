//! Askey-Wilson polynomials three ways: hypergeometric coefficients, recurrence, direct sum.

use askey_wilson::askey_wilson::{aw_eval_direct, aw_poly, aw_poly_recurrence, eigenvalue_lambda, norm_xi, recurrence_coeffs, AWParams};

fn main() -> askey_wilson::Result<()> {
    let p = AWParams::canonical();
    println!("q = {}, (a, b, c, d) = {:?}", p.qv(), p.params());

    for n in 0..=4 {
        let poly = aw_poly(n, &p)?;
        let coeffs: Vec<String> = poly.coeffs().iter().map(|c| format!("{c:.6}")).collect();
        println!("p_{n} = [{}]", coeffs.join(", "));
    }

    let theta: f64 = 1.1;
    let n = 6;
    let x = theta.cos();
    println!(
        "p_{n}(cos {theta}): series {:.14}, recurrence {:.14}, direct {:.14}",
        aw_poly(n, &p)?.eval(x),
        aw_poly_recurrence(n, &p)?.eval(x),
        aw_eval_direct(n, &p, theta)?
    );

    println!("{:>2} {:>12} {:>12} {:>12} {:>14} {:>14}", "n", "A_n", "B_n", "C_n", "lambda_n", "xi_n");
    for n in 0..=6 {
        let r = recurrence_coeffs(n, &p)?;
        println!(
            "{n:>2} {:>12.6} {:>12.6} {:>12.6} {:>14.6} {:>14.6e}",
            r.a_n,
            r.b_n,
            r.c_n,
            eigenvalue_lambda(n, &p),
            norm_xi(n, &p, 1e-17)?
        );
    }
    Ok(())
}
