//! q-shifted factorials, a terminating 2φ1 and the three classical product identities.

use askey_wilson::qcore::{check_1psi1, check_q_binomial, check_triple_product, phi, phi_terminating, pinf, poch, QBase};
use num_complex::Complex64;

fn main() -> askey_wilson::Result<()> {
    let q = QBase::new(0.5)?;
    println!("(0.3; q)_5       = {:.15}", poch(&0.3, &q.value(), 5));
    println!("(0.3; q)_inf     = {:.15}", pinf(0.3, q.value()));

    // q-Chu-Vandermonde: 2φ1(q^-n, b; c; q, q) = (c/b; q)_n b^n / (c; q)_n
    let (n, b, c, qv) = (4, 0.6, -0.3, q.value());
    let s = phi_terminating(n, &[b], &[c], &qv, &qv)?;
    let closed = poch(&(c / b), &qv, n) * b.powi(n as i32) / poch(&c, &qv, n);
    println!("terminating sum  = {:.15}, closed form {:.15}", s.value, closed);

    let b = phi(&[0.3, 0.2], &[0.6], &q.value(), &0.25, 200, 1e-17)?;
    println!("2φ1(0.3,0.2;0.6;q,0.25) = {:.15} ({} terms)", b.value, b.terms);

    let checks = [
        check_q_binomial(0.3, 0.4, q, 64, 1e-11)?,
        check_1psi1(-0.8, -0.2, 0.5, q, 64, 1e-11)?,
        check_triple_product(Complex64::new(-0.7, 0.2), q, 64, 1e-11)?,
    ];
    for c in &checks {
        println!("{:<16} residual {:.2e}  {}", c.id, c.residual, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
