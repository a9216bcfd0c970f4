//! The Askey-Wilson divided difference on a Chebyshev series, exact and pointwise.

use askey_wilson::chebpoly::{dq_pointwise, gamma_factor, u_in_t, ChebSeries};
use askey_wilson::qcore::QBase;
use num_complex::Complex64;

fn main() -> askey_wilson::Result<()> {
    let q = QBase::new(0.5)?;

    for n in 1..=5 {
        let d = ChebSeries::t(n).dq(q);
        let expected = u_in_t(n - 1).scale(gamma_factor(n, q));
        let err = d
            .coeffs()
            .iter()
            .zip(expected.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!("D_q T_{n} = {:.6} U_{} (coefficient error {err:.1e})", gamma_factor(n, q), n - 1);
    }

    let f = ChebSeries::new(vec![0.5, -1.0, 0.25, 0.0, 0.75]);
    let df = f.dq(q);
    let z = Complex64::from_polar(1.0, 0.9);
    let x = (z + 1.0 / z).re / 2.0;
    let pointwise = dq_pointwise(&f, z, q)?;
    println!("series D_q f at x = {x:.4}: {:.15}", df.eval(x));
    println!("pointwise          : {:.15}", pointwise.re);
    Ok(())
}
