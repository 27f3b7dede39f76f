//! Scaled modified Bessel values, including arguments far beyond `f64` range.
//!
//!     cargo run --example bessel_values

use discrete_hardy::bessel::{bessel_i, bessel_i_quadrature, bessel_i_scaled, bessel_ratio};
use num_complex::Complex64;

fn main() -> discrete_hardy::Result<()> {
    let cases = [
        (0, Complex64::new(1.0, 0.0)),
        (1, Complex64::new(2.0, 0.0)),
        (3, Complex64::new(2.0, 1.0)),
        (-4, Complex64::new(-3.0, 5.0)),
        (10, Complex64::new(0.0, 25.0)),
    ];
    println!("{:>4} {:>12} {:>26} {:>12}", "k", "z", "I_k(z) e^(-Re z)", "vs quadrature");
    for (k, z) in cases {
        let s = bessel_i_scaled(k, z)?.to_complex();
        let q = bessel_i_quadrature(k, z)? * (-z.re).exp();
        let rel = (s - q).norm() / q.norm().max(1e-300);
        println!("{k:>4} {z:>12} {s:>26.16} {rel:>12.1e}");
    }

    // I_0(2000) overflows a double; its logarithm does not
    let big = bessel_i(0, Complex64::new(2000.0, 0.0))?;
    println!("ln I_0(2000) = {:.12}", big.log_mag());
    let deep = bessel_i(3000, Complex64::new(800.0, 0.0))?;
    println!("ln I_3000(800) = {:.12}", deep.log_mag());

    println!("I_5(100)/I_0(100) = {:.16}", bessel_ratio(5, 100.0)?);
    Ok(())
}
