//! The entire extension of a coefficient sequence and four-line decay margins.
//!
//!     cargo run --example analytic_lines

use std::f64::consts::TAU;

use discrete_hardy::analytic::{
    check_theorem21_lines, default_y_grid, explicit_form, Extension, LineBoundSpec,
};
use discrete_hardy::bessel::bessel_i;
use discrete_hardy::{Envelope, LatticeSignal};
use num_complex::Complex64;

fn main() -> discrete_hardy::Result<()> {
    let h = 1.0;
    let r = 1.0;
    // f_k = I_k(i r/h^2) sqrt(2 pi)/h extends to e^{(i r/h^2) cos(zh)}
    let scale = TAU.sqrt() / h;
    let values = (-40..=40)
        .map(|k| Ok(bessel_i(k, Complex64::new(0.0, r / (h * h)))?.to_complex() * scale))
        .collect::<discrete_hardy::Result<Vec<_>>>()?;
    let f = LatticeSignal::new(h, -40, values)?;
    let ext = Extension::new(f, Some(Envelope::new(r, scale * 1.3, h)?))?;

    for z in [Complex64::new(0.3, 0.0), Complex64::new(1.0, -1.0)] {
        let v = ext.evaluate(z)?;
        let closed = (Complex64::new(0.0, r / (h * h)) * (z * h).cos()).exp();
        println!(
            "z = {z}: series {:.15}, closed {:.15}, tail {:.1e}, digits lost {:.1}",
            v.value.to_complex(),
            closed,
            v.relative_tail(),
            v.digits_lost()
        );
    }

    let spec = LineBoundSpec::cor41(r, 1.2, 1.0)?;
    let grid: Vec<f64> = (0..=10).map(|j| 0.2 * j as f64 / h).collect();
    let series = check_theorem21_lines(|z| Ok(ext.evaluate(z)?.value), &spec, h, &grid, 1.0)?;
    println!("series margins, |y|h <= 2: max {:.2e}", series.max_margin());

    let exact = explicit_form(spec.u(), 0.0, h, 1.0);
    let report = check_theorem21_lines(exact, &spec, h, &default_y_grid(h), 1.0)?;
    println!("closed form margins, |y|h <= 6: max {:.2e}", report.max_margin());
    Ok(())
}
