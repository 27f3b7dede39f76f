//! The `(a, b)` example family: coefficient series against its closed form,
//! and its four-line margins.
//!
//!     cargo run --example example_families

use discrete_hardy::analytic::{
    appendix_example2, appendix_example2_closed, appendix_example2_envelope, check_theorem21_lines,
    Extension, LineBoundSpec,
};
use num_complex::Complex64;

fn main() -> discrete_hardy::Result<()> {
    let (a, b, h) = (2.0, 0.0, 1.0);
    let u = Complex64::new(1.0, 0.0);
    let f = appendix_example2(u, a, b, h, Some(48))?;
    let ext = Extension::new(f, Some(appendix_example2_envelope(u, a, h)?))?;
    for z in [Complex64::new(0.4, 0.0), Complex64::new(-1.0, 0.8), Complex64::new(2.0, -1.5)] {
        let s = ext.evaluate(z)?.value.to_complex();
        let c = appendix_example2_closed(u, a, b, h, z).to_complex();
        println!("z = {z}: |series - closed| / |closed| = {:.2e}", (s - c).norm() / c.norm());
    }

    // s = 1 with u/a^2 in the line bounds
    let spec = LineBoundSpec::cor42(1.0 / (a * a), 1.2, 1.0)?;
    let c = (0.5 * (1.0 - 1.0 / (a * a)) / (h * h)).exp();
    let grid: Vec<f64> = (0..=10).map(|j| 0.2 * j as f64).collect();
    let rep = check_theorem21_lines(
        |z| Ok(appendix_example2_closed(u, a, b, h, z)),
        &spec,
        h,
        &grid,
        c,
    )?;
    println!("line margins with C = {c:.4}: max {:.4}", rep.max_margin());
    Ok(())
}
