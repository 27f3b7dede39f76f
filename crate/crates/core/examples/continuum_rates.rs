//! Lattice solutions against exact Gaussian solutions as the mesh shrinks.
//!
//!     cargo run --release --example continuum_rates

use discrete_hardy::continuum::{convergence_experiment, ComparisonConfig, InitialDatum};
use discrete_hardy::evolution::Equation;

fn main() -> discrete_hardy::Result<()> {
    let cfg = ComparisonConfig::new(1.0, 1.0, vec![0.2, 0.1, 0.05, 0.025], 1.0)?;
    for eq in [Equation::Schrodinger, Equation::Heat] {
        let rep = convergence_experiment(&cfg, InitialDatum::Gaussian { eps: 1.0 }, eq)?;
        println!("{eq:?}");
        for (h, e) in rep.h.iter().zip(&rep.error_linf) {
            println!("  h = {h:<6} error {e:.4e}");
        }
        println!(
            "  slope {:.3} (reference exponent {}), monotone {}",
            rep.slope.unwrap_or(f64::NAN),
            rep.bound_exponent_reference,
            rep.monotone
        );
    }
    let mut out = Vec::new();
    convergence_experiment(&cfg, InitialDatum::Gaussian { eps: 1.0 }, Equation::Heat)?.write_csv(&mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
