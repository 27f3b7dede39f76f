//! Uniform convergence of `I_j(a j^2/x^2)/I_0(a j^2/x^2)` to `e^{-x^2/2a}`.
//!
//!     cargo run --example gaussian_limit

use discrete_hardy::bessel::{gaussian_limit_error, unit_grid};

fn main() -> discrete_hardy::Result<()> {
    let xs = unit_grid(64);
    for alpha in [1.0, 0.5] {
        for j in [1, 2, 4, 8, 16, 32, 64] {
            println!("alpha {alpha}, j {j:>3}: {:.6e}", gaussian_limit_error(alpha, j, &xs)?);
        }
    }
    Ok(())
}
