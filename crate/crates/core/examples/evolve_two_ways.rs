//! The lattice Schrödinger and heat flows by kernel convolution and by FFT.
//!
//!     cargo run --example evolve_two_ways

use discrete_hardy::evolution::{evolve_kernel, evolve_spectral, Equation, EvolutionSpec};
use discrete_hardy::hardy::{make_example, ExampleName};
use discrete_hardy::NormKind;

fn main() -> discrete_hardy::Result<()> {
    let pair = make_example(ExampleName::SchrodingerA, 0.5)?;
    for eq in [Equation::Schrodinger, Equation::Heat] {
        let k = evolve_kernel(&pair.f0, &EvolutionSpec::kernel(eq, 1.0))?;
        let s = evolve_spectral(&pair.f0, &EvolutionSpec::spectral(eq, 1.0))?;
        println!(
            "{eq:?}: window [{}, {}], kernel vs spectral {:.2e}",
            k.k_min(),
            k.k_max(),
            k.rel_linf_diff(&s)
        );
        println!(
            "  l2 {:.15} -> {:.15}, sum {:.6} -> {:.6}",
            pair.f0.norm(NormKind::L2),
            k.norm(NormKind::L2),
            pair.f0.sum(),
            k.sum()
        );
    }
    let out = evolve_kernel(&pair.f0, &EvolutionSpec::kernel(Equation::Schrodinger, 1.0))?;
    println!("closed form residual: {:.2e}", out.rel_linf_diff(&pair.f1));
    Ok(())
}
