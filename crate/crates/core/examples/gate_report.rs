//! Envelope fits and the two-time gate on the named example pairs.
//!
//!     cargo run --example gate_report

use discrete_hardy::hardy::{envelope_fit, hardy_gate, make_example, ExampleName};

fn main() -> discrete_hardy::Result<()> {
    let h = 0.25;
    // fits see only the stored entries, so they can undershoot the infimum
    for name in ExampleName::schrodinger() {
        let p = make_example(name, h)?;
        let a = envelope_fit(&p.f0, 1.0)?.alpha;
        let b = envelope_fit(&p.f1, 1.0)?.alpha;
        println!("{name:?}: fitted alpha {a:.6}, beta {b:.6}, sum {:.6}", a + b);
    }

    let sharp = make_example(ExampleName::SharpSchrodinger, h)?;
    let report = hardy_gate(&sharp.f0, &sharp.f1, 1.0, 1.0, 1.0, sharp.equation)?;
    println!("{}", report.to_json());
    Ok(())
}
