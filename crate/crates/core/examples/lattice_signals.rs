//! Bessel-quotient data on `hZ`: windows, norms and the CSV format.
//!
//!     cargo run --example lattice_signals

use discrete_hardy::lattice::gen_bessel_datum;
use discrete_hardy::{Envelope, LatticeSignal, NormKind};
use num_complex::Complex64;

fn main() -> discrete_hardy::Result<()> {
    let h = 0.25;
    // I_k(i/2h^2) / I_0(1/2h^2), window chosen by the tail rule
    let f = gen_bessel_datum(Complex64::new(0.0, 0.5), 0.5, h, None, false)?;
    println!("window [{}, {}], {} entries", f.k_min(), f.k_max(), f.len());
    for kind in [NormKind::L1, NormKind::L2, NormKind::Linf] {
        println!("{kind:?} = {:.6e}", f.norm(kind));
    }

    let env = Envelope::new(0.5, 1.0, h)?;
    println!("bounded by I_k(0.5/h^2)/I_0(0.5/h^2): {}", env.holds_for(&f)?);

    let mut buf = Vec::new();
    f.window(-3, 3)?.write_csv(&mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    let back = LatticeSignal::read_csv(buf.as_slice())?;
    assert_eq!(back, f.window(-3, 3)?);
    Ok(())
}
