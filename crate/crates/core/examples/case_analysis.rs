//! The `rs < 1`, `rs = 1`, `rs > 1` verdicts and how heat flow moves `(r, s)`.
//!
//!     cargo run --example case_analysis

use std::f64::consts::PI;

use discrete_hardy::analytic::{
    appendix_onset_threshold, heat_parameter_flow, trichotomy, DEFAULT_EXPLICIT_TOL,
};

fn main() -> discrete_hardy::Result<()> {
    for (r, s) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0)] {
        let v = trichotomy(r, s, DEFAULT_EXPLICIT_TOL)?;
        println!("r={r}, s={s}: {:?} (rs = {})", v.case, v.product);
    }
    for t in [0.0, 0.5, 1.0, 5.0] {
        let (rt, st) = heat_parameter_flow(0.5, 1.0, t)?;
        println!("t={t}: r_t={rt}, s_t={st:.6}, product {:.6}", rt * st);
    }
    for delta in [PI / 3.0, 1.5, 0.1] {
        println!("onset at a=1, delta={delta:.4}: {:.6}", appendix_onset_threshold(1.0, delta)?);
    }
    Ok(())
}
