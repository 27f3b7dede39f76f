//! Direct evaluation of `I_k(z) = (1/pi) * int_0^pi e^{z cos t} cos(k t) dt`.
//!
//! Written over the full period as `(1/2pi) * int e^{z cos t - ikt} dt` and
//! moved to the line `t + i tau`, which leaves the integral unchanged (the
//! integrand is entire and `2 pi`-periodic). `tau` minimizes the integrand's
//! peak modulus, so large orders do not cancel against an `e^{|Re z|}` hump.
//! Composite Simpson with panel doubling and one Richardson step. This is
//! the independent reference for the recurrence in `miller`; it shares no
//! code with it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|Re z|` for which the unscaled integrand stays in `f64` range.
pub const MAX_ABS_RE: f64 = 700.0;

const TOL: f64 = 1e-12;
const MAX_PANELS: usize = 1 << 24;

/// `ln max_t |e^{z cos(t + i tau) - in(t + i tau)}|`.
fn log_peak(z: Complex64, n: f64, tau: f64) -> f64 {
    let a = z.re * tau.cosh();
    let b = z.im * tau.sinh();
    a.hypot(b) + n * tau
}

/// Contour height minimizing [`log_peak`]; convex in `tau`, so ternary search.
fn saddle_height(z: Complex64, n: f64) -> f64 {
    if n == 0.0 || z.norm() == 0.0 {
        return 0.0;
    }
    let mut lo = -((n / z.norm()).asinh() + 1.0);
    let mut hi = 0.0;
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if log_peak(z, n, m1) < log_peak(z, n, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

pub fn bessel_i_quadrature(k: i64, z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re.abs() > MAX_ABS_RE {
        return Err(Error::Range {
            what: format!("|Re z| = {} for quadrature", z.re.abs()),
            bound: MAX_ABS_RE,
        });
    }
    // cosine parity: I_{-k} = I_k, bit for bit
    let n = k.unsigned_abs() as f64;
    let tau = saddle_height(z, n);
    let f = |t: f64| {
        let w = Complex64::new(t, tau);
        (z * w.cos() - Complex64::i() * n * w).exp()
    };
    let len = 2.0 * PI;

    let mut panels = (4.0 * (n + z.norm().ceil())).max(64.0) as usize;
    panels = panels.next_power_of_two();
    let ends = (f(0.0) + f(len)) * 0.5;
    let mut interior: Complex64 = (1..panels).map(|j| f(len * j as f64 / panels as f64)).sum();
    let trap = |interior: Complex64, p: usize| (ends + interior) * (len / p as f64);

    let mut t_prev = trap(interior, panels);
    let mut s_prev: Option<Complex64> = None;
    while panels < MAX_PANELS {
        let mids: Complex64 = (0..panels)
            .map(|j| f(len * (2 * j + 1) as f64 / (2 * panels) as f64))
            .sum();
        interior += mids;
        panels *= 2;
        let t = trap(interior, panels);
        let s = (t * 4.0 - t_prev) / 3.0;
        if let Some(sp) = s_prev {
            let scale = (s.norm() / len).max(1.0);
            if (s - sp).norm() / len < TOL * scale {
                let richardson = s + (s - sp) / 15.0;
                return Ok(richardson / len);
            }
        }
        s_prev = Some(s);
        t_prev = t;
    }
    Err(Error::Domain(format!(
        "quadrature for k={k}, z={z} did not settle within {MAX_PANELS} panels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_matches_real_axis_formula() {
        // for real x the optimum is sinh(tau) = -n/x
        let (x, n) = (16.0, 25.0);
        let tau = saddle_height(Complex64::new(x, 0.0), n);
        assert!((tau.sinh() + n / x).abs() < 1e-6);
        assert_eq!(saddle_height(Complex64::new(3.0, 1.0), 0.0), 0.0);
    }

    #[test]
    fn large_order_small_argument_settles() {
        // I_25(16) ~ 2.6e-2 against an e^16 hump on the real axis
        let q = bessel_i_quadrature(25, Complex64::new(-16.0, 0.0)).unwrap();
        let p = bessel_i_quadrature(25, Complex64::new(16.0, 0.0)).unwrap();
        assert!((q + p).norm() <= 1e-12 * p.norm());
        assert!(p.re > 0.0 && p.im.abs() < 1e-12 * p.re);
    }
}
