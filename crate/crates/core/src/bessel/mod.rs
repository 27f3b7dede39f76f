//! Modified Bessel functions `I_k(z)` of integer order and complex argument.
//!
//! Everything large is carried as `I_k(z) e^{-Re z}` in a [`ComplexScaled`],
//! so ratios like `I_k(a)/I_0(a)` at `a = 2000` are formed without ever
//! materializing `I_0(2000)`.

mod miller;
mod quadrature;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::scaled::ComplexScaled;

pub use miller::starting_order;
pub use quadrature::{bessel_i_quadrature, MAX_ABS_RE};

/// Below this modulus the two-term power series is exact to double precision.
const SERIES_RADIUS: f64 = 1e-8;

/// Modulus bound (natural log) below which orders past the accuracy range
/// are reported as zero: the smallest positive subnormal.
const UNDERFLOW_LOG: f64 = -744.44;

/// An order/argument pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselArg {
    pub order: i64,
    pub argument: Complex64,
}

impl BesselArg {
    pub fn new(order: i64, argument: Complex64) -> Self {
        Self { order, argument }
    }

    pub fn scaled(&self) -> Result<ComplexScaled> {
        bessel_i_scaled(self.order, self.argument)
    }
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        domain(format!("Bessel argument must be finite, got {z}"))
    }
}

fn small_argument(z: Complex64, n: usize) -> ComplexScaled {
    // (z/2)^n / n! * (1 + (z^2/4)/(n+1)), then the e^{-Re z} scaling
    let half = ComplexScaled::from_complex(z * 0.5);
    let log_mag = n as f64 * half.log_mag() - libm::lgamma(n as f64 + 1.0) - z.re;
    let phase = n as f64 * half.phase();
    let correction = Complex64::new(1.0, 0.0) + z * z * 0.25 / (n as f64 + 1.0);
    ComplexScaled::from_log_polar(log_mag, phase).scale(correction)
}

/// `I_n(z) e^{-Re z}` for every `n = 0..=n_max`.
pub fn bessel_i_scaled_seq(z: Complex64, n_max: usize) -> Result<Vec<ComplexScaled>> {
    check_finite(z)?;
    let abs_z = z.norm();
    if abs_z == 0.0 {
        let mut out = vec![ComplexScaled::ZERO; n_max + 1];
        out[0] = ComplexScaled::ONE;
        return Ok(out);
    }
    if abs_z < SERIES_RADIUS {
        return Ok((0..=n_max).map(|n| small_argument(z, n)).collect());
    }
    if z.re >= 0.0 {
        return Ok(miller::scaled_right_half(z, n_max));
    }
    // I_n(-w) = (-1)^n I_n(w); rescale e^{-Re w} to e^{-Re z} = e^{Re w}
    let w = -z;
    let shift = ComplexScaled::from_log_polar(2.0 * w.re, 0.0);
    let vals = miller::scaled_right_half(w, n_max);
    Ok(vals
        .into_iter()
        .enumerate()
        .map(|(n, v)| {
            let v = v * shift;
            if n % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect())
}

/// `I_k(z) e^{-Re z}`.
///
/// Accurate to about `1e-12` relative for `|k| <= 4|z| + 50`, `|z| <= 1e6`.
/// Orders beyond that range whose modulus bound `(|z|/2)^k/k! * e^{|z|-Re z}`
/// is below the smallest subnormal come back as exact zero.
pub fn bessel_i_scaled(k: i64, z: Complex64) -> Result<ComplexScaled> {
    check_finite(z)?;
    let n = k.unsigned_abs() as usize;
    let abs_z = z.norm();
    if n > 0 && abs_z == 0.0 {
        return Ok(ComplexScaled::ZERO);
    }
    if n as f64 > 4.0 * abs_z + 50.0 {
        let bound = n as f64 * (abs_z / 2.0).ln() - libm::lgamma(n as f64 + 1.0) + abs_z - z.re;
        if bound < UNDERFLOW_LOG {
            return Ok(ComplexScaled::ZERO);
        }
    }
    let seq = bessel_i_scaled_seq(z, n)?;
    Ok(seq[n])
}

/// `I_k(z)` itself, carried in scaled form so it never overflows.
pub fn bessel_i(k: i64, z: Complex64) -> Result<ComplexScaled> {
    let s = bessel_i_scaled(k, z)?;
    Ok(s * ComplexScaled::from_log_polar(z.re, 0.0))
}

/// `ln(I_n(x)/I_0(x))` for `n = 0..=n_max`, `x > 0`.
pub fn log_bessel_ratios(x: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("ratio argument must be positive and finite, got {x}"));
    }
    let seq = bessel_i_scaled_seq(Complex64::new(x, 0.0), n_max)?;
    let l0 = seq[0].log_mag();
    Ok(seq.iter().map(|v| v.log_mag() - l0).collect())
}

/// `ln(I_k(x)/I_0(x))`.
pub fn log_bessel_ratio(k: i64, x: f64) -> Result<f64> {
    let n = k.unsigned_abs() as usize;
    Ok(log_bessel_ratios(x, n)?[n])
}

/// `I_k(x)/I_0(x)` for `x > 0`; may underflow to 0 for very large `|k|`.
pub fn bessel_ratio(k: i64, x: f64) -> Result<f64> {
    Ok(log_bessel_ratio(k, x)?.exp())
}

/// The points `i/n`, `i = 1..=n`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}

/// `sup_x |I_j(a j^2/x^2)/I_0(a j^2/x^2) - e^{-x^2/(2a)}|` over the grid.
///
/// The Bessel quotient tends to the Gaussian uniformly on `(0, 1]` as
/// `j` grows; `x = 0` contributes nothing (both sides tend to 1).
pub fn gaussian_limit_error(alpha: f64, j: u32, xs: &[f64]) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    if j == 0 {
        return domain("j must be at least 1");
    }
    if xs.is_empty() {
        return domain("empty grid");
    }
    let jf = j as f64;
    let mut worst: f64 = 0.0;
    for &x in xs {
        if !(0.0..=1.0).contains(&x) {
            return domain(format!("grid point {x} outside (0, 1]"));
        }
        if x == 0.0 {
            continue;
        }
        let arg = alpha * jf * jf / (x * x);
        let ratio = bessel_ratio(j as i64, arg)?;
        worst = worst.max((ratio - (-x * x / (2.0 * alpha)).exp()).abs());
    }
    Ok(worst)
}
