//! Backward recurrence for `I_n(z)`, `n = 0..=n_max`, normalized with
//! `e^z = I_0(z) + 2 * sum_{m >= 1} I_m(z)`.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::scaled::ComplexScaled;

const RESCALE_AT: f64 = 1e150; // ~2^498
const RESCALE_BITS: i32 = 498;
const AGREEMENT: f64 = 1e-13;
const MAX_DOUBLINGS: usize = 8;

/// Arithmetic lane for the recurrence: plain `f64` for real positive
/// arguments, `Complex64` otherwise.
trait Lane: Copy + Add<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> {
    const ZERO: Self;
    const ONE: Self;
    fn max_abs(self) -> f64;
    fn scalbn(self, n: i32) -> Self;
    fn to_complex(self) -> Complex64;
}

impl Lane for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn max_abs(self) -> f64 {
        self.abs()
    }
    fn scalbn(self, n: i32) -> Self {
        libm::scalbn(self, n)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Lane for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);
    fn max_abs(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn scalbn(self, n: i32) -> Self {
        Complex64::new(libm::scalbn(self.re, n), libm::scalbn(self.im, n))
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Starting order for the downward sweep.
pub fn starting_order(n_max: usize, abs_z: f64) -> usize {
    let n = n_max as f64;
    let spread = (10.0 + 2.0 * (n.max(abs_z) * abs_z).sqrt()).ceil();
    n_max + spread as usize + 20
}

/// One sweep from order `start`, returning `I_n(w) e^{-Re w}` for
/// `n = 0..=n_max`. `inv_w` is `1/w`; `phase` is `e^{i Im w}`.
fn sweep<T: Lane>(inv_w: T, phase: Complex64, n_max: usize, start: usize) -> Vec<ComplexScaled> {
    debug_assert!(start > n_max);
    let mut stored: Vec<(T, i64)> = vec![(T::ZERO, 0); n_max + 1];
    let mut exp2: i64 = 0;
    let mut above = T::ZERO;
    let mut cur = T::ONE;
    let mut sum = T::ZERO;
    for m in (1..=start).rev() {
        if m <= n_max {
            stored[m] = (cur, exp2);
        }
        sum = sum + cur * 2.0;
        let below = inv_w * cur * (2.0 * m as f64) + above;
        above = cur;
        cur = below;
        if cur.max_abs() > RESCALE_AT {
            cur = cur.scalbn(-RESCALE_BITS);
            above = above.scalbn(-RESCALE_BITS);
            sum = sum.scalbn(-RESCALE_BITS);
            exp2 += RESCALE_BITS as i64;
        }
    }
    stored[0] = (cur, exp2);
    sum = sum + cur;

    let norm = ComplexScaled::from_complex(phase) / ComplexScaled::from_complex(sum.to_complex());
    stored
        .into_iter()
        .map(|(v, e)| (ComplexScaled::from_complex(v.to_complex()) * norm).mul_pow2(e - exp2))
        .collect()
}

fn agree(a: &[ComplexScaled], b: &[ComplexScaled]) -> bool {
    let log_tol = AGREEMENT.ln();
    let logs: Vec<f64> = b.iter().map(|v| v.log_mag()).collect();
    (0..b.len()).all(|j| {
        let diff = (a[j] - b[j]).log_mag();
        if diff == f64::NEG_INFINITY {
            return true;
        }
        // neighbours guard against relative tests at zeros of oscillatory orders
        let lo = j.saturating_sub(1);
        let hi = (j + 1).min(b.len() - 1);
        let scale = logs[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        diff <= log_tol + scale
    })
}

fn converged<T: Lane>(inv_w: T, phase: Complex64, n_max: usize, abs_w: f64) -> Vec<ComplexScaled> {
    let mut start = starting_order(n_max, abs_w);
    let mut prev = sweep(inv_w, phase, n_max, start);
    for _ in 0..MAX_DOUBLINGS {
        start *= 2;
        let next = sweep(inv_w, phase, n_max, start);
        if agree(&prev, &next) {
            return next;
        }
        prev = next;
    }
    prev
}

/// `I_n(w) e^{-Re w}` for `n = 0..=n_max`, requiring `Re w >= 0`, `w != 0`.
pub(crate) fn scaled_right_half(w: Complex64, n_max: usize) -> Vec<ComplexScaled> {
    debug_assert!(w.re >= 0.0 && w != Complex64::new(0.0, 0.0));
    let abs_w = w.norm();
    if w.im == 0.0 {
        converged(1.0 / w.re, Complex64::new(1.0, 0.0), n_max, abs_w)
    } else {
        let (s, c) = w.im.sin_cos();
        converged(w.inv(), Complex64::new(c, s), n_max, abs_w)
    }
}
