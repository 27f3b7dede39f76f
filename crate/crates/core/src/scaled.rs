//! Complex numbers with an unbounded binary exponent.
//!
//! Values such as `I_0(2000)` or `I_3000(800)` do not fit in an `f64`. A
//! [`ComplexScaled`] keeps a complex mantissa whose larger component lies in
//! `[0.5, 1)` together with an `i64` power of two, so products and ratios of
//! such values can be formed exactly up to the usual mantissa rounding.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;

// Exponent gaps beyond this make the smaller addend invisible.
const ALIGN_LIMIT: i64 = 1100;

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexScaled {
    mant: Complex64,
    exp2: i64,
}

impl ComplexScaled {
    pub const ZERO: Self = Self {
        mant: Complex64::new(0.0, 0.0),
        exp2: 0,
    };
    pub const ONE: Self = Self {
        mant: Complex64::new(0.5, 0.0),
        exp2: 1,
    };

    fn normalized(mant: Complex64, exp2: i64) -> Self {
        debug_assert!(mant.re.is_finite() && mant.im.is_finite());
        let m = mant.re.abs().max(mant.im.abs());
        if m == 0.0 {
            return Self::ZERO;
        }
        let (_, e) = libm::frexp(m);
        let re = libm::scalbn(mant.re, -e);
        // keep the phase in (-pi, pi] by never storing a negative zero
        let im = libm::scalbn(mant.im, -e) + 0.0;
        Self {
            mant: Complex64::new(re, im),
            exp2: exp2 + e as i64,
        }
    }

    /// Exact conversion from an ordinary finite complex number.
    pub fn from_complex(z: Complex64) -> Self {
        assert!(z.re.is_finite() && z.im.is_finite(), "non-finite value");
        Self::normalized(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// Builds `exp(log_mag) * exp(i phase)`; `log_mag = -inf` gives zero.
    pub fn from_log_polar(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        assert!(log_mag.is_finite() && phase.is_finite(), "non-finite log/phase");
        let e = (log_mag / std::f64::consts::LN_2).floor();
        let r = (log_mag - e * LN2_HI) - e * LN2_LO;
        let (s, c) = phase.sin_cos();
        let m = r.exp();
        Self::normalized(Complex64::new(m * c, m * s), e as i64)
    }

    /// `exp(w)` for complex `w`.
    pub fn exp(w: Complex64) -> Self {
        Self::from_log_polar(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.norm().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    /// Argument in `(-pi, pi]`, and 0 for zero.
    pub fn phase(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.mant.im.atan2(self.mant.re)
    }

    /// Back to an ordinary complex number; saturates to infinity or zero.
    pub fn to_complex(&self) -> Complex64 {
        let e = self.exp2.clamp(-2200, 2200) as i32;
        Complex64::new(
            libm::scalbn(self.mant.re, e),
            libm::scalbn(self.mant.im, e),
        )
    }

    /// Modulus as an `f64` (saturating).
    pub fn abs(&self) -> f64 {
        let e = self.exp2.clamp(-2200, 2200) as i32;
        libm::scalbn(self.mant.norm(), e)
    }

    /// `|self|` as a scaled real.
    pub fn modulus(&self) -> Self {
        Self::normalized(Complex64::new(self.mant.norm(), 0.0), self.exp2)
    }

    pub fn conj(&self) -> Self {
        Self::normalized(self.mant.conj(), self.exp2)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        *self * Self::from_complex(factor)
    }

    /// Multiplies by `2^n` exactly.
    pub fn mul_pow2(&self, n: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self {
            mant: self.mant,
            exp2: self.exp2 + n,
        }
    }

    pub fn binary_exponent(&self) -> i64 {
        self.exp2
    }
}

impl Default for ComplexScaled {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for ComplexScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ComplexScaled {{ log_mag: {}, phase: {} }}",
            self.log_mag(),
            self.phase()
        )
    }
}

impl From<Complex64> for ComplexScaled {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

impl Mul for ComplexScaled {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalized(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Div for ComplexScaled {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        Self::normalized(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Neg for ComplexScaled {
    type Output = Self;
    fn neg(self) -> Self {
        Self::normalized(-self.mant, self.exp2)
    }
}

impl Add for ComplexScaled {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let top = self.exp2.max(rhs.exp2);
        let shift = |v: &Self| {
            let d = v.exp2 - top;
            if d < -ALIGN_LIMIT {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(
                    libm::scalbn(v.mant.re, d as i32),
                    libm::scalbn(v.mant.im, d as i32),
                )
            }
        };
        Self::normalized(shift(&self) + shift(&rhs), top)
    }
}

impl Sub for ComplexScaled {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl std::iter::Sum for ComplexScaled {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_has_neg_infinite_log_and_zero_phase() {
        let z = ComplexScaled::from_complex(Complex64::new(0.0, -0.0));
        assert!(z.is_zero());
        assert_eq!(z.log_mag(), f64::NEG_INFINITY);
        assert_eq!(z.phase(), 0.0);
        assert!(ComplexScaled::from_log_polar(f64::NEG_INFINITY, 1.0).is_zero());
    }

    #[test]
    fn one_is_one() {
        assert_eq!(ComplexScaled::ONE.to_complex(), Complex64::new(1.0, 0.0));
        assert_eq!(ComplexScaled::ONE.log_mag(), 0.0);
    }

    #[test]
    fn negative_real_axis_has_phase_pi() {
        let z = ComplexScaled::from_complex(Complex64::new(-2.0, -0.0));
        assert_eq!(z.phase(), PI);
    }

    #[test]
    fn huge_values_survive_products() {
        // e^2000 * e^-1990 = e^10
        let a = ComplexScaled::from_log_polar(2000.0, 0.3);
        let b = ComplexScaled::from_log_polar(-1990.0, -0.3);
        let p = (a * b).to_complex();
        assert!((p.re - 10f64.exp()).abs() < 1e-9 * 10f64.exp());
        assert!(p.im.abs() < 1e-9);
        let q = a / ComplexScaled::from_log_polar(1999.0, 0.3);
        assert!((q.to_complex().re - 1f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn addition_with_disparate_exponents() {
        let big = ComplexScaled::from_log_polar(800.0, 0.0);
        let small = ComplexScaled::ONE;
        assert_eq!((big + small).log_mag(), big.log_mag());
        let s = ComplexScaled::from_real(3.0) + ComplexScaled::from_real(-1.0);
        assert_eq!(s.to_complex(), Complex64::new(2.0, 0.0));
        assert!((big - big).is_zero());
    }

    #[test]
    fn log_polar_matches_accessors() {
        let z = ComplexScaled::from_log_polar(-1234.5, 2.0);
        assert!((z.log_mag() + 1234.5).abs() < 1e-11);
        assert!((z.phase() - 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            mag in -300.0f64..300.0,
            ang in -PI..PI,
        ) {
            let r = 10f64.powf(mag);
            let z = Complex64::new(r * ang.cos(), r * ang.sin());
            let back = ComplexScaled::from_complex(z).to_complex();
            prop_assert_eq!(back.re, z.re + 0.0);
            prop_assert_eq!(back.im, z.im + 0.0);
        }

        #[test]
        fn phase_in_half_open_interval(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = ComplexScaled::from_complex(Complex64::new(re, im));
            if !z.is_zero() {
                prop_assert!(z.phase() > -PI && z.phase() <= PI);
            }
        }

        #[test]
        fn product_agrees_with_f64(
            a in -1e5f64..1e5, b in -1e5f64..1e5,
            c in -1e5f64..1e5, d in -1e5f64..1e5,
        ) {
            let x = Complex64::new(a, b);
            let y = Complex64::new(c, d);
            let p = (ComplexScaled::from(x) * ComplexScaled::from(y)).to_complex();
            let q = x * y;
            prop_assert!((p - q).norm() <= 1e-15 * q.norm().max(1e-300));
        }
    }
}
