//! Discrete Schrödinger and heat semigroups on `hZ`.
//!
//! `d/dt f_k = i (f_{k+1} - 2 f_k + f_{k-1}) / h^2` (Schrödinger) and the
//! same without the `i` (heat). Two independent solvers are provided:
//!
//! * [`evolve_kernel`]: convolution with `e^{-2it/h^2} I_n(2it/h^2)` or
//!   `e^{-2t/h^2} I_n(2t/h^2)`;
//! * [`evolve_spectral`]: FFT, multiplication by the periodic symbol
//!   `e^{2it(cos(xi h) - 1)/h^2}` (or its real-exponent heat analog), inverse FFT.
//!
//! Both enlarge the output window by the kernel spread `N`, so the output
//! covers `[k_min - N, k_max + N]`. Kernel convolution is parallel over
//! output indices with a fixed summation order per entry, so serial and
//! parallel runs are bit-identical.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_i_scaled_seq;
use crate::error::{domain, Error, Result};
use crate::lattice::LatticeSignal;
use crate::scaled::ComplexScaled;

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Schrodinger,
    Heat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Kernel,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSpec {
    pub equation: Equation,
    pub t: f64,
    pub method: Method,
    pub tail_tol: f64,
    /// FFT length for the spectral method; `None` picks the smallest adequate one.
    pub modes: Option<usize>,
}

impl EvolutionSpec {
    pub fn new(equation: Equation, t: f64, method: Method) -> Self {
        Self {
            equation,
            t,
            method,
            tail_tol: DEFAULT_TAIL_TOL,
            modes: None,
        }
    }

    pub fn kernel(equation: Equation, t: f64) -> Self {
        Self::new(equation, t, Method::Kernel)
    }

    pub fn spectral(equation: Equation, t: f64) -> Self {
        Self::new(equation, t, Method::Spectral)
    }

    pub fn with_tail_tol(mut self, tol: f64) -> Self {
        self.tail_tol = tol;
        self
    }

    pub fn with_modes(mut self, modes: usize) -> Self {
        self.modes = Some(modes);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return domain(format!("time must be finite, got {}", self.t));
        }
        if self.equation == Equation::Heat && self.t < 0.0 {
            return domain(format!("heat flow needs t >= 0, got {}", self.t));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return domain(format!("tail_tol must lie in (0, 1), got {}", self.tail_tol));
        }
        if let Some(m) = self.modes {
            if m < 2 || !m.is_power_of_two() {
                return domain(format!("modes must be a power of two >= 2, got {m}"));
            }
        }
        Ok(())
    }
}

/// Truncated convolution kernel `K_n`, `n = 0..=spread` (`K_{-n} = K_n`).
#[derive(Debug, Clone)]
pub struct Kernel {
    pub values: Vec<Complex64>,
    /// Certified bound on `sum_{|n| > spread} |K_n|`.
    pub tail_l1: f64,
}

impl Kernel {
    pub fn spread(&self) -> usize {
        self.values.len() - 1
    }

    fn at(&self, n: i64) -> Complex64 {
        let n = n.unsigned_abs() as usize;
        if n < self.values.len() {
            self.values[n]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Modulus majorants of the kernel: `e^{-x} I_n(x)` for heat and
/// `I_n(x)` for Schrödinger (`|I_n(ix)| <= I_n(x)`), `x = 2|t|/h^2`.
fn log_majorants(equation: Equation, x: f64, n_max: usize) -> Result<Vec<f64>> {
    let seq = bessel_i_scaled_seq(Complex64::new(x, 0.0), n_max)?;
    let shift = match equation {
        Equation::Heat => 0.0,
        Equation::Schrodinger => x,
    };
    Ok(seq.iter().map(|v| v.log_mag() + shift).collect())
}

/// `ln` of the two-sided tail bound `2 b_{N+1} / (1 - q)`, `q = b_{N+2}/b_{N+1}`.
fn log_tail(logs: &[f64], n: usize) -> f64 {
    let b1 = logs[n + 1];
    if b1 == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let q = (logs[n + 2] - b1).exp();
    if q >= 1.0 {
        return f64::INFINITY;
    }
    std::f64::consts::LN_2 + b1 - (1.0 - q).ln()
}

/// Smallest spread whose majorant passes `b_N < tol/(4N)`, doubled until
/// the tail certificate holds.
pub fn kernel_spread(equation: Equation, t: f64, h: f64, tail_tol: f64) -> Result<usize> {
    let x = 2.0 * t.abs() / (h * h);
    if x == 0.0 {
        return Ok(0);
    }
    let log_tol = tail_tol.ln();
    let mut n_big = (x + 12.0 * x.cbrt() + 40.0).ceil() as usize;
    let (mut spread, mut logs) = loop {
        let logs = log_majorants(equation, x, n_big)?;
        let hit = (1..=n_big).find(|&n| logs[n] < log_tol - (4.0 * n as f64).ln());
        match hit {
            Some(n) => break (n, logs),
            None => n_big *= 2,
        }
    };
    loop {
        if spread + 2 >= logs.len() {
            logs = log_majorants(equation, x, spread + 2)?;
        }
        if log_tail(&logs, spread) < log_tol {
            return Ok(spread);
        }
        spread *= 2;
        if spread > 1 << 26 {
            return Err(Error::KernelTail { required: spread });
        }
    }
}

/// The evolution kernel for time `t` on mesh `h`.
pub fn kernel(equation: Equation, t: f64, h: f64, tail_tol: f64) -> Result<Kernel> {
    let spread = kernel_spread(equation, t, h, tail_tol)?;
    if spread == 0 {
        return Ok(Kernel {
            values: vec![Complex64::new(1.0, 0.0)],
            tail_l1: 0.0,
        });
    }
    let a = 2.0 * t / (h * h);
    let logs = log_majorants(equation, a.abs(), spread + 2)?;
    let tail_l1 = log_tail(&logs, spread).exp();
    if !(tail_l1 < tail_tol) {
        return Err(Error::KernelTail { required: 2 * spread });
    }
    let values = match equation {
        // e^{-a} I_n(a) is exactly the scaled value
        Equation::Heat => bessel_i_scaled_seq(Complex64::new(a, 0.0), spread)?
            .iter()
            .map(|v| v.to_complex())
            .collect(),
        Equation::Schrodinger => {
            let phase = ComplexScaled::exp(Complex64::new(0.0, -a));
            bessel_i_scaled_seq(Complex64::new(0.0, a), spread)?
                .iter()
                .map(|v| (*v * phase).to_complex())
                .collect()
        }
    };
    Ok(Kernel { values, tail_l1 })
}

/// Fourier multiplier of the flow at frequency `xi`.
pub fn symbol(xi: f64, t: f64, h: f64, equation: Equation) -> Complex64 {
    // cos(xi h) - 1 = -2 sin^2(xi h / 2), free of cancellation near 0
    let s = (0.5 * xi * h).sin();
    let exponent = -4.0 * t * s * s / (h * h);
    match equation {
        Equation::Schrodinger => {
            let (sn, cs) = exponent.sin_cos();
            Complex64::new(cs, sn)
        }
        Equation::Heat => Complex64::new(exponent.exp(), 0.0),
    }
}

/// Frequency of FFT bin `j` on `modes` points, wrapped to `[-pi/h, pi/h)`.
pub fn bin_frequency(j: usize, modes: usize, h: f64) -> f64 {
    let signed = if 2 * j >= modes {
        j as i64 - modes as i64
    } else {
        j as i64
    };
    2.0 * PI * signed as f64 / (modes as f64 * h)
}

pub fn evolve(signal: &LatticeSignal, spec: &EvolutionSpec) -> Result<LatticeSignal> {
    match spec.method {
        Method::Kernel => evolve_kernel(signal, spec),
        Method::Spectral => evolve_spectral(signal, spec),
    }
}

pub fn evolve_kernel(signal: &LatticeSignal, spec: &EvolutionSpec) -> Result<LatticeSignal> {
    spec.validate()?;
    if spec.method != Method::Kernel {
        return domain("evolve_kernel called with a spectral spec");
    }
    let h = signal.h();
    let k = kernel(spec.equation, spec.t, h, spec.tail_tol)?;
    let spread = k.spread() as i64;
    let lo = signal.k_min() - spread;
    let hi = signal.k_max() + spread;
    let input = signal.values();
    let k_min = signal.k_min();
    let out: Vec<Complex64> = (lo..=hi)
        .into_par_iter()
        .map(|j| {
            // only inputs within the spread of j contribute
            let m_lo = (j - spread).max(k_min);
            let m_hi = (j + spread).min(signal.k_max());
            (m_lo..=m_hi)
                .map(|m| input[(m - k_min) as usize] * k.at(j - m))
                .sum()
        })
        .collect();
    LatticeSignal::new(h, lo, out)
}

/// Smallest adequate FFT length for a window of `len` entries.
pub fn required_modes(len: usize, spread: usize) -> usize {
    (2 * (len + spread)).next_power_of_two()
}

pub fn evolve_spectral(signal: &LatticeSignal, spec: &EvolutionSpec) -> Result<LatticeSignal> {
    spec.validate()?;
    if spec.method != Method::Spectral {
        return domain("evolve_spectral called with a kernel spec");
    }
    let h = signal.h();
    let spread = kernel_spread(spec.equation, spec.t, h, spec.tail_tol)?;
    let len = signal.len();
    let required = required_modes(len, spread);
    let modes = match spec.modes {
        Some(m) if m < required => {
            return Err(Error::InsufficientModes {
                requested: m,
                required,
            })
        }
        Some(m) => m,
        None => required,
    };

    let mut buf = vec![Complex64::new(0.0, 0.0); modes];
    buf[spread..spread + len].copy_from_slice(signal.values());
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(modes).process(&mut buf);
    for (j, v) in buf.iter_mut().enumerate() {
        *v *= symbol(bin_frequency(j, modes, h), spec.t, h, spec.equation);
    }
    planner.plan_fft_inverse(modes).process(&mut buf);
    let inv = 1.0 / modes as f64;
    let out: Vec<Complex64> = buf[..len + 2 * spread].iter().map(|v| v * inv).collect();
    LatticeSignal::new(h, signal.k_min() - spread as i64, out)
}
