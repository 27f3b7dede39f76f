//! Decay envelopes at two times, the `alpha + beta < 2` gate, and the
//! named example data.

use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_i_scaled_seq, log_bessel_ratios};
use crate::error::{domain, Error, Result};
use crate::evolution::{evolve_kernel, Equation, EvolutionSpec};
use crate::fmt::shortest;
use crate::lattice::{
    gen_bessel_datum, representable_window, sample_function, Envelope, LatticeSignal, NormKind,
};

/// `f1` counts as nonzero when its ℓ∞ exceeds this multiple of `ℓ²(f0)`,
/// the round-off level of the time-1 evolution.
pub const NONZERO_THRESHOLD: f64 = 1e-13;
/// Allowed relative ℓ∞ residual between `evolve(f0, 1)` and `f1`.
pub const EVOLUTION_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub floor: f64,
    pub ceiling: f64,
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            floor: 1e-12,
            ceiling: 1e3,
            rel_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit {
    /// Smallest admissible `alpha`, or 0 when the bracket floor already works.
    pub alpha: f64,
    pub at_floor: bool,
    pub floor: f64,
}

impl EnvelopeFit {
    /// An `alpha` that can build an [`Envelope`] (the floor stands in for 0).
    pub fn usable_alpha(&self) -> f64 {
        if self.at_floor {
            self.floor
        } else {
            self.alpha
        }
    }
}

/// `ln|f_k| <= ln c + ln(I_k(x)/I_0(x))` at every stored `k`.
fn bound_holds(logs: &[(usize, f64)], lc: f64, x: f64, n_max: usize) -> Result<bool> {
    let lr = log_bessel_ratios(x, n_max)?;
    Ok(logs.iter().all(|&(n, l)| l <= lc + lr[n] + 1e-12))
}

pub fn envelope_fit(signal: &LatticeSignal, c: f64) -> Result<EnvelopeFit> {
    envelope_fit_with(signal, c, FitOptions::default())
}

/// Log-space bisection for the smallest `alpha` whose envelope bounds `signal`.
pub fn envelope_fit_with(signal: &LatticeSignal, c: f64, opts: FitOptions) -> Result<EnvelopeFit> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("c must be positive, got {c}"));
    }
    if !(opts.floor > 0.0 && opts.floor < opts.ceiling && opts.rel_tol > 0.0) {
        return domain("invalid fit bracket");
    }
    if signal.norm(NormKind::Linf) == 0.0 {
        return domain("cannot fit an envelope to the zero signal");
    }
    let logs: Vec<(usize, f64)> = signal
        .iter()
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(k, v)| (k.unsigned_abs() as usize, v.norm().ln()))
        .collect();
    let n_max = logs.iter().map(|&(n, _)| n).max().unwrap_or(0);
    let lc = c.ln();
    let h2 = signal.h() * signal.h();
    let holds = |alpha: f64| bound_holds(&logs, lc, alpha / h2, n_max);

    if holds(opts.floor)? {
        return Ok(EnvelopeFit {
            alpha: 0.0,
            at_floor: true,
            floor: opts.floor,
        });
    }
    if !holds(opts.ceiling)? {
        return Err(Error::NoEnvelope {
            ceiling: opts.ceiling,
        });
    }
    let (mut lo, mut hi) = (opts.floor.ln(), opts.ceiling.ln());
    while hi - lo > opts.rel_tol * 0.5 {
        let mid = 0.5 * (lo + hi);
        if holds(mid.exp())? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(EnvelopeFit {
        alpha: hi.exp(),
        at_floor: false,
        floor: opts.floor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gate {
    CoveredMustBeZero,
    NotCovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub alpha: f64,
    pub beta: f64,
    pub sum: f64,
    pub gate: Gate,
    pub envelope_ok_t0: bool,
    pub envelope_ok_t1: bool,
    pub signal_nonzero: bool,
    pub consistent: bool,
}

impl GateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `max_k |a_k - b_k| / max(ℓ∞(b), ...)` over the union of both windows.
fn relative_residual(a: &LatticeSignal, b: &LatticeSignal) -> f64 {
    let scale = b.norm(NormKind::Linf).max(a.norm(NormKind::Linf));
    if scale == 0.0 {
        return 0.0;
    }
    a.max_abs_diff(b) / scale
}

/// Checks the two-time decay hypotheses on `(f0, f1)`.
pub fn hardy_gate(
    f0: &LatticeSignal,
    f1: &LatticeSignal,
    alpha: f64,
    beta: f64,
    c: f64,
    equation: Equation,
) -> Result<GateReport> {
    if f0.h() != f1.h() {
        return domain(format!("mesh sizes differ: {} vs {}", f0.h(), f1.h()));
    }
    let h = f0.h();
    let evolved = evolve_kernel(f0, &EvolutionSpec::kernel(equation, 1.0))?;
    let residual = relative_residual(&evolved, f1);
    if !(residual <= EVOLUTION_REL_TOL) {
        return Err(Error::EvolutionMismatch { residual });
    }
    let envelope_ok_t0 = Envelope::new(alpha, c, h)?.holds_for(f0)?;
    let envelope_ok_t1 = Envelope::new(beta, c, h)?.holds_for(f1)?;
    let signal_nonzero = f1.norm(NormKind::Linf) > NONZERO_THRESHOLD * f0.norm(NormKind::L2);
    let sum = alpha + beta;
    let gate = if sum < 2.0 {
        Gate::CoveredMustBeZero
    } else {
        Gate::NotCovered
    };
    let consistent =
        !(gate == Gate::CoveredMustBeZero && envelope_ok_t0 && envelope_ok_t1 && signal_nonzero);
    Ok(GateReport {
        alpha,
        beta,
        sum,
        gate,
        envelope_ok_t0,
        envelope_ok_t1,
        signal_nonzero,
        consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleName {
    /// `f0 = I_k(i/2h^2)/I_0(5/2h^2)`.
    SchrodingerA,
    /// `f0 = (-1)^k I_k(1/h^2)/I_0(1/h^2)`.
    SchrodingerB,
    /// `f0 = I_k(-i/h^2)/I_0(1/h^2)`.
    SharpSchrodinger,
    /// Samples of `e^{-x^2/2 eps}`.
    HeatSharp { eps: f64 },
}

impl ExampleName {
    pub fn equation(&self) -> Equation {
        match self {
            Self::HeatSharp { .. } => Equation::Heat,
            _ => Equation::Schrodinger,
        }
    }

    /// The Schrödinger examples, whose time-1 closed forms are exact.
    pub fn schrodinger() -> [Self; 3] {
        [Self::SchrodingerA, Self::SchrodingerB, Self::SharpSchrodinger]
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schrodinger_a" => return Ok(Self::SchrodingerA),
            "schrodinger_b" => return Ok(Self::SchrodingerB),
            "sharp_schrodinger" => return Ok(Self::SharpSchrodinger),
            _ => {}
        }
        let eps = s
            .strip_prefix("heat_sharp(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("heat_sharp:"))
            .ok_or_else(|| Error::Domain(format!("unknown example {s:?}")))?;
        let eps: f64 = eps
            .parse()
            .map_err(|_| Error::Domain(format!("bad epsilon in {s:?}")))?;
        if !(eps > 0.0 && eps.is_finite()) {
            return domain(format!("epsilon must be positive, got {eps}"));
        }
        Ok(Self::HeatSharp { eps })
    }
}

/// Initial datum, time-1 signal, and the equation that links them.
#[derive(Debug, Clone)]
pub struct ExamplePair {
    pub f0: LatticeSignal,
    pub f1: LatticeSignal,
    pub equation: Equation,
}

fn rotate(signal: LatticeSignal, angle: f64) -> LatticeSignal {
    let p = Complex64::from_polar(1.0, angle);
    signal.map(|_, v| v * p)
}

/// Half-width in `x` beyond which `e^{-x^2/w}` is below `e^{-40}`.
fn gaussian_reach(w: f64) -> f64 {
    (40.0 * w).sqrt()
}

/// Bessel datum kept out to the underflow horizon, so envelope fits and
/// checks see the far tail where nearby envelopes separate.
fn full_datum(u: Complex64, d: f64, h: f64, alternate: bool) -> Result<LatticeSignal> {
    match gen_bessel_datum(u, d, h, Some(representable_window(u, d, h)?), alternate) {
        Err(Error::TailTooLarge { required, .. }) => gen_bessel_datum(u, d, h, Some(required), alternate),
        other => other,
    }
}

/// `f1` is the exact time-1 discrete evolution for the Schrödinger
/// examples and the continuum solution on the mesh for `HeatSharp`.
pub fn make_example(name: ExampleName, h: f64) -> Result<ExamplePair> {
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("mesh size must be positive, got {h}"));
    }
    let i = Complex64::i();
    let phase = -2.0 / (h * h);
    let (f0, f1) = match name {
        ExampleName::SchrodingerA => (
            full_datum(0.5 * i, 2.5, h, false)?,
            rotate(full_datum(2.5 * i, 2.5, h, false)?, phase),
        ),
        ExampleName::SchrodingerB => (
            full_datum(Complex64::new(1.0, 0.0), 1.0, h, true)?,
            rotate(full_datum(Complex64::new(-1.0, 2.0), 1.0, h, false)?, phase),
        ),
        ExampleName::SharpSchrodinger => (
            full_datum(-i, 1.0, h, false)?,
            rotate(full_datum(i, 1.0, h, false)?, phase),
        ),
        ExampleName::HeatSharp { eps } => {
            let w = (gaussian_reach(4.0 + 2.0 * eps) / h).ceil() as usize;
            let amp = 1.0 / (2.0 / eps + 1.0).sqrt();
            (
                sample_function(|x| Complex64::new((-x * x / (2.0 * eps)).exp(), 0.0), h, w)?,
                sample_function(
                    |x| Complex64::new(amp * (-x * x / (4.0 + 2.0 * eps)).exp(), 0.0),
                    h,
                    w,
                )?,
            )
        }
    };
    if f0.norm(NormKind::Linf) == 0.0 || f1.norm(NormKind::Linf) == 0.0 {
        return Err(Error::Range {
            what: "example values underflow double precision at this mesh size".into(),
            bound: h,
        });
    }
    Ok(ExamplePair {
        f0,
        f1,
        equation: name.equation(),
    })
}

/// Evolves `v` by the heat flow and checks `ℓ∞` stays within `mu_bound`.
pub fn small_datum_persistence(v: &LatticeSignal, mu_bound: f64, t: f64) -> Result<bool> {
    if !(mu_bound > 0.0) || !(t > 0.0) {
        return domain(format!("need mu_bound > 0 and t > 0, got {mu_bound}, {t}"));
    }
    let linf = v.norm(NormKind::Linf);
    if linf > mu_bound {
        return domain(format!("datum ℓ∞ {linf} exceeds the bound {mu_bound}"));
    }
    let out = evolve_kernel(v, &EvolutionSpec::kernel(Equation::Heat, t))?;
    Ok(out.norm(NormKind::Linf) <= mu_bound * (1.0 + 1e-10))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub k: i64,
    pub value: f64,
    pub even: bool,
}

/// `(-1)^k I_k(1/h^2)/I_0(1/h^2)` for `|k| <= k_max`.
pub fn figure1_data(h: f64, k_max: usize) -> Result<Vec<Fig1Row>> {
    let f = gen_bessel_datum(Complex64::new(1.0, 0.0), 1.0, h, Some(k_max.max(1)), true);
    let f = match f {
        Ok(f) => f,
        // the window is only for display; a short one is fine
        Err(Error::TailTooLarge { required, .. }) => {
            gen_bessel_datum(Complex64::new(1.0, 0.0), 1.0, h, Some(required), true)?
        }
        Err(e) => return Err(e),
    };
    let km = k_max as i64;
    Ok((-km..=km)
        .map(|k| Fig1Row {
            k,
            value: f.get(k).re,
            even: k % 2 == 0,
        })
        .collect())
}

/// Largest deviation of the even entries from `e^{-(kh)^2/2}` and the odd
/// ones from its negative.
pub fn figure1_max_deviation(rows: &[Fig1Row], h: f64) -> f64 {
    rows.iter()
        .map(|r| {
            let x = r.k as f64 * h;
            let g = (-0.5 * x * x).exp();
            let target = if r.even { g } else { -g };
            (r.value - target).abs()
        })
        .fold(0.0, f64::max)
}

pub fn write_fig1_csv<W: Write>(rows: &[Fig1Row], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let e = |e: csv::Error| Error::Parse(e.to_string());
    out.write_record(["k", "value", "parity"]).map_err(e)?;
    for r in rows {
        let parity = if r.even { "even" } else { "odd" };
        out.write_record([r.k.to_string(), shortest(r.value), parity.to_string()])
            .map_err(e)?;
    }
    out.flush()?;
    Ok(())
}

/// Envelope prefactor of the time-1 comparison in `fig2.csv`.
pub fn figure2_prefactor() -> f64 {
    5f64.powf(-0.25)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub k: i64,
    pub abs_g1: f64,
    pub bound_beta5: f64,
    pub bound_beta4_9: f64,
}

/// `|g_k(1)| = |I_k((2i-1)/h^2)| / I_0(1/h^2)` against the envelopes with
/// `beta = 5` and `beta = 4.9`, for `k` in `[k_lo, k_hi]`.
pub fn figure2_data(h: f64, k_lo: usize, k_hi: usize) -> Result<Vec<Fig2Row>> {
    if k_lo > k_hi {
        return domain("empty index range");
    }
    let inv_h2 = 1.0 / (h * h);
    let z = Complex64::new(-1.0, 2.0) * inv_h2;
    let num = bessel_i_scaled_seq(z, k_hi)?;
    let den = bessel_i_scaled_seq(Complex64::new(inv_h2, 0.0), 0)?[0];
    // e^{Re z} / (S_0(1/h^2) e^{1/h^2})
    let log_factor = z.re - inv_h2 - den.log_mag();
    let lc = figure2_prefactor().ln();
    let b5 = log_bessel_ratios(5.0 * inv_h2, k_hi)?;
    let b49 = log_bessel_ratios(4.9 * inv_h2, k_hi)?;
    Ok((k_lo..=k_hi)
        .map(|n| Fig2Row {
            k: n as i64,
            abs_g1: (num[n].log_mag() + log_factor).exp(),
            bound_beta5: (lc + b5[n]).exp(),
            bound_beta4_9: (lc + b49[n]).exp(),
        })
        .collect())
}

/// Log-domain check of the `fig2.csv` rows: `(beta=5 holds everywhere,
/// beta=4.9 fails somewhere)`.
pub fn figure2_verdict(h: f64, k_lo: usize, k_hi: usize) -> Result<(bool, bool)> {
    let inv_h2 = 1.0 / (h * h);
    let z = Complex64::new(-1.0, 2.0) * inv_h2;
    let num = bessel_i_scaled_seq(z, k_hi)?;
    let den = bessel_i_scaled_seq(Complex64::new(inv_h2, 0.0), 0)?[0];
    let log_factor = z.re - inv_h2 - den.log_mag();
    let lc = figure2_prefactor().ln();
    let b5 = log_bessel_ratios(5.0 * inv_h2, k_hi)?;
    let b49 = log_bessel_ratios(4.9 * inv_h2, k_hi)?;
    let lhs = |n: usize| num[n].log_mag() + log_factor;
    let holds5 = (k_lo..=k_hi).all(|n| lhs(n) <= lc + b5[n]);
    let fails49 = (k_lo..=k_hi).any(|n| lhs(n) > lc + b49[n]);
    Ok((holds5, fails49))
}

pub fn write_fig2_csv<W: Write>(rows: &[Fig2Row], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let e = |e: csv::Error| Error::Parse(e.to_string());
    out.write_record(["k", "abs_g1", "bound_beta5", "bound_beta4_9"])
        .map_err(e)?;
    for r in rows {
        out.write_record([
            r.k.to_string(),
            shortest(r.abs_g1),
            shortest(r.bound_beta5),
            shortest(r.bound_beta4_9),
        ])
        .map_err(e)?;
    }
    out.flush()?;
    Ok(())
}
