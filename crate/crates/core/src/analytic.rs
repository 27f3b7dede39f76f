//! Entire extension of the periodic function whose Fourier coefficients are
//! a lattice signal, line-decay checks, and the `(r, s)` case analysis.
//!
//! The extension is `f_h(z) = h/sqrt(2 pi) * sum_k f_k e^{ihkz}`. Entries
//! outside the stored window are assumed to obey an [`Envelope`]; that
//! majorant certifies the truncation error.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_i_scaled_seq;
use crate::error::{domain, Error, Result};
use crate::fmt::shortest;
use crate::hardy::envelope_fit;
use crate::lattice::{Envelope, LatticeSignal, NormKind};
use crate::scaled::ComplexScaled;

/// Truncation tail allowed relative to the partial sum.
pub const EXTEND_TAIL_REL: f64 = 1e-10;
/// Band around `rs = 1` treated as the equality case.
pub const DEFAULT_EXPLICIT_TOL: f64 = 1e-9;

fn log_norm_factor(h: f64) -> f64 {
    h.ln() - 0.5 * TAU.ln()
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// A value of the extension together with its error diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct Extended {
    pub value: ComplexScaled,
    /// `ln` of the certified bound on the discarded terms.
    pub log_tail: f64,
    /// `ln sum |terms|`; far above `ln |value|` means heavy cancellation.
    pub log_abs_sum: f64,
}

impl Extended {
    /// Tail bound relative to `|value|`.
    pub fn relative_tail(&self) -> f64 {
        (self.log_tail - self.value.log_mag()).exp()
    }

    /// Decimal digits lost to cancellation in the partial sum.
    pub fn digits_lost(&self) -> f64 {
        if self.value.is_zero() {
            return if self.log_abs_sum == f64::NEG_INFINITY { 0.0 } else { f64::INFINITY };
        }
        ((self.log_abs_sum - self.value.log_mag()) / std::f64::consts::LN_10).max(0.0)
    }
}

/// A signal prepared for repeated evaluation of its extension.
#[derive(Debug, Clone)]
pub struct Extension {
    signal: LatticeSignal,
    envelope: Option<Envelope>,
}

impl Extension {
    /// Uses `envelope` for the tail, or fits one with `c = ℓ∞(signal)`.
    pub fn new(signal: LatticeSignal, envelope: Option<Envelope>) -> Result<Self> {
        let linf = signal.norm(NormKind::Linf);
        if linf == 0.0 {
            return Ok(Self { signal, envelope: None });
        }
        let envelope = match envelope {
            Some(e) => {
                if e.h != signal.h() {
                    return domain("envelope and signal use different mesh sizes");
                }
                e
            }
            None => {
                let fit = envelope_fit(&signal, linf)
                    .map_err(|e| Error::TailCertificate(format!("no envelope fits the signal: {e}")))?;
                Envelope::new(fit.usable_alpha(), linf, signal.h())?
            }
        };
        Ok(Self {
            signal,
            envelope: Some(envelope),
        })
    }

    pub fn signal(&self) -> &LatticeSignal {
        &self.signal
    }

    pub fn envelope(&self) -> Option<&Envelope> {
        self.envelope.as_ref()
    }

    /// Partial sum without the tail certificate.
    pub fn partial_sum(&self, z: Complex64) -> (ComplexScaled, f64) {
        let h = self.signal.h();
        let mut sum = ComplexScaled::ZERO;
        let mut log_abs = f64::NEG_INFINITY;
        for (k, v) in self.signal.iter() {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let kh = k as f64 * h;
            let term = ComplexScaled::from_complex(v) * ComplexScaled::exp(Complex64::new(-kh * z.im, kh * z.re));
            log_abs = log_add(log_abs, term.log_mag());
            sum = sum + term;
        }
        let lf = log_norm_factor(h);
        let value = sum * ComplexScaled::from_log_polar(lf, 0.0);
        (value, log_abs + lf)
    }

    /// `ln` of the bound on `sum` over indices outside the window.
    pub fn log_tail(&self, y: f64) -> Result<f64> {
        let Some(env) = self.envelope else {
            return Ok(f64::NEG_INFINITY);
        };
        let hy = self.signal.h() * y;
        let right = one_sided_tail(&env, self.signal.k_max() + 1, -hy)?;
        let left = one_sided_tail(&env, 1 - self.signal.k_min(), hy)?;
        Ok(log_add(right, left) + log_norm_factor(self.signal.h()))
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Extended> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return domain(format!("evaluation point must be finite, got {z}"));
        }
        let (value, log_abs_sum) = self.partial_sum(z);
        let log_tail = self.log_tail(z.im)?;
        if log_tail > EXTEND_TAIL_REL.ln() + value.log_mag() {
            return Err(Error::TailCertificate(format!(
                "tail bound {:e} exceeds {EXTEND_TAIL_REL:e} of the partial sum at z = {z}",
                (log_tail - value.log_mag()).exp()
            )));
        }
        Ok(Extended {
            value,
            log_tail,
            log_abs_sum,
        })
    }
}

/// `ln sum_{j >= start} B(|j|) e^{slope j}` for the envelope majorant `B`.
fn one_sided_tail(env: &Envelope, start: i64, slope: f64) -> Result<f64> {
    let mut n_max = (env.argument() * 2.0 + 64.0) as usize + start.unsigned_abs() as usize;
    let mut lb = env.log_bounds(n_max)?;
    let mut acc = f64::NEG_INFINITY;
    let mut j = start;
    loop {
        let n = j.unsigned_abs() as usize;
        if n + 1 > n_max {
            n_max *= 2;
            if n_max > 1 << 24 {
                return Err(Error::TailCertificate(
                    "envelope tail does not become geometric".into(),
                ));
            }
            lb = env.log_bounds(n_max)?;
        }
        let term = lb[n] + slope * j as f64;
        if term == f64::NEG_INFINITY && j >= 0 {
            return Ok(acc);
        }
        acc = log_add(acc, term);
        if j >= 0 {
            // I_{n+1}/I_n decreases in n, so later ratios are smaller still
            let log_q = lb[n + 1] - lb[n] + slope;
            if log_q < -std::f64::consts::LN_2 {
                let rest = lb[n + 1] + slope * (j + 1) as f64 - (1.0 - log_q.exp()).ln();
                return Ok(log_add(acc, rest));
            }
        }
        j += 1;
    }
}

/// The truncated extension at `z` with its tail certificate.
pub fn extend_evaluate(
    signal: &LatticeSignal,
    z: Complex64,
    envelope: Option<&Envelope>,
) -> Result<Extended> {
    Extension::new(signal.clone(), envelope.copied())?.evaluate(z)
}

/// `c * e^{(u/h^2) cos(zh - b)}`.
pub fn explicit_form(
    u: Complex64,
    b: f64,
    h: f64,
    c: f64,
) -> impl Fn(Complex64) -> Result<ComplexScaled> + Sync {
    let lc = c.ln();
    let inv_h2 = 1.0 / (h * h);
    move |z: Complex64| {
        let w = u * inv_h2 * (z * h - b).cos();
        Ok(ComplexScaled::exp(w + lc))
    }
}

/// Parameters of the four-line hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBoundSpec {
    pub r: f64,
    pub theta: f64,
    pub b: f64,
    pub delta: f64,
    pub s: f64,
}

impl LineBoundSpec {
    pub fn new(r: f64, theta: f64, b: f64, delta: f64, s: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) || !(s > 0.0 && s.is_finite()) {
            return domain(format!("r and s must be positive, got r={r}, s={s}"));
        }
        if !theta.is_finite() {
            return domain("theta must be finite");
        }
        if !(0.0..TAU).contains(&b) {
            return domain(format!("b must lie in [0, 2pi), got {b}"));
        }
        if !(delta > 0.0 && delta < FRAC_PI_2) {
            return domain(format!("delta must lie in (0, pi/2), got {delta}"));
        }
        Ok(Self { r, theta, b, delta, s })
    }

    /// Schrödinger lines: `b = 0`, `theta = pi/2`.
    pub fn cor41(r: f64, delta: f64, s: f64) -> Result<Self> {
        Self::new(r, FRAC_PI_2, 0.0, delta, s)
    }

    /// Heat lines: `b = 0`, `theta = 0`.
    pub fn cor42(r: f64, delta: f64, s: f64) -> Result<Self> {
        Self::new(r, 0.0, 0.0, delta, s)
    }

    pub fn u(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// `(phase offset, sign of y)` of the four lines; the line sits at
    /// `Re z = (b + offset)/h`.
    pub fn lines(&self) -> [(f64, f64); 4] {
        let (t, d) = (self.theta, self.delta);
        [
            (-t + FRAC_PI_2 + d, -1.0),
            (-t - FRAC_PI_2 - d, -1.0),
            (t + FRAC_PI_2 + d, 1.0),
            (t - FRAC_PI_2 - d, 1.0),
        ]
    }

    /// `ln` of the bound `c e^{...}` on line `id` (0-based) at height `y`.
    pub fn log_bound(&self, id: usize, y: f64, h: f64, c: f64) -> f64 {
        let (off, _) = self.lines()[id];
        let w = self.u() / (h * h) * Complex64::new(off, y * h).cos();
        c.ln() + w.re
    }

    pub fn product(&self) -> f64 {
        self.r * self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginRow {
    pub line_id: usize,
    pub y: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    pub rows: Vec<MarginRow>,
}

impl MarginReport {
    /// Largest `log|f| - log(bound)`; positive means a violated sample.
    pub fn max_margin(&self) -> f64 {
        self.rows.iter().map(|r| r.margin).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_margin() <= tol
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["line_id", "y", "log_lhs", "log_rhs", "margin"])
            .map_err(csv_err)?;
        for r in &self.rows {
            out.write_record([
                r.line_id.to_string(),
                shortest(r.y),
                shortest(r.log_lhs),
                shortest(r.log_rhs),
                shortest(r.margin),
            ])
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// `41` heights `|y|` with `|y| h` evenly spaced over `[0, 6]`.
pub fn default_y_grid(h: f64) -> Vec<f64> {
    (0..=40).map(|j| j as f64 * 0.15 / h).collect()
}

/// Samples the four lines at heights `±|y|` (sign fixed per line).
pub fn check_theorem21_lines<F>(
    evaluator: F,
    spec: &LineBoundSpec,
    h: f64,
    y_grid: &[f64],
    c: f64,
) -> Result<MarginReport>
where
    F: Fn(Complex64) -> Result<ComplexScaled> + Sync,
{
    if !(h > 0.0 && h.is_finite()) || !(c > 0.0 && c.is_finite()) {
        return domain(format!("h and c must be positive, got h={h}, c={c}"));
    }
    if y_grid.iter().any(|y| !y.is_finite()) {
        return domain("y grid must be finite");
    }
    let mut rows = Vec::with_capacity(4 * y_grid.len());
    for (id, (off, sign)) in spec.lines().into_iter().enumerate() {
        let x = (spec.b + off) / h;
        let line: Vec<MarginRow> = y_grid
            .par_iter()
            .map(|&ay| {
                let y = sign * ay.abs();
                let log_lhs = evaluator(Complex64::new(x, y))?.log_mag();
                let log_rhs = spec.log_bound(id, y, h, c);
                Ok(MarginRow {
                    line_id: id + 1,
                    y,
                    log_lhs,
                    log_rhs,
                    margin: log_lhs - log_rhs,
                })
            })
            .collect::<Result<_>>()?;
        rows.extend(line);
    }
    Ok(MarginReport { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    Inconclusive,
    ExplicitForm,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub case: Case,
    pub product: f64,
}

pub fn trichotomy(r: f64, s: f64, tol: f64) -> Result<Verdict> {
    if !(r > 0.0 && s > 0.0) {
        return domain(format!("r and s must be positive, got r={r}, s={s}"));
    }
    if !(tol > 0.0 && tol < 0.1) {
        return domain(format!("tolerance must lie in (0, 0.1), got {tol}"));
    }
    let product = r * s;
    let case = if (product - 1.0).abs() <= tol {
        Case::ExplicitForm
    } else if product < 1.0 {
        Case::Inconclusive
    } else {
        Case::Zero
    };
    Ok(Verdict { case, product })
}

/// `(r + 2t, s/(1 + 2ts))`: the parameters after heat flow for time `t`.
pub fn heat_parameter_flow(r: f64, s: f64, t: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && s > 0.0 && t >= 0.0) || !(r.is_finite() && s.is_finite() && t.is_finite()) {
        return domain(format!("need r, s > 0 and t >= 0, got r={r}, s={s}, t={t}"));
    }
    Ok((r + 2.0 * t, s / (1.0 + 2.0 * t * s)))
}

/// `a (cos(pi/2 + delta) - 1)/cos(pi/2 + delta) = a (1 + sin delta)/sin delta`.
///
/// Infinite when `sin delta` underflows.
pub fn appendix_onset_threshold(a: f64, delta: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("a must be positive, got {a}"));
    }
    if !(delta > 0.0 && delta < FRAC_PI_2) {
        return domain(format!("delta must lie in (0, pi/2), got {delta}"));
    }
    let s = delta.sin();
    if s == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(a * (1.0 + s) / s)
}

/// Coefficients `(a e^{-ib})^k I_k(u/(a h^2))` for `|k| <= W`.
///
/// With `window = None`, `W` is the smallest window whose discarded tail is
/// below `1e-16` of the kept ℓ¹ mass; evaluating far off the real axis
/// needs a wider one.
pub fn appendix_example2(
    u: Complex64,
    a: f64,
    b: f64,
    h: f64,
    window: Option<usize>,
) -> Result<LatticeSignal> {
    if !(a > 0.0 && a.is_finite()) || !(h > 0.0 && h.is_finite()) || !b.is_finite() {
        return domain(format!("need a, h > 0 and finite b, got a={a}, h={h}, b={b}"));
    }
    let w = u / (a * h * h);
    let x = w.norm();
    let la = a.ln();
    let mut n_big = (2.0 * x * a.max(1.0) + 10.0 * x.sqrt() + 40.0).ceil() as usize;
    let (seq, width) = loop {
        // majorant a^n I_n(|w|) in log form, shifted by Re w so it matches seq
        let bounds = bessel_i_scaled_seq(Complex64::new(x, 0.0), n_big)?;
        let lb: Vec<f64> = bounds
            .iter()
            .enumerate()
            .map(|(n, v)| v.log_mag() + x + n as f64 * la)
            .collect();
        let mut kept = lb[0];
        let mut found = None;
        for n in 1..n_big - 1 {
            kept = log_add(kept, lb[n] + std::f64::consts::LN_2);
            let log_q = lb[n + 2] - lb[n + 1];
            if log_q < -std::f64::consts::LN_2 {
                let tail = std::f64::consts::LN_2 + lb[n + 1] - (1.0 - log_q.exp()).ln();
                if tail < kept + (1e-16f64).ln() || lb[n + 1] == f64::NEG_INFINITY {
                    found = Some(n);
                    break;
                }
            }
        }
        if let Some(n) = found {
            let n = match window {
                Some(wd) if wd < n => {
                    return Err(Error::TailTooLarge {
                        requested: wd,
                        required: n,
                    })
                }
                Some(wd) => wd,
                None => n,
            };
            break (bessel_i_scaled_seq(w, n)?, n);
        }
        n_big *= 2;
    };
    let wi = width as i64;
    let shift = ComplexScaled::from_log_polar(w.re, 0.0);
    let values = (-wi..=wi)
        .map(|k| {
            let n = k.unsigned_abs() as usize;
            let coeff = ComplexScaled::from_log_polar(k as f64 * la, -(k as f64) * b);
            (seq[n] * shift * coeff).to_complex()
        })
        .collect();
    LatticeSignal::new(h, -wi, values)
}

/// Majorant of [`appendix_example2`] for `a >= 1`: `a^n I_n(x) <= I_n(a x)`
/// gives `|f_k| <= I_0(|u|/h^2) * I_k(|u|/h^2)/I_0(|u|/h^2)`.
pub fn appendix_example2_envelope(u: Complex64, a: f64, h: f64) -> Result<Envelope> {
    if !(a >= 1.0) {
        return domain(format!("the majorant needs a >= 1, got {a}"));
    }
    let x = u.norm() / (h * h);
    let i0 = bessel_i_scaled_seq(Complex64::new(x, 0.0), 0)?[0].log_mag() + x;
    Envelope::new(u.norm(), i0.exp(), h)
}

/// The extension of [`appendix_example2`]:
/// `h/sqrt(2 pi) * exp((u/2h^2)(e^{i(zh-b)} + e^{-i(zh-b)}/a^2))`.
pub fn appendix_example2_closed(u: Complex64, a: f64, b: f64, h: f64, z: Complex64) -> ComplexScaled {
    let phi = z * h - b;
    let i = Complex64::i();
    let w = u / (2.0 * h * h) * ((i * phi).exp() + (-i * phi).exp() / (a * a));
    ComplexScaled::exp(w + log_norm_factor(h))
}

/// Periodicity shift `2 pi / h`.
pub fn period(h: f64) -> f64 {
    2.0 * PI / h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_i;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bessel_signal(u: Complex64, h: f64, w: i64) -> LatticeSignal {
        let z = u / (h * h);
        let values = (-w..=w).map(|k| bessel_i(k, z).unwrap().to_complex()).collect();
        LatticeSignal::new(h, -w, values).unwrap()
    }

    #[test]
    fn delta_extends_to_constant() {
        let h = 0.25;
        let d = LatticeSignal::delta(h, 0, c(TAU.sqrt() / h, 0.0)).unwrap();
        for z in [c(0.0, 0.0), c(1.3, -2.0), c(-7.0, 4.5)] {
            let v = extend_evaluate(&d, z, None).unwrap();
            assert!((v.value.to_complex() - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn bessel_coefficients_give_exponential_of_cosine() {
        let h = 0.5;
        let u = c(0.3, 0.4);
        let f = bessel_signal(u, h, 40);
        let closed = explicit_form(u, 0.0, h, h / TAU.sqrt());
        for x in [0.0, 0.7, -2.1, 5.0] {
            let got = extend_evaluate(&f, c(x, 0.0), None).unwrap();
            let want = closed(c(x, 0.0)).unwrap().to_complex();
            assert!((got.value.to_complex() - want).norm() < 1e-13 * want.norm(), "{x}");
            assert!(got.relative_tail() < EXTEND_TAIL_REL);
        }
    }

    #[test]
    fn periodic_in_real_direction() {
        let h = 0.5;
        let f = bessel_signal(c(1.0, 0.0), h, 40);
        let ext = Extension::new(f, None).unwrap();
        let z = c(0.4, -0.3);
        let a = ext.evaluate(z).unwrap().value.to_complex();
        let b = ext.evaluate(z + period(h)).unwrap().value.to_complex();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn tail_certificate_fails_with_loose_envelope() {
        let h = 0.5;
        let f = bessel_signal(c(1.0, 0.0), h, 3);
        let env = Envelope::new(1.0, 1e3, h).unwrap();
        assert!(matches!(
            extend_evaluate(&f, c(0.0, 0.0), Some(&env)),
            Err(Error::TailCertificate(_))
        ));
    }

    #[test]
    fn explicit_form_meets_its_own_bound() {
        let h = 0.5;
        let spec = LineBoundSpec::new(1.0, 0.4, 1.0, 0.3, 1.0).unwrap();
        let ev = explicit_form(spec.u(), spec.b, h, 2.0);
        let rep = check_theorem21_lines(&ev, &spec, h, &default_y_grid(h), 2.0).unwrap();
        assert_eq!(rep.rows.len(), 4 * 41);
        assert!(rep.max_margin().abs() < 1e-9, "{}", rep.max_margin());
    }

    #[test]
    fn line_presets_match_closed_bounds() {
        let (r, d, h, y) = (1.5, 0.7, 0.5, 0.8);
        let s41 = LineBoundSpec::cor41(r, d, 1.0).unwrap();
        // sign-adjusted: y <= 0 lines get e^{(r/h^2) sin(d) sinh(yh)}
        let expect = r / (h * h) * d.sin() * (-y * h).sinh();
        assert!((s41.log_bound(0, -y, h, 1.0) - expect).abs() < 1e-12);
        assert!((s41.log_bound(1, -y, h, 1.0) - expect).abs() < 1e-12);
        let expect_up = -r / (h * h) * d.sin() * (y * h).sinh();
        assert!((s41.log_bound(2, y, h, 1.0) - expect_up).abs() < 1e-12);
        assert!((s41.log_bound(3, y, h, 1.0) - expect_up).abs() < 1e-12);
        let s42 = LineBoundSpec::cor42(r, d, 1.0).unwrap();
        let heat = -r / (h * h) * d.sin() * (y * h).cosh();
        for id in 0..4 {
            let yy = if id < 2 { -y } else { y };
            assert!((s42.log_bound(id, yy, h, 1.0) - heat).abs() < 1e-12, "{id}");
        }
    }

    #[test]
    fn line_spec_validation() {
        assert!(LineBoundSpec::new(1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(LineBoundSpec::new(1.0, 0.0, 0.0, FRAC_PI_2, 1.0).is_err());
        assert!(LineBoundSpec::new(1.0, 0.0, TAU, 0.5, 1.0).is_err());
        assert!(LineBoundSpec::new(0.0, 0.0, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn trichotomy_cases() {
        let t = DEFAULT_EXPLICIT_TOL;
        assert_eq!(trichotomy(1.0, 1.0, t).unwrap().case, Case::ExplicitForm);
        assert_eq!(trichotomy(2.0, 1.0, t).unwrap().case, Case::Zero);
        assert_eq!(trichotomy(0.5, 1.0, t).unwrap().case, Case::Inconclusive);
        assert!(trichotomy(1.0, 1.0, 0.2).is_err());
    }

    #[test]
    fn parameter_flow() {
        assert_eq!(heat_parameter_flow(0.7, 1.1, 0.0).unwrap(), (0.7, 1.1));
        let (r, s) = heat_parameter_flow(0.5, 1.0, 1.0).unwrap();
        assert_eq!((r, s), (2.5, 1.0 / 3.0));
        assert!((r * s - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn onset_threshold() {
        let v = appendix_onset_threshold(1.0, PI / 3.0).unwrap();
        assert!((v - (1.0 + 2.0 / 3f64.sqrt())).abs() < 1e-14);
        let near = appendix_onset_threshold(1.5, FRAC_PI_2 - 1e-9).unwrap();
        assert!((near - 3.0).abs() < 1e-9);
        assert!(appendix_onset_threshold(1.0, 1e-300).unwrap() > 1e299);
        assert!(appendix_onset_threshold(1.0, 0.0).is_err());
        assert!(appendix_onset_threshold(1.0, FRAC_PI_2).is_err());
    }

    #[test]
    fn example2_series_matches_closed_form() {
        let (u, a, b, h) = (c(0.6, 0.8), 2.0, 0.5, 1.0);
        let f = appendix_example2(u, a, b, h, Some(40)).unwrap();
        assert!(appendix_example2(u, a, b, h, Some(2)).is_err());
        let env = appendix_example2_envelope(u, a, h).unwrap();
        assert!(env.holds_for(&f).unwrap());
        let ext = Extension::new(f, Some(env)).unwrap();
        for z in [c(0.0, 0.0), c(1.0, 0.5), c(-2.0, -0.7), c(3.0, 1.2)] {
            let got = ext.evaluate(z).unwrap().value.to_complex();
            let want = appendix_example2_closed(u, a, b, h, z).to_complex();
            assert!((got - want).norm() < 1e-12 * want.norm(), "{z}");
        }
    }
}
