//! Finitely windowed complex sequences on the mesh `hZ`.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::bessel::{bessel_i_scaled_seq, log_bessel_ratios};
use crate::error::{domain, Error, Result};
use crate::fmt::shortest;
use crate::scaled::ComplexScaled;

/// Relative ℓ¹ mass allowed in the discarded tail of generated data.
pub const DATUM_TAIL_REL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

/// A sequence `f_k`, `k in [k_min, k_min + len)`, zero everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSignal {
    h: f64,
    k_min: i64,
    values: Vec<Complex64>,
}

impl LatticeSignal {
    pub fn new(h: f64, k_min: i64, values: Vec<Complex64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return domain(format!("mesh size must be positive, got {h}"));
        }
        if values.is_empty() {
            return domain("signal window must be nonempty");
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return domain("signal values must be finite");
        }
        Ok(Self { h, k_min, values })
    }

    pub fn zeros(h: f64, k_min: i64, len: usize) -> Result<Self> {
        Self::new(h, k_min, vec![Complex64::new(0.0, 0.0); len])
    }

    /// `value` at index `k`, zero elsewhere.
    pub fn delta(h: f64, k: i64, value: Complex64) -> Result<Self> {
        Self::new(h, k, vec![value])
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, k: i64) -> Complex64 {
        let i = k - self.k_min;
        if i < 0 || i >= self.values.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.k_min + i as i64, *v))
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        norm(self, kind)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn map(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self {
            h: self.h,
            k_min: self.k_min,
            values: self.iter().map(|(k, v)| f(k, v)).collect(),
        }
    }

    /// Restriction to `[lo, hi]`, zero-filled where the window is absent.
    pub fn window(&self, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return domain(format!("empty window [{lo}, {hi}]"));
        }
        Self::new(self.h, lo, (lo..=hi).map(|k| self.get(k)).collect())
    }

    /// `max_k |self_k - other_k|` over the union of both windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.k_min.min(other.k_min);
        let hi = self.k_max().max(other.k_max());
        (lo..=hi)
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    /// `max |self - other| / max(ℓ∞(other), tiny)`.
    pub fn rel_linf_diff(&self, other: &Self) -> f64 {
        let scale = other.norm(NormKind::Linf);
        let d = self.max_abs_diff(other);
        if scale == 0.0 {
            d
        } else {
            d / scale
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# h={} k_min={}", shortest(self.h), self.k_min)?;
        writeln!(w, "k,re,im")?;
        for (k, v) in self.iter() {
            writeln!(w, "{},{},{}", k, shortest(v.re), shortest(v.im))?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = BufReader::new(r);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let (h, k_min) = parse_meta(&first)?;

        let mut rows = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut values = Vec::new();
        let mut expected = k_min;
        for rec in rows.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != 3 {
                return Err(Error::Parse(format!("expected 3 columns, got {}", rec.len())));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{:?}: {e}", &rec[i])))
            };
            let k: i64 = rec[0]
                .parse()
                .map_err(|e| Error::Parse(format!("index {:?}: {e}", &rec[0])))?;
            if k != expected {
                return Err(Error::Parse(format!("expected index {expected}, found {k}")));
            }
            values.push(Complex64::new(num(1)?, num(2)?));
            expected += 1;
        }
        Self::new(h, k_min, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

fn parse_meta(line: &str) -> Result<(f64, i64)> {
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse(format!("missing '# h=.. k_min=..' header, got {line:?}")))?;
    let mut h = None;
    let mut k_min = None;
    for tok in body.split_whitespace() {
        match tok.split_once('=') {
            Some(("h", v)) => h = v.parse::<f64>().ok(),
            Some(("k_min", v)) => k_min = v.parse::<i64>().ok(),
            _ => {}
        }
    }
    match (h, k_min) {
        (Some(h), Some(k)) => Ok((h, k)),
        _ => Err(Error::Parse(format!("bad header {line:?}"))),
    }
}

/// The requested norm over the stored window.
pub fn norm(signal: &LatticeSignal, kind: NormKind) -> f64 {
    let v = &signal.values;
    match kind {
        NormKind::L1 => v.iter().map(|z| z.norm()).sum(),
        NormKind::L2 => {
            // scaled to avoid overflow/underflow in the squares
            let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            m * v.iter().map(|z| (z.norm() / m).powi(2)).sum::<f64>().sqrt()
        }
        NormKind::Linf => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// The decay bound `|f_k| <= c * I_k(alpha/h^2) / I_0(alpha/h^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub alpha: f64,
    pub c: f64,
    pub h: f64,
}

impl Envelope {
    pub fn new(alpha: f64, c: f64, h: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("c", c), ("h", h)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("envelope {name} must be positive, got {v}"));
            }
        }
        Ok(Self { alpha, c, h })
    }

    pub fn argument(&self) -> f64 {
        self.alpha / (self.h * self.h)
    }

    /// `ln(bound_k)` for `k = 0..=n_max`.
    pub fn log_bounds(&self, n_max: usize) -> Result<Vec<f64>> {
        let lc = self.c.ln();
        Ok(log_bessel_ratios(self.argument(), n_max)?
            .into_iter()
            .map(|l| l + lc)
            .collect())
    }

    /// Whether every stored entry obeys the bound (log domain, `1e-12` slack).
    pub fn holds_for(&self, signal: &LatticeSignal) -> Result<bool> {
        let n_max = signal.k_min.unsigned_abs().max(signal.k_max().unsigned_abs()) as usize;
        let lb = self.log_bounds(n_max)?;
        Ok(signal
            .iter()
            .all(|(k, v)| v.norm().ln() <= lb[k.unsigned_abs() as usize] + 1e-12))
    }
}

/// `(±1)^k I_k(u/h^2) / I_0(d/h^2)` for `|k| <= W`.
///
/// With `window = None` the smallest adequate `W` is used. A given window
/// must leave a discarded tail, bounded through `|I_k(u/h^2)| <=
/// I_k(|u|/h^2)`, below [`DATUM_TAIL_REL`] of the kept ℓ¹ mass.
pub fn gen_bessel_datum(
    u: Complex64,
    d: f64,
    h: f64,
    window: Option<usize>,
    sign_alternate: bool,
) -> Result<LatticeSignal> {
    if !(d > 0.0 && d.is_finite()) {
        return domain(format!("denominator argument must be positive, got {d}"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("mesh size must be positive, got {h}"));
    }
    if window == Some(0) {
        return domain("window must be at least 1");
    }
    let inv_h2 = 1.0 / (h * h);
    let z = u * inv_h2;
    let x = z.norm();
    let den = bessel_i_scaled_seq(Complex64::new(d * inv_h2, 0.0), 0)?[0];
    // I_k(z)/I_0(d/h^2) = S_k(z)/S_0 * e^{(Re z - d/h^2)}
    let factor = ComplexScaled::from_log_polar(z.re - d * inv_h2, 0.0) / den;
    let bound_factor = ComplexScaled::from_log_polar(x - d * inv_h2, 0.0) / den;

    let mut n_big = (2.0 * x + 10.0 * x.sqrt() + 40.0).ceil() as usize;
    if let Some(w) = window {
        n_big = n_big.max(w + 2);
    }
    let required = loop {
        let vals = bessel_i_scaled_seq(z, n_big)?;
        let bounds = bessel_i_scaled_seq(Complex64::new(x, 0.0), n_big)?;
        if let Some(w) = minimal_window(&vals, &bounds, factor, bound_factor) {
            break w;
        }
        n_big *= 2;
    };
    let w = match window {
        Some(w) if w < required => {
            return Err(Error::TailTooLarge {
                requested: w,
                required,
            })
        }
        Some(w) => w,
        None => required,
    };
    let vals = bessel_i_scaled_seq(z, w)?;
    let values = (-(w as i64)..=w as i64)
        .map(|k| {
            let v = (vals[k.unsigned_abs() as usize] * factor).to_complex();
            if sign_alternate && k % 2 != 0 {
                -v
            } else {
                v
            }
        })
        .collect();
    LatticeSignal::new(h, -(w as i64), values)
}

/// Natural log below which generated entries are left out: keeps every
/// stored modulus a normal double.
pub const LOG_REPRESENTABLE: f64 = -700.0;

/// Largest `W` at which the majorant `I_W(|u|/h^2)/I_0(d/h^2)` of
/// [`gen_bessel_datum`] is still above `e^{LOG_REPRESENTABLE}`.
///
/// Pointwise envelope checks see only stored entries, and for Bessel data
/// the entries that separate nearby envelopes sit deep in the tail, far
/// past the ℓ¹ window.
pub fn representable_window(u: Complex64, d: f64, h: f64) -> Result<usize> {
    if !(d > 0.0 && d.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return domain(format!("need d, h > 0, got d={d}, h={h}"));
    }
    let inv_h2 = 1.0 / (h * h);
    let x = u.norm() * inv_h2;
    if x == 0.0 {
        return Ok(1);
    }
    let den = bessel_i_scaled_seq(Complex64::new(d * inv_h2, 0.0), 0)?[0].log_mag() + d * inv_h2;
    let mut n_big = (2.0 * x + 10.0 * x.sqrt() + 40.0).ceil() as usize;
    loop {
        let seq = bessel_i_scaled_seq(Complex64::new(x, 0.0), n_big)?;
        if let Some(n) = seq.iter().position(|v| v.log_mag() + x - den < LOG_REPRESENTABLE) {
            return Ok(n.saturating_sub(1).max(1));
        }
        n_big *= 2;
    }
}

/// Smallest `W >= 1` whose two-sided tail bound is below the relative target.
fn minimal_window(
    vals: &[ComplexScaled],
    bounds: &[ComplexScaled],
    factor: ComplexScaled,
    bound_factor: ComplexScaled,
) -> Option<usize> {
    let log_target = DATUM_TAIL_REL.ln();
    let mut kept = (vals[0] * factor).modulus();
    for w in 1..bounds.len() - 2 {
        let mag = (vals[w] * factor).modulus();
        kept = kept + mag + mag;
        let b1 = bounds[w + 1];
        if b1.is_zero() {
            return Some(w);
        }
        let q = (bounds[w + 2] / b1).abs();
        if q >= 1.0 {
            continue;
        }
        // sum_{k>W} b_k <= b_{W+1}/(1-q) since I_{k+1}/I_k decreases in k
        let tail = std::f64::consts::LN_2 + (b1 * bound_factor).log_mag() - (1.0 - q).ln();
        if tail < log_target + kept.log_mag() {
            return Some(w);
        }
    }
    None
}

/// `values[k] = f(k h)` for `|k| <= W`.
pub fn sample_function(
    f: impl Fn(f64) -> Complex64,
    h: f64,
    window: usize,
) -> Result<LatticeSignal> {
    let w = window as i64;
    let values = (-w..=w).map(|k| f(k as f64 * h)).collect();
    LatticeSignal::new(h, -w, values)
}
