//! Gaussian solutions of `u_t = i u_xx` and `u_t = u_xx`, and the measured
//! convergence of the lattice flows to them as `h -> 0`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::evolution::{evolve_kernel, Equation, EvolutionSpec};
use crate::fmt::shortest;
use crate::lattice::{sample_function, LatticeSignal, NormKind};

/// `(eps/(eps + 2it))^{1/2} e^{-x^2/(2(eps + 2it))}`, principal root.
///
/// `Re(eps + 2it) > 0`, so the principal branch is continuous in `t`.
pub fn schrodinger_gaussian(x: f64, t: f64, eps: f64) -> Complex64 {
    let w = Complex64::new(eps, 2.0 * t);
    (Complex64::new(eps, 0.0) / w).sqrt() * (-(x * x) / (2.0 * w)).exp()
}

/// `e^{-x^2/(4t + 2 eps)} / sqrt(2t/eps + 1)`.
pub fn heat_gaussian(x: f64, t: f64, eps: f64) -> f64 {
    (-(x * x) / (4.0 * t + 2.0 * eps)).exp() / (2.0 * t / eps + 1.0).sqrt()
}

/// Initial data with exact continuum solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDatum {
    Zero,
    /// `e^{-x^2/2 eps}`.
    Gaussian { eps: f64 },
}

impl InitialDatum {
    pub fn at(&self, x: f64) -> Complex64 {
        match *self {
            Self::Zero => Complex64::new(0.0, 0.0),
            Self::Gaussian { eps } => Complex64::new((-x * x / (2.0 * eps)).exp(), 0.0),
        }
    }

    pub fn solution(&self, x: f64, t: f64, equation: Equation) -> Complex64 {
        match (*self, equation) {
            (Self::Zero, _) => Complex64::new(0.0, 0.0),
            (Self::Gaussian { eps }, Equation::Schrodinger) => schrodinger_gaussian(x, t, eps),
            (Self::Gaussian { eps }, Equation::Heat) => Complex64::new(heat_gaussian(x, t, eps), 0.0),
        }
    }

    /// Half-width past which the datum is below `e^{-40}`.
    fn reach(&self) -> f64 {
        match *self {
            Self::Zero => 1.0,
            Self::Gaussian { eps } => (80.0 * eps).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonConfig {
    /// Regularity index of the datum.
    pub sobolev_s: f64,
    /// Mesh-proximity exponent.
    pub mu: f64,
    pub h_list: Vec<f64>,
    pub t: f64,
}

impl ComparisonConfig {
    pub fn new(sobolev_s: f64, mu: f64, h_list: Vec<f64>, t: f64) -> Result<Self> {
        let cfg = Self {
            sobolev_s,
            mu,
            h_list,
            t,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sobolev_s > 0.5 && self.sobolev_s.is_finite()) {
            return domain(format!("Sobolev index must exceed 1/2, got {}", self.sobolev_s));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return domain(format!("mu must be positive, got {}", self.mu));
        }
        if !self.t.is_finite() {
            return domain("time must be finite");
        }
        if self.h_list.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return domain("mesh sizes must be positive");
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            return domain("mesh sizes must be strictly decreasing");
        }
        Ok(())
    }

    /// The exponent `(2s - 1)/8` of the continuum-limit bound.
    pub fn bound_exponent(&self) -> f64 {
        (2.0 * self.sobolev_s - 1.0) / 8.0
    }
}

/// `evolve(samples of u0) - u(kh, t)` over the whole output window.
pub fn mesh_error(datum: InitialDatum, h: f64, t: f64, equation: Equation) -> Result<LatticeSignal> {
    let w = (datum.reach() / h).ceil() as usize;
    let f0 = sample_function(|x| datum.at(x), h, w)?;
    let out = evolve_kernel(&f0, &EvolutionSpec::kernel(equation, t))?;
    Ok(out.map(|k, v| v - datum.solution(k as f64 * h, t, equation)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub h: Vec<f64>,
    pub error_linf: Vec<f64>,
    /// Least-squares slope of `ln error` against `ln h`; `None` when some
    /// error is zero.
    pub slope: Option<f64>,
    /// Errors strictly decrease along the (decreasing) mesh list.
    pub monotone: bool,
    pub bound_exponent_reference: f64,
}

impl RateReport {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let e = |e: csv::Error| Error::Parse(e.to_string());
        out.write_record(["h", "error_linf", "bound_exponent_reference"])
            .map_err(e)?;
        for (h, err) in self.h.iter().zip(&self.error_linf) {
            out.write_record([shortest(*h), shortest(*err), shortest(self.bound_exponent_reference)])
                .map_err(e)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn convergence_experiment(
    cfg: &ComparisonConfig,
    datum: InitialDatum,
    equation: Equation,
) -> Result<RateReport> {
    cfg.validate()?;
    if cfg.h_list.len() < 3 {
        return domain("need at least three mesh sizes");
    }
    let error_linf = cfg
        .h_list
        .par_iter()
        .map(|&h| Ok(mesh_error(datum, h, cfg.t, equation)?.norm(NormKind::Linf)))
        .collect::<Result<Vec<f64>>>()?;
    let slope = if error_linf.iter().all(|&e| e > 0.0) {
        let lx: Vec<f64> = cfg.h_list.iter().map(|h| h.ln()).collect();
        let ly: Vec<f64> = error_linf.iter().map(|e| e.ln()).collect();
        Some(ls_slope(&lx, &ly))
    } else {
        None
    };
    let monotone = error_linf.windows(2).all(|w| w[1] < w[0]);
    Ok(RateReport {
        h: cfg.h_list.clone(),
        error_linf,
        slope,
        monotone,
        bound_exponent_reference: cfg.bound_exponent(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_values() {
        for x in [0.0, 0.7, -3.0] {
            let g = (-x * x / 4.0f64).exp();
            assert!((schrodinger_gaussian(x, 0.0, 2.0) - Complex64::new(g, 0.0)).norm() < 1e-16);
            assert!((heat_gaussian(x, 0.0, 2.0) - g).abs() < 1e-16);
        }
    }

    #[test]
    fn schrodinger_modulus_at_time_one() {
        let amp = 5f64.powf(-0.25);
        for j in -20..=20 {
            let x = j as f64 * 0.5;
            let m = schrodinger_gaussian(x, 1.0, 1.0).norm();
            assert!((m - amp * (-x * x / 10.0).exp()).abs() < 1e-12);
        }
        let z = schrodinger_gaussian(0.0, 1.0, 1.0);
        let want = (Complex64::new(1.0, 0.0) / Complex64::new(1.0, 2.0)).sqrt();
        assert!((z - want).norm() < 1e-16);
    }

    #[test]
    fn heat_center_and_semigroup() {
        assert!((heat_gaussian(0.0, 1.0, 1.0) - 1.0 / 3f64.sqrt()).abs() < 1e-16);
        // u(t1 + t2; eps) = u(t2; eps + 2 t1) * u(0, t1; eps)
        let (t1, t2, eps) = (0.3, 0.9, 0.7);
        for j in -10..=10 {
            let x = j as f64 * 0.4;
            let lhs = heat_gaussian(x, t1 + t2, eps);
            let rhs = heat_gaussian(x, t2, eps + 2.0 * t1) * heat_gaussian(0.0, t1, eps);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn heat_mass_is_conserved_on_mesh() {
        let h = 0.05;
        let sum = |t: f64| -> f64 { (-600..=600).map(|k| heat_gaussian(k as f64 * h, t, 1.0)).sum::<f64>() * h };
        assert!((sum(1.0) - sum(0.0)).abs() < h);
    }

    #[test]
    fn config_validation() {
        assert!(ComparisonConfig::new(0.5, 1.0, vec![0.2, 0.1, 0.05], 1.0).is_err());
        assert!(ComparisonConfig::new(1.0, 1.0, vec![0.2, 0.2, 0.05], 1.0).is_err());
        let c = ComparisonConfig::new(1.5, 1.0, vec![0.2, 0.1, 0.05], 1.0).unwrap();
        assert_eq!(c.bound_exponent(), 0.25);
    }

    #[test]
    fn zero_datum_has_no_slope() {
        let c = ComparisonConfig::new(1.5, 1.0, vec![0.5, 0.25, 0.125], 1.0).unwrap();
        let r = convergence_experiment(&c, InitialDatum::Zero, Equation::Heat).unwrap();
        assert!(r.error_linf.iter().all(|&e| e == 0.0));
        assert_eq!(r.slope, None);
    }

    #[test]
    fn heat_errors_shrink_with_mesh() {
        let c = ComparisonConfig::new(1.5, 1.0, vec![0.5, 0.25, 0.125], 1.0).unwrap();
        let r = convergence_experiment(&c, InitialDatum::Gaussian { eps: 1.0 }, Equation::Heat).unwrap();
        assert!(r.monotone, "{:?}", r.error_linf);
        assert!(r.slope.unwrap() > 1.5);
    }
}
