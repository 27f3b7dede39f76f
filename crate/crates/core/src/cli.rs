//! The `dhardy` command line.
//!
//! Exit status: 0 on success, 1 when a run finds a violated bound or a
//! failed claim, 2 on usage or domain errors. Files go to `--out-dir`, else
//! to `$HARDY_OUT_DIR`, else the working directory.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{
    appendix_example2, appendix_example2_envelope, check_theorem21_lines, default_y_grid,
    explicit_form, Extension, LineBoundSpec, MarginReport,
};
use crate::bessel::{
    bessel_i, bessel_i_quadrature, bessel_i_scaled, gaussian_limit_error, unit_grid, MAX_ABS_RE,
};
use crate::continuum::{convergence_experiment, ComparisonConfig, InitialDatum};
use crate::error::{Error, Result};
use crate::evolution::{evolve, Equation, EvolutionSpec, Method};
use crate::fmt::shortest;
use crate::hardy::{
    figure1_data, figure1_max_deviation, figure2_data, figure2_verdict, hardy_gate, make_example,
    envelope_fit_with, write_fig1_csv, write_fig2_csv, ExampleName, FitOptions,
};
use crate::lattice::{gen_bessel_datum, Envelope, LatticeSignal};
use crate::scaled::ComplexScaled;

pub const OUT_DIR_ENV: &str = "HARDY_OUT_DIR";

/// Named tolerances with their defaults.
pub const DEFAULT_TOLERANCES: [(&str, f64); 5] = [
    ("tail_tol", 1e-12),
    ("envelope_rel", 1e-6),
    ("line_c", 1.0),
    ("line_margin", 1e-8),
    ("oracle_rel", 1e-9),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(
            DEFAULT_TOLERANCES
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
        )
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    /// Applies `name=value`; only known names with positive values.
    pub fn set(&mut self, spec: &str) -> Result<()> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got {spec:?}")))?;
        if !self.0.contains_key(name) {
            return Err(Error::Parse(format!("unknown tolerance {name:?}")));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad value in {spec:?}")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parse(format!("tolerance {name} must be positive")));
        }
        self.0.insert(name.to_string(), v);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EqArg {
    Schrodinger,
    Heat,
}

impl From<EqArg> for Equation {
    fn from(e: EqArg) -> Self {
        match e {
            EqArg::Schrodinger => Equation::Schrodinger,
            EqArg::Heat => Equation::Heat,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Kernel,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Cor41,
    Cor42,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LineSource {
    /// `c e^{(u/h^2) cos(zh)}` itself.
    Explicit,
    /// Extension of the coefficients `I_k(u/h^2)`, rescaled by `sqrt(2 pi)/h`.
    Series,
    /// The `(a, b)` example family with parameter `--a`.
    Example2,
}

#[derive(Debug, Parser)]
#[command(name = "dhardy", version, about = "Lattice Bessel flows and two-time decay checks")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Override a tolerance, e.g. `--tol tail_tol=1e-10`.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Output format; the gate report defaults to JSON, tables to CSV.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaled `I_k(z) e^{-Re z}` with a quadrature cross-check.
    #[command(allow_negative_numbers = true)]
    Bessel { k: i64, re: f64, im: f64 },
    /// Evolve a signal file for time `t`.
    #[command(allow_negative_numbers = true)]
    Evolve {
        #[arg(long = "eq", value_enum)]
        equation: EqArg,
        #[arg(long, value_enum, default_value = "kernel")]
        method: MethodArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        modes: Option<usize>,
        /// Output file (default `<out-dir>/evolved.csv`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alternating Bessel datum against `±e^{-x^2/2}` (fig1.csv).
    Figure1 {
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[arg(long, default_value_t = 50)]
        kmax: usize,
    },
    /// Time-1 modulus against the `beta = 5` and `beta = 4.9` envelopes (fig2.csv).
    Figure2 {
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        #[arg(long, default_value_t = 200)]
        k_lo: usize,
        #[arg(long, default_value_t = 250)]
        k_hi: usize,
    },
    /// Two-time envelope check on a named example pair (JSON report).
    Gate {
        #[arg(long)]
        example: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.25)]
        h: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Four-line decay margins (lines.csv).
    #[command(allow_negative_numbers = true)]
    Lines {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.2)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long, value_enum, default_value = "explicit")]
        source: LineSource,
        /// Parameter of the `(a, b)` example family.
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        /// Largest `|y| h` sampled.
        #[arg(long, default_value_t = 6.0)]
        ymax: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Coefficient half-width for the `series` and `example2` sources.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Lattice-to-continuum errors for a Gaussian datum (converge.csv).
    Converge {
        #[arg(long = "eq", value_enum)]
        equation: EqArg,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025])]
        h_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1.0)]
        sobolev_s: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
    },
    /// Smallest envelope parameter `alpha` for a signal file and prefactor `c`.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Gaussian-limit errors for `j = 1, 2, 4, ..., jmax` (limit.csv).
    Limit {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        jmax: u32,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub h: Option<f64>,
    pub window: Option<usize>,
    pub t: Option<f64>,
    pub tolerances: Tolerances,
    pub output_path: PathBuf,
    pub format: Option<Format>,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let mut tolerances = Tolerances::default();
        for t in &cli.tol {
            tolerances.set(t)?;
        }
        let output_path = cli
            .out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let (command, h, window, t) = match &cli.command {
            Command::Bessel { .. } => ("bessel", None, None, None),
            Command::Evolve { t, .. } => ("evolve", None, None, Some(*t)),
            Command::Figure1 { h, kmax } => ("figure1", Some(*h), Some(*kmax), None),
            Command::Figure2 { h, k_hi, .. } => ("figure2", Some(*h), Some(*k_hi), None),
            Command::Gate { h, .. } => ("gate", Some(*h), None, Some(1.0)),
            Command::Lines { h, window, .. } => ("lines", Some(*h), *window, None),
            Command::Converge { t, .. } => ("converge", None, None, Some(*t)),
            Command::Fit { .. } => ("fit", None, None, None),
            Command::Limit { points, .. } => ("limit", None, Some(*points), None),
        };
        Ok(Self {
            command,
            h,
            window,
            t,
            tolerances,
            output_path,
            format: cli.format,
        })
    }

    fn file(&self, name: &str) -> PathBuf {
        self.output_path.join(name)
    }
}

enum Outcome {
    Ok,
    Finding,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| execute(&cli.command, &cfg, out));
    match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Finding) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Bessel { k, re, im } => bessel_cmd(*k, Complex64::new(*re, *im), cfg, out),
        Command::Evolve {
            equation,
            method,
            input,
            t,
            modes,
            out: dest,
        } => {
            let signal = LatticeSignal::load(input)?;
            let method = match method {
                MethodArg::Kernel => Method::Kernel,
                MethodArg::Spectral => Method::Spectral,
            };
            let mut spec = EvolutionSpec::new((*equation).into(), *t, method)
                .with_tail_tol(cfg.tolerances.get("tail_tol"));
            if let Some(m) = modes {
                spec = spec.with_modes(*m);
            }
            let result = evolve(&signal, &spec)?;
            let path = dest.clone().unwrap_or_else(|| cfg.file("evolved.csv"));
            result.write_csv(create(&path)?)?;
            writeln!(out, "wrote {} ({} entries)", path.display(), result.len())?;
            Ok(Outcome::Ok)
        }
        Command::Figure1 { h, kmax } => {
            let rows = figure1_data(*h, *kmax)?;
            let path = cfg.file("fig1.csv");
            write_fig1_csv(&rows, create(&path)?)?;
            writeln!(out, "wrote {}", path.display())?;
            writeln!(out, "max deviation from ±e^(-x^2/2): {}", shortest(figure1_max_deviation(&rows, *h)))?;
            Ok(Outcome::Ok)
        }
        Command::Figure2 { h, k_lo, k_hi } => {
            let rows = figure2_data(*h, *k_lo, *k_hi)?;
            let path = cfg.file("fig2.csv");
            write_fig2_csv(&rows, create(&path)?)?;
            let (holds5, fails49) = figure2_verdict(*h, *k_lo, *k_hi)?;
            writeln!(out, "wrote {}", path.display())?;
            writeln!(out, "beta=5 bound holds on every row: {holds5}")?;
            writeln!(out, "beta=4.9 bound fails on some row: {fails49}")?;
            Ok(if holds5 && fails49 { Outcome::Ok } else { Outcome::Finding })
        }
        Command::Gate {
            example,
            alpha,
            beta,
            h,
            c,
        } => {
            let name: ExampleName = example.parse()?;
            if matches!(name, ExampleName::HeatSharp { .. }) {
                return Err(Error::Domain(
                    "heat_sharp pairs a lattice datum with a continuum reference; use envelope fits instead".into(),
                ));
            }
            let pair = make_example(name, *h)?;
            let report = hardy_gate(&pair.f0, &pair.f1, *alpha, *beta, *c, pair.equation)?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => writeln!(out, "{}", report.to_json())?,
                Format::Csv => {
                    writeln!(out, "alpha,beta,sum,gate,envelope_ok_t0,envelope_ok_t1,signal_nonzero,consistent")?;
                    writeln!(
                        out,
                        "{},{},{},{:?},{},{},{},{}",
                        shortest(report.alpha),
                        shortest(report.beta),
                        shortest(report.sum),
                        report.gate,
                        report.envelope_ok_t0,
                        report.envelope_ok_t1,
                        report.signal_nonzero,
                        report.consistent
                    )?;
                }
            }
            let fine = report.envelope_ok_t0 && report.envelope_ok_t1 && report.consistent;
            Ok(if fine { Outcome::Ok } else { Outcome::Finding })
        }
        Command::Lines {
            preset,
            r,
            s,
            delta,
            h,
            source,
            a,
            ymax,
            points,
            window,
        } => lines_cmd(
            LineArgs {
                preset: *preset,
                r: *r,
                s: *s,
                delta: *delta,
                h: *h,
                source: *source,
                a: *a,
                ymax: *ymax,
                points: *points,
                window: *window,
            },
            cfg,
            out,
        ),
        Command::Converge {
            equation,
            eps,
            h_list,
            t,
            sobolev_s,
            mu,
        } => {
            let cc = ComparisonConfig::new(*sobolev_s, *mu, h_list.clone(), *t)?;
            if !(*eps > 0.0) {
                return Err(Error::Domain(format!("eps must be positive, got {eps}")));
            }
            let rep = convergence_experiment(&cc, InitialDatum::Gaussian { eps: *eps }, (*equation).into())?;
            let path = cfg.file("converge.csv");
            rep.write_csv(create(&path)?)?;
            writeln!(out, "wrote {}", path.display())?;
            match rep.slope {
                Some(sl) => writeln!(out, "fitted slope: {}", shortest(sl))?,
                None => writeln!(out, "fitted slope: undefined")?,
            }
            writeln!(out, "monotone: {}", rep.monotone)?;
            Ok(if rep.monotone { Outcome::Ok } else { Outcome::Finding })
        }
        Command::Fit { input, c } => {
            let signal = LatticeSignal::load(input)?;
            let opts = FitOptions {
                rel_tol: cfg.tolerances.get("envelope_rel"),
                ..FitOptions::default()
            };
            match envelope_fit_with(&signal, *c, opts) {
                Ok(fit) if fit.at_floor => {
                    writeln!(out, "alpha_min = 0 (bound holds down to {})", shortest(fit.floor))?;
                    Ok(Outcome::Ok)
                }
                Ok(fit) => {
                    writeln!(out, "alpha_min = {}", shortest(fit.alpha))?;
                    Ok(Outcome::Ok)
                }
                Err(Error::NoEnvelope { ceiling }) => {
                    writeln!(out, "no envelope with alpha <= {} fits", shortest(ceiling))?;
                    Ok(Outcome::Finding)
                }
                Err(e) => Err(e),
            }
        }
        Command::Limit {
            alpha,
            jmax,
            points,
        } => {
            if *points == 0 || *jmax == 0 {
                return Err(Error::Domain("points and jmax must be positive".into()));
            }
            let xs = unit_grid(*points);
            let mut rows = Vec::new();
            let mut j = 1u32;
            while j <= *jmax {
                rows.push((j, gaussian_limit_error(*alpha, j, &xs)?));
                j = match j.checked_mul(2) {
                    Some(n) => n,
                    None => break,
                };
            }
            let format = cfg.format.unwrap_or(Format::Csv);
            let path = cfg.file(match format {
                Format::Csv => "limit.csv",
                Format::Json => "limit.json",
            });
            match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(create(&path)?);
                    let e = |e: csv::Error| Error::Parse(e.to_string());
                    w.write_record(["j", "error"]).map_err(e)?;
                    for (j, err) in &rows {
                        w.write_record([j.to_string(), shortest(*err)]).map_err(e)?;
                    }
                    w.flush()?;
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        j: u32,
                        error: f64,
                    }
                    let v: Vec<Row> = rows.iter().map(|&(j, error)| Row { j, error }).collect();
                    write_json(&path, &v)?;
                }
            }
            for (j, err) in &rows {
                writeln!(out, "{j}\t{}", shortest(*err))?;
            }
            Ok(Outcome::Ok)
        }
    }
}

fn complex_str(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", shortest(z.re), shortest(z.im.abs()))
}

fn bessel_cmd(k: i64, z: Complex64, cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let v = bessel_i_scaled(k, z)?;
    let c = v.to_complex();
    writeln!(out, "I_{k}({z}) e^(-Re z) = {}", complex_str(c))?;
    writeln!(out, "ln|I_k(z)| = {}", shortest(v.log_mag() + z.re))?;
    writeln!(out, "arg I_k(z) = {}", shortest(v.phase()))?;
    if z.re.abs() > MAX_ABS_RE {
        writeln!(out, "quadrature check skipped (|Re z| > {MAX_ABS_RE})")?;
        return Ok(Outcome::Ok);
    }
    let q = bessel_i_quadrature(k, z)?;
    let unscaled = crate::bessel::bessel_i(k, z)?.to_complex();
    let rel = (unscaled - q).norm() / q.norm().max(1.0);
    let tol = cfg.tolerances.get("oracle_rel");
    writeln!(out, "I_k(z) = {}", complex_str(unscaled))?;
    writeln!(out, "quadrature: {}", complex_str(q))?;
    writeln!(out, "relative difference: {}", shortest(rel))?;
    Ok(if rel <= tol { Outcome::Ok } else { Outcome::Finding })
}

struct LineArgs {
    preset: Preset,
    r: f64,
    s: f64,
    delta: f64,
    h: f64,
    source: LineSource,
    a: f64,
    ymax: f64,
    points: usize,
    window: Option<usize>,
}

/// Default coefficient half-widths for the series line sources; off-axis
/// evaluation needs more terms than the on-axis tail rule keeps.
const EXAMPLE2_WINDOW: usize = 64;
const SERIES_WINDOW: usize = 64;

fn lines_cmd(args: LineArgs, cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let LineArgs {
        preset,
        r,
        s,
        delta,
        h,
        source,
        a,
        ymax,
        points,
        window,
    } = args;
    let spec = match preset {
        Preset::Cor41 => LineBoundSpec::cor41(r, delta, s)?,
        Preset::Cor42 => LineBoundSpec::cor42(r, delta, s)?,
    };
    if points < 2 || !(ymax >= 0.0) {
        return Err(Error::Domain("need at least two points and ymax >= 0".into()));
    }
    let grid: Vec<f64> = if points == 41 && ymax == 6.0 {
        default_y_grid(h)
    } else {
        (0..points)
            .map(|j| ymax * j as f64 / ((points - 1) as f64 * h))
            .collect()
    };
    let c = cfg.tolerances.get("line_c");
    let u = spec.u();
    let report: MarginReport = match source {
        LineSource::Explicit => {
            let ev = explicit_form(u, spec.b, h, c);
            check_theorem21_lines(ev, &spec, h, &grid, c)?
        }
        LineSource::Series => {
            // f_k = I_k(u/h^2)/I_0(|u|/h^2); rescale so the extension is c e^{(u/h^2) cos(zh)}
            let w = window.unwrap_or(SERIES_WINDOW);
            let sig = match gen_bessel_datum(u, r, h, Some(w), false) {
                Err(Error::TailTooLarge { required, .. }) => {
                    gen_bessel_datum(u, r, h, Some(required), false)?
                }
                other => other?,
            };
            let i0 = bessel_i(0, Complex64::new(r / (h * h), 0.0))?;
            let factor = i0 * ComplexScaled::from_real(c * std::f64::consts::TAU.sqrt() / h);
            let ext = Extension::new(sig, Some(Envelope::new(r, 1.0, h)?))?;
            check_theorem21_lines(|z| Ok(ext.evaluate(z)?.value * factor), &spec, h, &grid, c)?
        }
        LineSource::Example2 => {
            let w = window.unwrap_or(EXAMPLE2_WINDOW);
            let sig = appendix_example2(Complex64::from_polar(1.0, spec.theta), a, spec.b, h, Some(w))?;
            let env = appendix_example2_envelope(Complex64::from_polar(1.0, spec.theta), a, h)?;
            let ext = Extension::new(sig, Some(env))?;
            check_theorem21_lines(|z| Ok(ext.evaluate(z)?.value), &spec, h, &grid, c)?
        }
    };
    let path = cfg.file("lines.csv");
    report.write_csv(create(&path)?)?;
    let max = report.max_margin();
    writeln!(out, "wrote {}", path.display())?;
    writeln!(out, "max margin: {}", shortest(max))?;
    Ok(if max <= cfg.tolerances.get("line_margin") {
        Outcome::Ok
    } else {
        Outcome::Finding
    })
}
