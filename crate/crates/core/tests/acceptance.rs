//! One PASS/FAIL line per acceptance criterion.
//!
//!     cargo test --release --test acceptance

use std::process::ExitCode;
use std::time::{Duration, Instant};

use discrete_hardy::analytic::{
    appendix_example2, appendix_example2_closed, appendix_example2_envelope, heat_parameter_flow,
    trichotomy, Case, Extension, DEFAULT_EXPLICIT_TOL,
};
use discrete_hardy::bessel::{
    bessel_i, bessel_i_quadrature, bessel_i_scaled, gaussian_limit_error, unit_grid,
};
use discrete_hardy::continuum::{convergence_experiment, ComparisonConfig, InitialDatum};
use discrete_hardy::evolution::{evolve_kernel, evolve_spectral, Equation, EvolutionSpec};
use discrete_hardy::hardy::{
    envelope_fit, figure1_data, figure1_max_deviation, figure2_verdict, hardy_gate, make_example,
    ExampleName, Gate,
};
use discrete_hardy::{ComplexScaled, LatticeSignal, NormKind, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIG1_GOLDEN: f64 = 3.333_366_575_429_806_3e-4;

type Criterion = (&'static str, fn() -> Result<Outcome>, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn all_examples() -> Vec<ExampleName> {
    let mut v = ExampleName::schrodinger().to_vec();
    v.extend([1.0, 0.5, 0.25].map(|eps| ExampleName::HeatSharp { eps }));
    v
}

fn c1_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let k = rng.gen_range(-30..=30i64);
        let z = Complex64::from_polar(50.0 * rng.gen::<f64>().sqrt(), rng.gen_range(-3.2..3.2));
        let s = bessel_i_scaled(k, z)?.to_complex();
        let q = bessel_i_quadrature(k, z)? * (-z.re).exp();
        worst = worst.max((s - q).norm() / q.norm());
    }
    outcome(worst <= 1e-9, format!("200 cases, worst {worst:.2e}"))
}

/// `sum_m I_m(u) I_{k-m}(v)` against `I_k(u+v)`, normalized by `I_k(|u|+|v|)`.
fn neumann_residual(u: Complex64, v: Complex64, k: i64) -> Result<f64> {
    let m_max = 4 * (u.norm() + v.norm()) as i64 + 60 + k.abs();
    let sum: ComplexScaled = (-m_max..=m_max)
        .map(|m| Ok(bessel_i(m, u)? * bessel_i(k - m, v)?))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let direct = bessel_i(k, u + v)?;
    let norm = bessel_i(k, Complex64::new(u.norm() + v.norm(), 0.0))?;
    Ok(((sum - direct).log_mag() - norm.log_mag()).exp())
}

fn c2_neumann() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = Complex64::from_polar(20.0 * rng.gen::<f64>(), rng.gen_range(-3.2..3.2));
        let v = Complex64::from_polar(20.0 * rng.gen::<f64>(), rng.gen_range(-3.2..3.2));
        let k = rng.gen_range(-20..=20i64);
        worst = worst.max(neumann_residual(u, v, k)?);
    }
    outcome(worst <= 1e-10, format!("50 triples, worst {worst:.2e}"))
}

fn c3_closed_forms() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for name in [ExampleName::SchrodingerA, ExampleName::SharpSchrodinger] {
        for h in [0.5, 0.25] {
            let p = make_example(name, h)?;
            let out = evolve_kernel(&p.f0, &EvolutionSpec::kernel(Equation::Schrodinger, 1.0))?;
            worst = worst.max(out.rel_linf_diff(&p.f1));
        }
    }
    outcome(worst <= 1e-8, format!("worst {worst:.2e}"))
}

/// `ℓ∞(a - b)` over the larger of the input and output `ℓ∞` norms. Heat
/// flow can shrink a signal by far more than the double-precision round-off
/// in either method (`e^{-64}` for `(-1)^k` data at `h = 1/4`), so the
/// output alone is not a usable scale.
fn flow_diff(a: &LatticeSignal, b: &LatticeSignal, input: &LatticeSignal) -> f64 {
    let scale = b.norm(NormKind::Linf).max(input.norm(NormKind::Linf));
    a.max_abs_diff(b) / scale
}

fn c4_cross_method() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut strict: f64 = 0.0;
    let mut count = 0;
    for name in all_examples() {
        for h in [0.5, 0.25] {
            let p = make_example(name, h)?;
            for eq in [Equation::Schrodinger, Equation::Heat] {
                for f in [&p.f0, &p.f1] {
                    let k = evolve_kernel(f, &EvolutionSpec::kernel(eq, 1.0))?;
                    let s = evolve_spectral(f, &EvolutionSpec::spectral(eq, 1.0))?;
                    worst = worst.max(flow_diff(&k, &s, f));
                    strict = strict.max(k.rel_linf_diff(&s));
                    count += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{count} runs, worst {worst:.2e} (output-relative {strict:.2e})"),
    )
}

fn evolve(f: &LatticeSignal, eq: Equation, t: f64) -> Result<LatticeSignal> {
    evolve_kernel(f, &EvolutionSpec::kernel(eq, t))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c5_conservation() -> Result<Outcome> {
    let (mut l2, mut sum, mut group, mut reversal) = (0f64, 0f64, 0f64, 0f64);
    let mut nonexpansive = true;
    for name in all_examples() {
        for h in [0.5, 0.25] {
            let f = make_example(name, h)?.f0;
            for t in [0.3, 1.0, 2.5] {
                let s = evolve(&f, Equation::Schrodinger, t)?;
                l2 = l2.max(rel(s.norm(NormKind::L2), f.norm(NormKind::L2)));
                let back = evolve(&s, Equation::Schrodinger, -t)?;
                reversal = reversal.max(back.rel_linf_diff(&f));

                let ht = evolve(&f, Equation::Heat, t)?;
                sum = sum.max((ht.sum() - f.sum()).norm() / f.sum().norm().max(f.norm(NormKind::L1)));
                nonexpansive &= ht.norm(NormKind::Linf) <= f.norm(NormKind::Linf) * (1.0 + 1e-12);

                for eq in [Equation::Schrodinger, Equation::Heat] {
                    let once = evolve(&f, eq, t + 0.7)?;
                    let twice = evolve(&evolve(&f, eq, 0.7)?, eq, t)?;
                    group = group.max(flow_diff(&twice, &once, &f));
                }
            }
        }
    }
    let pass = l2 <= 1e-9 && sum <= 1e-10 && nonexpansive && group <= 1e-9 && reversal <= 1e-9;
    outcome(
        pass,
        format!(
            "l2 {l2:.1e}, sum {sum:.1e}, linf non-expansive {nonexpansive}, semigroup {group:.1e}, reversal {reversal:.1e}"
        ),
    )
}

fn c6_figure2() -> Result<Outcome> {
    let (holds, fails) = figure2_verdict(0.05, 200, 250)?;
    outcome(holds && fails, format!("beta=5 holds {holds}, beta=4.9 violated {fails}"))
}

fn c7_figure1() -> Result<Outcome> {
    let dev = figure1_max_deviation(&figure1_data(0.05, 50)?, 0.05);
    let pass = dev <= 0.05 && rel(dev, FIG1_GOLDEN) <= 1e-9;
    outcome(pass, format!("max deviation {dev:.6e}, golden {FIG1_GOLDEN:.6e}"))
}

fn c8_gate() -> Result<Outcome> {
    let mut pass = true;
    for h in [0.25, 0.05] {
        let p = make_example(ExampleName::SharpSchrodinger, h)?;
        let r = hardy_gate(&p.f0, &p.f1, 1.0, 1.0, 1.0, p.equation)?;
        pass &= r.sum == 2.0
            && r.gate == Gate::NotCovered
            && r.envelope_ok_t0
            && r.envelope_ok_t1
            && r.signal_nonzero
            && r.consistent;
    }
    outcome(pass, "h in {1/4, 1/20}")
}

fn c9_gaussian_limit() -> Result<Outcome> {
    let xs = unit_grid(64);
    let errs = [4, 8, 16, 32]
        .map(|j| gaussian_limit_error(1.0, j, &xs))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let pass = errs.windows(2).all(|w| w[1] < w[0]) && errs[3] < 0.02;
    outcome(pass, format!("{errs:.4?}"))
}

fn c10_heat_family() -> Result<Outcome> {
    let mut pass = true;
    let mut sums = Vec::new();
    for h in [0.2, 0.1, 0.05] {
        let row = [1.0, 0.5, 0.25]
            .map(|eps| -> Result<f64> {
                let p = make_example(ExampleName::HeatSharp { eps }, h)?;
                Ok(envelope_fit(&p.f0, 1.0)?.alpha + envelope_fit(&p.f1, 1.0)?.alpha)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        pass &= row.iter().all(|&s| s > 2.0) && row.windows(2).all(|w| w[1] < w[0]);
        sums.push(row);
    }
    outcome(pass, format!("alpha+beta by h then eps: {sums:.4?}"))
}

fn c11_convergence() -> Result<Outcome> {
    let cfg = ComparisonConfig::new(1.0, 1.0, vec![0.2, 0.1, 0.05, 0.025], 1.0)?;
    let mut pass = true;
    let mut detail = Vec::new();
    for eq in [Equation::Schrodinger, Equation::Heat] {
        let r = convergence_experiment(&cfg, InitialDatum::Gaussian { eps: 1.0 }, eq)?;
        let slope = r.slope.unwrap_or(f64::NAN);
        pass &= r.monotone && slope > 0.0;
        detail.push(format!("{eq:?} slope {slope:.3}"));
    }
    outcome(pass, detail.join(", "))
}

fn c12_families() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for (u, a, b, h) in [
        (Complex64::new(1.0, 0.0), 2.0, 0.0, 1.0),
        (Complex64::new(0.0, 0.8), 1.5, 0.4, 1.0),
        (Complex64::new(0.6, -0.3), 3.0, -1.1, 0.5),
    ] {
        let f = appendix_example2(u, a, b, h, Some(60))?;
        let ext = Extension::new(f, Some(appendix_example2_envelope(u, a, h)?))?;
        for i in -6..=6 {
            for j in -3..=3 {
                let z = Complex64::new(i as f64 * 0.5 / h, j as f64 * 0.4);
                let s = ext.evaluate(z)?.value.to_complex();
                let c = appendix_example2_closed(u, a, b, h, z).to_complex();
                worst = worst.max((s - c).norm() / c.norm());
            }
        }
    }
    let mut flow_ok = true;
    for (r, s) in [(0.5, 1.0), (0.1, 9.0), (0.99, 1.0)] {
        for i in 0..=100 {
            let (rt, st) = heat_parameter_flow(r, s, i as f64 * 0.1)?;
            flow_ok &= rt * st < 1.0;
        }
    }
    let cases = [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0)]
        .map(|(r, s)| trichotomy(r, s, DEFAULT_EXPLICIT_TOL).map(|v| v.case))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let verdicts_ok = cases == [Case::Inconclusive, Case::ExplicitForm, Case::Zero];
    outcome(
        worst <= 1e-9 && flow_ok && verdicts_ok,
        format!("series vs closed {worst:.2e}, flow rs<1 {flow_ok}, verdicts {cases:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("bessel oracle agreement", c1_oracle, Some(Duration::from_secs(10))),
        ("neumann addition", c2_neumann, None),
        ("evolution closed forms", c3_closed_forms, Some(Duration::from_secs(30))),
        ("kernel vs spectral", c4_cross_method, None),
        ("conservation suite", c5_conservation, None),
        ("fig2 envelope", c6_figure2, Some(Duration::from_secs(60))),
        ("fig1 gaussian shape", c7_figure1, None),
        ("sharpness boundary gate", c8_gate, None),
        ("gaussian limit", c9_gaussian_limit, None),
        ("heat sharpness family", c10_heat_family, None),
        ("continuum convergence", c11_convergence, None),
        ("example families", c12_families, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && budget.is_none_or(|b| took <= b), o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name} ({:.2}s) {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
