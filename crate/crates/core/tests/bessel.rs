use discrete_hardy::bessel::{
    bessel_i, bessel_i_quadrature, bessel_i_scaled, bessel_i_scaled_seq, bessel_ratio,
    log_bessel_ratios,
};
use discrete_hardy::ComplexScaled;
use num_complex::Complex64;
use proptest::prelude::*;

const GOLDEN: &str = include_str!("data/bessel_golden.csv");

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn golden_table() {
    let mut rdr = csv::Reader::from_reader(GOLDEN.as_bytes());
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let f = |i: usize| rec[i].parse::<f64>().unwrap();
        let k: i64 = rec[0].parse().unwrap();
        let z = c(f(1), f(2));
        let want = c(f(3), f(4));
        let got = bessel_i(k, z).unwrap().to_complex();
        let err = (got - want).norm() / want.norm().max(1e-300);
        assert!(err < 1e-12, "k={k} z={z}: {got} vs {want} ({err:e})");
        if z.re.abs() <= 700.0 {
            let q = bessel_i_quadrature(k, z).unwrap();
            assert!((q - want).norm() <= 1e-10 * want.norm().max(1.0), "quadrature k={k} z={z}");
        }
        rows += 1;
    }
    assert_eq!(rows, 19);
}

#[test]
fn large_arguments_stay_finite() {
    // ln I_0(x) = x - ln(2 pi x)/2 + 1/(8x) + O(x^-2)
    for x in [2000.0, 1e5, 1e6] {
        let l = bessel_i(0, c(x, 0.0)).unwrap().log_mag();
        let asym = x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (8.0 * x);
        assert!((l - asym).abs() < 1e-6, "{x}");
    }
    assert!(bessel_ratio(2000, 800.0).unwrap() < 1e-200);
}

#[test]
fn generating_identity() {
    // e^{-x} (I_0 + 2 sum I_m) = 1
    for x in [1.0f64, 10.0, 100.0, 1000.0] {
        let n = (x + 20.0 * x.sqrt() + 60.0) as usize;
        let seq = bessel_i_scaled_seq(c(x, 0.0), n).unwrap();
        let total: f64 = seq[0].to_complex().re + 2.0 * seq[1..].iter().map(|v| v.to_complex().re).sum::<f64>();
        assert!((total - 1.0).abs() <= 1e-12, "x={x}: {total}");
    }
}

#[test]
fn ratios_are_monotone_in_order() {
    for x in [0.5, 16.0, 400.0, 1e4] {
        let l = log_bessel_ratios(x, 300).unwrap();
        assert_eq!(l[0], 0.0);
        assert!(l.windows(2).all(|w| w[1] <= w[0]), "{x}");
    }
}

fn arg(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_symmetry(k in -60i64..60, z in arg(200.0)) {
        prop_assert_eq!(bessel_i_scaled(k, z).unwrap(), bessel_i_scaled(-k, z).unwrap());
        prop_assert_eq!(bessel_i_quadrature(k, z / 4.0).unwrap(), bessel_i_quadrature(-k, z / 4.0).unwrap());
    }

    #[test]
    fn modulus_bound(k in -40i64..40, z in arg(300.0)) {
        let a = bessel_i(k, z).unwrap().log_mag();
        let b = bessel_i(k, c(z.norm(), 0.0)).unwrap().log_mag();
        prop_assert!(a <= b + 1e-12 * b.abs().max(1.0), "{} > {}", a, b);
    }

    #[test]
    fn oracle_agreement(k in -30i64..=30, z in arg(50.0)) {
        let s = bessel_i_scaled(k, z).unwrap().to_complex();
        let q = bessel_i_quadrature(k, z).unwrap() * (-z.re).exp();
        prop_assert!((s - q).norm() <= 1e-9 * q.norm(), "k={} z={}: {} vs {}", k, z, s, q);
    }

    #[test]
    fn neumann_addition(u in arg(20.0), v in arg(20.0), k in -40i64..=40) {
        let m = 4 * (u.norm() + v.norm()) as i64 + 60 + k.abs();
        let sum: ComplexScaled = (-m..=m)
            .map(|j| bessel_i(j, u).unwrap() * bessel_i(k - j, v).unwrap())
            .sum();
        let direct = bessel_i(k, u + v).unwrap();
        let scale = bessel_i(k, c(u.norm() + v.norm(), 0.0)).unwrap();
        let res = ((sum - direct).log_mag() - scale.log_mag()).exp();
        prop_assert!(res <= 1e-10, "residual {:e}", res);
    }

    #[test]
    fn reflection(k in -30i64..30, z in arg(100.0)) {
        // I_k(-z) = (-1)^k I_k(z)
        let a = bessel_i(k, -z).unwrap();
        let b = bessel_i(k, z).unwrap();
        let b = if k % 2 == 0 { b } else { -b };
        let d = (a - b).log_mag() - b.log_mag();
        prop_assert!(d < (1e-12f64).ln());
    }
}
