use std::f64::consts::PI;

use num_complex::Complex64;
use sectionzeros::analysis::*;
use sectionzeros::curves::{bessel_limit_curve, sample_limit_curve, LimitCurve, DEFAULT_SAMPLES};
use sectionzeros::moments::IntegrandSpec;
use sectionzeros::roots::{aberth_roots, count_in_sector, RootSet};
use sectionzeros::sections::{bessel_section, build_section};
use sectionzeros::specfun::{complex_gamma, real_power};

fn zeros(spec: &IntegrandSpec, n: usize) -> RootSet {
    aberth_roots(&build_section(spec, n).unwrap()).unwrap()
}

fn records(spec: &IntegrandSpec, curve: &LimitCurve, ns: &[usize]) -> Vec<ZeroRecord> {
    ns.iter()
        .flat_map(|&n| classify_zeros(&zeros(spec, n).roots, spec, n, curve, default_delta(curve)).unwrap())
        .collect()
}

#[test]
fn ncond_for_conjugate_exponents() {
    let spec = IntegrandSpec::new(
        1.0,
        1.0,
        Complex64::new(-0.5, 1.0),
        Complex64::new(-0.5, -1.0),
        vec![Complex64::new(1.0, 0.0)],
    )
    .unwrap();
    let f1g = real_power(2.0, spec.nu).unwrap() * complex_gamma(spec.mu + 1.0).unwrap();
    let f2g = real_power(2.0, spec.mu).unwrap() * complex_gamma(spec.nu + 1.0).unwrap();
    let adm = admissible_indices(&spec, 2, 200, None).unwrap();
    assert!(adm.rule_active);
    assert!((adm.epsilon - 0.25 * f1g.norm()).abs() < 1e-14);
    for &(n, v) in &adm.ncond_values {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let want = sign * f1g + f2g * Complex64::new(0.0, 2.0 * (n as f64).ln()).exp();
        assert!((v - want).norm() < 1e-12 * want.norm().max(1.0), "n={n}");
        assert_eq!(adm.indices.contains(&n), v.norm() >= adm.epsilon);
    }
    // N^{2i} winds slowly, so both parities are sometimes selected and sometimes not
    assert!(adm.indices.len() > 20 && adm.indices.len() < 199);
}

#[test]
fn bessel_rule_keeps_even_indices() {
    let spec = IntegrandSpec::bessel(Complex64::new(0.0, 0.0)).unwrap();
    let adm = admissible_indices(&spec, 2, 60, None).unwrap();
    assert_eq!(adm.indices, (2..=60).step_by(2).collect::<Vec<_>>());
    let two = 2.0 * spec.f1_at_0() * complex_gamma(spec.mu + 1.0).unwrap();
    for &(n, v) in &adm.ncond_values {
        if n % 2 == 0 {
            assert!((v - two).norm() < 1e-13);
        } else {
            assert!(v.norm() < 1e-13);
        }
    }
    let f3 = admissible_indices(&IntegrandSpec::fig3(), 10, 30, None).unwrap();
    assert!(!f3.rule_active);
    assert_eq!(f3.indices, (10..=30).collect::<Vec<_>>());
    assert!(admissible_indices(&spec, 1, 10, None).is_err());
}

#[test]
fn sign_law_and_stable_remainder() {
    let spec = IntegrandSpec::fig2();
    let curve = sample_limit_curve(&spec, DEFAULT_SAMPLES).unwrap();
    let recs = records(&spec, &curve, &[40, 80, 160]);
    let right: Vec<&ZeroRecord> = recs.iter().filter(|r| r.side == Side::Right).collect();
    assert!(!right.is_empty());
    assert!(right.iter().filter(|r| r.n >= 80).all(|r| r.deviation < 0.0));
    // N * mean(deviation - predicted) settles to the O(1/N) constant
    let mut c = Vec::new();
    for n in [40usize, 80, 160] {
        let sel: Vec<f64> = right.iter().filter(|r| r.n == n).map(|r| r.deviation - r.predicted_deviation).collect();
        c.push(n as f64 * sel.iter().sum::<f64>() / sel.len() as f64);
    }
    assert!((c[2] - c[1]).abs() < (c[1] - c[0]).abs() + 0.1, "{c:?}");
    assert!(c.iter().all(|v| v.abs() < 5.0), "{c:?}");
}

#[test]
fn bessel_zeros_lie_outside() {
    // slope 1/2 > 0: zeros approach D(J) from outside
    let spec = IntegrandSpec::bessel(Complex64::new(0.0, 0.0)).unwrap();
    let curve = bessel_limit_curve(DEFAULT_SAMPLES).unwrap();
    let rs = aberth_roots(&bessel_section(Complex64::new(0.0, 0.0), 80).unwrap().section).unwrap();
    let recs = classify_zeros(&rs.roots, &spec, 80, &curve, default_delta(&curve)).unwrap();
    let sided: Vec<&ZeroRecord> = recs.iter().filter(|r| matches!(r.side, Side::Left | Side::Right)).collect();
    assert!(sided.len() > 40);
    assert!(sided.iter().all(|r| r.deviation > 0.0));
}

#[test]
fn every_sector_has_zeros() {
    let bessel = aberth_roots(&bessel_section(Complex64::new(0.0, 0.0), 80).unwrap().section).unwrap();
    for rs in [zeros(&IntegrandSpec::fig2(), 80), zeros(&IntegrandSpec::fig3(), 80), bessel] {
        for k in 0..16 {
            let t = k as f64 * PI / 8.0;
            assert!(count_in_sector(&rs, t, t + PI / 8.0) >= 1, "sector {k}");
        }
    }
}

#[test]
fn annulus_is_empty() {
    for spec in [IntegrandSpec::fig2(), IntegrandSpec::fig3()] {
        let curve = sample_limit_curve(&spec, DEFAULT_SAMPLES).unwrap();
        let c = spec.a.max(spec.b);
        let by_n: Vec<(usize, Vec<Complex64>)> = [40usize, 80, 160].iter().map(|&n| (n, zeros(&spec, n).roots)).collect();
        let strays = stray_scan(&by_n, &curve, 0.2, 0.1).unwrap();
        assert!(strays.is_empty(), "{strays:?}");
        for (_, roots) in &by_n {
            assert!(roots.iter().all(|z| z.norm() <= 1.2 / c));
        }
    }
}

#[test]
fn planted_cluster_is_found() {
    let curve = bessel_limit_curve(DEFAULT_SAMPLES).unwrap();
    let mut by_n = Vec::new();
    for n in [40usize, 80, 160] {
        let mut roots = aberth_roots(&bessel_section(Complex64::new(0.0, 0.0), n).unwrap().section).unwrap().roots;
        // -1.2i lies outside D(J) and its preimage 1.2 lies in E_{1,1}
        roots.push(Complex64::new(0.01 / n as f64, -1.2));
        by_n.push((n, roots));
    }
    let strays = stray_scan(&by_n, &curve, 0.1, 0.05).unwrap();
    assert_eq!(strays.len(), 1);
    assert_eq!(strays[0].track.len(), 3);
    assert_eq!(strays[0].in_e, Some(true));
    assert!(stray_scan(&by_n[..2], &curve, 0.1, 0.05).is_err());
}

#[test]
fn fig3_left_rate_has_no_log_term() {
    let spec = IntegrandSpec::fig3();
    let curve = sample_limit_curve(&spec, DEFAULT_SAMPLES).unwrap();
    let recs = records(&spec, &curve, &[40, 60, 80, 100]);
    let fit = rate_fit(&recs, &spec, Side::Left).unwrap();
    assert_eq!(fit.theoretical_slope, 0.0);
    assert!(fit.slope.abs() < 0.3, "{fit:?}");
    assert_eq!(fit.sample_count, 4);
}
