use num_complex::Complex64;
use rug::Complex;
use sectionzeros::moments::IntegrandSpec;
use sectionzeros::mp;
use sectionzeros::roots::{aberth_roots, multiset_distance};
use sectionzeros::sections::{bessel_section, build_section, eval_section};
use sectionzeros::specfun::{complex_gamma, real_power};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `sum_{k <= n/2} (-1)^k (nz/2)^{2k} / (k! Gamma(k+alpha+1))`, term by term.
fn direct_series(alpha: Complex64, n: usize, z: Complex64) -> Complex64 {
    let prec = 256;
    let half = mp::from_c64(n as f64 * z / 2.0, prec);
    let h2 = Complex::with_val(prec, &half * &half);
    let mut term = mp::from_c64(1.0 / complex_gamma(alpha + 1.0).unwrap(), prec);
    let mut sum = term.clone();
    for k in 1..=n / 2 {
        term *= &h2;
        term = -term;
        term /= k as u32;
        term /= mp::from_c64(alpha + k as f64, prec);
        sum += &term;
    }
    mp::to_c64(&sum)
}

#[test]
fn section_matches_direct_series() {
    for alpha in [c(0.0, 0.0), c(2.5, 0.0), c(1.0, 0.5)] {
        let pair = bessel_section(alpha, 40).unwrap();
        for z in [c(0.0, 0.5), c(0.3, 0.2), c(-0.7, 0.1)] {
            // the section carries the factor 2^{-alpha} from (z/2)^alpha
            let want = real_power(2.0, -alpha).unwrap() * direct_series(alpha, 40, z);
            let got = eval_section(&pair.section, z);
            assert!((got - want).norm() < 1e-12 * want.norm(), "{alpha} {z}");
        }
    }
}

#[test]
fn auxiliary_identity() {
    for alpha in [c(0.0, 0.0), c(1.0, 0.0)] {
        let pair = bessel_section(alpha, 60).unwrap();
        let two = real_power(2.0, -alpha).unwrap();
        for z in [c(0.4, 0.1), c(-0.2, 0.6), c(0.8, -0.3)] {
            let lhs = eval_section(&pair.section, c(0.0, -1.0) * z);
            let rhs = two * eval_section(&pair.pn, z * z);
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm(), "{alpha} {z}");
        }
    }
}

#[test]
fn zeros_are_rotated_integral_section_zeros() {
    // J_alpha(z) / z^alpha is proportional to F(iz) for the Bessel integrand
    for alpha in [c(0.0, 0.0), c(2.5, 0.0)] {
        let spec = IntegrandSpec::bessel(alpha).unwrap();
        let w = aberth_roots(&build_section(&spec, 40).unwrap()).unwrap().roots;
        let z = aberth_roots(&bessel_section(alpha, 40).unwrap().section).unwrap().roots;
        let rotated: Vec<Complex64> = w.iter().map(|w| c(0.0, -1.0) * w).collect();
        assert!(multiset_distance(&rotated, &z) < 1e-10);
    }
}

#[test]
fn enestrom_kakeya_bound() {
    for alpha in [0.0, 1.0, 2.5] {
        for n in (2..=40).step_by(2).chain([80, 120, 160, 200]) {
            let pn = bessel_section(c(alpha, 0.0), n).unwrap().pn;
            let bound = 1.0 + 2.0 * alpha / n as f64;
            let rs = aberth_roots(&pn).unwrap();
            for w in &rs.roots {
                assert!(w.norm() <= bound * (1.0 + 1e-12), "alpha={alpha} n={n} |w|={}", w.norm());
            }
        }
    }
}
