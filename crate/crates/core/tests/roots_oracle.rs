use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Complex;
use sectionzeros::moments::IntegrandSpec;
use sectionzeros::mp;
use sectionzeros::roots::{
    aberth_roots, aberth_roots_mp, companion_roots, companion_roots_mp, count_in_sector, multiset_distance,
    vieta_errors,
};
use sectionzeros::sections::{bessel_section, build_section, exp_section, Family, SectionPolynomial};

const AGREE: f64 = 1e-8;

fn poly_from(c: &[Complex64], prec: u32) -> SectionPolynomial {
    let raw = c.iter().map(|&v| mp::from_c64(v, prec)).collect();
    SectionPolynomial::from_mp(c.len() - 1, raw, Family::Integral).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let degree = rng.gen_range(2..=30);
    (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[test]
fn random_polynomials_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    for case in 0..50 {
        let p = poly_from(&random_poly(&mut rng), 160);
        let a = aberth_roots(&p).unwrap();
        let b = companion_roots(&p).unwrap();
        assert!(a.converged, "case {case}");
        let d = multiset_distance(&a.roots, &b.roots);
        assert!(d < AGREE, "case {case} degree {} distance {d:e}", p.degree());
    }
}

#[test]
fn sections_agree_up_to_degree_60() {
    let mut polys: Vec<(String, SectionPolynomial)> = Vec::new();
    for n in [10, 20, 40, 60] {
        polys.push((format!("exp{n}"), exp_section(n).unwrap()));
    }
    for alpha in [0.0, 2.5] {
        for n in [20, 40, 60] {
            let pair = bessel_section(Complex64::new(alpha, 0.0), n).unwrap();
            polys.push((format!("bessel{alpha}/{n}"), pair.section));
            polys.push((format!("aux{alpha}/{n}"), pair.pn));
        }
    }
    polys.push(("fig2/40".into(), build_section(&IntegrandSpec::fig2(), 40).unwrap()));
    for (name, p) in &polys {
        let a = aberth_roots(p).unwrap();
        let b = companion_roots(p).unwrap();
        let d = multiset_distance(&a.roots, &b.roots);
        assert!(d < AGREE, "{name}: {d:e}");
    }
}

#[test]
fn wilkinson_product() {
    // prod_{k=1}^{20} (z - k/10), expanded exactly
    let prec = 256;
    let mut c = vec![Complex::with_val(prec, 1u32)];
    for k in 1..=20u32 {
        let r = Complex::with_val(prec, k) / 10u32;
        let mut next = vec![Complex::new(prec); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= Complex::with_val(prec, ci * &r);
        }
        c = next;
    }
    let want: Vec<Complex64> = (1..=20).map(|k| Complex64::new(k as f64 / 10.0, 0.0)).collect();
    for rs in [aberth_roots_mp(&c).unwrap(), companion_roots_mp(&c).unwrap()] {
        assert!(multiset_distance(&rs.roots, &want) < 1e-9);
    }
}

#[test]
fn vieta_identities() {
    let mut polys = vec![exp_section(200).unwrap(), build_section(&IntegrandSpec::fig3(), 120).unwrap()];
    polys.push(bessel_section(Complex64::new(0.0, 0.0), 200).unwrap().section);
    for p in &polys {
        let rs = aberth_roots(p).unwrap();
        assert!(rs.converged);
        let (s, q) = vieta_errors(p.mp_coeffs(), &rs.roots);
        assert!(s < 1e-8 && q < 1e-8, "degree {}: {s:e} {q:e}", p.degree());
    }
}

#[test]
fn bessel_zeros_are_symmetric() {
    use std::f64::consts::PI;
    let p = bessel_section(Complex64::new(0.0, 0.0), 80).unwrap().section;
    let rs = aberth_roots(&p).unwrap();
    assert_eq!(rs.roots.len(), 80);
    // real coefficients and even powers: symmetric under z -> -z and z -> conj z
    for (t1, t2) in [(0.1, 1.0), (1.0, PI / 2.0), (0.2, PI - 0.2)] {
        let n = count_in_sector(&rs, t1, t2);
        assert_eq!(n, count_in_sector(&rs, t1 + PI, t2 + PI));
        assert_eq!(n, count_in_sector(&rs, 2.0 * PI - t2, 2.0 * PI - t1));
    }
    let right = rs.roots.iter().filter(|z| z.re > 0.0).count();
    let left = rs.roots.iter().filter(|z| z.re < 0.0).count();
    assert_eq!(right, left);
}

#[test]
fn repeated_calls_are_identical() {
    let p = build_section(&IntegrandSpec::fig2(), 60).unwrap();
    assert_eq!(aberth_roots(&p).unwrap(), aberth_roots(&p).unwrap());
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn even_polynomials_give_exact_pairs(c in prop::collection::vec(coeff(), 2..10)) {
        prop_assume!(c[0].norm() > 1e-3 && c[c.len() - 1].norm() > 1e-3);
        let mut full = Vec::new();
        for (i, &v) in c.iter().enumerate() {
            if i > 0 {
                full.push(Complex64::new(0.0, 0.0));
            }
            full.push(v);
        }
        let rs = aberth_roots(&poly_from(&full, 128)).unwrap();
        let neg: Vec<Complex64> = rs.roots.iter().map(|z| -z).collect();
        prop_assert_eq!(multiset_distance(&rs.roots, &neg), 0.0);
    }

    #[test]
    fn power_of_two_scaling(c in prop::collection::vec(coeff(), 3..16), e in -6i32..6) {
        prop_assume!(c[0].norm() > 1e-3 && c[c.len() - 1].norm() > 1e-3);
        // q(z) = p(z / 2^e) has roots 2^e times those of p
        let s = 2f64.powi(e);
        let scaled: Vec<Complex64> = c.iter().enumerate().map(|(k, &v)| v / s.powi(k as i32)).collect();
        let a = aberth_roots(&poly_from(&c, 128)).unwrap();
        let b = aberth_roots(&poly_from(&scaled, 128)).unwrap();
        let moved: Vec<Complex64> = a.roots.iter().map(|z| z * s).collect();
        let scale = moved.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(multiset_distance(&moved, &b.roots) < 1e-10 * scale);
    }
}
