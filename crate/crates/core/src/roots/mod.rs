//! Zeros of section polynomials.

pub mod aberth;
pub mod companion;

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp;
use crate::sections::SectionPolynomial;

/// Largest degree accepted by [`companion_roots`].
pub const COMPANION_MAX_DEGREE: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(z)| / (|p'(z)| (1 + |z|))` at each root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Coefficients with the leading zeros dropped and the number of zero
/// roots split off.
fn strip(coeffs: &[Complex]) -> Result<(usize, Vec<Complex>)> {
    let hi = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .ok_or_else(|| Error::ZeroCoefficient("polynomial is identically zero".into()))?;
    let lo = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    Ok((lo, coeffs[lo..=hi].to_vec()))
}

fn is_even(coeffs: &[Complex]) -> bool {
    coeffs.len() % 2 == 1 && coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
}

fn residual(coeffs: &[Complex], z: &Complex) -> f64 {
    let (p, dp) = mp::horner_with_derivative(coeffs, z);
    if p.is_zero() {
        return 0.0;
    }
    let lp = mp::log2_abs(&p).unwrap();
    let ld = match mp::log2_abs(&dp) {
        Some(v) => v,
        None => return f64::INFINITY,
    };
    (lp - ld).exp2() / (1.0 + mp::to_c64(z).norm())
}

fn arg_2pi(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn finish(coeffs: &[Complex], zeros_at_origin: usize, roots: Vec<Complex>, iterations: usize, converged: bool) -> RootSet {
    let mut pairs: Vec<(Complex64, f64)> = roots
        .iter()
        .map(|z| (mp::to_c64(z), residual(coeffs, z)))
        .collect();
    pairs.extend(std::iter::repeat((Complex64::new(0.0, 0.0), 0.0)).take(zeros_at_origin));
    pairs.sort_by(|a, b| {
        arg_2pi(a.0)
            .total_cmp(&arg_2pi(b.0))
            .then(a.0.norm().total_cmp(&b.0.norm()))
    });
    RootSet {
        roots: pairs.iter().map(|p| p.0).collect(),
        residuals: pairs.iter().map(|p| p.1).collect(),
        iterations,
        converged,
    }
}

/// Roots by Aberth–Ehrlich iteration at working precision.
pub fn aberth_roots(p: &SectionPolynomial) -> Result<RootSet> {
    aberth_roots_mp(p.mp_coeffs())
}

pub fn aberth_roots_mp(coeffs: &[Complex]) -> Result<RootSet> {
    let (zeros, c) = strip(coeffs)?;
    if c.len() == 1 {
        return Ok(finish(&c, zeros, vec![], 0, true));
    }
    let prec = c[0].prec().0;
    if is_even(&c) {
        let w: Vec<Complex> = c.iter().step_by(2).cloned().collect();
        let out = aberth::aberth_mp(&w);
        let mut roots = Vec::with_capacity(2 * out.roots.len());
        for wr in &out.roots {
            let s = Complex::with_val(prec, wr.sqrt_ref());
            roots.push(-s.clone());
            roots.push(s);
        }
        return Ok(finish(&c, zeros, roots, out.iterations, out.converged));
    }
    let out = aberth::aberth_mp(&c);
    Ok(finish(&c, zeros, out.roots, out.iterations, out.converged))
}

/// Roots as eigenvalues of the balanced companion matrix.
pub fn companion_roots(p: &SectionPolynomial) -> Result<RootSet> {
    companion_roots_mp(p.mp_coeffs())
}

pub fn companion_roots_mp(coeffs: &[Complex]) -> Result<RootSet> {
    let (zeros, c) = strip(coeffs)?;
    let degree = c.len() - 1;
    if degree > COMPANION_MAX_DEGREE {
        return Err(Error::Domain(format!(
            "companion oracle limited to degree {COMPANION_MAX_DEGREE}, got {degree}"
        )));
    }
    if degree == 0 {
        return Ok(finish(&c, zeros, vec![], 0, true));
    }
    let eigs = companion::companion_eigenvalues(&c)?;
    Ok(finish(&c, zeros, eigs, 0, true))
}

/// Number of roots with argument (taken in `[0, 2 pi)`) in `[theta1, theta2]`.
pub fn count_in_sector(rs: &RootSet, theta1: f64, theta2: f64) -> usize {
    let width = theta2 - theta1;
    rs.roots
        .iter()
        .filter(|&&z| {
            if width >= 2.0 * PI {
                return true;
            }
            let d = (arg_2pi(z) - theta1).rem_euclid(2.0 * PI);
            d <= width
        })
        .count()
}

/// Largest distance in a greedy nearest-neighbour matching of two root
/// multisets, or infinity if their sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &z in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &w)| (j, (z - w).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Relative errors of the Vieta identities `sum z = -c_{n-1}/c_n` and
/// `prod z = (-1)^n c_0 / c_n`. The sum is measured against `sum |z|` so
/// that polynomials whose roots sum to zero are handled.
pub fn vieta_errors(coeffs: &[Complex], roots: &[Complex64]) -> (f64, f64) {
    let n = roots.len();
    let prec = coeffs[0].prec().0.max(128);
    let lead = Complex::with_val(prec, &coeffs[n]);
    let target_sum = mp::to_c64(&(-Complex::with_val(prec, &coeffs[n - 1] / &lead)));
    let sum: Complex64 = roots.iter().sum();
    let scale: f64 = roots.iter().map(|z| z.norm()).sum::<f64>().max(target_sum.norm());
    let sum_err = (sum - target_sum).norm() / scale;

    let mut prod = Complex::with_val(prec, 1u32);
    for z in roots {
        prod *= mp::from_c64(*z, prec);
    }
    let mut target = Complex::with_val(prec, &coeffs[0] / &lead);
    if n % 2 == 1 {
        target = -target;
    }
    let diff = Complex::with_val(prec, &prod - &target);
    let prod_err = match (mp::log2_abs(&diff), mp::log2_abs(&target)) {
        (None, _) => 0.0,
        (Some(d), Some(t)) => (d - t).exp2(),
        (Some(_), None) => f64::INFINITY,
    };
    (sum_err, prod_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sections::{exp_section, Family};

    fn poly(c: &[Complex64]) -> SectionPolynomial {
        let raw = c.iter().map(|&v| mp::from_c64(v, 160)).collect();
        SectionPolynomial::from_mp(c.len() - 1, raw, Family::Integral).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_squared_plus_one() {
        let p = poly(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        for rs in [aberth_roots(&p).unwrap(), companion_roots(&p).unwrap()] {
            assert!(multiset_distance(&rs.roots, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-15);
        }
    }

    #[test]
    fn degree_one() {
        let rs = aberth_roots(&exp_section(1).unwrap()).unwrap();
        assert_eq!(rs.roots, vec![c(-1.0, 0.0)]);
    }

    #[test]
    fn quadratic_factors() {
        // (z-2)(z+3) = z^2 + z - 6
        let p = poly(&[c(-6.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let rs = companion_roots(&p).unwrap();
        assert!(multiset_distance(&rs.roots, &[c(2.0, 0.0), c(-3.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn zero_roots_split_off() {
        let p = poly(&[c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        let rs = aberth_roots(&p).unwrap();
        assert!(multiset_distance(&rs.roots, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]) < 1e-15);
    }

    #[test]
    fn sectors() {
        let rs = RootSet {
            roots: vec![c(0.0, 1.0), c(0.0, -1.0)],
            residuals: vec![0.0; 2],
            iterations: 0,
            converged: true,
        };
        assert_eq!(count_in_sector(&rs, 0.0, PI), 1);
        assert_eq!(count_in_sector(&rs, 0.0, 2.0 * PI), 2);
        assert_eq!(count_in_sector(&rs, -PI / 4.0, PI / 4.0), 0);
        assert_eq!(count_in_sector(&rs, 1.4 * PI, 1.6 * PI), 1);
    }

    #[test]
    fn companion_rejects_large_degree() {
        assert!(companion_roots(&exp_section(61).unwrap()).is_err());
    }
}
