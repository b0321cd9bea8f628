//! Complex special functions used throughout the crate.
//!
//! * [`complex_gamma`] and [`ln_gamma`]: Lanczos approximation (g = 607/128,
//!   15 terms) with the reflection formula for `Re z < 1/2`.
//! * [`complex_erfc`]: Maclaurin series near the imaginary axis, Laplace
//!   continued fraction elsewhere in the right half-plane, and the reflection
//!   `erfc(-z) = 2 - erfc(z)` for the left half-plane.
//! * [`first_erfc_zero_upper`]: grid scan plus Newton iteration.
//! * [`real_power`]: `x^w` for real `x > 0` via the real logarithm.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Largest real part for which the Maclaurin series of erf is used in the
/// right half-plane. Beyond it the continued fraction converges quickly and
/// the series would cancel against the leading 1.
const ERF_SERIES_MAX_RE: f64 = 1.0;
/// Below this modulus the series is used regardless of the real part.
const ERF_SERIES_RADIUS: f64 = 4.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `(sin(pi x), cos(pi x))` with the argument reduced exactly, so values near
/// integers keep full relative accuracy.
fn sin_cos_pi(x: f64) -> (f64, f64) {
    let n = x.round();
    let f = x - n;
    let (s, c) = (PI * f).sin_cos();
    if (n as i64).rem_euclid(2) == 0 {
        (s, c)
    } else {
        (-s, -c)
    }
}

fn sin_pi(z: Complex64) -> Complex64 {
    let (s, c) = sin_cos_pi(z.re);
    let py = PI * z.im;
    Complex64::new(s * py.cosh(), c * py.sinh())
}

/// `ln Gamma(z)` for `Re z >= 1/2` (a logarithm, not necessarily the
/// principal branch of log-gamma).
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

/// A logarithm of `Gamma(z)`: `exp(ln_gamma(z)) == Gamma(z)`. The imaginary
/// part is only defined modulo `2 pi`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z.re));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_lanczos(1.0 - z))
    }
}

/// `ln Gamma(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= 0.5 {
        ln_gamma_lanczos(Complex64::new(x, 0.0)).re
    } else {
        (PI / (sin_cos_pi(x).0)).ln() - ln_gamma_lanczos(Complex64::new(1.0 - x, 0.0)).re
    }
}

/// The complex gamma function.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z.re));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z).exp())
    } else {
        Ok(PI / (sin_pi(z) * ln_gamma_lanczos(1.0 - z).exp()))
    }
}

/// The Euler Beta function `Gamma(p) Gamma(q) / Gamma(p + q)`.
pub fn beta(p: Complex64, q: Complex64) -> Result<Complex64> {
    Ok((ln_gamma(p)? + ln_gamma(q)? - ln_gamma(p + q)?).exp())
}

/// `x^w = exp(w ln x)` for real `x > 0`.
pub fn real_power(x: f64, w: Complex64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("real_power base must be positive, got {x}")));
    }
    Ok((w * x.ln()).exp())
}

fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -z2 / n;
        let contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() && n > 3.0 {
            break;
        }
        if n > 4000.0 {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Laplace continued fraction, valid for `Re z > 0`, evaluated with the
/// modified Lentz algorithm.
fn erfc_continued_fraction(z: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for k in 1..20_000 {
        let a = 0.5 * k as f64;
        d = z + a * d;
        if d.norm() == 0.0 {
            d = Complex64::new(TINY, 0.0);
        }
        d = d.inv();
        c = z + a / c;
        if c.norm() == 0.0 {
            c = Complex64::new(TINY, 0.0);
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / (f * PI.sqrt())
}

fn erfc_right_half(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r < ERF_SERIES_RADIUS && z.re < 2.0 * ERF_SERIES_MAX_RE || z.re < ERF_SERIES_MAX_RE {
        Complex64::new(1.0, 0.0) - erf_series(z)
    } else {
        erfc_continued_fraction(z)
    }
}

/// The complementary error function `erfc(z) = (2/sqrt(pi)) int_z^inf e^{-t^2} dt`.
pub fn complex_erfc(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        2.0 - erfc_right_half(-z)
    } else {
        erfc_right_half(z)
    }
}

/// The zero of `erfc` nearest the origin in the upper half-plane, together
/// with the constant `Re(t1) + Im(t1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErfcZeroResult {
    pub t1: Complex64,
    pub cvw_constant: f64,
    pub residual: f64,
}

fn newton_erfc(seed: Complex64) -> Option<Complex64> {
    let mut z = seed;
    for _ in 0..60 {
        let f = complex_erfc(z);
        let df = -FRAC_2_SQRT_PI * (-z * z).exp();
        if df.norm() == 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        z -= step;
        if !z.is_finite() || z.norm() > 20.0 {
            return None;
        }
        if step.norm() < 1e-15 * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    None
}

/// Scans `Re in [-4, 0]`, `Im in [0, 4]` with step 1/4, runs Newton from each
/// grid point and keeps the converged zero with positive imaginary part that
/// is closest to the origin.
pub fn first_erfc_zero_upper() -> Result<ErfcZeroResult> {
    let mut best: Option<Complex64> = None;
    for i in 0..=16 {
        for j in 0..=16 {
            let seed = Complex64::new(-4.0 + 0.25 * i as f64, 0.25 * j as f64);
            let Some(z) = newton_erfc(seed) else { continue };
            if z.im <= 0.0 || complex_erfc(z).norm() > 1e-10 {
                continue;
            }
            if best.map_or(true, |b| z.norm() < b.norm()) {
                best = Some(z);
            }
        }
    }
    let t1 = best.ok_or(Error::NoConvergence("erfc zero Newton iteration"))?;
    Ok(ErfcZeroResult {
        t1,
        cvw_constant: t1.re + t1.im,
        residual: complex_erfc(t1).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_special_values() {
        assert!(rel(complex_gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(complex_gamma(c(6.0, 0.0)).unwrap(), c(120.0, 0.0)) < 1e-13);
        assert!(rel(complex_gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
    }

    #[test]
    fn gamma_poles() {
        for k in 0..5 {
            assert_eq!(complex_gamma(c(-(k as f64), 0.0)), Err(Error::Pole(-(k as f64))));
        }
        assert!(complex_gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn real_power_basics() {
        assert_eq!(real_power(1.0, c(3.7, -2.0)).unwrap(), c(1.0, 0.0));
        assert!(rel(real_power(4.0, c(0.5, 0.0)).unwrap(), c(2.0, 0.0)) < 1e-15);
        assert!((real_power(2.0, c(0.0, 1.0)).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(real_power(0.0, c(1.0, 0.0)).is_err());
        assert!(real_power(-1.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn erfc_simple_values() {
        assert_eq!(complex_erfc(c(0.0, 0.0)), c(1.0, 0.0));
        let z = c(0.7, 0.3);
        let s = complex_erfc(z) + complex_erfc(-z);
        assert!((s - 2.0).norm() < 1e-14);
    }

    #[test]
    fn gamma_reference_values() {
        let table = [
            (c(3.5, -2.0), c(-1.2371865633661036378, -1.2899550031953227671)),
            (c(-0.5, 1.5), c(-0.13920273326162969236, -0.056553073037431998148)),
            (c(0.25, 0.5), c(0.51552449013506909704, -1.3073259266318253913)),
            (c(4.2, 7.1), c(0.038664479129885028531, -0.044705529463513399688)),
            (c(-2.5, 0.3), c(-0.61382299743774149045, -0.21123261493704177661)),
            (c(1e-3, 1e-3), c(499.42377338913425254, -499.99901275699936157)),
        ];
        for (z, want) in table {
            let got = complex_gamma(z).unwrap();
            assert!(rel(got, want) < 1e-13, "{z}: {got} vs {want}");
            assert!(rel(ln_gamma(z).unwrap().exp(), want) < 1e-13);
        }
    }

    #[test]
    fn first_zero_reference() {
        let r = first_erfc_zero_upper().unwrap();
        assert!((r.t1 - c(-1.3548101281120062489, 1.9914668428338795773)).norm() < 1e-12);
        assert!((r.cvw_constant - 0.63665671472187332838).abs() < 1e-12);
        assert!(r.residual < 1e-13);
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -5..5 {
            assert_eq!(sin_pi(c(k as f64, 0.0)).re, 0.0);
        }
    }
}
