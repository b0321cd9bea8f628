//! Small helpers around `rug` multiprecision values.

use num_complex::Complex64;
use rug::{Complex, Float};

pub type MpComplex = Complex;

pub fn from_c64(z: Complex64, prec: u32) -> Complex {
    Complex::with_val(prec, (z.re, z.im))
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

pub fn zero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// `log2 |z|`, or `None` for zero. Never overflows.
pub fn log2_abs(z: &Complex) -> Option<f64> {
    if z.is_zero() {
        return None;
    }
    let (m, e) = abs(z).to_f64_exp();
    Some(m.log2() + e as f64)
}

/// `z * 2^shift`, exact.
pub fn scale_pow2(z: &Complex, shift: i32) -> Complex {
    let mut w = z.clone();
    if shift >= 0 {
        w <<= shift as u32;
    } else {
        w >>= (-shift) as u32;
    }
    w
}

/// `z * 2^shift` rounded to `f64`, with the shift applied before rounding so
/// that values beyond the `f64` range are handled.
pub fn to_c64_scaled(z: &Complex, shift: i32) -> Complex64 {
    to_c64(&scale_pow2(z, shift))
}

/// Horner evaluation of `p` and `p'` at `z` (coefficients lowest degree first).
pub fn horner_with_derivative(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec().0;
    let n = coeffs.len();
    let mut p = Complex::with_val(prec, &coeffs[n - 1]);
    let mut dp = Complex::new(prec);
    for c in coeffs[..n - 1].iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

pub fn horner(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let n = coeffs.len();
    let mut p = Complex::with_val(prec, &coeffs[n - 1]);
    for c in coeffs[..n - 1].iter().rev() {
        p *= z;
        p += c;
    }
    p
}
