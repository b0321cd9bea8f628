//! Normalized sections `s_n[F](nz) = sum_k (n^k m_k / k!) z^k` and the
//! Szegő comparison quantities for `s_n[exp]`.
//!
//! Coefficients are assembled in multiprecision from exact ratio
//! recurrences, then scaled by a power of two so the largest has modulus in
//! `[1, 2)`. The working precision is chosen from the dynamic range of the
//! coefficients, which governs the conditioning of the zeros.

use num_complex::Complex64;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{base_integral, moment_ratios_mp, IntegrandSpec};
use crate::mp;
use crate::specfun::{complex_gamma, ln_gamma_real, real_power};

/// Guard bits on top of the coefficient range.
pub const GUARD_BITS: u32 = 96;
/// Largest coefficient range representable after normalization.
const MAX_RANGE_BITS: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Integral,
    Exp,
    Hyp1F1 { b: Complex64 },
    /// `s_n[J_alpha](nz)` without the `z^alpha` factor.
    Bessel { alpha: Complex64 },
    /// The auxiliary `P_n` with `s_n[J_alpha](-inz) = 2^{-alpha} P_n(z^2)`.
    BesselAux { alpha: Complex64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionPolynomial {
    pub n: usize,
    /// Coefficient of `z^k`, divided by `2^scale_exponent`.
    pub coeffs: Vec<Complex64>,
    pub scale_exponent: i64,
    pub family: Family,
    #[serde(skip)]
    mp_coeffs: Vec<Complex>,
}

impl SectionPolynomial {
    /// Builds from unnormalized multiprecision coefficients.
    pub fn from_mp(n: usize, raw: Vec<Complex>, family: Family) -> Result<Self> {
        let logs: Vec<f64> = raw.iter().filter_map(mp::log2_abs).collect();
        if logs.is_empty() {
            return Err(Error::ZeroCoefficient("all section coefficients vanish".into()));
        }
        let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
        if hi - lo > MAX_RANGE_BITS {
            return Err(Error::Overflow((hi - lo).ceil() as i64));
        }
        let mut e = hi.floor() as i64;
        let mut coeffs: Vec<Complex64>;
        loop {
            coeffs = raw.iter().map(|c| mp::to_c64_scaled(c, -e as i32)).collect();
            let m = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if m >= 2.0 {
                e += 1;
            } else if m < 1.0 {
                e -= 1;
            } else {
                break;
            }
        }
        let mp_coeffs = raw.iter().map(|c| mp::scale_pow2(c, -e as i32)).collect();
        Ok(SectionPolynomial { n, coeffs, scale_exponent: e, family, mp_coeffs })
    }

    /// Normalized coefficients at working precision.
    pub fn mp_coeffs(&self) -> &[Complex] {
        &self.mp_coeffs
    }

    pub fn precision(&self) -> u32 {
        self.mp_coeffs[0].prec().0
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `log2` of the ratio between the largest and smallest nonzero
    /// coefficient moduli.
    pub fn log2_range(&self) -> f64 {
        log2_range(&self.mp_coeffs)
    }
}

fn log2_range(c: &[Complex]) -> f64 {
    let logs: Vec<f64> = c.iter().filter_map(mp::log2_abs).collect();
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    (hi - lo).max(0.0)
}

fn working_precision(range_bits: f64, guard: u32) -> u32 {
    guard + range_bits.ceil() as u32
}

/// Runs `build` at a generous trial precision, measures the coefficient
/// range, and rebuilds at the precision that range calls for.
fn build_adaptive(n: usize, build: impl Fn(u32) -> Vec<Complex>) -> Vec<Complex> {
    build_adaptive_guarded(n, GUARD_BITS, build)
}

fn build_adaptive_guarded(n: usize, guard: u32, build: impl Fn(u32) -> Vec<Complex>) -> Vec<Complex> {
    let trial = 128 + 4 * n as u32 + guard;
    let raw = build(trial);
    let prec = working_precision(log2_range(&raw), guard);
    if prec > trial {
        build(prec)
    } else {
        raw.into_iter()
            .map(|mut c| {
                c.set_prec(prec);
                c
            })
            .collect()
    }
}

/// `n^k / k!` for `k = 0..=n`.
fn exp_weights(n: usize, prec: u32) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = Complex::with_val(prec, 1u32);
    for k in 0..=n {
        out.push(t.clone());
        t *= n as u32;
        t /= (k + 1) as u32;
    }
    out
}

/// The section `s_n[F](nz)` of the function defined by `spec`.
pub fn build_section(spec: &IntegrandSpec, n: usize) -> Result<SectionPolynomial> {
    build_section_guarded(spec, n, GUARD_BITS)
}

/// [`build_section`] with `guard_bits` extra bits of working precision
/// beyond the coefficient range.
pub fn build_section_guarded(spec: &IntegrandSpec, n: usize, guard_bits: u32) -> Result<SectionPolynomial> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Domain("section degree must be at least 1".into()));
    }
    let i0 = base_integral(spec)?;
    let raw = build_adaptive_guarded(n, guard_bits, |prec| {
        let ratios = moment_ratios_mp(spec, n, prec);
        let w = exp_weights(n, prec);
        let i0 = mp::from_c64(i0, prec);
        ratios
            .iter()
            .zip(&w)
            .map(|(r, w)| Complex::with_val(prec, r * w) * &i0)
            .collect()
    });
    SectionPolynomial::from_mp(n, raw, Family::Integral)
}

/// `s_n[exp](nz) = sum n^k z^k / k!`.
pub fn exp_section(n: usize) -> Result<SectionPolynomial> {
    exp_section_guarded(n, GUARD_BITS)
}

pub fn exp_section_guarded(n: usize, guard_bits: u32) -> Result<SectionPolynomial> {
    if n == 0 {
        return Err(Error::Domain("section degree must be at least 1".into()));
    }
    let raw = build_adaptive_guarded(n, guard_bits, |prec| exp_weights(n, prec));
    SectionPolynomial::from_mp(n, raw, Family::Exp)
}

/// Section of `1F1(1; b; nz) = sum n^k z^k / (b)_k`.
pub fn hyp1f1_section(bparam: Complex64, n: usize) -> Result<SectionPolynomial> {
    if !(bparam.re > 1.0) {
        return Err(Error::Domain(format!("1F1 parameter needs Re(b) > 1, got {bparam}")));
    }
    if n == 0 {
        return Err(Error::Domain("section degree must be at least 1".into()));
    }
    let raw = build_adaptive(n, |prec| {
        let b = mp::from_c64(bparam, prec);
        let mut out = Vec::with_capacity(n + 1);
        let mut t = Complex::with_val(prec, 1u32);
        for k in 0..=n {
            out.push(t.clone());
            t *= n as u32;
            t /= Complex::with_val(prec, &b + k as u32);
        }
        out
    });
    SectionPolynomial::from_mp(n, raw, Family::Hyp1F1 { b: bparam })
}

#[derive(Debug, Clone, Serialize)]
pub struct BesselSectionPair {
    pub alpha: Complex64,
    pub section: SectionPolynomial,
    pub pn: SectionPolynomial,
}

/// `s_n[J_alpha](nz)` (even powers only) and the auxiliary `P_n`.
pub fn bessel_section(alpha: Complex64, n: usize) -> Result<BesselSectionPair> {
    if !(alpha.re > -0.5) {
        return Err(Error::Domain(format!("Bessel order needs Re(alpha) > -1/2, got {alpha}")));
    }
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!("Bessel sections need even n >= 2, got {n}")));
    }
    let half = n / 2;
    let inv_gamma = 1.0 / complex_gamma(alpha + 1.0)?;
    let pref = real_power(2.0, -alpha)? * inv_gamma;
    // t_k = n^{2k} / (4^k k! (alpha+1)_k)
    let terms = |prec: u32| -> Vec<Complex> {
        let a1 = mp::from_c64(alpha + 1.0, prec);
        let n2 = rug::Float::with_val(prec, n as f64 * n as f64);
        let mut out = Vec::with_capacity(half + 1);
        let mut t = Complex::with_val(prec, 1u32);
        for k in 0..=half {
            out.push(t.clone());
            t *= &n2;
            t /= 4 * (k as u32 + 1);
            t /= Complex::with_val(prec, &a1 + k as u32);
        }
        out
    };
    let sec_raw = build_adaptive(n, |prec| {
        let pref = mp::from_c64(pref, prec);
        let t = terms(prec);
        let mut out = vec![Complex::new(prec); n + 1];
        for (k, tk) in t.iter().enumerate() {
            let mut v = Complex::with_val(prec, tk * &pref);
            if k % 2 == 1 {
                v = -v;
            }
            out[2 * k] = v;
        }
        out
    });
    let pn_raw = build_adaptive(n, |prec| {
        let g = mp::from_c64(inv_gamma, prec);
        terms(prec).into_iter().map(|t| t * &g).collect()
    });
    Ok(BesselSectionPair {
        alpha,
        section: SectionPolynomial::from_mp(n, sec_raw, Family::Bessel { alpha })?,
        pn: SectionPolynomial::from_mp(half, pn_raw, Family::BesselAux { alpha })?,
    })
}

/// Value of the (unnormalized) polynomial at `z`, computed by Horner's rule
/// on the working-precision coefficients and rounded once.
pub fn eval_section(p: &SectionPolynomial, z: Complex64) -> Complex64 {
    let v = mp::horner(&p.mp_coeffs, &mp::from_c64(z, p.precision()));
    mp::to_c64_scaled(&v, p.scale_exponent as i32)
}

/// Value of the normalized polynomial (coefficients as stored).
pub fn eval_normalized(p: &SectionPolynomial, z: Complex64) -> Complex64 {
    mp::to_c64(&mp::horner(&p.mp_coeffs, &mp::from_c64(z, p.precision())))
}

/// Principal `ln` of `g_n(z) = 1 - e^{-nz} s_n[exp](nz)`, which equals the
/// regularized incomplete gamma function `P(n+1, nz)`.
fn ln_gn_exact(n: usize, z: Complex64) -> Complex64 {
    let nf = n as f64;
    let w = nf * z;
    let lw = w.ln();
    if z.norm() < 1.0 {
        // P(n+1, w) = w^{n+1} e^{-w} / (n+1)! * sum_j w^j / ((n+2)...(n+1+j))
        let lead = (nf + 1.0) * lw - w - ln_gamma_real(nf + 2.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut j = 0.0;
        loop {
            j += 1.0;
            term *= w / (nf + 1.0 + j);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() || j > 100_000.0 {
                break;
            }
        }
        lead + sum.ln()
    } else {
        // Q(n+1, w) = w^n e^{-w} / n! * sum_{j<=n} prod_{i<j} (n-i)/w
        let lead = nf * lw - w - ln_gamma_real(nf + 1.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for i in 0..n {
            term *= (nf - i as f64) / w;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        let lq = lead + sum.ln();
        if lq.re > 30.0 {
            // g = -Q (1 - 1/Q)
            lq + Complex64::new(0.0, std::f64::consts::PI) + (1.0 - (-lq).exp()).ln()
        } else {
            (1.0 - lq.exp()).ln()
        }
    }
}

fn ln_gn_szego(n: usize, z: Complex64) -> Complex64 {
    let nf = n as f64;
    let lz = z.ln();
    nf * (lz + 1.0 - z) - 0.5 * (2.0 * std::f64::consts::PI * nf).ln() + lz - (1.0 - z).ln()
}

/// `g_n(z) = 1 - e^{-nz} s_n[exp](nz)`.
pub fn gn_exact(n: usize, z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    ln_gn_exact(n, z).exp()
}

/// `(z e^{1-z})^n / sqrt(2 pi n) * z / (1 - z)`.
pub fn gn_szego(n: usize, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("Szegő approximation is singular at z = 1".into()));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(ln_gn_szego(n, z).exp())
}

/// `eps_n(z) = 1 - g_n(z) / gn_szego(n, z)`, computed from logarithms so it
/// stays finite where either factor overflows.
pub fn szego_epsilon(n: usize, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(1.0, 0.0) || z.norm() == 0.0 {
        return Err(Error::Domain(format!("eps_n undefined at z = {z}")));
    }
    Ok(1.0 - (ln_gn_exact(n, z) - ln_gn_szego(n, z)).exp())
}

/// `rho_n = |m_n / n!|^{-1/n}`.
pub fn rho_n(spec: &IntegrandSpec, n: usize) -> Result<f64> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Domain("rho_n needs n >= 1".into()));
    }
    let prec = 128 + 2 * n as u32;
    let r = moment_ratios_mp(spec, n, prec);
    let l2 = mp::log2_abs(&r[n])
        .ok_or_else(|| Error::ZeroCoefficient(format!("moment m_{n} vanishes")))?;
    let ln_m = l2 * std::f64::consts::LN_2 + base_integral(spec)?.norm().ln();
    Ok((-(ln_m - ln_gamma_real(n as f64 + 1.0)) / n as f64).exp())
}
