//! Moments `m_k = int_{-a}^{b} phi(t) t^k dt`, the function
//! `F(z) = int phi(t) e^{zt} dt`, the tail integral, and their leading-order
//! asymptotics.
//!
//! The weight is `phi(t) = (t+a)^mu (b-t)^nu g(t)` with `g` a polynomial.
//! Three independent routes to the moments are provided:
//!
//! * [`moment`]: graded composite quadrature in double precision;
//! * [`moment_closed_form`]: the binomial expansion in Beta functions,
//!   summed in multiprecision to absorb its cancellation;
//! * [`moment_ratios_mp`]: the three-term recurrence obtained by integrating
//!   by parts, used to build section coefficients to full working precision.

pub mod gauss_jacobi;
pub mod integrate;
pub mod watson;

use num_complex::Complex64;
use rug::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp;
use crate::specfun::{beta, complex_gamma, real_power};

pub use gauss_jacobi::{gauss_jacobi_rule, QuadratureRule};
pub use integrate::QuadResult;
pub use watson::{watson_check, WatsonProblem, WatsonRow, WatsonSide};

/// The data `(a, b, mu, nu, g)` defining `phi` and `F`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub a: f64,
    pub b: f64,
    pub mu: Complex64,
    pub nu: Complex64,
    /// Polynomial factor, lowest degree first.
    pub g: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl IntegrandSpec {
    pub fn new(a: f64, b: f64, mu: Complex64, nu: Complex64, g: Vec<Complex64>) -> Result<Self> {
        let s = IntegrandSpec { a, b, mu, nu, g };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return bad(format!("a must be finite and nonnegative, got {}", self.a));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return bad(format!("b must be finite and nonnegative, got {}", self.b));
        }
        if self.a + self.b <= 0.0 {
            return bad("a + b must be positive".into());
        }
        if !(self.mu.re > -1.0) || !self.mu.is_finite() {
            return bad(format!("Re(mu) must exceed -1, got mu = {}", self.mu));
        }
        if !(self.nu.re > -1.0) || !self.nu.is_finite() {
            return bad(format!("Re(nu) must exceed -1, got nu = {}", self.nu));
        }
        if self.g.is_empty() || self.g.iter().any(|v| !v.is_finite()) {
            return bad("g needs at least one finite coefficient".into());
        }
        if self.g_at(-self.a).norm() == 0.0 {
            return bad("g(-a) must be nonzero".into());
        }
        if self.g_at(self.b).norm() == 0.0 {
            return bad("g(b) must be nonzero".into());
        }
        Ok(())
    }

    /// `a = b = 1`, `mu = -1/2 + i`, `nu = 3/2`, `g = 1`.
    pub fn fig2() -> Self {
        IntegrandSpec { a: 1.0, b: 1.0, mu: c(-0.5, 1.0), nu: c(1.5, 0.0), g: vec![c(1.0, 0.0)] }
    }

    /// `a = 1`, `b = 21/20`, `mu = 1/2 - i`, `nu = i`, `g = 1`.
    pub fn fig3() -> Self {
        IntegrandSpec { a: 1.0, b: 1.05, mu: c(0.5, -1.0), nu: c(0.0, 1.0), g: vec![c(1.0, 0.0)] }
    }

    /// Poisson's integral for `J_alpha`: `a = b = 1`, `mu = nu = alpha - 1/2`.
    pub fn bessel(alpha: Complex64) -> Result<Self> {
        if !(alpha.re > -0.5) {
            return Err(Error::InvalidSpec(format!("Bessel order needs Re(alpha) > -1/2, got {alpha}")));
        }
        let e = alpha - 0.5;
        Self::new(1.0, 1.0, e, e, vec![c(1.0, 0.0)])
    }

    /// `1F1(1; bp; z) = (bp - 1) int_0^1 (1-t)^{bp-2} e^{zt} dt`.
    pub fn hyp1f1(bp: Complex64) -> Result<Self> {
        if !(bp.re > 1.0) {
            return Err(Error::InvalidSpec(format!("1F1 parameter needs Re(b) > 1, got {bp}")));
        }
        Self::new(0.0, 1.0, c(0.0, 0.0), bp - 2.0, vec![bp - 1.0])
    }

    pub fn length(&self) -> f64 {
        self.a + self.b
    }

    /// `c = max(a, b)`.
    pub fn c(&self) -> f64 {
        self.a.max(self.b)
    }

    pub fn g_at(&self, t: f64) -> Complex64 {
        self.g.iter().rev().fold(c(0.0, 0.0), |acc, &gi| acc * t + gi)
    }

    /// `f_1(0) = (a+b)^nu g(-a)`.
    pub fn f1_at_0(&self) -> Complex64 {
        real_power(self.length(), self.nu).unwrap() * self.g_at(-self.a)
    }

    /// `f_2(0) = (a+b)^mu g(b)`.
    pub fn f2_at_0(&self) -> Complex64 {
        real_power(self.length(), self.mu).unwrap() * self.g_at(self.b)
    }

    fn min_positive_endpoint(&self) -> f64 {
        match (self.a > 0.0, self.b > 0.0) {
            (true, true) => self.a.min(self.b),
            (true, false) => self.a,
            _ => self.b,
        }
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Complex64,
    pub est_abs_error: f64,
    pub converged: bool,
}

impl From<QuadResult> for Estimate {
    fn from(r: QuadResult) -> Self {
        Estimate { value: r.value, est_abs_error: r.abs_error, converged: r.converged }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub k: usize,
    pub value: Complex64,
    pub est_abs_error: f64,
    pub converged: bool,
}

fn quad_phi<G: Fn(f64) -> Complex64>(spec: &IntegrandSpec, g: G, rate: f64) -> Result<QuadResult> {
    spec.validate()?;
    integrate::integrate(spec.a, spec.b, spec.mu, spec.nu, |t| spec.g_at(t) * g(t), rate)
}

/// `m_k` by quadrature.
pub fn moment(spec: &IntegrandSpec, k: usize) -> Result<MomentValue> {
    let rate = k as f64 / spec.min_positive_endpoint();
    let r = quad_phi(spec, |t| c(t.powi(k as i32), 0.0), rate)?;
    Ok(MomentValue { k, value: r.value, est_abs_error: r.abs_error, converged: r.converged })
}

/// `int |phi(t)| dt`.
pub fn abs_phi_integral(spec: &IntegrandSpec) -> Result<f64> {
    spec.validate()?;
    let r = integrate::integrate(
        spec.a,
        spec.b,
        c(spec.mu.re, 0.0),
        c(spec.nu.re, 0.0),
        |t| c(spec.g_at(t).norm(), 0.0),
        1.0,
    )?;
    Ok(r.value.re)
}

/// `I_0 = int (t+a)^mu (b-t)^nu dt = (a+b)^{mu+nu+1} B(mu+1, nu+1)`.
pub fn base_integral(spec: &IntegrandSpec) -> Result<Complex64> {
    Ok(real_power(spec.length(), spec.mu + spec.nu + 1.0)? * beta(spec.mu + 1.0, spec.nu + 1.0)?)
}

/// Ratios `I_j / I_0`, `j = 0..=jmax`, for the pure weight (`g = 1`), from
/// `(mu+nu+2+j) I_{j+1} = [(mu+1) b - (nu+1) a + j (b-a)] I_j + j a b I_{j-1}`.
fn pure_ratios_mp(spec: &IntegrandSpec, jmax: usize, prec: u32) -> Vec<Complex> {
    let mu = mp::from_c64(spec.mu, prec);
    let nu = mp::from_c64(spec.nu, prec);
    let a = rug::Float::with_val(prec, spec.a);
    let b = rug::Float::with_val(prec, spec.b);
    let ab = rug::Float::with_val(prec, &a * &b);
    let bma = rug::Float::with_val(prec, &b - &a);
    // (mu+1) b - (nu+1) a
    let mut lin0 = Complex::with_val(prec, &mu + 1u32) * &b;
    lin0 -= Complex::with_val(prec, &nu + 1u32) * &a;
    let s0 = Complex::with_val(prec, &mu + &nu) + 2u32;

    let mut out = Vec::with_capacity(jmax + 1);
    out.push(Complex::with_val(prec, 1u32));
    if jmax == 0 {
        return out;
    }
    let mut prev = Complex::new(prec);
    for j in 0..jmax {
        let jf = j as u32;
        let lin = Complex::with_val(prec, &lin0 + rug::Float::with_val(prec, &bma * jf));
        let mut next = Complex::with_val(prec, &lin * &out[j]);
        if j > 0 {
            next += Complex::with_val(prec, &prev * rug::Float::with_val(prec, &ab * jf));
        }
        next /= Complex::with_val(prec, &s0 + jf);
        prev = out[j].clone();
        out.push(next);
    }
    out
}

/// `m_k / I_0` for `k = 0..=kmax` at `prec` bits, including the polynomial
/// factor `g`. The common factor `I_0` never enters, so the result carries
/// full working precision.
pub fn moment_ratios_mp(spec: &IntegrandSpec, kmax: usize, prec: u32) -> Vec<Complex> {
    let deg = spec.g.len() - 1;
    let pure = pure_ratios_mp(spec, kmax + deg, prec);
    let g: Vec<Complex> = spec.g.iter().map(|&v| mp::from_c64(v, prec)).collect();
    (0..=kmax)
        .map(|k| {
            let mut acc = Complex::new(prec);
            for (i, gi) in g.iter().enumerate() {
                if !gi.is_zero() {
                    acc += Complex::with_val(prec, gi * &pure[k + i]);
                }
            }
            acc
        })
        .collect()
}

/// `I_k / I_0` by the binomial Beta expansion
/// `sum_j C(k,j) (-a)^{k-j} (a+b)^j B(mu+j+1, nu+1) / B(mu+1, nu+1)`.
fn pure_closed_form_ratio(spec: &IntegrandSpec, k: usize) -> Complex {
    let len = spec.length();
    let growth = ((spec.a + len) / spec.c()).log2().max(0.0);
    let prec = 128 + (k as f64 * growth).ceil() as u32;
    let mu1 = mp::from_c64(spec.mu + 1.0, prec);
    let munu2 = mp::from_c64(spec.mu + spec.nu + 2.0, prec);
    let neg_a = rug::Float::with_val(prec, -spec.a);
    let l = rug::Float::with_val(prec, len);

    // beta ratios R_j, binomials and powers built incrementally
    let mut sum = Complex::new(prec);
    let mut ratio = Complex::with_val(prec, 1u32);
    let mut binom = rug::Float::with_val(prec, 1u32);
    let mut lpow = rug::Float::with_val(prec, 1u32);
    let apow: Vec<rug::Float> = {
        let mut v = Vec::with_capacity(k + 1);
        let mut p = rug::Float::with_val(prec, 1u32);
        for _ in 0..=k {
            v.push(p.clone());
            p *= &neg_a;
        }
        v
    };
    for j in 0..=k {
        if !apow[k - j].is_zero() {
            let coef = rug::Float::with_val(prec, &binom * &apow[k - j]) * &lpow;
            sum += Complex::with_val(prec, &ratio * &coef);
        }
        if j < k {
            let jf = j as u32;
            ratio *= Complex::with_val(prec, &mu1 + jf);
            ratio /= Complex::with_val(prec, &munu2 + jf);
            binom *= (k - j) as u32;
            binom /= jf + 1;
            lpow *= &l;
        }
    }
    sum
}

/// `m_k` from the binomial Beta expansion, independent of the quadrature
/// and of the recurrence.
pub fn moment_closed_form(spec: &IntegrandSpec, k: usize) -> Result<Complex64> {
    spec.validate()?;
    let i0 = base_integral(spec)?;
    let mut acc = c(0.0, 0.0);
    for (i, &gi) in spec.g.iter().enumerate() {
        if gi.norm() != 0.0 {
            acc += gi * mp::to_c64(&pure_closed_form_ratio(spec, k + i));
        }
    }
    Ok(i0 * acc)
}

/// Principal branch `w^p`.
fn principal_pow(w: Complex64, p: Complex64) -> Complex64 {
    (p * w.ln()).exp()
}

/// Two-term leading approximation of `m_n`.
pub fn moment_asymptotic(spec: &IntegrandSpec, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Domain("moment_asymptotic needs n >= 1".into()));
    }
    let nf = n as f64;
    let mut acc = c(0.0, 0.0);
    if spec.a > 0.0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign
            * spec.f1_at_0()
            * complex_gamma(spec.mu + 1.0)?
            * real_power(nf, -spec.mu - 1.0)?
            * real_power(spec.a, spec.mu + 1.0 + nf)?;
    }
    if spec.b > 0.0 {
        acc += spec.f2_at_0()
            * complex_gamma(spec.nu + 1.0)?
            * real_power(nf, -spec.nu - 1.0)?
            * real_power(spec.b, spec.nu + 1.0 + nf)?;
    }
    Ok(acc)
}

/// `F(z)` by quadrature.
#[allow(non_snake_case)]
pub fn evaluate_F(spec: &IntegrandSpec, z: Complex64) -> Result<Estimate> {
    Ok(quad_phi(spec, |t| (z * t).exp(), z.norm())?.into())
}

/// Leading-order approximation of `F(nz)` off the imaginary axis.
#[allow(non_snake_case)]
pub fn F_asymptotic(spec: &IntegrandSpec, n: usize, z: Complex64) -> Result<Complex64> {
    let nz = n as f64 * z;
    if z.re < 0.0 {
        Ok(spec.f1_at_0()
            * complex_gamma(spec.mu + 1.0)?
            * principal_pow(-nz, -spec.mu - 1.0)
            * (-spec.a * nz).exp())
    } else if z.re > 0.0 {
        Ok(spec.f2_at_0()
            * complex_gamma(spec.nu + 1.0)?
            * principal_pow(nz, -spec.nu - 1.0)
            * (spec.b * nz).exp())
    } else {
        Err(Error::Domain("F_asymptotic needs Re(z) != 0".into()))
    }
}

/// Distance from `z` to the slits `(-inf, -1/a]` and `[1/b, inf)`.
pub fn slit_distance(spec: &IntegrandSpec, z: Complex64) -> f64 {
    let mut d = f64::INFINITY;
    if spec.a > 0.0 {
        let end = -1.0 / spec.a;
        d = d.min(if z.re <= end { z.im.abs() } else { (z - end).norm() });
    }
    if spec.b > 0.0 {
        let end = 1.0 / spec.b;
        d = d.min(if z.re >= end { z.im.abs() } else { (z - end).norm() });
    }
    d
}

fn check_slits(spec: &IntegrandSpec, z: Complex64, margin: f64) -> Result<()> {
    if slit_distance(spec, z) < margin {
        return Err(Error::SlitProximity(format!("{z}")));
    }
    Ok(())
}

/// `int phi(t) t^{n+1} / (1 - z t) dt` by quadrature.
pub fn tail_integral(spec: &IntegrandSpec, z: Complex64, n: usize, margin: f64) -> Result<Estimate> {
    check_slits(spec, z, margin)?;
    // closest approach of the pole 1/z to the interval, in units of |1 - zt|
    let pole_rate = if z.norm() == 0.0 {
        0.0
    } else {
        let p = 1.0 / z;
        let tc = p.re.clamp(-spec.a, spec.b);
        let dist = (p - tc).norm();
        1.0 / dist
    };
    let rate = (n + 1) as f64 / spec.min_positive_endpoint() + pole_rate;
    let k = n as i32 + 1;
    Ok(quad_phi(spec, |t| t.powi(k) / (1.0 - z * t), rate)?.into())
}

/// Leading-order approximation of the tail integral.
pub fn tail_asymptotic(spec: &IntegrandSpec, z: Complex64, n: usize, margin: f64) -> Result<Complex64> {
    check_slits(spec, z, margin)?;
    if n == 0 {
        return Err(Error::Domain("tail_asymptotic needs n >= 1".into()));
    }
    let nf = n as f64;
    let mut acc = c(0.0, 0.0);
    if spec.a > 0.0 {
        let sign = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * spec.f1_at_0() * complex_gamma(spec.mu + 1.0)? / (1.0 + spec.a * z)
            * real_power(nf, -spec.mu - 1.0)?
            * real_power(spec.a, spec.mu + 2.0 + nf)?;
    }
    if spec.b > 0.0 {
        acc += spec.f2_at_0() * complex_gamma(spec.nu + 1.0)? / (1.0 - spec.b * z)
            * real_power(nf, -spec.nu - 1.0)?
            * real_power(spec.b, spec.nu + 2.0 + nf)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit() -> IntegrandSpec {
        IntegrandSpec::new(0.0, 1.0, c(0.0, 0.0), c(0.0, 0.0), vec![c(1.0, 0.0)]).unwrap()
    }

    fn arcsine() -> IntegrandSpec {
        IntegrandSpec::bessel(c(0.0, 0.0)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(IntegrandSpec::new(0.0, 0.0, c(0.0, 0.0), c(0.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        assert!(IntegrandSpec::new(1.0, 1.0, c(-1.0, 0.0), c(0.0, 0.0), vec![c(1.0, 0.0)]).is_err());
        // g(t) = 1 + t vanishes at -a = -1
        assert!(IntegrandSpec::new(1.0, 1.0, c(0.0, 0.0), c(0.0, 0.0), vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(IntegrandSpec::fig2().validate().is_ok());
        assert!(IntegrandSpec::fig3().validate().is_ok());
    }

    #[test]
    fn unit_interval_moments() {
        for k in 0..12 {
            let m = moment(&unit(), k).unwrap();
            assert!((m.value - 1.0 / (k as f64 + 1.0)).norm() < 1e-14);
            assert!((moment_closed_form(&unit(), k).unwrap() - 1.0 / (k as f64 + 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn arcsine_moments() {
        assert!((moment(&arcsine(), 0).unwrap().value - PI).norm() < 1e-13);
        assert!(moment(&arcsine(), 1).unwrap().value.norm() < 1e-14);
        assert!((moment_closed_form(&arcsine(), 0).unwrap() - PI).norm() < 1e-13);
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for spec in [IntegrandSpec::fig2(), IntegrandSpec::fig3(), arcsine()] {
            let i0 = base_integral(&spec).unwrap();
            let r = moment_ratios_mp(&spec, 60, 256);
            for k in [0usize, 1, 2, 7, 30, 60] {
                let want = moment_closed_form(&spec, k).unwrap();
                let got = i0 * mp::to_c64(&r[k]);
                assert!((got - want).norm() <= 1e-13 * want.norm().max(1e-300) + 1e-15, "k={k}");
            }
        }
    }

    #[test]
    fn f_at_zero_and_closed_form() {
        let s = unit();
        let f0 = evaluate_F(&s, c(0.0, 0.0)).unwrap().value;
        assert!((f0 - 1.0).norm() < 1e-14);
        let f2 = evaluate_F(&s, c(2.0, 0.0)).unwrap().value;
        assert!((f2 - (2f64.exp() - 1.0) / 2.0).norm() < 1e-13);
    }

    #[test]
    fn tail_at_zero_is_next_moment() {
        let s = IntegrandSpec::fig2();
        let t = tail_integral(&s, c(0.0, 0.0), 9, 0.1).unwrap().value;
        let m = moment_closed_form(&s, 10).unwrap();
        assert!((t - m).norm() < 1e-12 * m.norm());
    }

    #[test]
    fn slit_margin_enforced() {
        let s = IntegrandSpec::fig2();
        assert!(matches!(tail_integral(&s, c(1.02, 0.0), 10, 0.05), Err(Error::SlitProximity(_))));
        assert!(matches!(tail_asymptotic(&s, c(-3.0, 0.01), 10, 0.05), Err(Error::SlitProximity(_))));
        assert!(tail_integral(&s, c(0.5, 0.5), 10, 0.05).is_ok());
    }

    #[test]
    fn f_asymptotic_rejects_axis() {
        assert!(F_asymptotic(&arcsine(), 10, c(0.0, 1.0)).is_err());
    }
}
