//! Composite quadrature for `int_{-a}^{b} (t+a)^mu (b-t)^nu G(t) dt` with
//! complex endpoint exponents and a smooth (possibly oscillatory or
//! endpoint-concentrated) factor `G`.
//!
//! The interval is split at its midpoint. Each half is written in the
//! distance-to-endpoint variable and covered by dyadic panels that shrink
//! geometrically toward the endpoint. Panels carry Gauss–Legendre rules and
//! are subdivided so that `rate * width <= 2`, where `1/rate` is the length
//! scale on which `G` varies. The innermost panel uses the Gauss–Jacobi rule
//! for the real part of the exponent; when the exponent has an imaginary
//! part the grading continues until that panel's contribution is below
//! double precision, since `x^{i y}` oscillates without bound there.

use num_complex::Complex64;

use super::gauss_jacobi::cached_rule;
use crate::error::Result;

const BASE_NODES: usize = 10;
const MAX_DOUBLINGS: usize = 3;
const REL_TOL: f64 = 1e-13;
const L1_TOL: f64 = 1e-15;
const MAX_DEPTH: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub abs_error: f64,
    /// Quadrature estimate of the integral of the modulus.
    pub l1: f64,
    pub converged: bool,
}

fn cpow(x: f64, e: Complex64) -> Complex64 {
    if e.im == 0.0 {
        Complex64::new(x.powf(e.re), 0.0)
    } else {
        (e * x.ln()).exp()
    }
}

fn depth(e: Complex64, rate: f64, half: f64) -> usize {
    let resolve = (rate * half).max(1.0).log2().ceil() as usize + 4;
    let d = if e.im != 0.0 {
        resolve.max((56.0 / (e.re + 1.0)).ceil() as usize)
    } else {
        resolve
    };
    d.min(MAX_DEPTH)
}

/// One half-interval: `int_0^{half} x^e (len - x)^other G(t(x)) dx`.
#[allow(clippy::too_many_arguments)]
fn half_integral<G: Fn(f64) -> Complex64>(
    e: Complex64,
    other: Complex64,
    len: f64,
    half: f64,
    to_t: impl Fn(f64) -> f64,
    g: &G,
    rate: f64,
    nodes: usize,
) -> Result<(Complex64, f64)> {
    let j = depth(e, rate, half);
    let f = |x: f64| cpow(len - x, other) * g(to_t(x));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut l1 = 0.0;

    let x0 = half * 0.5f64.powi(j as i32);
    let gj = cached_rule(0.0, e.re, nodes)?;
    let scale = (0.5 * x0).powf(e.re + 1.0);
    for (u, w) in gj.nodes.iter().zip(&gj.weights) {
        let x = 0.5 * x0 * (1.0 + u);
        let osc = if e.im == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, e.im * x.ln()).exp()
        };
        let v = scale * w * osc * f(x);
        sum += v;
        l1 += v.norm();
    }

    let gl = cached_rule(0.0, 0.0, nodes)?;
    let mut lo = x0;
    for _ in 0..j {
        let hi = 2.0 * lo;
        let width = hi - lo;
        let pieces = ((rate * width / 2.0).ceil() as usize).max(1);
        let h = width / pieces as f64;
        for p in 0..pieces {
            let a = lo + p as f64 * h;
            let mid = a + 0.5 * h;
            for (u, w) in gl.nodes.iter().zip(&gl.weights) {
                let x = mid + 0.5 * h * u;
                let v = 0.5 * h * w * cpow(x, e) * f(x);
                sum += v;
                l1 += v.norm();
            }
        }
        lo = hi;
    }
    Ok((sum, l1))
}

fn integrate_at<G: Fn(f64) -> Complex64>(
    a: f64,
    b: f64,
    mu: Complex64,
    nu: Complex64,
    g: &G,
    rate: f64,
    nodes: usize,
) -> Result<(Complex64, f64)> {
    let len = a + b;
    let half = 0.5 * len;
    let (lv, ll) = half_integral(mu, nu, len, half, |s| s - a, g, rate, nodes)?;
    let (rv, rl) = half_integral(nu, mu, len, half, |r| b - r, g, rate, nodes)?;
    Ok((lv + rv, ll + rl))
}

/// Integrates `(t+a)^mu (b-t)^nu G(t)` over `[-a, b]`. `rate` is the inverse
/// length scale of `G` (for example `|z|` for `e^{zt}`, or `k / c` for `t^k`).
pub fn integrate<G: Fn(f64) -> Complex64>(
    a: f64,
    b: f64,
    mu: Complex64,
    nu: Complex64,
    g: G,
    rate: f64,
) -> Result<QuadResult> {
    let rate = rate.max(1.0 / (a + b));
    let mut nodes = BASE_NODES;
    let (mut prev, _) = integrate_at(a, b, mu, nu, &g, rate, nodes)?;
    let mut last = QuadResult { value: prev, abs_error: f64::INFINITY, l1: 0.0, converged: false };
    for _ in 0..MAX_DOUBLINGS {
        nodes *= 2;
        let (v, l1) = integrate_at(a, b, mu, nu, &g, rate, nodes)?;
        let err = (v - prev).norm();
        let converged = err <= REL_TOL * v.norm() + L1_TOL * l1;
        last = QuadResult { value: v, abs_error: err, l1, converged };
        if converged {
            break;
        }
        prev = v;
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn arcsine_weight() {
        let r = integrate(1.0, 1.0, c(-0.5, 0.0), c(-0.5, 0.0), |_| c(1.0, 0.0), 1.0).unwrap();
        assert!(r.converged);
        assert!((r.value - PI).norm() < 1e-13);
    }

    #[test]
    fn oscillatory_exponential() {
        // int_0^1 e^{zt} dt
        let z = c(0.3, 40.0);
        let r = integrate(0.0, 1.0, c(0.0, 0.0), c(0.0, 0.0), |t| (z * t).exp(), z.norm()).unwrap();
        let want = (z.exp() - 1.0) / z;
        assert!((r.value - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn imaginary_exponent_at_endpoint() {
        // int_0^1 s^{-1/2 + i} ds = 1 / (1/2 + i)
        let e = c(-0.5, 1.0);
        let r = integrate(0.0, 1.0, e, c(0.0, 0.0), |_| c(1.0, 0.0), 1.0).unwrap();
        let want = 1.0 / (e + 1.0);
        assert!((r.value - want).norm() < 1e-12, "{} vs {}", r.value, want);
    }
}
