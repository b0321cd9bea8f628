//! The regions `U`, `V_{a,b}`, `E_{a,b}` and the limit curves
//! `D_{a,b} ∪ D_imag`, `D(J)` and the Szegő curve, sampled as polylines.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::IntegrandSpec;

/// Default number of samples on a limit curve.
pub const DEFAULT_SAMPLES: usize = 2048;
const MIN_SAMPLES: usize = 16;
const BRACKET_LO: f64 = 1e-12;

/// `ln|z e^{1-z}| > 0`, or `Re z < 1`.
pub fn in_region_u(z: Complex64) -> bool {
    z.re < 1.0 || z.norm().ln() + 1.0 - z.re > 0.0
}

pub fn in_region_v(z: Complex64, a: f64, b: f64) -> bool {
    in_region_u(-a * z) && in_region_u(b * z)
}

pub fn in_region_e(z: Complex64, a: f64, b: f64) -> bool {
    z.norm() <= 2.0 / a.max(b) && !in_region_v(z, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveKind {
    /// `D_{a,b} ∪ D_imag`
    Limit { a: f64, b: f64 },
    /// `|z e^{1-z}| = 1`, `|z| <= 1`
    Szego,
}

impl CurveKind {
    pub fn c(&self) -> f64 {
        match *self {
            CurveKind::Limit { a, b } => a.max(b),
            CurveKind::Szego => 1.0,
        }
    }

    /// `ln` of the modulus whose level set `= 0` is the curve, on the side
    /// selected by the sign of `Re z`.
    pub fn log_modulus(&self, z: Complex64) -> f64 {
        match *self {
            CurveKind::Limit { a, b } => {
                let c = a.max(b);
                let lz = (c * z.norm()).ln() + 1.0;
                if z.re < 0.0 {
                    lz + a * z.re
                } else {
                    lz - b * z.re
                }
            }
            CurveKind::Szego => z.norm().ln() + 1.0 - z.re,
        }
    }

    /// `|c z e^{1+az}|` for `Re z < 0`, `|c z e^{1-bz}|` otherwise.
    pub fn modulus(&self, z: Complex64) -> f64 {
        self.log_modulus(z).exp()
    }
}

/// The unique `r` in `(0, 1/c]` with `r e^{i theta}` on the curve.
pub fn curve_radius(theta: f64, kind: CurveKind) -> Result<f64> {
    let dir = Complex64::from_polar(1.0, theta);
    let f = |r: f64| kind.log_modulus(r * dir);
    let mut lo = BRACKET_LO;
    let mut hi = 1.0 / kind.c();
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo < 0.0 && fhi >= -1e-15) {
        return Err(Error::NoConvergence("curve radius bracket"));
    }
    if fhi <= 0.0 {
        return Ok(hi);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitCurve {
    pub kind: CurveKind,
    /// Multiplier taking the base curve to the one drawn (`1` or `-i`).
    pub rotation: Complex64,
    /// Samples at angles `2 pi j / M` of the base curve, rotated.
    pub samples: Vec<Complex64>,
    /// Endpoints of the rotated `D_imag` segment.
    pub imag_segment: Option<(Complex64, Complex64)>,
    /// The polyline joins its last sample back to the first.
    pub closed: bool,
}

fn sample(kind: CurveKind, m: usize, rotation: Complex64) -> Result<LimitCurve> {
    if m < MIN_SAMPLES {
        return Err(Error::Domain(format!("curve needs at least {MIN_SAMPLES} samples, got {m}")));
    }
    let samples = (0..m)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / m as f64;
            curve_radius(th, kind).map(|r| rotation * Complex64::from_polar(r, th))
        })
        .collect::<Result<Vec<_>>>()?;
    let imag_segment = match kind {
        CurveKind::Limit { .. } => {
            let h = 1.0 / (E * kind.c());
            Some((rotation * Complex64::new(0.0, -h), rotation * Complex64::new(0.0, h)))
        }
        CurveKind::Szego => None,
    };
    Ok(LimitCurve { kind, rotation, samples, imag_segment, closed: true })
}

pub fn sample_limit_curve(spec: &IntegrandSpec, m: usize) -> Result<LimitCurve> {
    spec.validate()?;
    sample(CurveKind::Limit { a: spec.a, b: spec.b }, m, Complex64::new(1.0, 0.0))
}

/// `D(J) = -i (D_{1,1} ∪ D_imag)`.
pub fn bessel_limit_curve(m: usize) -> Result<LimitCurve> {
    sample(CurveKind::Limit { a: 1.0, b: 1.0 }, m, Complex64::new(0.0, -1.0))
}

pub fn szego_curve(m: usize) -> Result<LimitCurve> {
    sample(CurveKind::Szego, m, Complex64::new(1.0, 0.0))
}

fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

impl LimitCurve {
    pub fn c(&self) -> f64 {
        self.kind.c()
    }

    /// The point in the frame of the unrotated curve.
    pub fn to_base(&self, z: Complex64) -> Complex64 {
        z / self.rotation
    }

    /// Longest polyline edge; bounds the chord error of [`Self::distance`].
    pub fn max_spacing(&self) -> f64 {
        self.edges().map(|(p, q)| (q - p).norm()).fold(0.0, f64::max)
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.samples.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.samples[i], self.samples[(i + 1) % n]))
    }

    /// Distance from `z` to the polyline and the axis segment.
    pub fn distance(&self, z: Complex64) -> f64 {
        let mut d = self
            .edges()
            .map(|(p, q)| segment_distance(z, p, q))
            .fold(f64::INFINITY, f64::min);
        if let Some((p, q)) = self.imag_segment {
            d = d.min(segment_distance(z, p, q));
        }
        d
    }
}

pub fn distance_to_curve(z: Complex64, curve: &LimitCurve) -> f64 {
    curve.distance(z)
}
