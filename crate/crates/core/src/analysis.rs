//! Curve deviation of section zeros, admissible indices, rate fits and the
//! scan for limit points off the curve.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{in_region_e, in_region_v, CurveKind, LimitCurve};
use crate::error::{Error, Result};
use crate::moments::IntegrandSpec;
use crate::specfun::{complex_gamma, real_power};

/// Zeros farther than this from the curve are left out of rate statistics.
pub const FAR_FROM_CURVE: f64 = 0.25;

/// `Re mu` if `a > b`, `Re nu` if `a < b`, the smaller of the two if `a = b`.
pub fn xi(spec: &IntegrandSpec) -> f64 {
    if spec.a > spec.b {
        spec.mu.re
    } else if spec.a < spec.b {
        spec.nu.re
    } else {
        spec.mu.re.min(spec.nu.re)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Axis,
    Excluded,
}

impl Side {
    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Axis => "axis",
            Side::Excluded => "excluded",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "axis" => Ok(Side::Axis),
            "excluded" => Ok(Side::Excluded),
            _ => Err(Error::InvalidSpec(format!("unknown side {s:?}"))),
        }
    }
}

/// Coefficient of `log N / N` in the deviation on each side:
/// `xi - Re mu + 1/2` (left) and `xi - Re nu + 1/2` (right).
pub fn theoretical_slope(spec: &IntegrandSpec, side: Side) -> Result<f64> {
    match side {
        Side::Left => Ok(xi(spec) - spec.mu.re + 0.5),
        Side::Right => Ok(xi(spec) - spec.nu.re + 0.5),
        _ => Err(Error::Domain(format!("no rate on the {} side", side.as_str()))),
    }
}

/// `(-1)^N f_1(0) Gamma(mu+1) + f_2(0) Gamma(nu+1) a^{nu-mu} N^{mu-nu}`.
pub fn ncond(spec: &IntegrandSpec, n: usize) -> Result<Complex64> {
    let first = spec.f1_at_0() * complex_gamma(spec.mu + 1.0)?;
    let second = spec.f2_at_0()
        * complex_gamma(spec.nu + 1.0)?
        * real_power(spec.a, spec.nu - spec.mu)?
        * real_power(n as f64, spec.mu - spec.nu)?;
    Ok(if n % 2 == 0 { first + second } else { second - first })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleIndices {
    pub indices: Vec<usize>,
    pub epsilon: f64,
    /// `(N, Ncond(N))` for every candidate, when the rule is active.
    pub ncond_values: Vec<(usize, Complex64)>,
    pub rule_active: bool,
}

/// The rule only applies when `a = b` and `Re mu = Re nu`.
pub fn ncond_rule_active(spec: &IntegrandSpec) -> bool {
    spec.a == spec.b && spec.mu.re == spec.nu.re
}

pub fn default_ncond_epsilon(spec: &IntegrandSpec) -> Result<f64> {
    Ok(0.25 * (spec.f1_at_0() * complex_gamma(spec.mu + 1.0)?).norm())
}

pub fn admissible_indices(
    spec: &IntegrandSpec,
    n_min: usize,
    n_max: usize,
    epsilon: Option<f64>,
) -> Result<AdmissibleIndices> {
    spec.validate()?;
    if n_min < 2 || n_max < n_min {
        return Err(Error::Domain(format!("need 2 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    let epsilon = match epsilon {
        Some(e) if e >= 0.0 => e,
        Some(e) => return Err(Error::Domain(format!("epsilon must be nonnegative, got {e}"))),
        None => default_ncond_epsilon(spec)?,
    };
    let rule_active = ncond_rule_active(spec);
    if !rule_active {
        return Ok(AdmissibleIndices { indices: (n_min..=n_max).collect(), epsilon, ncond_values: vec![], rule_active });
    }
    let mut indices = Vec::new();
    let mut ncond_values = Vec::new();
    for n in n_min..=n_max {
        let v = ncond(spec, n)?;
        if v.norm() >= epsilon {
            indices.push(n);
        }
        ncond_values.push((n, v));
    }
    Ok(AdmissibleIndices { indices, epsilon, ncond_values, rule_active })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub n: usize,
    /// The zero as drawn (for Bessel sections, in the `D(J)` frame).
    pub z: Complex64,
    pub side: Side,
    /// `|c w e^{1+aw}| - 1` or `|c w e^{1-bw}| - 1` by the sign of `Re w`, with
    /// `w` the zero in the frame of `D_{a,b}`.
    pub deviation: f64,
    /// `slope * log N / N` for the side given by the sign of `Re w`.
    pub predicted_deviation: f64,
    pub dist_to_curve: f64,
    pub excluded_reason: Option<String>,
}

/// Default margin around `±1/c` and the imaginary axis.
pub fn default_delta(curve: &LimitCurve) -> f64 {
    0.1 / curve.c()
}

/// Sorts each zero by side and measures its deviation from the curve.
///
/// Zeros within `delta` of `±1/c`, outside `V_{a,b}` or farther than
/// [`FAR_FROM_CURVE`] from the curve are excluded; those within `delta` of the
/// imaginary axis are put on the axis. Both carry an `excluded_reason`.
pub fn classify_zeros(
    roots: &[Complex64],
    spec: &IntegrandSpec,
    n: usize,
    curve: &LimitCurve,
    delta: f64,
) -> Result<Vec<ZeroRecord>> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let (a, b) = (spec.a, spec.b);
    let c = a.max(b);
    let kind = CurveKind::Limit { a, b };
    let log_term = (n as f64).ln() / n as f64;
    let left = theoretical_slope(spec, Side::Left)? * log_term;
    let right = theoretical_slope(spec, Side::Right)? * log_term;
    Ok(roots
        .iter()
        .map(|&z| {
            let w = curve.to_base(z);
            let dist = curve.distance(z);
            let reason = if (w - 1.0 / c).norm() < delta || (w + 1.0 / c).norm() < delta {
                Some("near-endpoint")
            } else if !in_region_v(w, a, b) {
                Some("outside-v")
            } else if dist > FAR_FROM_CURVE {
                Some("far-from-curve")
            } else if w.re.abs() < delta {
                Some("axis")
            } else {
                None
            };
            let side = match reason {
                Some("axis") => Side::Axis,
                Some(_) => Side::Excluded,
                None if w.re < 0.0 => Side::Left,
                None => Side::Right,
            };
            ZeroRecord {
                n,
                z,
                side,
                deviation: kind.modulus(w) - 1.0,
                predicted_deviation: if w.re < 0.0 { left } else { right },
                dist_to_curve: dist,
                excluded_reason: reason.map(str::to_string),
            }
        })
        .collect())
}

/// Largest distance to the curve, leaving out zeros inside the optional
/// ball `(center, radius)`.
pub fn maxdist(points: &[Complex64], curve: &LimitCurve, exclude: Option<(Complex64, f64)>) -> Result<f64> {
    let kept: Vec<f64> = points
        .iter()
        .filter(|&&z| exclude.map_or(true, |(c, r)| (z - c).norm() >= r))
        .map(|&z| curve.distance(z))
        .collect();
    if kept.is_empty() {
        return Err(Error::InsufficientData("maxdist over an empty set".into()));
    }
    Ok(kept.into_iter().fold(0.0, f64::max))
}

pub fn maxdist_records(records: &[ZeroRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InsufficientData("maxdist over an empty set".into()));
    }
    Ok(records.iter().map(|r| r.dist_to_curve).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub side: Side,
    /// Fit of `N * mean deviation = slope * log N + intercept`.
    pub slope: f64,
    pub intercept: f64,
    pub theoretical_slope: f64,
    /// RMS residual of `N * mean deviation`.
    pub residual_rms: f64,
    pub sample_count: usize,
    /// `(N, mean deviation, zeros used)`
    pub per_n: Vec<(usize, f64, usize)>,
}

pub const MIN_FIT_INDICES: usize = 4;

/// Least-squares fit of the per-`N` mean deviation on one side against
/// `log N / N`, with an `O(1/N)` term.
pub fn rate_fit(records: &[ZeroRecord], spec: &IntegrandSpec, side: Side) -> Result<RateFit> {
    let theoretical = theoretical_slope(spec, side)?;
    let mut groups: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.side == side) {
        let e = groups.entry(r.n).or_insert((0.0, 0));
        e.0 += r.deviation;
        e.1 += 1;
    }
    let per_n: Vec<(usize, f64, usize)> = groups.into_iter().map(|(n, (s, k))| (n, s / k as f64, k)).collect();
    if per_n.len() < MIN_FIT_INDICES {
        return Err(Error::InsufficientData(format!(
            "rate fit needs zeros from at least {MIN_FIT_INDICES} indices on the {} side, got {}",
            side.as_str(),
            per_n.len()
        )));
    }
    let xs: Vec<f64> = per_n.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = per_n.iter().map(|p| p.0 as f64 * p.1).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual_rms = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(RateFit { side, slope, intercept, theoretical_slope: theoretical, residual_rms, sample_count: per_n.len(), per_n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrayCandidate {
    /// Position at the largest index.
    pub point: Complex64,
    /// `(N, zero)` along the chain.
    pub track: Vec<(usize, Complex64)>,
    pub dist_to_curve: f64,
    /// Membership of the last point in `E_{a,b}` (in the frame of the
    /// unrotated curve); `None` for the Szegő curve.
    pub in_e: Option<bool>,
}

pub const MIN_STRAY_INDICES: usize = 3;

/// Chains of off-curve zeros that persist across successive indices.
///
/// Zeros farther than `tol_curve` from the curve are linked from one index to
/// the next when within `tol_cluster` of each other; chains that reach the
/// largest index through at least [`MIN_STRAY_INDICES`] indices are reported.
pub fn stray_scan(
    roots_by_n: &[(usize, Vec<Complex64>)],
    curve: &LimitCurve,
    tol_curve: f64,
    tol_cluster: f64,
) -> Result<Vec<StrayCandidate>> {
    let mut by_n: Vec<&(usize, Vec<Complex64>)> = roots_by_n.iter().collect();
    by_n.sort_by_key(|p| p.0);
    by_n.dedup_by_key(|p| p.0);
    if by_n.len() < MIN_STRAY_INDICES {
        return Err(Error::InsufficientData(format!(
            "stray scan needs roots from at least {MIN_STRAY_INDICES} indices, got {}",
            by_n.len()
        )));
    }
    let mut active: Vec<Vec<(usize, Complex64)>> = Vec::new();
    for (n, roots) in by_n {
        let off: Vec<Complex64> = roots.iter().copied().filter(|&z| curve.distance(z) > tol_curve).collect();
        let mut taken = vec![false; off.len()];
        let mut next = Vec::new();
        for chain in active {
            let last = chain.last().unwrap().1;
            let best = off
                .iter()
                .enumerate()
                .filter(|(j, _)| !taken[*j])
                .map(|(j, &z)| (j, (z - last).norm()))
                .filter(|p| p.1 <= tol_cluster)
                .min_by(|x, y| x.1.total_cmp(&y.1));
            if let Some((j, _)) = best {
                taken[j] = true;
                let mut chain = chain;
                chain.push((*n, off[j]));
                next.push(chain);
            }
        }
        for (j, &z) in off.iter().enumerate() {
            if !taken[j] {
                next.push(vec![(*n, z)]);
            }
        }
        active = next;
    }
    Ok(active
        .into_iter()
        .filter(|chain| chain.len() >= MIN_STRAY_INDICES)
        .map(|track| {
            let point = track.last().unwrap().1;
            let in_e = match curve.kind {
                CurveKind::Limit { a, b } => Some(in_region_e(curve.to_base(point), a, b)),
                CurveKind::Szego => None,
            };
            StrayCandidate { point, dist_to_curve: curve.distance(point), track, in_e }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{sample_limit_curve, DEFAULT_SAMPLES};

    #[test]
    fn xi_cases() {
        let f2 = IntegrandSpec::fig2();
        assert_eq!(xi(&f2), -0.5);
        assert_eq!(theoretical_slope(&f2, Side::Right).unwrap(), -1.5);
        let f3 = IntegrandSpec::fig3();
        assert_eq!(xi(&f3), 0.0);
        assert_eq!(theoretical_slope(&f3, Side::Left).unwrap(), 0.0);
        let mut s = IntegrandSpec::fig3();
        s.b = 0.5;
        assert_eq!(xi(&s), s.mu.re);
    }

    #[test]
    fn on_curve_zero_has_no_deviation() {
        let spec = IntegrandSpec::fig2();
        let curve = sample_limit_curve(&spec, DEFAULT_SAMPLES).unwrap();
        let z = curve.samples[900];
        let r = classify_zeros(&[z], &spec, 80, &curve, default_delta(&curve)).unwrap();
        assert!(r[0].deviation.abs() < 1e-12);
        assert_eq!(r[0].side, Side::Left);
        assert_eq!(r[0].excluded_reason, None);
    }

    #[test]
    fn exclusion_reasons() {
        let spec = IntegrandSpec::fig2();
        let curve = sample_limit_curve(&spec, DEFAULT_SAMPLES).unwrap();
        let zs = [
            Complex64::new(0.97, 0.0),
            Complex64::new(0.01, 0.3),
            Complex64::new(1.5, 0.0),
            Complex64::new(-0.3, 0.1),
        ];
        let r = classify_zeros(&zs, &spec, 80, &curve, 0.1).unwrap();
        assert_eq!(r[0].excluded_reason.as_deref(), Some("near-endpoint"));
        assert_eq!(r[1].side, Side::Axis);
        assert_eq!(r[2].excluded_reason.as_deref(), Some("outside-v"));
        assert_eq!(r[3].excluded_reason.as_deref(), Some("far-from-curve"));
        assert!(classify_zeros(&zs, &spec, 80, &curve, 0.0).is_err());
    }

    #[test]
    fn synthetic_rate_is_recovered() {
        let spec = IntegrandSpec::fig2();
        let s = -1.5;
        let records: Vec<ZeroRecord> = [40usize, 60, 80, 100, 120]
            .iter()
            .map(|&n| ZeroRecord {
                n,
                z: Complex64::new(0.5, 0.5),
                side: Side::Right,
                deviation: s * (n as f64).ln() / n as f64,
                predicted_deviation: 0.0,
                dist_to_curve: 0.0,
                excluded_reason: None,
            })
            .collect();
        let fit = rate_fit(&records, &spec, Side::Right).unwrap();
        assert!((fit.slope - s).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-11);
        assert_eq!(fit.theoretical_slope, -1.5);
        assert!(rate_fit(&records[..3], &spec, Side::Right).is_err());
        assert!(rate_fit(&records, &spec, Side::Left).is_err());
    }

    #[test]
    fn maxdist_needs_points() {
        let curve = sample_limit_curve(&IntegrandSpec::fig2(), 256).unwrap();
        assert!(maxdist(&[], &curve, None).is_err());
        let d = maxdist(&[Complex64::new(2.0, 0.0)], &curve, None).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert!(maxdist(&[Complex64::new(2.0, 0.0)], &curve, Some((Complex64::new(2.0, 0.0), 0.5))).is_err());
    }
}
