//! Aberth–Ehrlich simultaneous iteration.
//!
//! Polynomial values and Newton ratios are computed at the polynomial's
//! working precision; the pairwise sums `sum 1/(z_i - z_j)` only perturb the
//! correction to second order and are accumulated in `f64`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::Complex;

use crate::mp;

const MAX_SWEEPS: usize = 200;
const STOP_TOL: f64 = 1e-13;
const PHASE_OFFSET: f64 = 0.7;
const POLISH_STEPS: usize = 3;
const MERGE_LOG2: f64 = 1.0;

/// Upper convex hull of `(k, log2|c_k|)` over the nonzero coefficients.
fn newton_polygon(logs: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in logs {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or below the chord
            let cross = (x2 as f64 - x1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Drops hull vertices between edges whose radii differ by less than a
/// factor `2^MERGE_LOG2`, so near-smooth polygons give a few wide circles
/// instead of one circle per coefficient.
fn merge_close_edges(mut hull: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    let radius = |a: (usize, f64), b: (usize, f64)| (a.1 - b.1) / (b.0 - a.0) as f64;
    loop {
        let mut best: Option<(usize, f64)> = None;
        for v in 1..hull.len().saturating_sub(1) {
            let d = (radius(hull[v - 1], hull[v]) - radius(hull[v], hull[v + 1])).abs();
            if d < MERGE_LOG2 && best.map_or(true, |b| d < b.1) {
                best = Some((v, d));
            }
        }
        match best {
            Some((v, _)) => {
                hull.remove(v);
            }
            None => return hull,
        }
    }
}

/// Initial approximations on circles whose radii come from the Newton
/// polygon of the coefficients.
pub fn initial_guesses(coeffs: &[Complex]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let logs: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(k, c)| mp::log2_abs(c).map(|l| (k, l)))
        .collect();
    let hull = merge_close_edges(newton_polygon(&logs));
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let m = j - i;
        let r = ((li - lj) / m as f64).exp2();
        for q in 0..m {
            let th = 2.0 * PI * q as f64 / m as f64 + 2.0 * PI * i as f64 / n as f64 + PHASE_OFFSET;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct AberthOutput {
    pub roots: Vec<Complex>,
    pub iterations: usize,
    pub converged: bool,
}

/// All roots of `sum coeffs[k] z^k`. Requires `coeffs[0] != 0` and a nonzero
/// leading coefficient.
pub fn aberth_mp(coeffs: &[Complex]) -> AberthOutput {
    let n = coeffs.len() - 1;
    let prec = coeffs[0].prec().0;
    if n == 1 {
        let r = -Complex::with_val(prec, &coeffs[0] / &coeffs[1]);
        return AberthOutput { roots: vec![r], iterations: 0, converged: true };
    }
    let mut zf = initial_guesses(coeffs);
    let mut z: Vec<Complex> = zf.iter().map(|&v| mp::from_c64(v, prec)).collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = mp::horner_with_derivative(coeffs, &z[i]);
            if p.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = if dp.is_zero() {
                Complex64::new(1e-8 * (1.0 + zf[i].norm()), 0.0)
            } else {
                mp::to_c64(&Complex::with_val(prec, &p / &dp))
            };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = zf[i] - zf[j];
                    if d.norm() != 0.0 {
                        s += 1.0 / d;
                    }
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[i] -= mp::from_c64(w, 64);
            zf[i] = mp::to_c64(&z[i]);
            if w.norm() <= STOP_TOL * (1.0 + zf[i].norm()) {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..POLISH_STEPS {
            let (p, dp) = mp::horner_with_derivative(coeffs, zi);
            if p.is_zero() || dp.is_zero() {
                break;
            }
            *zi -= Complex::with_val(prec, &p / &dp);
        }
    }
    AberthOutput { roots: z, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_monomial_chain() {
        let pts = vec![(0, 0.0), (1, 5.0), (2, 6.0), (3, 0.0)];
        let h = newton_polygon(&pts);
        assert_eq!(h.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let pts = vec![(0, 0.0), (1, -5.0), (2, 0.0)];
        let h = newton_polygon(&pts);
        assert_eq!(h.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn guesses_count_matches_degree() {
        let c: Vec<Complex> = [1.0, 0.0, 3.0, 0.0, 0.0, 2.0]
            .iter()
            .map(|&x| Complex::with_val(64, (x, 0.0)))
            .collect();
        assert_eq!(initial_guesses(&c).len(), 5);
    }
}
