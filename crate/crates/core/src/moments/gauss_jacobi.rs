//! Gauss–Jacobi rules by the Golub–Welsch construction.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::specfun::ln_gamma_real;

/// Nodes and weights for `int_{-1}^{1} (1-x)^alpha (1+x)^beta f(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Symmetric tridiagonal QL with implicit shifts. `d` holds the diagonal,
/// `e` the subdiagonal (`e[n-1]` is scratch). On exit `d` holds the
/// eigenvalues in ascending order and `z` has been multiplied by the
/// eigenvector matrix; starting from `z = e_1` this yields the first
/// components of the normalized eigenvectors.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    const MAX_ITER: usize = 60;
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= f64::EPSILON * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iter == MAX_ITER {
                return Err(Error::NoConvergence("tridiagonal QL eigensolver"));
            }
            iter += 1;
            let mut p = d[l];
            let mut g = (d[l + 1] - p) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - p + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            p = 0.0;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                if g.abs() <= f.abs() {
                    c = g / f;
                    r = c.hypot(1.0);
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = s.hypot(1.0);
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let ds: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let zs: Vec<f64> = idx.iter().map(|&i| z[i]).collect();
    d.copy_from_slice(&ds);
    z.copy_from_slice(&zs);
    Ok(())
}

/// Gauss–Jacobi rule with `m` nodes, exact for polynomials of degree
/// `2m - 1` against `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, m: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}"
        )));
    }
    if m == 0 {
        return Err(Error::Domain("quadrature rule needs at least one node".into()));
    }
    let ab = alpha + beta;
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m];
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (k, dk) in diag.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        *dk = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for k in 1..m {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let b2 = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k - 1] = b2.sqrt();
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma_real(alpha + 1.0)
        + ln_gamma_real(beta + 1.0)
        - ln_gamma_real(ab + 2.0);
    let mu0 = ln_mu0.exp();
    let mut z = vec![0.0; m];
    z[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut z)?;
    let weights = z.iter().map(|v| mu0 * v * v).collect();
    Ok(QuadratureRule { alpha, beta, nodes: diag, weights })
}

type RuleKey = (u64, u64, usize);

fn cache() -> &'static RwLock<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<RwLock<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Memoized [`gauss_jacobi_rule`].
pub fn cached_rule(alpha: f64, beta: f64, m: usize) -> Result<Arc<QuadratureRule>> {
    let key = (alpha.to_bits(), beta.to_bits(), m);
    if let Some(r) = cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(r));
    }
    let rule = Arc::new(gauss_jacobi_rule(alpha, beta, m)?);
    let mut w = cache().write().unwrap();
    Ok(Arc::clone(w.entry(key).or_insert(rule)))
}
