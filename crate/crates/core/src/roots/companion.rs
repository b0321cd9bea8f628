//! Eigenvalues of the balanced companion matrix by complex shifted QR, at
//! the polynomial's working precision.

use rug::{Complex, Float};

use crate::error::{Error, Result};

type Matrix = Vec<Vec<Complex>>;

fn l1(z: &Complex) -> f64 {
    z.real().to_f64().abs() + z.imag().to_f64().abs()
}

fn companion(coeffs: &[Complex]) -> Matrix {
    let n = coeffs.len() - 1;
    let prec = coeffs[0].prec().0;
    let lead = &coeffs[n];
    let mut h = vec![vec![Complex::new(prec); n]; n];
    for j in 0..n {
        h[0][j] = -Complex::with_val(prec, &coeffs[n - 1 - j] / lead);
    }
    for i in 1..n {
        h[i][i - 1] = Complex::with_val(prec, 1u32);
    }
    h
}

/// Diagonal similarity by powers of two equalizing row and column norms.
fn balance(h: &mut Matrix) {
    let n = h.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(&h[j][i]);
                    r += l1(&h[i][j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f: i32 = 0;
            let (mut cc, g_lo, g_hi) = (c, r / 2.0, r * 2.0);
            while cc < g_lo {
                f += 1;
                cc *= 4.0;
            }
            while cc >= g_hi {
                f -= 1;
                cc /= 4.0;
            }
            let scale = 2f64.powi(f);
            if (cc + r) / scale < 0.95 * s && f != 0 {
                changed = true;
                for j in 0..n {
                    if f > 0 {
                        h[i][j] >>= f as u32;
                        h[j][i] <<= f as u32;
                    } else {
                        h[i][j] <<= (-f) as u32;
                        h[j][i] >>= (-f) as u32;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn wilkinson_shift(a: &Complex, b: &Complex, c: &Complex, d: &Complex) -> Complex {
    let prec = a.prec().0;
    let half_diff = Complex::with_val(prec, a - d) / 2u32;
    let disc = (Complex::with_val(prec, &half_diff * &half_diff) + Complex::with_val(prec, b * c)).sqrt();
    let mid = Complex::with_val(prec, a + d) / 2u32;
    let e1 = Complex::with_val(prec, &mid + &disc);
    let e2 = Complex::with_val(prec, &mid - &disc);
    let d1 = Float::with_val(prec, Complex::with_val(prec, &e1 - d).abs_ref());
    let d2 = Float::with_val(prec, Complex::with_val(prec, &e2 - d).abs_ref());
    if d1 <= d2 {
        e1
    } else {
        e2
    }
}

/// Eigenvalues of the companion matrix of `coeffs` (lowest degree first).
pub fn companion_eigenvalues(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let n = coeffs.len() - 1;
    let prec = coeffs[0].prec().0;
    let mut h = companion(coeffs);
    balance(&mut h);
    let eps = 2f64.powi(-(prec as i32 - 8).min(1000));
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    while hi >= 0 {
        let hu = hi as usize;
        if hu == 0 {
            eigs.push(h[0][0].clone());
            break;
        }
        let mut l = hu;
        while l > 0 {
            let s = l1(&h[l - 1][l - 1]) + l1(&h[l][l]);
            if l1(&h[l][l - 1]) <= eps * s {
                h[l][l - 1] = Complex::new(prec);
                break;
            }
            l -= 1;
        }
        if l == hu {
            eigs.push(h[hu][hu].clone());
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 100 {
            return Err(Error::NoConvergence("companion QR iteration"));
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift
            let m = l1(&h[hu][hu - 1]);
            Complex::with_val(prec, &h[hu][hu] + Complex::with_val(prec, (0.75 * m, 0.43 * m)))
        } else {
            wilkinson_shift(&h[hu - 1][hu - 1], &h[hu - 1][hu], &h[hu][hu - 1], &h[hu][hu])
        };
        for k in l..=hu {
            h[k][k] -= &shift;
        }
        let mut rots = Vec::with_capacity(hu - l);
        for k in l..hu {
            let x = h[k][k].clone();
            let y = h[k + 1][k].clone();
            let nx = Float::with_val(prec, x.norm_ref());
            let ny = Float::with_val(prec, y.norm_ref());
            let r = (nx + ny).sqrt();
            if r.is_zero() {
                rots.push((Complex::with_val(prec, 1u32), Complex::new(prec)));
                continue;
            }
            let c = Complex::with_val(prec, &x / &r);
            let s = Complex::with_val(prec, &y / &r);
            let cc = Complex::with_val(prec, c.conj_ref());
            let sc = Complex::with_val(prec, s.conj_ref());
            for j in k..=hu {
                let u = h[k][j].clone();
                let v = h[k + 1][j].clone();
                h[k][j] = Complex::with_val(prec, &cc * &u) + Complex::with_val(prec, &sc * &v);
                h[k + 1][j] = Complex::with_val(prec, &c * &v) - Complex::with_val(prec, &s * &u);
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let cc = Complex::with_val(prec, c.conj_ref());
            let sc = Complex::with_val(prec, s.conj_ref());
            for row in h.iter_mut().take((k + 2).min(hu) + 1).skip(l) {
                let u = row[k].clone();
                let v = row[k + 1].clone();
                row[k] = Complex::with_val(prec, &u * c) + Complex::with_val(prec, &v * s);
                row[k + 1] = Complex::with_val(prec, &v * &cc) - Complex::with_val(prec, &u * &sc);
            }
        }
        for k in l..=hu {
            h[k][k] += &shift;
        }
    }
    Ok(eigs)
}
