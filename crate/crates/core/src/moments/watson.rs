//! Numerical check of the Laplace-integral leading term
//! `h(0) Gamma(sigma+1) / lambda^{sigma+1}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::integrate;
use crate::error::{Error, Result};
use crate::specfun::{complex_gamma, real_power};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WatsonSide {
    /// `int_0^T t^sigma h(t) e^{-lambda t} dt`
    LeftEndpoint,
    /// `int_0^T (T-t)^sigma h(T-t) e^{lambda t} dt`, reported divided by `e^{T lambda}`
    RightEndpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatsonProblem {
    pub sigma: Complex64,
    pub t_max: f64,
    /// Polynomial `h`, lowest degree first.
    pub h: Vec<Complex64>,
    pub side: WatsonSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WatsonRow {
    pub lambda: f64,
    pub numeric: Complex64,
    pub leading: Complex64,
    /// `|numeric - leading| * lambda^{Re sigma + 2}`
    pub scaled_error: f64,
}

impl WatsonProblem {
    fn h_at(&self, t: f64) -> Complex64 {
        self.h.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma.re > -1.0) {
            return Err(Error::Domain(format!("Re(sigma) must exceed -1, got {}", self.sigma)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Domain(format!("T must be positive and finite, got {}", self.t_max)));
        }
        if self.h.first().map_or(true, |h0| h0.norm() == 0.0) {
            return Err(Error::Domain("h(0) must be nonzero".into()));
        }
        Ok(())
    }
}

pub fn watson_check(problem: &WatsonProblem, lambdas: &[f64]) -> Result<Vec<WatsonRow>> {
    problem.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    let sigma = problem.sigma;
    let tm = problem.t_max;
    let lead_const = problem.h[0] * complex_gamma(sigma + 1.0)?;
    lambdas
        .iter()
        .map(|&lambda| {
            if !(lambda > 0.0) {
                return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
            }
            let r = match problem.side {
                WatsonSide::LeftEndpoint => {
                    integrate(0.0, tm, sigma, zero, |t| problem.h_at(t) * (-lambda * t).exp(), lambda)?
                }
                WatsonSide::RightEndpoint => integrate(
                    0.0,
                    tm,
                    zero,
                    sigma,
                    |t| problem.h_at(tm - t) * (lambda * (t - tm)).exp(),
                    lambda,
                )?,
            };
            if !r.converged {
                return Err(Error::NoConvergence("Laplace integral quadrature"));
            }
            let leading = lead_const * real_power(lambda, -sigma - 1.0)?;
            let scaled_error = (r.value - leading).norm() * lambda.powf(sigma.re + 2.0);
            Ok(WatsonRow { lambda, numeric: r.value, leading, scaled_error })
        })
        .collect()
}
