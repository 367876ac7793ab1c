//! Truncation-error bound for the theta series and the summation radius
//! that meets a requested accuracy.

use std::f64::consts::PI;

use crate::error::{Result, ThetaError};

/// Largest radius the bracketing search will try.
pub const MAX_RADIUS: f64 = 1.0e4;

/// Upper incomplete gamma function `Gamma(s, x)` for half-integer `s > 0`.
///
/// Uses `Gamma(1, x) = e^-x`, `Gamma(1/2, x) = sqrt(pi) erfc(sqrt x)` and the
/// upward recurrence `Gamma(s + 1, x) = s Gamma(s, x) + x^s e^-x`, in which
/// every term is non-negative.
pub fn incomplete_gamma_upper(s: f64, x: f64) -> Result<f64> {
    let two_s = (2.0 * s).round();
    if !s.is_finite() || two_s < 1.0 || (2.0 * s - two_s).abs() > 1e-12 {
        return Err(ThetaError::UnsupportedArgument(format!(
            "incomplete gamma needs 2s a positive integer, got s = {s}"
        )));
    }
    if !(x >= 0.0) || x.is_nan() {
        return Err(ThetaError::UnsupportedArgument(format!("incomplete gamma needs x >= 0, got {x}")));
    }
    let steps = two_s as u64;
    let (mut a, mut value) = if steps % 2 == 1 {
        (0.5, PI.sqrt() * libm::erfc(x.sqrt()))
    } else {
        (1.0, (-x).exp())
    };
    while a < s - 0.25 {
        let power_term = if x == 0.0 { 0.0 } else { (a * x.ln() - x).exp() };
        value = a * value + power_term;
        a += 1.0;
    }
    Ok(value)
}

/// Parameters of the truncation bound for one derivative order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBoundParams {
    pub genus: usize,
    /// Derivative order `N`.
    pub order: usize,
    /// Length of the shortest nonzero vector of `sqrt(pi) T Z^g`.
    pub rho: f64,
    /// Norm of the inverse Cholesky factor.
    pub tinv_norm: f64,
    pub eps: f64,
}

impl ErrorBoundParams {
    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 {
            return Err(ThetaError::InvalidInput("genus must be at least 1".into()));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(ThetaError::InvalidInput(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.tinv_norm >= 0.0) || !self.tinv_norm.is_finite() {
            return Err(ThetaError::InvalidInput(format!("|T^-1| must be >= 0, got {}", self.tinv_norm)));
        }
        if !(self.eps > 0.0) || !self.eps.is_finite() {
            return Err(ThetaError::InvalidInput(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }

    /// The lower radius `sqrt(g + 2N + sqrt(g^2 + 8N)) / 2 + rho / 2`.
    pub fn minimal_radius(&self) -> f64 {
        let g = self.genus as f64;
        let n = self.order as f64;
        0.5 * (g + 2.0 * n + (g * g + 8.0 * n).sqrt()).sqrt() + 0.5 * self.rho
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Truncation error of the theta sum over the radius-`r` deformed ellipsoid:
///
/// `(2 pi)^N (g/2) (2/rho)^g sum_j C(N,j) pi^(-j/2) |T^-1|^j sqrt(g)^(N-j) Gamma((g+j)/2, (R - rho/2)^2)`.
pub fn error_bound(radius: f64, p: &ErrorBoundParams) -> Result<f64> {
    p.validate()?;
    let half_rho = 0.5 * p.rho;
    if !(radius > half_rho) {
        return Err(ThetaError::InvalidRadius { radius, half_rho });
    }
    let g = p.genus as f64;
    let n = p.order;
    let x = (radius - half_rho).powi(2);
    let mut sum = 0.0;
    for j in 0..=n {
        let gamma = incomplete_gamma_upper((g + j as f64) / 2.0, x)?;
        sum += binomial(n, j)
            * PI.powf(-(j as f64) / 2.0)
            * p.tinv_norm.powi(j as i32)
            * g.sqrt().powi((n - j) as i32)
            * gamma;
    }
    Ok((2.0 * PI).powi(n as i32) * (g / 2.0) * (2.0 / p.rho).powf(g) * sum)
}

/// The summation radius: the larger of the minimal radius and the root of
/// `error_bound(R) = eps`, found by doubling a bracket from the minimal
/// radius and bisecting to a width below `1e-10`. The returned radius
/// always satisfies `error_bound(R) <= eps`.
pub fn solve_radius(p: &ErrorBoundParams) -> Result<f64> {
    p.validate()?;
    let r0 = p.minimal_radius();
    if error_bound(r0, p)? <= p.eps {
        return Ok(r0);
    }
    let mut lo = r0;
    let mut step = 1.0;
    let mut hi = r0 + step;
    // NaN (from an overflowing prefactor) counts as not yet small enough
    while !(error_bound(hi, p)? <= p.eps) {
        lo = hi;
        step *= 2.0;
        hi = r0 + step;
        if hi > MAX_RADIUS {
            return Err(ThetaError::NoConvergence(format!(
                "summation radius exceeds {MAX_RADIUS} (rho = {}, eps = {})",
                p.rho, p.eps
            )));
        }
    }
    while hi - lo >= 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if !(error_bound(mid, p)? <= p.eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
