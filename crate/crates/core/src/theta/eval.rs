use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Characteristic, DerivativeSpec, RiemannContext};
use crate::error::{Result, ThetaError};
use crate::matrix::dot;

/// `z = z0 + p + tau q` with `z0 = a + tau b`, `a, b in [0, 1)^g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgumentReduction {
    pub z0: Vec<Complex64>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    /// `w` with `theta(z) = e^(2 pi i w) theta(z0)` for the zero characteristic.
    pub exponent: Complex64,
}

impl ArgumentReduction {
    /// Quasi-periodicity exponent for characteristic `m`:
    /// `w - q.delta/2 + eps.p/2`.
    pub fn exponent_for(&self, m: &Characteristic) -> Complex64 {
        let qd: f64 = self.q.iter().zip(m.delta()).map(|(&q, &d)| q as f64 * f64::from(d)).sum();
        let ep: f64 = self.p.iter().zip(m.eps()).map(|(&p, &e)| p as f64 * f64::from(e)).sum();
        self.exponent + Complex64::new(0.5 * (ep - qd), 0.0)
    }
}

/// Splits `z` into a point of the fundamental cell and lattice shifts.
pub fn reduce_argument(z: &[Complex64], ctx: &RiemannContext) -> Result<ArgumentReduction> {
    let g = ctx.genus();
    if z.len() != g {
        return Err(ThetaError::DimensionMismatch { expected: g, found: z.len() });
    }
    if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(ThetaError::InvalidInput("z must be finite".into()));
    }
    let tau = ctx.tau();
    let x: Vec<f64> = z.iter().map(|c| c.re).collect();
    let y: Vec<f64> = z.iter().map(|c| c.im).collect();
    let b = ctx.y_inv().mul_vec(&y);
    let q: Vec<i64> = b.iter().map(|v| v.floor() as i64).collect();
    let xb = ctx.x().mul_vec(&b);
    let p: Vec<i64> = x.iter().zip(&xb).map(|(xi, xbi)| (xi - xbi).floor() as i64).collect();

    let tau_q: Vec<Complex64> = (0..g)
        .map(|i| (0..g).map(|j| tau[(i, j)] * q[j] as f64).sum())
        .collect();
    let z0: Vec<Complex64> = (0..g).map(|i| z[i] - p[i] as f64 - tau_q[i]).collect();

    let q_tau_q: Complex64 = (0..g).map(|i| tau_q[i] * q[i] as f64).sum();
    let q_z0: Complex64 = (0..g).map(|i| z0[i] * q[i] as f64).sum();
    Ok(ArgumentReduction { z0, p, q, exponent: -0.5 * q_tau_q - q_z0 })
}

/// A theta value split as `mantissa * exp(exponent)` so that the
/// exponential growth in `Im z` cannot overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub mantissa: Complex64,
    /// Equals `pi y^t Y^-1 y` for `y = Im z`.
    pub exponent: f64,
}

impl ThetaValue {
    /// `mantissa * exp(exponent)`; infinite components on overflow.
    pub fn value(&self) -> Complex64 {
        let f = self.exponent.exp();
        let scale = |m: f64| if m == 0.0 { 0.0 } else { m * f };
        Complex64::new(scale(self.mantissa.re), scale(self.mantissa.im))
    }
}

/// `theta(z, tau)` at the context's matrix.
pub fn theta(z: &[Complex64], ctx: &RiemannContext) -> Result<Complex64> {
    theta_with(z, ctx, &Characteristic::zero(ctx.genus()), &DerivativeSpec::none())
}

/// `D(k) theta[m](z, tau)` at the context's matrix.
pub fn theta_with(
    z: &[Complex64],
    ctx: &RiemannContext,
    m: &Characteristic,
    derivs: &DerivativeSpec,
) -> Result<Complex64> {
    Ok(theta_split(z, ctx, m, derivs)?.value())
}

/// Like [`theta_with`] but returns the value split into mantissa and exponent.
pub fn theta_split(
    z: &[Complex64],
    ctx: &RiemannContext,
    m: &Characteristic,
    derivs: &DerivativeSpec,
) -> Result<ThetaValue> {
    let g = ctx.genus();
    let order = derivs.order();
    if order > ctx.nderivs() {
        return Err(ThetaError::DerivOrderExceeded { requested: order, available: ctx.nderivs() });
    }
    if m.genus() != g {
        return Err(ThetaError::DimensionMismatch { expected: g, found: m.genus() });
    }
    if let Some(d) = derivs.dim() {
        if d != g {
            return Err(ThetaError::DimensionMismatch { expected: g, found: d });
        }
    }
    let red = reduce_argument(z, ctx)?;
    let x0: Vec<f64> = red.z0.iter().map(|c| c.re).collect();
    let y0: Vec<f64> = red.z0.iter().map(|c| c.im).collect();
    let center = ctx.y_inv().mul_vec(&y0);

    let eps_half: Vec<f64> = m.eps().iter().map(|&e| 0.5 * f64::from(e)).collect();
    let eta: Vec<f64> = center.iter().zip(&eps_half).map(|(c, e)| c.round_ties_even() - e).collect();
    let x_shift: Vec<f64> = x0.iter().zip(m.delta()).map(|(x, &d)| x + 0.5 * f64::from(d)).collect();
    // polynomial factors use n - eta - q: the derivative of the shifted series
    let poly_shift: Vec<f64> = eta.iter().zip(&red.q).map(|(e, &q)| e + q as f64).collect();

    let cache = ctx.cache(order).expect("cache exists for every prepared order");
    let s = ctx.t().scale(PI.sqrt());
    let xm = ctx.x();
    let dirs = derivs.directions();

    let mut shifted = vec![0.0; g];
    let mut gauss_arg = vec![0.0; g];
    let mut terms = Vec::with_capacity(cache.len());
    for n in cache.iter() {
        for j in 0..g {
            shifted[j] = n[j] as f64 - eta[j];
            gauss_arg[j] = shifted[j] + center[j];
        }
        let mut quad = dot(&shifted, &x_shift);
        for i in 0..g {
            quad += 0.5 * shifted[i] * dot(xm.row(i), &shifted);
        }
        quad -= quad.round();
        let mut gauss = 0.0;
        for i in 0..g {
            let mut r = 0.0;
            for j in i..g {
                r += s[(i, j)] * gauss_arg[j];
            }
            gauss += r * r;
        }
        let magnitude = (-gauss).exp();
        if magnitude == 0.0 {
            continue;
        }
        let (sin, cos) = (2.0 * PI * quad).sin_cos();
        let mut term = Complex64::new(magnitude * cos, magnitude * sin);
        for k in dirs {
            let f: Complex64 = (0..g).map(|j| k[j] * (n[j] as f64 - poly_shift[j])).sum();
            term *= f;
        }
        terms.push(term);
    }
    let sum = pairwise_sum(&terms);

    let w = red.exponent_for(m);
    let two_pi_i_n = Complex64::new(0.0, 2.0 * PI).powu(order as u32);
    let phase = Complex64::from_polar(1.0, 2.0 * PI * (w.re - w.re.round()));
    let mantissa = sum * two_pi_i_n * phase * derivs.scale();
    let exponent = PI * dot(&y0, &center) - 2.0 * PI * w.im;
    Ok(ThetaValue { mantissa, exponent })
}

/// Pairwise (tree) summation in a fixed order.
pub(crate) fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

impl RiemannContext {
    /// See [`theta`].
    pub fn theta(&self, z: &[Complex64]) -> Result<Complex64> {
        theta(z, self)
    }

    /// See [`theta_with`].
    pub fn theta_with(&self, z: &[Complex64], m: &Characteristic, derivs: &DerivativeSpec) -> Result<Complex64> {
        theta_with(z, self, m, derivs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::theta::build_context;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctx_i(nderivs: usize) -> RiemannContext {
        build_context(&ComplexMatrix::scalar(c(0.0, 1.0)), 1e-12, nderivs, true).unwrap()
    }

    #[test]
    fn genus_one_theta_constant() {
        let v = theta(&[c(0.0, 0.0)], &ctx_i(0)).unwrap();
        assert!((v - c(1.086434811213308, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reduce_argument_examples() {
        let ctx = ctx_i(0);
        let r = reduce_argument(&[c(0.25, 0.5)], &ctx).unwrap();
        assert_eq!((r.p.clone(), r.q.clone()), (vec![0], vec![0]));
        assert_eq!(r.exponent, c(0.0, 0.0));
        let r = reduce_argument(&[c(2.0, 0.0)], &ctx).unwrap();
        assert_eq!((r.p.clone(), r.q.clone()), (vec![2], vec![0]));
        assert!(r.z0[0].norm() < 1e-15);
        assert_eq!(r.exponent, c(0.0, 0.0));
    }

    #[test]
    fn zero_characteristic_is_plain_theta() {
        let ctx = build_context(&crate::siegel::random_siegel(2, 5), 1e-12, 0, true).unwrap();
        let z = [c(0.3, 0.1), c(-0.2, 0.4)];
        let a = theta(&z, &ctx).unwrap();
        let b = theta_with(&z, &ctx, &Characteristic::zero(2), &DerivativeSpec::none()).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn derivative_order_checked() {
        let ctx = ctx_i(1);
        let d2 = DerivativeSpec::coordinates(1, &[0, 0]);
        let err = theta_with(&[c(0.0, 0.0)], &ctx, &Characteristic::zero(1), &d2).unwrap_err();
        assert_eq!(err, ThetaError::DerivOrderExceeded { requested: 2, available: 1 });
    }

    #[test]
    fn overflow_gives_infinity() {
        let ctx = ctx_i(0);
        let split = theta_split(&[c(0.1, 400.0)], &ctx, &Characteristic::zero(1), &DerivativeSpec::none()).unwrap();
        assert!(split.mantissa.norm().is_finite());
        assert!(split.exponent > 709.0);
        assert!(split.value().re.is_infinite());
    }

    #[test]
    fn pairwise_matches_plain_sum() {
        let vals: Vec<Complex64> = (0..1000).map(|i| c(i as f64, -(i as f64) * 0.5)).collect();
        assert_eq!(pairwise_sum(&vals), c(499500.0, -249750.0));
    }
}
