//! Vanishing theta nulls and the rank of the Hessian of theta there.
//!
//! A Jacobian with a vanishing even theta null has a quadric tangent cone of
//! rank at most three, so the numerical rank of the Hessian at the null is a
//! cheap necessary test.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Result, ThetaError};
use crate::matrix::ComplexMatrix;
use crate::theta::{build_context, theta_with, Characteristic, DerivativeSpec, RiemannContext};

/// Default relative threshold for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Relative factor for the default vanishing tolerance of [`find_theta_null`].
pub const DEFAULT_NULL_TOL_FACTOR: f64 = 1e-6;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// `theta[m](0, tau)` for every even characteristic `m`.
pub fn even_theta_constants(ctx: &RiemannContext) -> Result<BTreeMap<Characteristic, Complex64>> {
    let g = ctx.genus();
    let zero = vec![Complex64::new(0.0, 0.0); g];
    let none = DerivativeSpec::none();
    let chars: Vec<Characteristic> = Characteristic::all_even(g).collect();
    chars
        .into_par_iter()
        .map(|m| theta_with(&zero, ctx, &m, &none).map(|v| (m, v)))
        .collect()
}

/// Result of scanning the even theta constants for a zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaNullSearch {
    /// Even characteristic of smallest `|theta[m](0, tau)|`.
    pub best: Characteristic,
    pub best_value: Complex64,
    pub tol: f64,
    /// `best` when `|best_value| < tol`.
    pub found: Option<Characteristic>,
    /// All characteristics below `tol`, smallest first.
    pub below_tol: Vec<Characteristic>,
}

/// Looks for a vanishing even theta constant.
///
/// `tol` defaults to `1e-6` times the largest even theta constant. The test
/// is strict, so `tol = 0` never finds anything.
pub fn find_theta_null(ctx: &RiemannContext, tol: Option<f64>) -> Result<ThetaNullSearch> {
    let constants = even_theta_constants(ctx)?;
    let largest = constants.values().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = tol.unwrap_or(DEFAULT_NULL_TOL_FACTOR * largest);
    if !(tol >= 0.0) {
        return Err(ThetaError::InvalidInput(format!("tolerance must be non-negative, got {tol}")));
    }
    let mut ranked: Vec<(Characteristic, Complex64)> = constants.into_iter().collect();
    // stable sort keeps the characteristic order among equal magnitudes
    ranked.sort_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
    let (best, best_value) = ranked[0].clone();
    let below_tol: Vec<Characteristic> =
        ranked.iter().take_while(|(_, v)| v.norm() < tol).map(|(m, _)| m.clone()).collect();
    let found = below_tol.first().cloned();
    Ok(ThetaNullSearch { best, best_value, tol, found, below_tol })
}

/// Second partials `d^2 theta[m] / dz_j dz_k` at `z = 0`, without symmetrising.
pub fn hessian_unsymmetrized(ctx: &RiemannContext, m: &Characteristic) -> Result<ComplexMatrix> {
    let g = ctx.genus();
    if ctx.nderivs() < 2 {
        return Err(ThetaError::DerivOrderExceeded { requested: 2, available: ctx.nderivs() });
    }
    if m.genus() != g {
        return Err(ThetaError::DimensionMismatch { expected: g, found: m.genus() });
    }
    let zero = vec![Complex64::new(0.0, 0.0); g];
    let entries: Vec<Complex64> = (0..g * g)
        .into_par_iter()
        .map(|idx| {
            let spec = DerivativeSpec::coordinates(g, &[idx / g, idx % g]);
            theta_with(&zero, ctx, m, &spec)
        })
        .collect::<Result<_>>()?;
    Ok(ComplexMatrix::from_fn(g, g, |i, j| entries[i * g + j]))
}

/// The Hessian of `theta[m]` at `z = 0`, symmetrised as `(H + H^t) / 2`.
pub fn hessian_at_null(ctx: &RiemannContext, m: &Characteristic) -> Result<ComplexMatrix> {
    if !m.is_even() {
        return Err(ThetaError::InvalidInput(format!("Hessian at a theta null needs an even characteristic, got {m}")));
    }
    Ok(hessian_unsymmetrized(ctx, m)?.symmetrized())
}

/// Numerical rank and singular values of a complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Singular values above this count towards the rank.
    pub threshold: f64,
}

/// Singular values of `m` in descending order, by one-sided Jacobi.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = (m.rows(), m.cols());
    // a[j] is column j
    let mut a: Vec<Vec<Complex64>> = (0..cols).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|c| c.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|c| c.norm_sqr()).sum();
                let gamma: Complex64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g_abs = gamma.norm();
                if alpha == 0.0 || beta == 0.0 || g_abs == 0.0 {
                    continue;
                }
                off = off.max(g_abs / (alpha * beta).sqrt());
                if g_abs <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                // rotate column q by a phase so the inner product is real,
                // then apply the real Jacobi rotation
                let phase = gamma.conj() / g_abs;
                let zeta = (beta - alpha) / (2.0 * g_abs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = a.split_at_mut(q);
                for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let x = *xp;
                    let y = *xq * phase;
                    *xp = c * x - s * y;
                    *xq = s * x + c * y;
                }
            }
        }
        if off <= JACOBI_TOL {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|col| col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Counts singular values above `max(rel_tol * sigma_max, 1e-300)`.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> RankReport {
    let singular_values = singular_values(m);
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let threshold = f64::max(rel_tol * sigma_max, 1e-300);
    let rank = singular_values.iter().filter(|&&s| s > threshold).count();
    RankReport { rank, singular_values, threshold }
}

/// Eigenvalues of a square complex matrix by complex Schur decomposition,
/// ordered by decreasing modulus. Reported alongside the rank; the rank
/// itself comes from singular values.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(ThetaError::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let n = m.rows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let schur = nalgebra::Schur::try_new(dm, f64::EPSILON, 10_000)
        .ok_or_else(|| ThetaError::NoConvergence("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    let mut ev: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(ev)
}

/// Outcome of [`schottky_null`] when a vanishing theta null is found.
///
/// The characteristic and Hessian refer to the matrix the context evaluates
/// at, which is the Siegel-reduced one (`tau`).
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaNullReport {
    pub characteristic: Characteristic,
    pub theta_value: Complex64,
    pub hessian: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub eigenvalues: Vec<Complex64>,
    /// Other even characteristics that also fell below the tolerance.
    pub also_vanishing: Vec<Characteristic>,
    pub tau: ComplexMatrix,
}

fn complex_json(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

impl Serialize for ThetaNullReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let matrix = |m: &ComplexMatrix| {
            serde_json::json!({ "re": m.re().to_rows(), "im": m.im().to_rows() })
        };
        let mut st = s.serialize_struct("ThetaNullReport", 8)?;
        st.serialize_field("characteristic", &self.characteristic)?;
        st.serialize_field("theta_value", &complex_json(self.theta_value))?;
        st.serialize_field("hessian", &matrix(&self.hessian))?;
        st.serialize_field("singular_values", &self.singular_values)?;
        st.serialize_field("rank", &self.rank)?;
        let ev: Vec<[f64; 2]> = self.eigenvalues.iter().map(|&c| complex_json(c)).collect();
        st.serialize_field("eigenvalues", &ev)?;
        st.serialize_field("also_vanishing", &self.also_vanishing)?;
        st.serialize_field("tau", &matrix(&self.tau))?;
        st.end()
    }
}

/// Builds a context (second derivatives, Siegel reduction on), looks for a
/// vanishing even theta null and, if one is found, reports the Hessian there
/// and its numerical rank.
pub fn schottky_null(tau: &ComplexMatrix, eps: f64, tol: Option<f64>) -> Result<Option<ThetaNullReport>> {
    let ctx = build_context(tau, eps, 2, true)?;
    schottky_null_in(&ctx, tol, DEFAULT_RANK_TOL)
}

/// [`schottky_null`] on an existing context.
pub fn schottky_null_in(ctx: &RiemannContext, tol: Option<f64>, rank_tol: f64) -> Result<Option<ThetaNullReport>> {
    let search = find_theta_null(ctx, tol)?;
    let Some(m) = search.found else {
        return Ok(None);
    };
    let hessian = hessian_at_null(ctx, &m)?;
    let rank = numerical_rank(&hessian, rank_tol);
    let eigenvalues = eigenvalues(&hessian)?;
    Ok(Some(ThetaNullReport {
        characteristic: m,
        theta_value: search.best_value,
        hessian,
        singular_values: rank.singular_values,
        rank: rank.rank,
        eigenvalues,
        also_vanishing: search.below_tol[1..].to_vec(),
        tau: ctx.tau().clone(),
    }))
}
