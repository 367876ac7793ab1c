use std::f64::consts::PI;

use crate::bounds::{solve_radius, ErrorBoundParams};
use crate::error::{Result, ThetaError};
use crate::lattice::{
    cholesky_upper, enumerate_deformed_ellipsoid, shortest_vector, EllipsoidCache, LatticeBasis,
    DEFAULT_MAX_ELLIPSOID_POINTS,
};
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::siegel::{siegel_reduce, validate_riemann_matrix, SymplecticTransform};

/// Options for [`RiemannContext::new`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContextOptions {
    /// Target absolute error of the truncated sum.
    pub eps: f64,
    /// Highest derivative order prepared.
    pub nderivs: usize,
    /// Siegel-reduce the matrix before anything else.
    pub siegel: bool,
    /// Cap on the points of any single ellipsoid cache.
    pub max_points: usize,
}

impl Default for ContextOptions {
    fn default() -> Self {
        ContextOptions { eps: 1e-12, nderivs: 4, siegel: true, max_points: DEFAULT_MAX_ELLIPSOID_POINTS }
    }
}

/// Precomputed state for evaluating theta functions at one Riemann matrix.
///
/// Immutable once built; share it freely across threads.
#[derive(Clone, Debug)]
pub struct RiemannContext {
    tau_original: ComplexMatrix,
    tau: ComplexMatrix,
    gamma: SymplecticTransform,
    reduction_stalled: bool,
    x: RealMatrix,
    y: RealMatrix,
    t: RealMatrix,
    y_inv: RealMatrix,
    tinv_norm: f64,
    rho: f64,
    eps: f64,
    radii: Vec<f64>,
    caches: Vec<EllipsoidCache>,
}

/// Builds a context; see [`RiemannContext::new`].
pub fn build_context(tau: &ComplexMatrix, eps: f64, nderivs: usize, use_siegel: bool) -> Result<RiemannContext> {
    RiemannContext::new(tau, ContextOptions { eps, nderivs, siegel: use_siegel, ..ContextOptions::default() })
}

impl RiemannContext {
    pub fn new(tau: &ComplexMatrix, options: ContextOptions) -> Result<Self> {
        if !(options.eps > 0.0 && options.eps < 1.0) {
            return Err(ThetaError::InvalidInput(format!("eps must lie in (0, 1), got {}", options.eps)));
        }
        validate_riemann_matrix(tau)?;
        let g = tau.rows();

        let (reduced, gamma, stalled) = if options.siegel {
            let red = siegel_reduce(tau)?;
            (red.tau, red.gamma, red.stalled)
        } else {
            (tau.symmetrized(), SymplecticTransform::identity(g), false)
        };

        let x = reduced.re();
        let y = reduced.im();
        let t = cholesky_upper(&y)?;
        let t_inv = t.upper_triangular_inverse()?;
        let y_inv = t_inv.matmul(&t_inv.transpose());
        let tinv_norm = t_inv.spectral_norm_upper();

        let scaled = t.scale(PI.sqrt());
        let rho = shortest_vector(&LatticeBasis::from_columns(&scaled)?)?.rho;

        let mut radii = Vec::with_capacity(options.nderivs + 1);
        let mut caches = Vec::with_capacity(options.nderivs + 1);
        for order in 0..=options.nderivs {
            let params = ErrorBoundParams { genus: g, order, rho, tinv_norm, eps: options.eps };
            let mut r = solve_radius(&params)?;
            if let Some(&prev) = radii.last() {
                r = f64::max(r, prev);
            }
            let cache = match caches.last() {
                Some(prev) if r == radii[radii.len() - 1] => EllipsoidCache::clone(prev),
                _ => enumerate_deformed_ellipsoid(&t, r, 1.0, options.max_points)?,
            };
            radii.push(r);
            caches.push(cache.with_order(order));
        }

        Ok(RiemannContext {
            tau_original: tau.clone(),
            tau: reduced,
            gamma,
            reduction_stalled: stalled,
            x,
            y,
            t,
            y_inv,
            tinv_norm,
            rho,
            eps: options.eps,
            radii,
            caches,
        })
    }

    pub fn genus(&self) -> usize {
        self.tau.rows()
    }

    /// The matrix as supplied.
    pub fn tau_original(&self) -> &ComplexMatrix {
        &self.tau_original
    }

    /// The matrix theta is evaluated at (Siegel-reduced when enabled).
    pub fn tau(&self) -> &ComplexMatrix {
        &self.tau
    }

    /// `gamma` with `tau() = gamma . tau_original()`.
    pub fn gamma(&self) -> &SymplecticTransform {
        &self.gamma
    }

    pub fn reduction_stalled(&self) -> bool {
        self.reduction_stalled
    }

    pub fn x(&self) -> &RealMatrix {
        &self.x
    }

    pub fn y(&self) -> &RealMatrix {
        &self.y
    }

    /// Upper Cholesky factor of `Y`.
    pub fn t(&self) -> &RealMatrix {
        &self.t
    }

    pub fn y_inv(&self) -> &RealMatrix {
        &self.y_inv
    }

    pub fn tinv_norm(&self) -> f64 {
        self.tinv_norm
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn nderivs(&self) -> usize {
        self.radii.len() - 1
    }

    pub fn radius(&self, order: usize) -> Option<f64> {
        self.radii.get(order).copied()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn cache(&self, order: usize) -> Option<&EllipsoidCache> {
        self.caches.get(order)
    }
}
