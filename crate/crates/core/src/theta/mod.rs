//! Riemann theta functions with characteristics and their derivatives.
//!
//! A [`RiemannContext`] holds everything that depends only on the Riemann
//! matrix (Siegel reduction, Cholesky factor, shortest vector, summation
//! radii and ellipsoid caches per derivative order), so that it can be
//! shared by any number of evaluations.
//!
//! Values are reported for the matrix the context evaluates at, which is
//! the Siegel-reduced matrix when reduction is enabled. The argument `z`
//! is used as given; it is not transported along the symplectic transform.

mod characteristic;
mod context;
mod derivative;
mod eval;
mod naive;

pub use characteristic::{parity, Characteristic, Parity};
pub use context::{build_context, ContextOptions, RiemannContext};
pub use derivative::DerivativeSpec;
pub use eval::{reduce_argument, theta, theta_split, theta_with, ArgumentReduction, ThetaValue};
pub use naive::theta_naive;

pub use crate::lattice::EllipsoidCache;
