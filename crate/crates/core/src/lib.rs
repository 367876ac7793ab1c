//! Numerical evaluation of Riemann theta functions with characteristics and
//! derivatives, tuned for many evaluations at one fixed Riemann matrix.
//!
//! Build a [`RiemannContext`] once per matrix, then call [`theta`] or
//! [`theta_with`] as often as needed. The [`schottky`] module adds the
//! vanishing-theta-null and Hessian-rank diagnostics.

// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod schottky;
pub mod siegel;
pub mod theta;

pub use error::{Result, ThetaError};
pub use matrix::{ComplexMatrix, IntMatrix, RealMatrix};
pub use siegel::{random_siegel, siegel_reduce, SiegelReduction, SymplecticTransform};
pub use theta::{
    build_context, parity, reduce_argument, theta, theta_naive, theta_split, theta_with, Characteristic,
    ContextOptions, DerivativeSpec, Parity, RiemannContext, ThetaValue,
};
