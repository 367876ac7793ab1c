//! JSON matrix files: `{"g": 2, "re": [[...], [...]], "im": [[...], [...]]}`.
//!
//! Floats are written by `serde_json` in shortest round-trip form, so a
//! matrix read back is bit-for-bit the one written.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThetaError};
use crate::lattice::cholesky_upper;
use crate::matrix::{ComplexMatrix, RealMatrix};
use crate::siegel::SiegelReduction;

/// Relative asymmetry accepted in a matrix file; the matrix is symmetrised on read.
pub const FILE_SYMMETRY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub g: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(tau: &ComplexMatrix) -> Self {
        MatrixFile { g: tau.rows(), re: tau.re().to_rows(), im: tau.im().to_rows() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ThetaError::InvalidInput(format!("malformed matrix file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ThetaError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix file serialises")
    }

    /// Validates shape, finiteness, symmetry and positivity of the imaginary
    /// part, and returns the symmetrised matrix.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let g = self.g;
        if g == 0 {
            return Err(ThetaError::InvalidInput("genus must be at least 1".into()));
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != g || rows.iter().any(|r| r.len() != g) {
                return Err(ThetaError::InvalidInput(format!("\"{name}\" must be a {g}x{g} array")));
            }
            if rows.iter().flatten().any(|v| !v.is_finite()) {
                return Err(ThetaError::InvalidInput(format!("\"{name}\" has non-finite entries")));
            }
        }
        let re = RealMatrix::from_rows(&self.re)?;
        let im = RealMatrix::from_rows(&self.im)?;
        let tau = ComplexMatrix::from_parts(&re, &im)?;
        let asym = tau.asymmetry();
        if asym > FILE_SYMMETRY_TOL * tau.max_abs().max(f64::MIN_POSITIVE) {
            return Err(ThetaError::NotSymmetric { asymmetry: asym });
        }
        let tau = tau.symmetrized();
        cholesky_upper(&tau.im())?;
        Ok(tau)
    }
}

/// Output of the `reduce` command: the reduced matrix plus the transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceOutput {
    #[serde(flatten)]
    pub matrix: MatrixFile,
    /// Integer `2g x 2g` symplectic matrix with `tau' = gamma . tau`.
    pub gamma: Vec<Vec<i64>>,
    pub iterations: usize,
    pub stalled: bool,
}

impl From<&SiegelReduction> for ReduceOutput {
    fn from(r: &SiegelReduction) -> Self {
        ReduceOutput {
            matrix: MatrixFile::from_matrix(&r.tau),
            gamma: r.gamma.matrix().to_rows(),
            iterations: r.iterations,
            stalled: r.stalled,
        }
    }
}
