use num_complex::Complex64;

use crate::error::{Result, ThetaError};

/// Directions `k^(1), ..., k^(N)` of an `N`-th order directional derivative.
///
/// Directions are stored normalised to unit length; the product of the
/// original lengths is kept in `scale` so that `D(c k) theta = c D(k) theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSpec {
    directions: Vec<Vec<Complex64>>,
    scale: f64,
}

impl Default for DerivativeSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl DerivativeSpec {
    pub fn none() -> Self {
        DerivativeSpec { directions: Vec::new(), scale: 1.0 }
    }

    pub fn new(directions: Vec<Vec<Complex64>>) -> Result<Self> {
        let mut scale = 1.0;
        let mut unit = Vec::with_capacity(directions.len());
        let dim = directions.first().map(Vec::len);
        for k in directions {
            if Some(k.len()) != dim {
                return Err(ThetaError::DimensionMismatch { expected: dim.unwrap_or(0), found: k.len() });
            }
            let len = k.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if !(len > 0.0) || !len.is_finite() {
                return Err(ThetaError::InvalidInput("derivative direction must be a nonzero finite vector".into()));
            }
            scale *= len;
            unit.push(k.into_iter().map(|c| c / len).collect());
        }
        Ok(DerivativeSpec { directions: unit, scale })
    }

    pub fn from_real(directions: &[Vec<f64>]) -> Result<Self> {
        Self::new(
            directions
                .iter()
                .map(|k| k.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Unit coordinate directions `e_{i_1}, ..., e_{i_N}` in dimension `genus`.
    pub fn coordinates(genus: usize, indices: &[usize]) -> Self {
        let directions = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Complex64::new(0.0, 0.0); genus];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        DerivativeSpec { directions, scale: 1.0 }
    }

    pub fn order(&self) -> usize {
        self.directions.len()
    }

    pub fn directions(&self) -> &[Vec<Complex64>] {
        &self.directions
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub(crate) fn dim(&self) -> Option<usize> {
        self.directions.first().map(Vec::len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_keeps_scale() {
        let d = DerivativeSpec::from_real(&[vec![3.0, 4.0], vec![0.0, 2.0]]).unwrap();
        assert_eq!(d.order(), 2);
        assert!((d.scale() - 10.0).abs() < 1e-15);
        assert!((d.directions()[0][0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_direction_rejected() {
        assert!(DerivativeSpec::from_real(&[vec![0.0, 0.0]]).is_err());
        assert!(DerivativeSpec::from_real(&[vec![1.0], vec![1.0, 0.0]]).is_err());
    }
}
