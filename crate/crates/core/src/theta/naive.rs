use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Characteristic, DerivativeSpec};
use crate::matrix::ComplexMatrix;

/// Direct summation of the theta series over the box `[-r, r]^g`.
///
/// No argument reduction, no error control: a reference to test against.
/// The cost is `(2r + 1)^g` terms.
pub fn theta_naive(
    z: &[Complex64],
    tau: &ComplexMatrix,
    m: &Characteristic,
    derivs: &DerivativeSpec,
    box_radius: u32,
) -> Complex64 {
    let g = z.len();
    assert_eq!(tau.rows(), g, "tau and z disagree on the genus");
    assert_eq!(m.genus(), g, "characteristic and z disagree on the genus");
    let r = i64::from(box_radius);
    let shifted_z: Vec<Complex64> = z
        .iter()
        .zip(m.delta())
        .map(|(zi, &d)| zi + 0.5 * f64::from(d))
        .collect();
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);

    let mut n = vec![-r; g];
    let mut v = vec![0.0; g];
    let mut sum = Complex64::new(0.0, 0.0);
    loop {
        for j in 0..g {
            v[j] = n[j] as f64 + 0.5 * f64::from(m.eps()[j]);
        }
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                quad += 0.5 * v[i] * tau[(i, j)] * v[j];
            }
            quad += v[i] * shifted_z[i];
        }
        let mut term = (two_pi_i * quad).exp();
        for k in derivs.directions() {
            term *= two_pi_i * (0..g).map(|j| k[j] * v[j]).sum::<Complex64>();
        }
        sum += term;

        // odometer over the box
        let mut i = 0;
        while i < g && n[i] == r {
            n[i] = -r;
            i += 1;
        }
        if i == g {
            break;
        }
        n[i] += 1;
    }
    sum * derivs.scale()
}
