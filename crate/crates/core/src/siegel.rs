//! The action of `Sp(2g, Z)` on the Siegel upper half space, Siegel
//! reduction of Riemann matrices and random sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ThetaError};
use crate::lattice::{cholesky_upper, hkz_reduce, LatticeBasis};
use crate::matrix::{ComplexMatrix, IntMatrix, RealMatrix};

/// Iteration cap for [`siegel_reduce`].
pub const MAX_SIEGEL_ITERATIONS: usize = 300;

const SINGULAR_CONDITION: f64 = 1e12;

/// An integer `2g x 2g` matrix `[[A, B], [C, D]]` in `Sp(2g, Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticTransform {
    genus: usize,
    matrix: IntMatrix,
}

impl SymplecticTransform {
    pub fn identity(genus: usize) -> Self {
        SymplecticTransform { genus, matrix: IntMatrix::identity(2 * genus) }
    }

    /// Wraps a `2g x 2g` integer matrix after checking `M^t J M = J` exactly.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() || !matrix.rows().is_multiple_of(2) || matrix.rows() == 0 {
            return Err(ThetaError::InvalidInput("symplectic matrix must be 2g x 2g".into()));
        }
        let t = SymplecticTransform { genus: matrix.rows() / 2, matrix };
        if !t.is_symplectic() {
            return Err(ThetaError::InvalidInput("matrix is not symplectic".into()));
        }
        Ok(t)
    }

    pub fn from_blocks(a: &IntMatrix, b: &IntMatrix, c: &IntMatrix, d: &IntMatrix) -> Result<Self> {
        let g = a.rows();
        for blk in [a, b, c, d] {
            if blk.rows() != g || blk.cols() != g {
                return Err(ThetaError::DimensionMismatch { expected: g, found: blk.rows() });
            }
        }
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = a[(i, j)];
                m[(i, g + j)] = b[(i, j)];
                m[(g + i, j)] = c[(i, j)];
                m[(g + i, g + j)] = d[(i, j)];
            }
        }
        Self::new(m)
    }

    /// `diag(U, U^-t)`, acting as `tau -> U tau U^t`.
    pub fn from_unimodular(u: &IntMatrix) -> Result<Self> {
        let g = u.rows();
        let inv = u
            .unimodular_inverse()
            .ok_or_else(|| ThetaError::InvalidInput("matrix is not unimodular".into()))?;
        Self::from_blocks(u, &IntMatrix::zeros(g, g), &IntMatrix::zeros(g, g), &inv.transpose())
    }

    /// `[[I, B], [0, I]]`, acting as `tau -> tau + B`; `B` must be symmetric.
    pub fn translation(b: &IntMatrix) -> Result<Self> {
        let g = b.rows();
        Self::from_blocks(&IntMatrix::identity(g), b, &IntMatrix::zeros(g, g), &IntMatrix::identity(g))
    }

    /// `tau_11 -> -1 / tau_11` embedded in the first coordinate.
    pub fn first_coordinate_inversion(genus: usize) -> Self {
        let mut a = IntMatrix::identity(genus);
        let mut b = IntMatrix::zeros(genus, genus);
        let mut c = IntMatrix::zeros(genus, genus);
        let mut d = IntMatrix::identity(genus);
        a[(0, 0)] = 0;
        d[(0, 0)] = 0;
        b[(0, 0)] = -1;
        c[(0, 0)] = 1;
        Self::from_blocks(&a, &b, &c, &d).expect("inversion is symplectic")
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn block(&self, bi: usize, bj: usize) -> IntMatrix {
        let g = self.genus;
        let mut out = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                out[(i, j)] = self.matrix[(bi * g + i, bj * g + j)];
            }
        }
        out
    }

    pub fn a(&self) -> IntMatrix {
        self.block(0, 0)
    }

    pub fn b(&self) -> IntMatrix {
        self.block(0, 1)
    }

    pub fn c(&self) -> IntMatrix {
        self.block(1, 0)
    }

    pub fn d(&self) -> IntMatrix {
        self.block(1, 1)
    }

    /// `M^t J M == J` in exact integer arithmetic, `J = [[0, I], [-I, 0]]`.
    pub fn is_symplectic(&self) -> bool {
        let g = self.genus;
        let n = 2 * g;
        let m = &self.matrix;
        let j_entry = |r: usize, c: usize| -> i128 {
            if r < g && c == r + g {
                1
            } else if r >= g && c + g == r {
                -1
            } else {
                0
            }
        };
        for r in 0..n {
            for c in 0..n {
                let mut s: i128 = 0;
                for k in 0..g {
                    // (M^t J M)_{rc} = sum_k M_{k r} M_{k+g, c} - M_{k+g, r} M_{k c}
                    s += i128::from(m[(k, r)]) * i128::from(m[(k + g, c)])
                        - i128::from(m[(k + g, r)]) * i128::from(m[(k, c)]);
                }
                if s != j_entry(r, c) {
                    return false;
                }
            }
        }
        true
    }

    /// The composite `self * other` (apply `other` first).
    pub fn compose(&self, other: &SymplecticTransform) -> SymplecticTransform {
        assert_eq!(self.genus, other.genus);
        SymplecticTransform { genus: self.genus, matrix: self.matrix.matmul(&other.matrix) }
    }
}

fn int_to_complex(m: &IntMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(m[(i, j)] as f64, 0.0))
}

/// `(A tau + B)(C tau + D)^-1`, symmetrised.
pub fn apply_symplectic(gamma: &SymplecticTransform, tau: &ComplexMatrix) -> Result<ComplexMatrix> {
    if tau.rows() != gamma.genus() || !tau.is_square() {
        return Err(ThetaError::DimensionMismatch { expected: gamma.genus(), found: tau.rows() });
    }
    let num = int_to_complex(&gamma.a()).matmul(tau).add(&int_to_complex(&gamma.b()));
    let den = int_to_complex(&gamma.c()).matmul(tau).add(&int_to_complex(&gamma.d()));
    let (inv, cond) = den
        .inverse_with_condition()
        .ok_or(ThetaError::SingularTransform { condition: f64::INFINITY })?;
    if !(cond < SINGULAR_CONDITION) {
        return Err(ThetaError::SingularTransform { condition: cond });
    }
    Ok(num.matmul(&inv).symmetrized())
}

/// Outcome of [`siegel_reduce`].
#[derive(Clone, Debug)]
pub struct SiegelReduction {
    pub tau: ComplexMatrix,
    pub gamma: SymplecticTransform,
    pub iterations: usize,
    /// Set when the iteration cap was reached; `tau` is then the last iterate.
    pub stalled: bool,
}

/// Siegel reduction. Each pass HKZ-reduces `Im tau` by a unimodular `U`
/// (acting as `tau -> U tau U^t`), subtracts the entrywise-rounded real part
/// (ties to even), and stops unless `|tau_11| < 1`, in which case the
/// first-coordinate inversion is applied and the loop continues.
pub fn siegel_reduce(tau: &ComplexMatrix) -> Result<SiegelReduction> {
    let g = tau.rows();
    validate_riemann_matrix(tau)?;
    let mut cur = tau.clone();
    let mut gamma = SymplecticTransform::identity(g);
    let inversion = SymplecticTransform::first_coordinate_inversion(g);

    for iteration in 1..=MAX_SIEGEL_ITERATIONS {
        let t = cholesky_upper(&cur.im())?;
        let (_, u) = hkz_reduce(&LatticeBasis::from_columns(&t)?)?;
        let u = u.into_matrix();
        if !u.is_identity() {
            let ur = int_to_complex(&u);
            cur = ur.matmul(&cur).matmul(&ur.transpose()).symmetrized();
            gamma = SymplecticTransform::from_unimodular(&u)?.compose(&gamma);
        }

        let mut shift = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                shift[(i, j)] = -(cur[(i, j)].re.round_ties_even() as i64);
            }
        }
        if shift != IntMatrix::zeros(g, g) {
            for i in 0..g {
                for j in 0..g {
                    cur[(i, j)].re += shift[(i, j)] as f64;
                }
            }
            gamma = SymplecticTransform::translation(&shift)?.compose(&gamma);
        }

        if cur[(0, 0)].norm() < 1.0 - 1e-12 {
            cur = apply_symplectic(&inversion, &cur)?;
            gamma = inversion.compose(&gamma);
        } else {
            return Ok(SiegelReduction { tau: cur, gamma, iterations: iteration, stalled: false });
        }
    }
    Ok(SiegelReduction { tau: cur, gamma, iterations: MAX_SIEGEL_ITERATIONS, stalled: true })
}

/// Checks that `tau` is square, symmetric to `1e-10` relative, and has a
/// positive definite imaginary part.
pub fn validate_riemann_matrix(tau: &ComplexMatrix) -> Result<()> {
    if !tau.is_square() || tau.rows() == 0 {
        return Err(ThetaError::DimensionMismatch { expected: tau.rows(), found: tau.cols() });
    }
    let asym = tau.asymmetry();
    if asym > 1e-10 * tau.max_abs().max(f64::MIN_POSITIVE) {
        return Err(ThetaError::NotSymmetric { asymmetry: asym });
    }
    let im = tau.im();
    // tolerate the allowed asymmetry by testing the symmetric part
    let sym = RealMatrix::from_fn(im.rows(), im.cols(), |i, j| 0.5 * (im[(i, j)] + im[(j, i)]));
    cholesky_upper(&sym)?;
    Ok(())
}

/// A random Riemann matrix `(M_X + M_X^t)/2 + i M_Y^t M_Y` with entries of
/// `M_X`, `M_Y` uniform in `[-1, 1)`, deterministic in `seed`.
pub fn random_siegel(genus: usize, seed: u64) -> ComplexMatrix {
    assert!(genus >= 1, "genus must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mx = RealMatrix::from_fn(genus, genus, |_, _| rng.gen_range(-1.0..1.0));
        let my = RealMatrix::from_fn(genus, genus, |_, _| rng.gen_range(-1.0..1.0));
        let y = my.transpose().matmul(&my);
        let tau = ComplexMatrix::from_fn(genus, genus, |i, j| {
            Complex64::new(0.5 * (mx[(i, j)] + mx[(j, i)]), y[(i, j)])
        });
        if cholesky_upper(&y).is_ok() {
            return tau;
        }
    }
}
