//! Independent oracles shared by the integration tests. Nothing here calls
//! into the algorithm it is used to check.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riemann_theta::{ComplexMatrix, RealMatrix, RiemannContext};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn diag_i(g: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(g, g, |i, j| if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) })
}

pub fn random_rows(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

/// Rows with a Gram determinant far enough from zero to be a usable lattice.
pub fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    loop {
        let rows = random_rows(rng, n);
        let m = RealMatrix::from_rows(&rows).unwrap();
        let gram = m.matmul(&m.transpose());
        if determinant(&gram).abs() > 1e-4 {
            return rows;
        }
    }
}

fn determinant(m: &RealMatrix) -> f64 {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = m.to_rows();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        let pivot = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = row[k] / pivot[k];
            for (x, p) in row.iter_mut().zip(&pivot).skip(k) {
                *x -= f * p;
            }
        }
    }
    det
}

pub fn combination(rows: &[Vec<f64>], coeffs: &[i64]) -> Vec<f64> {
    let mut v = vec![0.0; rows[0].len()];
    for (r, &k) in rows.iter().zip(coeffs) {
        for (vi, ri) in v.iter_mut().zip(r) {
            *vi += k as f64 * ri;
        }
    }
    v
}

pub fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Every integer vector in `[-r, r]^n`, in odometer order.
pub fn box_points(n: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (2 * r + 1).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = idx % (2 * r + 1);
                idx /= 2 * r + 1;
                d - r
            })
            .collect()
    })
}

/// Minimum squared norm over nonzero coefficient vectors in `[-r, r]^n`.
pub fn brute_force_min(rows: &[Vec<f64>], r: i64) -> f64 {
    box_points(rows.len(), r)
        .filter(|k| k.iter().any(|&x| x != 0))
        .map(|k| norm_sq(&combination(rows, &k)))
        .fold(f64::INFINITY, f64::min)
}

/// Lagrange-Gauss reduction of a 2D basis; returns the reduced pair.
pub fn lagrange_gauss(mut u: Vec<f64>, mut v: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    if norm_sq(&u) > norm_sq(&v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let m = (dot(&u, &v) / norm_sq(&u)).round();
        let w: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a - m * b).collect();
        if norm_sq(&w) >= norm_sq(&u) {
            return (u, w);
        }
        v = u;
        u = w;
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact `min_{|c_j| <= b} || S (n - c) ||^2` for a 2x2 `S`: the minimum is 0
/// when `n` lies in the box, and otherwise sits on one of the four edges,
/// where it is a clamped one-dimensional quadratic.
pub fn box_min_2d(s: &RealMatrix, n: &[i64], b: f64) -> f64 {
    let nf = [n[0] as f64, n[1] as f64];
    if nf[0].abs() <= b && nf[1].abs() <= b {
        return 0.0;
    }
    let q = |c0: f64, c1: f64| {
        let d = [nf[0] - c0, nf[1] - c1];
        let r0 = s[(0, 0)] * d[0] + s[(0, 1)] * d[1];
        let r1 = s[(1, 0)] * d[0] + s[(1, 1)] * d[1];
        r0 * r0 + r1 * r1
    };
    let gram = s.transpose().matmul(s);
    let mut best = f64::INFINITY;
    for fixed in 0..2 {
        let free = 1 - fixed;
        for sign in [-1.0, 1.0] {
            let cf = sign * b;
            // minimise over d_free with d_fixed = n_fixed - cf
            let d_fixed = nf[fixed] - cf;
            let d_free_opt = -gram[(free, fixed)] * d_fixed / gram[(free, free)];
            let c_free = (nf[free] - d_free_opt).clamp(-b, b);
            let v = if fixed == 0 { q(cf, c_free) } else { q(c_free, cf) };
            best = best.min(v);
        }
    }
    best
}

/// `pi y^t Y^-1 y` for `y = Im z`, the log of the exponential growth factor.
pub fn growth_exponent(ctx: &RiemannContext, z: &[Complex64]) -> f64 {
    let y: Vec<f64> = z.iter().map(|v| v.im).collect();
    let yinv = ctx.y_inv().mul_vec(&y);
    std::f64::consts::PI * dot(&y, &yinv)
}

/// `a + tau b` with `a, b` uniform in `[0, 1)^g`, `tau` the context matrix.
pub fn random_cell_point(rng: &mut ChaCha8Rng, ctx: &RiemannContext) -> Vec<Complex64> {
    let g = ctx.genus();
    let a: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
    let b: Vec<f64> = (0..g).map(|_| rng.gen_range(0.0..1.0)).collect();
    let tau = ctx.tau();
    (0..g)
        .map(|i| c(a[i], 0.0) + (0..g).map(|j| tau[(i, j)] * b[j]).sum::<Complex64>())
        .collect()
}
