mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use riemann_theta::bounds::{error_bound, incomplete_gamma_upper, solve_radius, ErrorBoundParams};
use riemann_theta::lattice::{shortest_vector, LatticeBasis};
use riemann_theta::{
    build_context, random_siegel, reduce_argument, theta, theta_naive, theta_split, theta_with, Characteristic,
    ComplexMatrix, DerivativeSpec, ThetaError,
};

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn incomplete_gamma_matches_quadrature() {
    for (s, x) in [(2.5, 1.3), (1.5, 0.4), (4.0, 7.5), (0.5, 2.0)] {
        let quad = if s < 1.0 {
            // substitute t = x + u^2 to remove the endpoint singularity
            simpson(|u: f64| 2.0 * u * (x + u * u).powf(s - 1.0) * (-(x + u * u)).exp(), 0.0, 12.0, 200_000)
        } else {
            simpson(|t: f64| t.powf(s - 1.0) * (-t).exp(), x, x + 150.0, 400_000)
        };
        let v = incomplete_gamma_upper(s, x).unwrap();
        assert!((v - quad).abs() <= 1e-12 * quad.max(1.0), "s={s} x={x}: {v} vs {quad}");
    }
}

#[test]
fn solved_radius_controls_actual_error() {
    for (seed, eps) in [(1u64, 1e-4), (2, 1e-8), (3, 1e-12)] {
        let ctx = build_context(&random_siegel(2, seed), eps, 0, true).unwrap();
        let mut r = rng(seed);
        for _ in 0..10 {
            let z = random_cell_point(&mut r, &ctx);
            let scale = growth_exponent(&ctx, &z).exp();
            let err = (theta(&z, &ctx).unwrap() - theta_naive(&z, ctx.tau(), &Characteristic::zero(2), &DerivativeSpec::none(), 25)).norm();
            assert!(err <= eps * scale, "eps {eps}: error {err}");
        }
    }
}

#[test]
fn context_invariants() {
    let ctx = build_context(&random_siegel(4, 17), 1e-10, 3, true).unwrap();
    let t = ctx.t();
    assert!(t.transpose().matmul(t).max_abs_diff(ctx.y()) <= 1e-12 * ctx.y().max_abs());
    let rho = shortest_vector(&LatticeBasis::from_columns(&t.scale(PI.sqrt())).unwrap()).unwrap().rho;
    assert_eq!(rho, ctx.rho());
    for n in 0..=3 {
        let p = ErrorBoundParams { genus: 4, order: n, rho, tinv_norm: ctx.tinv_norm(), eps: 1e-10 };
        assert!(ctx.radius(n).unwrap() >= solve_radius(&p).unwrap());
        assert!(error_bound(ctx.radius(n).unwrap(), &p).unwrap() <= 1e-10);
        assert_eq!(ctx.cache(n).unwrap().radius(), ctx.radius(n).unwrap());
    }
}

#[test]
fn quasi_periodicity_against_naive() {
    let ctx = build_context(&diag_i(1), 1e-12, 0, true).unwrap();
    let none = DerivativeSpec::none();
    for m in Characteristic::all(1) {
        for z in [c(0.0, 1.0), c(2.3, -1.7), c(-3.2, 2.4)] {
            let red = reduce_argument(&[z], &ctx).unwrap();
            let fold = red.z0[0] + red.p[0] as f64 + ctx.tau()[(0, 0)] * red.q[0] as f64;
            assert!((fold - z).norm() < 1e-14);
            let scale = growth_exponent(&ctx, &[z]).exp();
            let fast = theta_with(&[z], &ctx, &m, &none).unwrap();
            let slow = theta_naive(&[z], ctx.tau(), &m, &none, 30);
            assert!((fast - slow).norm() <= 1e-10 * scale, "{m} at {z}: {fast} vs {slow}");
        }
    }
}

#[test]
fn shifted_arguments_in_genus_three() {
    let ctx = build_context(&random_siegel(3, 5), 1e-12, 1, true).unwrap();
    let mut r = rng(6);
    let tau = ctx.tau().clone();
    for _ in 0..10 {
        let base = random_cell_point(&mut r, &ctx);
        let p: Vec<i64> = (0..3).map(|_| r.gen_range(-2..=2)).collect();
        let q: Vec<i64> = (0..3).map(|_| r.gen_range(-1..=1)).collect();
        let z: Vec<Complex64> = (0..3)
            .map(|i| base[i] + p[i] as f64 + (0..3).map(|j| tau[(i, j)] * q[j] as f64).sum::<Complex64>())
            .collect();
        let m = Characteristic::from_index(3, r.gen_range(0..64));
        let d = DerivativeSpec::from_real(&[vec![0.3, -1.0, 0.5]]).unwrap();
        let scale = growth_exponent(&ctx, &z).exp();
        for spec in [DerivativeSpec::none(), d] {
            let fast = theta_with(&z, &ctx, &m, &spec).unwrap();
            let slow = theta_naive(&z, &tau, &m, &spec, 16);
            assert!((fast - slow).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn first_derivative_term_by_term_genus_two() {
    // with z in the cell and tau = i I the shift eta vanishes, so each term
    // of the fast sum is an independent copy of the naive term
    let tau = diag_i(2);
    let ctx = build_context(&tau, 1e-12, 1, false).unwrap();
    let z = [c(0.2, 0.1), c(0.7, 0.3)];
    let k = vec![c(0.6, 0.0), c(0.0, 0.8)];
    let spec = DerivativeSpec::new(vec![k.clone()]).unwrap();
    let mut manual = c(0.0, 0.0);
    for n0 in -12i64..=12 {
        for n1 in -12i64..=12 {
            let n = [n0 as f64, n1 as f64];
            let quad = 0.5 * (n[0] * n[0] + n[1] * n[1]) * c(0.0, 1.0) + n[0] * z[0] + n[1] * z[1];
            let lin = k[0] * n[0] + k[1] * n[1];
            manual += c(0.0, 2.0 * PI) * lin * (c(0.0, 2.0 * PI) * quad).exp();
        }
    }
    let fast = theta_with(&z, &ctx, &Characteristic::zero(2), &spec).unwrap();
    assert!((fast - manual).norm() < 1e-11 * manual.norm().max(1.0));
}

#[test]
fn derivative_scaling_is_linear() {
    let ctx = build_context(&random_siegel(2, 8), 1e-12, 2, true).unwrap();
    let z = [c(0.1, 0.2), c(-0.3, 0.1)];
    let m = Characteristic::from_index(2, 5);
    let k = vec![c(0.3, -0.1), c(0.8, 0.2)];
    let unit = theta_with(&z, &ctx, &m, &DerivativeSpec::new(vec![k.clone()]).unwrap()).unwrap();
    let s = 3.7;
    let ck: Vec<Complex64> = k.iter().map(|v| v * s).collect();
    let scaled = theta_with(&z, &ctx, &m, &DerivativeSpec::new(vec![ck]).unwrap()).unwrap();
    assert!((scaled - unit * s).norm() <= 1e-12 * scaled.norm());
}

#[test]
fn split_value_survives_large_imaginary_parts() {
    let ctx = build_context(&diag_i(1), 1e-12, 0, true).unwrap();
    let z = [c(0.3, 300.0)];
    let split = theta_split(&z, &ctx, &Characteristic::zero(1), &DerivativeSpec::none()).unwrap();
    assert!((split.exponent - growth_exponent(&ctx, &z)).abs() <= 1e-10 * split.exponent);
    assert!(split.mantissa.norm() > 0.1 && split.mantissa.norm() < 10.0);
}

#[test]
fn naive_oracle_stabilises() {
    let tau = ComplexMatrix::scalar(c(0.0, 1.0));
    let z = [c(0.0, 0.0)];
    let none = DerivativeSpec::none();
    let v6 = theta_naive(&z, &tau, &Characteristic::zero(1), &none, 6);
    let v30 = theta_naive(&z, &tau, &Characteristic::zero(1), &none, 30);
    assert_eq!(v6, v30);
}

#[test]
fn mismatched_inputs_rejected() {
    let ctx = build_context(&diag_i(2), 1e-12, 0, true).unwrap();
    assert!(matches!(theta(&[c(0.0, 0.0)], &ctx), Err(ThetaError::DimensionMismatch { .. })));
    let m = Characteristic::zero(3);
    assert!(theta_with(&[c(0.0, 0.0); 2], &ctx, &m, &DerivativeSpec::none()).is_err());
    assert!(DerivativeSpec::from_real(&[vec![0.0, 0.0]]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn parity_law(seed in any::<u64>(), g in 1usize..=3) {
        let ctx = build_context(&random_siegel(g, seed), 1e-12, 0, true).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let z = random_cell_point(&mut r, &ctx);
        let m = Characteristic::from_index(g, r.gen_range(0..1u64 << (2 * g)));
        let minus: Vec<Complex64> = z.iter().map(|v| -v).collect();
        let scale = growth_exponent(&ctx, &z).exp();
        let a = theta_with(&minus, &ctx, &m, &DerivativeSpec::none()).unwrap();
        let b = theta_with(&z, &ctx, &m, &DerivativeSpec::none()).unwrap();
        prop_assert!((a - m.parity().sign() * b).norm() <= 1e-9 * scale);
    }
}
