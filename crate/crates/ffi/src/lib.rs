//! C ABI for `riemann-theta`.
//!
//! Every fallible function returns a [`ThetaStatus`]; on failure a message is
//! available from [`theta_last_error_message`] on the same thread. Matrices
//! are passed row-major, complex matrices as separate real and imaginary
//! arrays. Panics never cross the boundary; they are reported as
//! `THETA_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use riemann_theta::schottky::{find_theta_null, hessian_at_null, numerical_rank};
use riemann_theta::{
    random_siegel, siegel_reduce, theta_split, Characteristic, ComplexMatrix, ContextOptions, DerivativeSpec,
    RealMatrix, RiemannContext, ThetaError,
};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotPositiveDefinite = 3,
    NotSymmetric = 4,
    DimensionMismatch = 5,
    DerivOrderExceeded = 6,
    EllipsoidTooLarge = 7,
    NoConvergence = 8,
    Numerical = 9,
    Panic = 10,
}

/// A complex number with the layout of C99 `double _Complex`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ThetaComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ThetaComplex {
    fn from(c: Complex64) -> Self {
        ThetaComplex { re: c.re, im: c.im }
    }
}

impl From<ThetaComplex> for Complex64 {
    fn from(c: ThetaComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// Opaque evaluation context for one Riemann matrix.
pub struct ThetaContext(RiemannContext);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(ThetaStatus, String);

impl From<ThetaError> for Failure {
    fn from(e: ThetaError) -> Self {
        let status = match e {
            ThetaError::NotPositiveDefinite { .. } => ThetaStatus::NotPositiveDefinite,
            ThetaError::NotSymmetric { .. } => ThetaStatus::NotSymmetric,
            ThetaError::DimensionMismatch { .. } => ThetaStatus::DimensionMismatch,
            ThetaError::DerivOrderExceeded { .. } => ThetaStatus::DerivOrderExceeded,
            ThetaError::EllipsoidTooLarge { .. } => ThetaStatus::EllipsoidTooLarge,
            ThetaError::NoConvergence(_) => ThetaStatus::NoConvergence,
            ThetaError::DegenerateBasis { .. } | ThetaError::SingularTransform { .. } | ThetaError::InvalidRadius { .. } => {
                ThetaStatus::Numerical
            }
            ThetaError::UnsupportedArgument(_) | ThetaError::InvalidInput(_) => ThetaStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ThetaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            ThetaStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal panic: {msg}"));
            ThetaStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ThetaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn context<'a>(ctx: *const ThetaContext) -> Result<&'a RiemannContext, Failure> {
    ctx.as_ref().map(|c| &c.0).ok_or_else(|| null("context"))
}

unsafe fn read_matrix(g: usize, re: *const f64, im: *const f64) -> Result<ComplexMatrix, Failure> {
    if g == 0 {
        return Err(Failure(ThetaStatus::InvalidInput, "genus must be at least 1".into()));
    }
    let re = input(re, g * g, "tau_re")?;
    let im = input(im, g * g, "tau_im")?;
    let re = RealMatrix::from_fn(g, g, |i, j| re[i * g + j]);
    let im = RealMatrix::from_fn(g, g, |i, j| im[i * g + j]);
    Ok(ComplexMatrix::from_parts(&re, &im)?)
}

fn write_matrix(m: &ComplexMatrix, re: &mut [f64], im: &mut [f64]) {
    for (k, v) in m.as_slice().iter().enumerate() {
        re[k] = v.re;
        im[k] = v.im;
    }
}

unsafe fn read_characteristic(g: usize, eps: *const u8, delta: *const u8) -> Result<Characteristic, Failure> {
    if eps.is_null() && delta.is_null() {
        return Ok(Characteristic::zero(g));
    }
    let eps = input(eps, g, "eps")?.to_vec();
    let delta = input(delta, g, "delta")?.to_vec();
    Ok(Characteristic::new(eps, delta)?)
}

/// Builds a context for the `g x g` matrix `tau_re + i tau_im`.
///
/// # Safety
/// `tau_re` and `tau_im` must point to `g * g` doubles; `out` must be writable.
/// Free the result with [`theta_context_free`].
#[no_mangle]
pub unsafe extern "C" fn theta_context_new(
    g: usize,
    tau_re: *const f64,
    tau_im: *const f64,
    eps: f64,
    nderivs: u32,
    siegel: bool,
    out: *mut *mut ThetaContext,
) -> ThetaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let tau = read_matrix(g, tau_re, tau_im)?;
        let options = ContextOptions { eps, nderivs: nderivs as usize, siegel, ..ContextOptions::default() };
        let ctx = RiemannContext::new(&tau, options)?;
        *out = Box::into_raw(Box::new(ThetaContext(ctx)));
        Ok(())
    })
}

/// Releases a context. Null is ignored.
///
/// # Safety
/// `ctx` must come from [`theta_context_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn theta_context_free(ctx: *mut ThetaContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Genus of the context, or 0 for null.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn theta_context_genus(ctx: *const ThetaContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.0.genus())
}

/// Length of the shortest vector of the lattice `sqrt(pi) T Z^g`.
///
/// # Safety
/// `ctx` must be a live context and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn theta_context_rho(ctx: *const ThetaContext, out: *mut f64) -> ThetaStatus {
    guard(|| {
        let ctx = context(ctx)?;
        output(out, 1, "out")?[0] = ctx.rho();
        Ok(())
    })
}

/// The matrix the context evaluates at (Siegel-reduced when enabled), and
/// optionally the `2g x 2g` symplectic transform mapping the input to it.
///
/// # Safety
/// `re` and `im` must hold `g * g` doubles; `gamma` is null or holds `4 g * g` integers.
#[no_mangle]
pub unsafe extern "C" fn theta_context_reduced_tau(
    ctx: *const ThetaContext,
    re: *mut f64,
    im: *mut f64,
    gamma: *mut i64,
) -> ThetaStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let g = ctx.genus();
        write_matrix(ctx.tau(), output(re, g * g, "re")?, output(im, g * g, "im")?);
        if !gamma.is_null() {
            let out = output(gamma, 4 * g * g, "gamma")?;
            for (k, v) in ctx.gamma().matrix().to_rows().into_iter().flatten().enumerate() {
                out[k] = v;
            }
        }
        Ok(())
    })
}

unsafe fn eval(
    ctx: *const ThetaContext,
    z: *const ThetaComplex,
    eps: *const u8,
    delta: *const u8,
    directions: *const ThetaComplex,
    order: usize,
) -> Result<riemann_theta::ThetaValue, Failure> {
    let ctx = context(ctx)?;
    let g = ctx.genus();
    let z: Vec<Complex64> = input(z, g, "z")?.iter().map(|&c| c.into()).collect();
    let m = read_characteristic(g, eps, delta)?;
    let dirs = input(directions, order * g, "directions")?;
    let spec = if order == 0 {
        DerivativeSpec::none()
    } else {
        DerivativeSpec::new(dirs.chunks_exact(g).map(|k| k.iter().map(|&c| c.into()).collect()).collect())?
    };
    Ok(theta_split(&z, ctx, &m, &spec)?)
}

/// `D(k) theta[m](z, tau)`.
///
/// `eps` and `delta` (each `g` bytes of 0/1) may both be null for the zero
/// characteristic. `directions` holds `order` vectors of length `g`, one
/// after another; it may be null when `order` is 0.
///
/// # Safety
/// Pointers must be valid for the lengths above; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_eval(
    ctx: *const ThetaContext,
    z: *const ThetaComplex,
    eps: *const u8,
    delta: *const u8,
    directions: *const ThetaComplex,
    order: usize,
    out: *mut ThetaComplex,
) -> ThetaStatus {
    guard(|| {
        let v = eval(ctx, z, eps, delta, directions, order)?;
        output(out, 1, "out")?[0] = v.value().into();
        Ok(())
    })
}

/// As [`theta_eval`], returning `value = mantissa * exp(exponent)` so that
/// large `Im z` cannot overflow.
///
/// # Safety
/// As for [`theta_eval`]; `mantissa` and `exponent` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_eval_split(
    ctx: *const ThetaContext,
    z: *const ThetaComplex,
    eps: *const u8,
    delta: *const u8,
    directions: *const ThetaComplex,
    order: usize,
    mantissa: *mut ThetaComplex,
    exponent: *mut f64,
) -> ThetaStatus {
    guard(|| {
        let v = eval(ctx, z, eps, delta, directions, order)?;
        output(mantissa, 1, "mantissa")?[0] = v.mantissa.into();
        output(exponent, 1, "exponent")?[0] = v.exponent;
        Ok(())
    })
}

/// Siegel-reduces `tau`. `gamma` may be null; otherwise it receives the
/// `2g x 2g` transform. `stalled` may be null.
///
/// # Safety
/// Input arrays hold `g * g` doubles, as do `out_re` and `out_im`.
#[no_mangle]
pub unsafe extern "C" fn theta_siegel_reduce(
    g: usize,
    tau_re: *const f64,
    tau_im: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
    gamma: *mut i64,
    stalled: *mut bool,
) -> ThetaStatus {
    guard(|| {
        let tau = read_matrix(g, tau_re, tau_im)?;
        let red = siegel_reduce(&tau)?;
        write_matrix(&red.tau, output(out_re, g * g, "out_re")?, output(out_im, g * g, "out_im")?);
        if !gamma.is_null() {
            let out = output(gamma, 4 * g * g, "gamma")?;
            for (k, v) in red.gamma.matrix().to_rows().into_iter().flatten().enumerate() {
                out[k] = v;
            }
        }
        if let Some(s) = stalled.as_mut() {
            *s = red.stalled;
        }
        Ok(())
    })
}

/// A random Riemann matrix, deterministic in `seed`.
///
/// # Safety
/// `out_re` and `out_im` must hold `g * g` doubles.
#[no_mangle]
pub unsafe extern "C" fn theta_random_siegel(g: usize, seed: u64, out_re: *mut f64, out_im: *mut f64) -> ThetaStatus {
    guard(|| {
        if g == 0 {
            return Err(Failure(ThetaStatus::InvalidInput, "genus must be at least 1".into()));
        }
        write_matrix(&random_siegel(g, seed), output(out_re, g * g, "out_re")?, output(out_im, g * g, "out_im")?);
        Ok(())
    })
}

/// Scans the even theta constants for one below `tol` (a negative `tol`
/// selects the default, `1e-6` times the largest constant). The smallest
/// constant and its characteristic are written either way; `found` tells
/// whether it is below the tolerance.
///
/// # Safety
/// `eps_out` and `delta_out` must hold `g` bytes; `value` and `found` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_find_null(
    ctx: *const ThetaContext,
    tol: f64,
    eps_out: *mut u8,
    delta_out: *mut u8,
    value: *mut ThetaComplex,
    found: *mut bool,
) -> ThetaStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let g = ctx.genus();
        let search = find_theta_null(ctx, if tol < 0.0 { None } else { Some(tol) })?;
        output(eps_out, g, "eps_out")?.copy_from_slice(search.best.eps());
        output(delta_out, g, "delta_out")?.copy_from_slice(search.best.delta());
        output(value, 1, "value")?[0] = search.best_value.into();
        output(found, 1, "found")?[0] = search.found.is_some();
        Ok(())
    })
}

/// Symmetrised Hessian of `theta[m]` at `z = 0`, row-major into `g * g`
/// complex entries. The context needs `nderivs >= 2` and `m` must be even.
///
/// # Safety
/// `eps`, `delta` hold `g` bytes; `out` holds `g * g` entries.
#[no_mangle]
pub unsafe extern "C" fn theta_hessian(
    ctx: *const ThetaContext,
    eps: *const u8,
    delta: *const u8,
    out: *mut ThetaComplex,
) -> ThetaStatus {
    guard(|| {
        let ctx = context(ctx)?;
        let g = ctx.genus();
        let m = read_characteristic(g, eps, delta)?;
        let h = hessian_at_null(ctx, &m)?;
        let out = output(out, g * g, "out")?;
        for (k, v) in h.as_slice().iter().enumerate() {
            out[k] = (*v).into();
        }
        Ok(())
    })
}

/// Numerical rank of an `n x n` complex matrix: singular values above
/// `rel_tol * sigma_max`. `singular_values` (n entries, descending) may be null.
///
/// # Safety
/// `m` holds `n * n` entries row-major; `rank` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_numerical_rank(
    n: usize,
    m: *const ThetaComplex,
    rel_tol: f64,
    rank: *mut usize,
    singular_values: *mut f64,
) -> ThetaStatus {
    guard(|| {
        let entries = input(m, n * n, "m")?;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| entries[i * n + j].into());
        let report = numerical_rank(&matrix, rel_tol);
        output(rank, 1, "rank")?[0] = report.rank;
        if !singular_values.is_null() {
            output(singular_values, n, "singular_values")?.copy_from_slice(&report.singular_values);
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn theta_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
