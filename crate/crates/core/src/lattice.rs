//! Lattice algorithms for small real lattices: Cholesky factorisation, LLL,
//! exact shortest vectors by Schnorr-Euchner enumeration, HKZ reduction and
//! enumeration of the integer points of the deformed summation ellipsoid.
//!
//! Bases are stored row-wise: row `i` of the generator matrix is the `i`-th
//! basis vector, and a unimodular transform `U` acts as `B' = U * B`.

use std::collections::HashSet;

use crate::error::{Result, ThetaError};
use crate::matrix::{dot, IntMatrix, RealMatrix};

/// Default Lovasz parameter.
pub const LLL_DELTA: f64 = 0.99;

/// Default cap on the number of points in an ellipsoid cache.
pub const DEFAULT_MAX_ELLIPSOID_POINTS: usize = 10_000_000;

const DEGENERATE_NORM_SQ: f64 = 1e-300;
const DEGENERATE_RELATIVE: f64 = 1e-28;
const TIE_RELATIVE: f64 = 1e-10;

/// Upper Cholesky factor `T` with `Y = T^t T`.
pub fn cholesky_upper(y: &RealMatrix) -> Result<RealMatrix> {
    if !y.is_square() {
        return Err(ThetaError::DimensionMismatch { expected: y.rows(), found: y.cols() });
    }
    let scale = y.max_abs();
    let asym = y.asymmetry();
    if asym > 1e-12 * scale {
        return Err(ThetaError::NotSymmetric { asymmetry: asym });
    }
    let n = y.rows();
    let mut t = RealMatrix::zeros(n, n);
    for i in 0..n {
        let mut d = y[(i, i)];
        for k in 0..i {
            d -= t[(k, i)] * t[(k, i)];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(ThetaError::NotPositiveDefinite { index: i, pivot: d });
        }
        let tii = d.sqrt();
        t[(i, i)] = tii;
        for j in i + 1..n {
            let mut s = y[(i, j)];
            for k in 0..i {
                s -= t[(k, i)] * t[(k, j)];
            }
            t[(i, j)] = s / tii;
        }
    }
    Ok(t)
}

/// A lattice generated by the rows of a real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    basis: RealMatrix,
}

impl LatticeBasis {
    pub fn new(basis: RealMatrix) -> Result<Self> {
        if basis.rows() == 0 || basis.rows() > basis.cols() {
            return Err(ThetaError::InvalidInput(format!(
                "lattice basis needs 1..={} rows, got {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let lb = LatticeBasis { basis };
        lb.gram_schmidt()?;
        Ok(lb)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(RealMatrix::from_rows(rows)?)
    }

    /// The lattice `{ T n : n in Z^g }`, i.e. the columns of `T` as basis rows.
    pub fn from_columns(t: &RealMatrix) -> Result<Self> {
        Self::new(t.transpose())
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.basis
    }

    pub fn vector(&self, coeffs: &[i64]) -> Vec<f64> {
        let mut v = vec![0.0; self.ambient_dim()];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                    *vj += c as f64 * bj;
                }
            }
        }
        v
    }

    fn gram_schmidt(&self) -> Result<GramSchmidt> {
        GramSchmidt::new(&self.basis.to_rows())
    }

    /// `U * B`.
    pub fn transformed(&self, u: &UnimodularTransform) -> LatticeBasis {
        LatticeBasis { basis: u.matrix().to_real().matmul(&self.basis) }
    }
}

/// Integer matrix of determinant +-1 recording a change of lattice basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularTransform(IntMatrix);

impl UnimodularTransform {
    pub fn identity(n: usize) -> Self {
        UnimodularTransform(IntMatrix::identity(n))
    }

    pub fn new(m: IntMatrix) -> Result<Self> {
        if m.rows() != m.cols() || m.determinant().abs() != 1 {
            return Err(ThetaError::InvalidInput("matrix is not unimodular".into()));
        }
        Ok(UnimodularTransform(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn determinant(&self) -> i128 {
        self.0.determinant()
    }
}

struct GramSchmidt {
    mu: Vec<Vec<f64>>,
    norm_sq: Vec<f64>,
}

impl GramSchmidt {
    fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        let mut norm_sq = vec![0.0; n];
        for i in 0..n {
            let mut v = rows[i].clone();
            for j in 0..i {
                let m = dot(&rows[i], &star[j]) / norm_sq[j];
                mu[i][j] = m;
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= m * sk;
                }
            }
            mu[i][i] = 1.0;
            let ns = dot(&v, &v);
            let scale = dot(&rows[i], &rows[i]);
            if !(ns > DEGENERATE_NORM_SQ) || ns < DEGENERATE_RELATIVE * scale {
                return Err(ThetaError::DegenerateBasis { index: i, norm_sq: ns });
            }
            norm_sq[i] = ns;
            star.push(v);
        }
        Ok(GramSchmidt { mu, norm_sq })
    }
}

fn sub_row_multiple(rows: &mut [Vec<f64>], u: &mut IntMatrix, target: usize, source: usize, q: i64) {
    let (src, tgt) = (rows[source].clone(), &mut rows[target]);
    for (t, s) in tgt.iter_mut().zip(&src) {
        *t -= q as f64 * s;
    }
    for j in 0..u.cols() {
        u[(target, j)] -= q * u[(source, j)];
    }
}

fn swap_rows(rows: &mut [Vec<f64>], u: &mut IntMatrix, a: usize, b: usize) {
    rows.swap(a, b);
    for j in 0..u.cols() {
        let tmp = u[(a, j)];
        u[(a, j)] = u[(b, j)];
        u[(b, j)] = tmp;
    }
}

/// Size-reduce every row against its predecessors (`|mu_ij| <= 1/2`).
fn size_reduce(rows: &mut [Vec<f64>], u: &mut IntMatrix) -> Result<()> {
    for i in 1..rows.len() {
        for j in (0..i).rev() {
            let gs = GramSchmidt::new(rows)?;
            let q = gs.mu[i][j].round();
            if q != 0.0 {
                sub_row_multiple(rows, u, i, j, q as i64);
            }
        }
    }
    Ok(())
}

/// LLL reduction with Lovasz parameter `delta`. Returns the reduced basis
/// and `U` with `B' = U * B`.
pub fn lll_reduce(b: &LatticeBasis, delta: f64) -> Result<(LatticeBasis, UnimodularTransform)> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(ThetaError::InvalidInput(format!("LLL delta {delta} outside (1/4, 1)")));
    }
    let n = b.dim();
    let mut rows = b.basis.to_rows();
    let mut u = IntMatrix::identity(n);
    let mut k = 1;
    let mut steps = 0usize;
    while k < n {
        steps += 1;
        if steps > 100_000 {
            return Err(ThetaError::NoConvergence("LLL exceeded 100000 steps".into()));
        }
        for j in (0..k).rev() {
            let gs = GramSchmidt::new(&rows)?;
            let q = gs.mu[k][j].round();
            if q != 0.0 {
                sub_row_multiple(&mut rows, &mut u, k, j, q as i64);
            }
        }
        let gs = GramSchmidt::new(&rows)?;
        let m = gs.mu[k][k - 1];
        if gs.norm_sq[k] >= (delta - m * m) * gs.norm_sq[k - 1] {
            k += 1;
        } else {
            swap_rows(&mut rows, &mut u, k, k - 1);
            k = (k - 1).max(1);
        }
    }
    // a final check also rejects a basis that was degenerate from the start
    // when it had a single row
    GramSchmidt::new(&rows)?;
    let basis = LatticeBasis { basis: RealMatrix::from_rows(&rows)? };
    Ok((basis, UnimodularTransform(u)))
}

/// A shortest nonzero lattice vector, in coefficients of the input basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestVector {
    pub coeffs: Vec<i64>,
    pub rho: f64,
}

/// Exact shortest nonzero vector by Schnorr-Euchner enumeration on an
/// LLL-reduced basis. Among (numerically) tied minimisers the coefficient
/// vector with positive leading entry that is lexicographically smallest is
/// returned.
pub fn shortest_vector(b: &LatticeBasis) -> Result<ShortestVector> {
    let (reduced, u) = lll_reduce(b, LLL_DELTA)?;
    let gs = reduced.gram_schmidt()?;
    let n = reduced.dim();

    let first = reduced.basis.row(0);
    let mut enumerator = Enumerator {
        mu: &gs.mu,
        norm_sq: &gs.norm_sq,
        best: dot(first, first),
        found: Vec::new(),
        x: vec![0; n],
    };
    enumerator.radius_sq_update();
    enumerator.search(n - 1, 0.0);

    let best = enumerator.best;
    let mut candidates: Vec<Vec<i64>> = enumerator
        .found
        .iter()
        .filter(|(ns, _)| *ns <= best * (1.0 + TIE_RELATIVE))
        .map(|(_, x)| {
            // v = x * B' = x * U * B
            let mut c = vec![0i64; n];
            for (i, &xi) in x.iter().enumerate() {
                if xi != 0 {
                    for (j, cj) in c.iter_mut().enumerate() {
                        *cj += xi * u.0[(i, j)];
                    }
                }
            }
            normalize_sign(&mut c);
            c
        })
        .collect();
    if candidates.is_empty() {
        let mut c = u.0.row(0).to_vec();
        normalize_sign(&mut c);
        candidates.push(c);
    }
    candidates.sort();
    candidates.dedup();
    let coeffs = candidates.swap_remove(0);
    let v = b.vector(&coeffs);
    Ok(ShortestVector { rho: dot(&v, &v).sqrt(), coeffs })
}

fn normalize_sign(c: &mut [i64]) {
    if let Some(&lead) = c.iter().find(|&&x| x != 0) {
        if lead < 0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

struct Enumerator<'a> {
    mu: &'a [Vec<f64>],
    norm_sq: &'a [f64],
    best: f64,
    found: Vec<(f64, Vec<i64>)>,
    x: Vec<i64>,
}

impl Enumerator<'_> {
    fn radius_sq(&self) -> f64 {
        self.best * (1.0 + 2.0 * TIE_RELATIVE)
    }

    fn radius_sq_update(&mut self) {
        let r = self.radius_sq();
        self.found.retain(|(ns, _)| *ns <= r);
    }

    /// Depth-first over level `k` given the partial squared length of levels above.
    fn search(&mut self, k: usize, partial: f64) {
        let n = self.x.len();
        let center: f64 = -(k + 1..n).map(|j| self.x[j] as f64 * self.mu[j][k]).sum::<f64>();
        let start = center.round();
        let step = if center >= start { 1.0 } else { -1.0 };
        // zig-zag start, start+s, start-s, start+2s, ...; distance to the
        // center grows monotonically along each side
        let mut open = [true, true];
        let mut j = 0.0;
        while open[0] || open[1] {
            for side in 0..2 {
                if !open[side] || (j == 0.0 && side == 1) {
                    continue;
                }
                let xk = if side == 0 { start + step * j } else { start - step * j };
                let diff = xk - center;
                let len = partial + diff * diff * self.norm_sq[k];
                if len > self.radius_sq() {
                    open[side] = false;
                    if j == 0.0 {
                        open = [false, false];
                    }
                    continue;
                }
                self.x[k] = xk as i64;
                if k == 0 {
                    if self.x.iter().any(|&v| v != 0) {
                        if len < self.best {
                            self.best = len;
                            self.radius_sq_update();
                        }
                        self.found.push((len, self.x.clone()));
                    }
                } else {
                    self.search(k - 1, len);
                }
            }
            j += 1.0;
        }
        self.x[k] = 0;
    }
}

/// Integer matrix with first row `x`; `x` must be primitive.
fn unimodular_with_first_row(x: &[i64]) -> Result<IntMatrix> {
    let n = x.len();
    let mut a = x.to_vec();
    // invariant: x = a * inv
    let mut inv = IntMatrix::identity(n);
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| a[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| a[i].abs()).expect("nonempty");
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let q = a[j] / a[p];
            if q != 0 {
                // column op col_j -= q col_p on V, row op row_p += q row_j on V^-1
                a[j] -= q * a[p];
                for c in 0..n {
                    inv[(p, c)] += q * inv[(j, c)];
                }
            }
        }
    }
    let Some(p) = (0..n).find(|&i| a[i] != 0) else {
        return Err(ThetaError::InvalidInput("zero vector has no unimodular completion".into()));
    };
    if a[p].abs() != 1 {
        return Err(ThetaError::InvalidInput(format!("coefficient vector {x:?} is not primitive")));
    }
    if p != 0 {
        a.swap(0, p);
        for c in 0..n {
            let tmp = inv[(0, c)];
            inv[(0, c)] = inv[(p, c)];
            inv[(p, c)] = tmp;
        }
    }
    if a[0] == -1 {
        for c in 0..n {
            inv[(0, c)] = -inv[(0, c)];
        }
    }
    debug_assert_eq!(inv.row(0), x);
    Ok(inv)
}

fn hkz_rows(rows: &[Vec<f64>]) -> Result<IntMatrix> {
    let n = rows.len();
    let basis = LatticeBasis { basis: RealMatrix::from_rows(rows)? };
    let sv = shortest_vector(&basis)?;
    // keep the current first vector when it is already shortest, so that
    // reduced bases come back unchanged instead of permuted by tie-breaking
    let first_sq = dot(&rows[0], &rows[0]);
    let coeffs = if first_sq <= sv.rho * sv.rho * (1.0 + 1e-10) {
        let mut e1 = vec![0; n];
        e1[0] = 1;
        e1
    } else {
        sv.coeffs
    };
    let u1 = unimodular_with_first_row(&coeffs)?;
    if n == 1 {
        return Ok(u1);
    }
    let b1 = u1.to_real().matmul(&basis.basis);
    let v = b1.row(0).to_vec();
    let vv = dot(&v, &v);
    let projected: Vec<Vec<f64>> = (1..n)
        .map(|i| {
            let r = b1.row(i);
            let c = dot(r, &v) / vv;
            r.iter().zip(&v).map(|(ri, vi)| ri - c * vi).collect()
        })
        .collect();
    let sub = hkz_rows(&projected)?;
    let mut u2 = IntMatrix::identity(n);
    for i in 1..n {
        for j in 1..n {
            u2[(i, j)] = sub[(i - 1, j - 1)];
        }
    }
    Ok(u2.matmul(&u1))
}

/// Hermite-Korkine-Zolotarev reduction: the first output vector is a
/// shortest lattice vector and each later vector is shortest in the
/// projection orthogonal to its predecessors; the result is size-reduced.
pub fn hkz_reduce(b: &LatticeBasis) -> Result<(LatticeBasis, UnimodularTransform)> {
    if b.dim() > 10 {
        return Err(ThetaError::UnsupportedArgument(format!(
            "HKZ reduction supports dimension <= 10, got {}",
            b.dim()
        )));
    }
    b.gram_schmidt()?;
    let mut u = hkz_rows(&b.basis.to_rows())?;
    let mut rows = u.to_real().matmul(&b.basis).to_rows();
    size_reduce(&mut rows, &mut u)?;
    // recompute from the exact integer transform so B' = U * B holds as stated
    let basis = LatticeBasis { basis: u.to_real().matmul(&b.basis) };
    Ok((basis, UnimodularTransform(u)))
}

/// Integer points of a (possibly deformed) ellipsoid, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidCache {
    dim: usize,
    radius: f64,
    offset_bound: f64,
    order: usize,
    points: Vec<i64>,
}

impl EllipsoidCache {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn offset_bound(&self) -> f64 {
        self.offset_bound
    }

    /// Derivative order this cache was built for.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, i64> {
        self.points.chunks_exact(self.dim.max(1))
    }

    pub fn contains(&self, n: &[i64]) -> bool {
        self.iter().any(|p| p == n)
    }

    pub fn to_set(&self) -> HashSet<Vec<i64>> {
        self.iter().map(<[i64]>::to_vec).collect()
    }
}

/// All integer `n` with `min_{|c_j| <= offset_bound} || sqrt(pi) T (n - c) || < radius`.
///
/// Candidates come from a Fincke-Pohst style descent over the rows of the
/// upper-triangular `T`, pruned with the exact per-row minimum over the
/// offset box; each candidate is then checked by minimising the convex
/// quadratic over the box by coordinate descent. A point whose descent does
/// not converge is kept, so the result can only err towards a superset.
pub fn enumerate_deformed_ellipsoid(
    t: &RealMatrix,
    radius: f64,
    offset_bound: f64,
    max_points: usize,
) -> Result<EllipsoidCache> {
    let g = t.rows();
    if !t.is_square() || g == 0 {
        return Err(ThetaError::DimensionMismatch { expected: t.rows(), found: t.cols() });
    }
    if !t.is_upper_triangular() || (0..g).any(|i| !(t[(i, i)] > 0.0)) {
        return Err(ThetaError::InvalidInput("expected upper-triangular T with positive diagonal".into()));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(ThetaError::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    if !(offset_bound >= 0.0) {
        return Err(ThetaError::InvalidInput(format!("offset bound must be >= 0, got {offset_bound}")));
    }
    let s = t.scale(std::f64::consts::PI.sqrt());
    let gram = s.transpose().matmul(&s);
    // per-row slack from the offset box
    let slack: Vec<f64> = (0..g).map(|i| offset_bound * (i..g).map(|j| s[(i, j)].abs()).sum::<f64>()).collect();

    let mut ctx = EnumState {
        g,
        s: &s,
        gram: &gram,
        slack: &slack,
        r_sq: radius * radius,
        offset_bound,
        max_points,
        candidates_seen: 0,
        n: vec![0; g],
        points: Vec::new(),
    };
    ctx.descend(g - 1, 0.0)?;
    Ok(EllipsoidCache { dim: g, radius, offset_bound, order: 0, points: ctx.points })
}

struct EnumState<'a> {
    g: usize,
    s: &'a RealMatrix,
    gram: &'a RealMatrix,
    slack: &'a [f64],
    r_sq: f64,
    offset_bound: f64,
    max_points: usize,
    candidates_seen: usize,
    n: Vec<i64>,
    points: Vec<i64>,
}

impl EnumState<'_> {
    fn descend(&mut self, i: usize, lower: f64) -> Result<()> {
        let rem = self.r_sq - lower;
        if rem <= 0.0 {
            return Ok(());
        }
        let tail: f64 = (i + 1..self.g).map(|j| self.s[(i, j)] * self.n[j] as f64).sum();
        let d = self.s[(i, i)];
        let w = self.slack[i] + rem.sqrt();
        let lo = ((-tail - w) / d).ceil() as i64;
        let hi = ((-tail + w) / d).floor() as i64;
        for ni in lo..=hi {
            let row = d * ni as f64 + tail;
            let excess = (row.abs() - self.slack[i]).max(0.0);
            let next = lower + excess * excess;
            if next >= self.r_sq {
                continue;
            }
            self.n[i] = ni;
            if i == 0 {
                self.candidates_seen += 1;
                if self.candidates_seen > self.max_points.saturating_mul(8) {
                    return Err(ThetaError::EllipsoidTooLarge { cap: self.max_points });
                }
                if box_distance_below(self.gram, &self.n, self.offset_bound, self.r_sq) {
                    if self.points.len() / self.g >= self.max_points {
                        return Err(ThetaError::EllipsoidTooLarge { cap: self.max_points });
                    }
                    self.points.extend_from_slice(&self.n);
                }
            } else {
                self.descend(i - 1, next)?;
            }
        }
        self.n[i] = 0;
        Ok(())
    }
}

/// Whether `min_{|c_j| <= b} (n - c)^t G (n - c) < r_sq`.
pub(crate) fn box_distance_below(gram: &RealMatrix, n: &[i64], b: f64, r_sq: f64) -> bool {
    let g = n.len();
    // w = n - c with c clamped into the box
    let mut w: Vec<f64> = n.iter().map(|&ni| ni as f64 - (ni as f64).clamp(-b, b)).collect();
    let quad = |w: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..g {
            acc += w[i] * dot(gram.row(i), w);
        }
        acc
    };
    if quad(&w) < r_sq {
        return true;
    }
    for _ in 0..10_000 {
        let mut moved = 0.0f64;
        for j in 0..g {
            let off: f64 = (0..g).filter(|&k| k != j).map(|k| gram[(j, k)] * w[k]).sum();
            let nj = n[j] as f64;
            let target = (-off / gram[(j, j)]).clamp(nj - b, nj + b);
            moved = moved.max((target - w[j]).abs());
            w[j] = target;
        }
        if quad(&w) < r_sq {
            return true;
        }
        if moved <= 1e-12 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_eq_mat(a: &RealMatrix, b: &RealMatrix, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let i3 = RealMatrix::identity(3);
        assert_eq!(cholesky_upper(&i3).unwrap(), i3);
        let t = cholesky_upper(&RealMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert!(approx_eq_mat(&t, &RealMatrix::from_diagonal(&[2.0, 3.0]), 0.0));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky_upper(&m), Err(ThetaError::NotPositiveDefinite { index: 1, .. })));
        let asym = RealMatrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(cholesky_upper(&asym), Err(ThetaError::NotSymmetric { .. })));
    }

    #[test]
    fn lll_identity_unchanged() {
        let b = LatticeBasis::new(RealMatrix::identity(3)).unwrap();
        let (r, u) = lll_reduce(&b, LLL_DELTA).unwrap();
        assert_eq!(r.matrix(), &RealMatrix::identity(3));
        assert!(u.matrix().is_identity());
    }

    #[test]
    fn lll_rejects_dependent_rows() {
        let m = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![0.5 + 1e-9, 0.0]]).unwrap();
        assert!(matches!(LatticeBasis::new(m), Err(ThetaError::DegenerateBasis { .. })));
    }

    #[test]
    fn lll_rejects_bad_delta() {
        let b = LatticeBasis::new(RealMatrix::identity(2)).unwrap();
        assert!(lll_reduce(&b, 0.2).is_err());
        assert!(lll_reduce(&b, 1.0).is_err());
    }

    #[test]
    fn lll_reduces_skewed_basis() {
        let b = LatticeBasis::from_rows(&[vec![1.0, 0.0], vec![1000.0, 1.0]]).unwrap();
        let (r, u) = lll_reduce(&b, LLL_DELTA).unwrap();
        assert_eq!(u.determinant().abs(), 1);
        for i in 0..2 {
            let row = r.matrix().row(i);
            assert!(dot(row, row) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn shortest_vector_unit_and_diagonal() {
        let sv = shortest_vector(&LatticeBasis::new(RealMatrix::identity(4)).unwrap()).unwrap();
        assert_eq!(sv.rho, 1.0);
        let sv = shortest_vector(&LatticeBasis::new(RealMatrix::from_diagonal(&[3.0, 5.0])).unwrap()).unwrap();
        assert_eq!(sv.rho, 3.0);
        assert_eq!(sv.coeffs, vec![1, 0]);
    }

    #[test]
    fn shortest_vector_tie_break_is_lexicographic() {
        // +-e1, +-e2 all have length 1; normalised candidates (0,1) < (1,0)
        let sv = shortest_vector(&LatticeBasis::new(RealMatrix::identity(2)).unwrap()).unwrap();
        assert_eq!(sv.coeffs, vec![0, 1]);
    }

    #[test]
    fn unimodular_completion() {
        for x in [vec![3, 5], vec![0, 0, 1], vec![-2, 3, 7], vec![6, 10, 15], vec![1, 0, 0, 0]] {
            let u = unimodular_with_first_row(&x).unwrap();
            assert_eq!(u.row(0), &x[..]);
            assert_eq!(u.determinant().abs(), 1);
        }
        assert!(unimodular_with_first_row(&[2, 4]).is_err());
    }

    #[test]
    fn hkz_identity_unchanged() {
        let b = LatticeBasis::new(RealMatrix::identity(3)).unwrap();
        let (r, u) = hkz_reduce(&b).unwrap();
        assert_eq!(u.determinant().abs(), 1);
        for i in 0..3 {
            let row = r.matrix().row(i);
            assert!((dot(row, row) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_genus_one() {
        let t = RealMatrix::identity(1);
        let c = enumerate_deformed_ellipsoid(&t, 2.0, 1.0, DEFAULT_MAX_ELLIPSOID_POINTS).unwrap();
        let mut pts: Vec<i64> = c.iter().map(|p| p[0]).collect();
        pts.sort();
        assert_eq!(pts, vec![-2, -1, 0, 1, 2]);
        let c = enumerate_deformed_ellipsoid(&t, 2.0, 0.0, DEFAULT_MAX_ELLIPSOID_POINTS).unwrap();
        let mut pts: Vec<i64> = c.iter().map(|p| p[0]).collect();
        pts.sort();
        assert_eq!(pts, vec![-1, 0, 1]);
    }

    #[test]
    fn ellipsoid_cap_is_enforced() {
        let t = RealMatrix::identity(2);
        let err = enumerate_deformed_ellipsoid(&t, 50.0, 1.0, 100).unwrap_err();
        assert_eq!(err, ThetaError::EllipsoidTooLarge { cap: 100 });
    }

    #[test]
    fn ellipsoid_rejects_lower_triangular() {
        let t = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![0.5, 1.0]]).unwrap();
        assert!(enumerate_deformed_ellipsoid(&t, 2.0, 1.0, 1000).is_err());
    }
}
