//! Interpolation points and Chebyshev-basis matrices `P_l` parameterizing
//! the WSOS cones of polynomials of degree `2k` in `m` variables that are
//! nonnegative on `[-1, 1]^m`.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cones::{ConeKind, InterpMatrices};

/// Default upper bound on the number of interpolation points.
pub const DEFAULT_POINT_CAP: usize = 5000;
/// Largest supported number of variables.
pub const MAX_VARS: usize = 4;
const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("need m >= 1 and k >= 1, got m={m}, k={k}")]
    InvalidSize { m: usize, k: usize },
    #[error("m={0} exceeds the supported maximum of {MAX_VARS} variables")]
    TooManyVars(usize),
    #[error("U={u} interpolation points exceeds the cap of {cap}")]
    CapExceeded { u: usize, cap: usize },
    #[error("interpolation system is rank deficient (relative pivot {0:.3e})")]
    RankDeficient(f64),
}

/// Interpolation data for `m` variables and half-degree `k`.
#[derive(Clone, Debug)]
pub struct InterpParams {
    pub m: usize,
    pub k: usize,
    /// Number of points, `C(m + 2k, m)`.
    pub u: usize,
    /// Columns of `P_1`, `C(m + k, m)`.
    pub l: usize,
    /// Columns of `P_2 .. P_{m+1}`, `C(m + k - 1, m)`.
    pub l_tilde: usize,
    /// `U x m` point coordinates.
    pub points: DMatrix<f64>,
    pub p: InterpMatrices,
}

impl InterpParams {
    /// Barrier parameter of the induced WSOS cones, `L + m L~`.
    pub fn nu(&self) -> usize {
        self.l + self.m * self.l_tilde
    }

    pub fn wsos_dual_kind(&self) -> ConeKind {
        ConeKind::WsosDual { p: self.p.clone() }
    }

    pub fn wsos_kind(&self) -> ConeKind {
        ConeKind::Wsos { p: self.p.clone() }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Multi-indices in `m` variables of total degree at most `deg`, graded,
/// and lexicographically descending within each degree: for `m = 2`,
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
pub fn multi_indices(m: usize, deg: usize) -> Vec<Vec<usize>> {
    fn fill(m: usize, t: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == m {
            prefix.push(t);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=t).rev() {
            prefix.push(a);
            fill(m, t - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for t in 0..=deg {
        fill(m, t, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// Chebyshev polynomials `T_0 .. T_deg` at `x`.
fn cheb_all(x: f64, deg: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(deg + 1);
    t.push(1.0);
    if deg >= 1 {
        t.push(x);
    }
    for n in 2..=deg {
        t.push(2.0 * x * t[n - 1] - t[n - 2]);
    }
    t
}

/// Basis polynomial `g_j` at `x`: the product of univariate Chebyshev
/// polynomials given by the `j`-th graded multi-index in `x.len()` variables.
pub fn cheb_eval(j: usize, x: &[f64]) -> f64 {
    let m = x.len();
    let mut deg = 0;
    while binomial(m + deg, m) <= j {
        deg += 1;
    }
    let alpha = &multi_indices(m, deg)[j];
    alpha.iter().zip(x).map(|(&a, &xi)| cheb_all(xi, a)[a]).product()
}

/// Evaluates the first `count` basis polynomials (degree at most `deg`) at each point.
fn basis_matrix(points: &DMatrix<f64>, deg: usize, count: usize) -> DMatrix<f64> {
    let m = points.ncols();
    let idx = multi_indices(m, deg);
    DMatrix::from_fn(points.nrows(), count, |u, j| {
        idx[j].iter().enumerate().map(|(i, &a)| cheb_all(points[(u, i)], a)[a]).product()
    })
}

/// Greedy column-pivoted orthogonalization of the rows of `v`: returns the
/// indices of `count` rows chosen in pivot order.
fn greedy_rows(v: &DMatrix<f64>, count: usize) -> Result<Vec<usize>, InterpError> {
    let mut res: Vec<DVector<f64>> = v.row_iter().map(|r| r.transpose()).collect();
    let mut norms: Vec<f64> = res.iter().map(|r| r.norm_squared()).collect();
    let first = norms.iter().cloned().fold(0.0, f64::max).sqrt();
    let mut taken = vec![false; res.len()];
    let mut chosen = Vec::with_capacity(count);
    for _ in 0..count {
        let (best, best_norm) = norms
            .iter()
            .enumerate()
            .filter(|(i, _)| !taken[*i])
            .fold((usize::MAX, -1.0), |acc, (i, &n)| if n > acc.1 { (i, n) } else { acc });
        let rel = best_norm.max(0.0).sqrt() / first;
        if best == usize::MAX || rel < PIVOT_TOL {
            return Err(InterpError::RankDeficient(rel.max(0.0)));
        }
        taken[best] = true;
        chosen.push(best);
        let q = &res[best] / best_norm.sqrt();
        for i in 0..res.len() {
            if !taken[i] {
                let c = res[i].dot(&q);
                res[i].axpy(-c, &q, 1.0);
                norms[i] = res[i].norm_squared();
            }
        }
    }
    Ok(chosen)
}

fn select_points(m: usize, k: usize, u: usize) -> Result<DMatrix<f64>, InterpError> {
    if m == 1 {
        let pts = (0..u).map(|i| (std::f64::consts::PI * i as f64 / (u - 1) as f64).cos());
        return Ok(DMatrix::from_iterator(u, 1, pts));
    }
    let side = 2 * k + 1;
    let nodes: Vec<f64> = (0..side).map(|i| (std::f64::consts::PI * i as f64 / (side - 1) as f64).cos()).collect();
    let total = side.pow(m as u32);
    let grid = DMatrix::from_fn(total, m, |r, c| nodes[(r / side.pow(c as u32)) % side]);
    let vander = basis_matrix(&grid, 2 * k, u);
    let rows = greedy_rows(&vander, u)?;
    Ok(DMatrix::from_fn(u, m, |r, c| grid[(rows[r], c)]))
}

pub fn build_interp(m: usize, k: usize) -> Result<InterpParams, InterpError> {
    build_interp_capped(m, k, DEFAULT_POINT_CAP)
}

pub fn build_interp_capped(m: usize, k: usize, cap: usize) -> Result<InterpParams, InterpError> {
    if m == 0 || k == 0 {
        return Err(InterpError::InvalidSize { m, k });
    }
    if m > MAX_VARS {
        return Err(InterpError::TooManyVars(m));
    }
    let u = binomial(m + 2 * k, m);
    if u > cap {
        return Err(InterpError::CapExceeded { u, cap });
    }
    let l = binomial(m + k, m);
    let l_tilde = binomial(m + k - 1, m);
    let points = select_points(m, k, u)?;

    let p1 = basis_matrix(&points, k, l);
    let sv = p1.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > PIVOT_TOL * smax) {
        return Err(InterpError::RankDeficient(smin / smax));
    }
    // Rows scaled by sqrt(1 - o_i^2), so P' Diag(w) P carries the box
    // weight 1 - x_i^2 itself.
    let low = basis_matrix(&points, k - 1, l_tilde);
    let mut mats = vec![p1];
    for i in 0..m {
        let mut pi = low.clone();
        for (r, mut row) in pi.row_iter_mut().enumerate() {
            let o = points[(r, i)];
            row *= (1.0 - o * o).max(0.0).sqrt();
        }
        mats.push(pi);
    }
    Ok(InterpParams { m, k, u, l, l_tilde, points, p: InterpMatrices(mats) })
}
