//! Spectral-norm epigraph `u >= sigma_max(W)` for `W` of size `r x s`,
//! `r <= s`, with `-logdet(u^2 I - W W') + (r - 1) log u`. Its dual is the
//! nuclear-norm epigraph.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{BarrierEval, HessBlock};

pub(super) fn barrier_point(r: usize, s: usize) -> Vec<f64> {
    let mut p = vec![0.0; 1 + r * s];
    p[0] = 1.0;
    p
}

fn unpack(r: usize, s: usize, p: &[f64]) -> (f64, DMatrix<f64>) {
    (p[0], DMatrix::from_column_slice(r, s, &p[1..]))
}

fn factor(r: usize, s: usize, p: &[f64]) -> Option<(f64, DMatrix<f64>, Cholesky<f64, nalgebra::Dyn>)> {
    let (u, w) = unpack(r, s, p);
    if u <= 0.0 {
        return None;
    }
    let z = DMatrix::from_diagonal_element(r, r, u * u) - &w * w.transpose();
    let ch = Cholesky::new(z)?;
    Some((u, w, ch))
}

pub(super) fn in_domain(r: usize, s: usize, p: &[f64]) -> bool {
    factor(r, s, p).is_some()
}

pub(super) fn in_dual(r: usize, s: usize, p: &[f64]) -> bool {
    let (u, w) = unpack(r, s, p);
    if u <= 0.0 {
        return false;
    }
    let nuclear: f64 = w.singular_values().iter().sum();
    u - nuclear > 0.0
}

pub(super) fn barrier(r: usize, s: usize, p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let (u, w, ch) = factor(r, s, p)?;
    let rm1 = (r - 1) as f64;
    let logdet = 2.0 * ch.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let value = -logdet + rm1 * u.ln();
    let zi = ch.inverse();
    let pm = &zi * &w; // Z^-1 W
    let mut grad = DVector::zeros(1 + r * s);
    grad[0] = -2.0 * u * zi.trace() + rm1 / u;
    for (k, v) in pm.iter().enumerate() {
        grad[1 + k] = 2.0 * v;
    }
    let hess = want_hess.then(|| {
        let n = 1 + r * s;
        let mut h = DMatrix::zeros(n, n);
        let zi2 = &zi * &zi;
        h[(0, 0)] = -2.0 * zi.trace() + 4.0 * u * u * zi2.trace() - rm1 / (u * u);
        let zi2w = &zi2 * &w;
        for (k, v) in zi2w.iter().enumerate() {
            h[(0, 1 + k)] = -4.0 * u * v;
            h[(1 + k, 0)] = -4.0 * u * v;
        }
        let m = w.transpose() * &pm; // W' Z^-1 W
        // entry (a,b),(c,d) = 2 Zi_ac (delta_bd + M_db) + 2 P_ad P_cb
        for b in 0..s {
            for a in 0..r {
                let row = 1 + a + r * b;
                for d in 0..s {
                    let mdb = m[(d, b)] + if b == d { 1.0 } else { 0.0 };
                    for c in 0..r {
                        let col = 1 + c + r * d;
                        if col < row {
                            continue;
                        }
                        let v = 2.0 * zi[(a, c)] * mdb + 2.0 * pm[(a, d)] * pm[(c, b)];
                        h[(row, col)] = v;
                        h[(col, row)] = v;
                    }
                }
            }
        }
        HessBlock::Dense(h)
    });
    Some(BarrierEval { value, grad, hess })
}
