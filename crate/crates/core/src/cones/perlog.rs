//! Perspective-log hypographs: `u <= v sum log(w_i / v)` with
//! `-log(v sum log(w_i / v) - u) - sum log w - log v`, and the log-determinant
//! analogue `u <= v logdet(W / v)`.

use nalgebra::{DMatrix, DVector};

use super::psd::{cholesky, logdet};
use super::{neg_log_terms, BarrierEval, HessBlock};
use crate::model::{sdim, svec_upper, symm_kron};

pub(super) fn log_barrier_point(d: usize) -> Vec<f64> {
    let mut p = vec![1.0; 2 + d];
    p[0] = -1.0;
    p
}

pub(super) fn logdet_barrier_point(side: usize) -> Vec<f64> {
    let mut p = vec![-1.0, 1.0];
    p.extend(svec_upper(&DMatrix::identity(side, side)));
    p
}

fn log_zeta(p: &[f64]) -> Option<f64> {
    let (u, v, w) = (p[0], p[1], &p[2..]);
    if v <= 0.0 || w.iter().any(|&x| x <= 0.0) {
        return None;
    }
    let zeta = v * w.iter().map(|x| (x / v).ln()).sum::<f64>() - u;
    (zeta > 0.0).then_some(zeta)
}

pub(super) fn log_in_domain(p: &[f64]) -> bool {
    log_zeta(p).is_some()
}

/// Dual cone: `u < 0`, `w > 0`, `v > sum u (log(-w_i / u) + 1)`.
pub(super) fn log_in_dual(p: &[f64]) -> bool {
    let (u, v, w) = (p[0], p[1], &p[2..]);
    if u >= 0.0 || w.iter().any(|&x| x <= 0.0) {
        return false;
    }
    v - w.iter().map(|x| u * ((-x / u).ln() + 1.0)).sum::<f64>() > 0.0
}

pub(super) fn log_barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let zeta = log_zeta(p)?;
    let (v, w) = (p[1], &p[2..]);
    let d = w.len();
    let n = 2 + d;
    let value = -zeta.ln() - w.iter().map(|x| x.ln()).sum::<f64>() - v.ln();
    let mut dz = DVector::zeros(n);
    dz[0] = -1.0;
    dz[1] = w.iter().map(|x| (x / v).ln()).sum::<f64>() - d as f64;
    for i in 0..d {
        dz[2 + i] = v / w[i];
    }
    let mut d2 = DMatrix::zeros(n, n);
    if want_hess {
        d2[(1, 1)] = -(d as f64) / v;
        for i in 0..d {
            d2[(1, 2 + i)] = 1.0 / w[i];
            d2[(2 + i, 1)] = 1.0 / w[i];
            d2[(2 + i, 2 + i)] = -v / (w[i] * w[i]);
        }
    }
    let (mut grad, mut hess) = neg_log_terms(zeta, &dz, &d2);
    grad[1] -= 1.0 / v;
    hess[(1, 1)] += 1.0 / (v * v);
    for i in 0..d {
        grad[2 + i] -= 1.0 / w[i];
        hess[(2 + i, 2 + i)] += 1.0 / (w[i] * w[i]);
    }
    Some(BarrierEval { value, grad, hess: want_hess.then_some(HessBlock::Dense(hess)) })
}

struct LogdetParts {
    zeta: f64,
    logdet: f64,
    ch: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

fn logdet_parts(p: &[f64]) -> Option<LogdetParts> {
    let (u, v) = (p[0], p[1]);
    if v <= 0.0 {
        return None;
    }
    let ch = cholesky(&p[2..])?;
    let side = ch.l_dirty().nrows() as f64;
    let ld = logdet(&ch);
    let zeta = v * (ld - side * v.ln()) - u;
    (zeta > 0.0).then_some(LogdetParts { zeta, logdet: ld, ch })
}

pub(super) fn logdet_in_domain(p: &[f64]) -> bool {
    logdet_parts(p).is_some()
}

/// Dual cone: `u < 0`, `W` positive definite, `v > u (logdet(-W / u) + d)`.
pub(super) fn logdet_in_dual(p: &[f64]) -> bool {
    let (u, v) = (p[0], p[1]);
    if u >= 0.0 {
        return false;
    }
    match cholesky(&p[2..]) {
        Some(ch) => {
            let d = ch.l_dirty().nrows() as f64;
            v - u * (logdet(&ch) - d * (-u).ln() + d) > 0.0
        }
        None => false,
    }
}

pub(super) fn logdet_barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let LogdetParts { zeta, logdet: ld, ch } = logdet_parts(p)?;
    let v = p[1];
    let side = ch.l_dirty().nrows();
    let d = side as f64;
    let m = sdim(side);
    let n = 2 + m;
    let inv = ch.inverse();
    let wi = DVector::from_vec(svec_upper(&inv));
    let value = -zeta.ln() - ld - v.ln();
    let mut dz = DVector::zeros(n);
    dz[0] = -1.0;
    dz[1] = ld - d * v.ln() - d;
    dz.rows_mut(2, m).copy_from(&(&wi * v));
    let mut d2 = DMatrix::zeros(n, n);
    let kron = want_hess.then(|| symm_kron(&inv));
    if let Some(k) = &kron {
        d2[(1, 1)] = -d / v;
        d2.view_mut((1, 2), (1, m)).copy_from(&wi.transpose());
        d2.view_mut((2, 1), (m, 1)).copy_from(&wi);
        d2.view_mut((2, 2), (m, m)).copy_from(&(k * -v));
    }
    let (mut grad, mut hess) = neg_log_terms(zeta, &dz, &d2);
    grad[1] -= 1.0 / v;
    hess[(1, 1)] += 1.0 / (v * v);
    for i in 0..m {
        grad[2 + i] -= wi[i];
    }
    if let Some(k) = &kron {
        let mut view = hess.view_mut((2, 2), (m, m));
        view += k;
    }
    Some(BarrierEval { value, grad, hess: want_hess.then_some(HessBlock::Dense(hess)) })
}
