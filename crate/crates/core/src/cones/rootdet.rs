//! Root-determinant hypograph `u <= det(W)^(1/d)` with
//! `-log(det(W)^(1/d) - u) - logdet W`.

use nalgebra::{DMatrix, DVector};

use super::psd::{cholesky, logdet};
use super::{neg_log_terms, BarrierEval, HessBlock};
use crate::model::{sdim, svec_upper, symm_kron};

pub(super) fn barrier_point(side: usize) -> Vec<f64> {
    let mut p = vec![0.5];
    p.extend(svec_upper(&DMatrix::identity(side, side)));
    p
}

fn rootdet(p: &[f64]) -> Option<(f64, nalgebra::Cholesky<f64, nalgebra::Dyn>)> {
    let ch = cholesky(&p[1..])?;
    let d = ch.l_dirty().nrows() as f64;
    let ld = logdet(&ch);
    Some(((ld / d).exp(), ch))
}

pub(super) fn in_domain(p: &[f64]) -> bool {
    matches!(rootdet(p), Some((phi, _)) if phi - p[0] > 0.0)
}

/// Dual cone: `u < 0`, `W` positive definite, `-u < d * det(W)^(1/d)`.
pub(super) fn in_dual(p: &[f64]) -> bool {
    let u = p[0];
    match rootdet(p) {
        Some((phi, ch)) => u < 0.0 && ch.l_dirty().nrows() as f64 * phi + u > 0.0,
        None => false,
    }
}

pub(super) fn barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let (phi, ch) = rootdet(p)?;
    let u = p[0];
    let zeta = phi - u;
    if zeta <= 0.0 {
        return None;
    }
    let side = ch.l_dirty().nrows();
    let d = side as f64;
    let n = 1 + sdim(side);
    let inv = ch.inverse();
    let v = DVector::from_vec(svec_upper(&inv));
    let value = -zeta.ln() - logdet(&ch);
    let mut dz = DVector::zeros(n);
    dz[0] = -1.0;
    dz.rows_mut(1, n - 1).copy_from(&(&v * (phi / d)));
    let mut d2 = DMatrix::zeros(n, n);
    let kron = want_hess.then(|| symm_kron(&inv));
    if let Some(k) = &kron {
        let block = &v * v.transpose() * (phi / (d * d)) - k * (phi / d);
        d2.view_mut((1, 1), (n - 1, n - 1)).copy_from(&block);
    }
    let (mut grad, mut hess) = neg_log_terms(zeta, &dz, &d2);
    for i in 1..n {
        grad[i] -= v[i - 1];
    }
    if let Some(k) = &kron {
        let mut view = hess.view_mut((1, 1), (n - 1, n - 1));
        view += k;
    }
    Some(BarrierEval { value, grad, hess: want_hess.then_some(HessBlock::Dense(hess)) })
}
