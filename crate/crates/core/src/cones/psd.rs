//! Positive semidefinite cone in svec coordinates with `-logdet W`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::{BarrierEval, HessBlock};
use crate::model::{sdim, smat, svec_upper, symm_kron};

pub(super) fn barrier_point(side: usize) -> Vec<f64> {
    svec_upper(&DMatrix::identity(side, side))
}

pub(crate) fn cholesky(p: &[f64]) -> Option<Cholesky<f64, Dyn>> {
    let w = smat(p).ok()?;
    Cholesky::new(w)
}

pub(crate) fn logdet(ch: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * ch.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}

pub(super) fn in_domain(p: &[f64]) -> bool {
    cholesky(p).is_some()
}

pub(super) fn barrier(p: &[f64], want_hess: bool) -> Option<BarrierEval> {
    let ch = cholesky(p)?;
    let inv = ch.inverse();
    let value = -logdet(&ch);
    let grad = -DVector::from_vec(svec_upper(&inv));
    debug_assert_eq!(grad.len(), sdim(inv.nrows()));
    let hess = want_hess.then(|| HessBlock::Dense(symm_kron(&inv)));
    Some(BarrierEval { value, grad, hess })
}
