//! Cone catalog and barrier oracles.
//!
//! Every cone carries a logarithmically homogeneous self-concordant barrier
//! for either the cone itself or, for the three dual-flagged kinds
//! ([`ConeKind::EpiNormInfDual`], [`ConeKind::EpiNormSpectralDual`],
//! [`ConeKind::Wsos`]), for its dual cone. The barrier oracles always take
//! points of the barrier's domain; see [`Cone::uses_dual_barrier`].

pub mod diagnostics;
mod geomean;
mod nonneg;
mod norm2;
mod norminf;
mod perlog;
mod psd;
mod rootdet;
mod spectral;
mod wsos;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::sdim;

pub use wsos::InterpMatrices;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("invalid cone parameters: {0}")]
    InvalidParams(String),
    #[error("point has length {got}, cone dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the interior of the barrier domain")]
    NotInterior,
}

/// Tagged cone descriptor. Serializes as `{"kind": "<Tag>", ...params}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ConeKind {
    /// `w >= 0`, `w` in `R^d`.
    Nonneg { d: usize },
    /// `(u, w)`, `u >= ||w||_2`, `w` in `R^d`.
    EpiNorm2 { d: usize },
    /// `(u, v, w)`, `2uv >= ||w||^2`, `u, v >= 0`, `w` in `R^d`.
    EpiPerSquare { d: usize },
    /// svec of a PSD matrix of the given side.
    PosSemidef { side: usize },
    /// `(u, w)`, `u >= ||w||_inf`.
    EpiNormInf { d: usize },
    /// `(u, w)`, `u >= ||w||_1`.
    EpiNormInfDual { d: usize },
    /// `(u, vec W)`, `W` is `r x s` column-major, `u >= sigma_max(W)`.
    EpiNormSpectral { r: usize, s: usize },
    /// `(u, vec W)`, `u >= sum of singular values of W`.
    EpiNormSpectralDual { r: usize, s: usize },
    /// `(u, w)`, `w >= 0`, `u <= geomean(w)`.
    HypoGeomean { d: usize },
    /// `(u, svec W)`, `W` PSD, `u <= det(W)^(1/side)`.
    HypoRootDet { side: usize },
    /// `(u, v, w)`, `u <= v * sum(log(w_i / v))`.
    HypoPerLog { d: usize },
    /// `(u, v, svec W)`, `u <= v * logdet(W / v)`.
    HypoPerLogDet { side: usize },
    /// Dual weighted sum-of-squares cone: `P_l' Diag(w) P_l` PSD for all `l`.
    WsosDual {
        #[serde(rename = "P")]
        p: InterpMatrices,
    },
    /// Interpolant-basis weighted sum-of-squares cone.
    Wsos {
        #[serde(rename = "P")]
        p: InterpMatrices,
    },
}

impl ConeKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ConeKind::Nonneg { .. } => "Nonneg",
            ConeKind::EpiNorm2 { .. } => "EpiNorm2",
            ConeKind::EpiPerSquare { .. } => "EpiPerSquare",
            ConeKind::PosSemidef { .. } => "PosSemidef",
            ConeKind::EpiNormInf { .. } => "EpiNormInf",
            ConeKind::EpiNormInfDual { .. } => "EpiNormInfDual",
            ConeKind::EpiNormSpectral { .. } => "EpiNormSpectral",
            ConeKind::EpiNormSpectralDual { .. } => "EpiNormSpectralDual",
            ConeKind::HypoGeomean { .. } => "HypoGeomean",
            ConeKind::HypoRootDet { .. } => "HypoRootDet",
            ConeKind::HypoPerLog { .. } => "HypoPerLog",
            ConeKind::HypoPerLogDet { .. } => "HypoPerLogDet",
            ConeKind::WsosDual { .. } => "WsosDual",
            ConeKind::Wsos { .. } => "Wsos",
        }
    }

    /// True for the cones recognized by standard conic solvers.
    pub fn is_standard(&self) -> bool {
        matches!(
            self,
            ConeKind::Nonneg { .. }
                | ConeKind::EpiNorm2 { .. }
                | ConeKind::EpiPerSquare { .. }
                | ConeKind::PosSemidef { .. }
                | ConeKind::HypoPerLog { d: 1 }
        )
    }
}

/// Block of a barrier Hessian.
#[derive(Clone, Debug)]
pub enum HessBlock {
    Diagonal(DVector<f64>),
    Dense(DMatrix<f64>),
}

impl HessBlock {
    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            HessBlock::Diagonal(d) => DMatrix::from_diagonal(d),
            HessBlock::Dense(m) => m.clone(),
        }
    }

    pub fn mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        match self {
            HessBlock::Diagonal(d) => d.component_mul(v),
            HessBlock::Dense(m) => m * v,
        }
    }
}

/// Barrier value, gradient and (optionally) Hessian at one point.
#[derive(Clone, Debug)]
pub struct BarrierEval {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: Option<HessBlock>,
}

/// A cone with its dimension, barrier parameter and oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    kind: ConeKind,
    dim: usize,
    nu: f64,
    uses_dual_barrier: bool,
}

/// Builds a cone from its descriptor, validating the parameters.
pub fn make_cone(kind: ConeKind) -> Result<Cone, ConeError> {
    Cone::new(kind)
}

fn positive(name: &str, v: usize) -> Result<(), ConeError> {
    if v == 0 {
        return Err(ConeError::InvalidParams(format!("{name} must be at least 1")));
    }
    Ok(())
}

impl Cone {
    pub fn new(kind: ConeKind) -> Result<Self, ConeError> {
        use ConeKind::*;
        let (dim, nu, dual) = match &kind {
            Nonneg { d } => {
                positive("d", *d)?;
                (*d, *d as f64, false)
            }
            EpiNorm2 { d } => {
                positive("d", *d)?;
                (1 + d, 2.0, false)
            }
            EpiPerSquare { d } => {
                positive("d", *d)?;
                (2 + d, 2.0, false)
            }
            PosSemidef { side } => {
                positive("side", *side)?;
                (sdim(*side), *side as f64, false)
            }
            EpiNormInf { d } | EpiNormInfDual { d } => {
                positive("d", *d)?;
                (1 + d, (1 + d) as f64, matches!(kind, EpiNormInfDual { .. }))
            }
            EpiNormSpectral { r, s } | EpiNormSpectralDual { r, s } => {
                positive("r", *r)?;
                positive("s", *s)?;
                if r > s {
                    return Err(ConeError::InvalidParams(format!(
                        "spectral cones require r <= s, got r={r}, s={s}"
                    )));
                }
                (1 + r * s, (1 + r) as f64, matches!(kind, EpiNormSpectralDual { .. }))
            }
            HypoGeomean { d } => {
                positive("d", *d)?;
                (1 + d, (1 + d) as f64, false)
            }
            HypoRootDet { side } => {
                positive("side", *side)?;
                (1 + sdim(*side), (1 + side) as f64, false)
            }
            HypoPerLog { d } => {
                positive("d", *d)?;
                (2 + d, (2 + d) as f64, false)
            }
            HypoPerLogDet { side } => {
                positive("side", *side)?;
                (2 + sdim(*side), (2 + side) as f64, false)
            }
            WsosDual { p } | Wsos { p } => {
                p.validate()?;
                (p.num_points(), p.nu() as f64, matches!(kind, Wsos { .. }))
            }
        };
        Ok(Cone { kind, dim, nu, uses_dual_barrier: dual })
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// True when the barrier oracles are for the dual cone, i.e. they apply to
    /// the `z` side of the block.
    pub fn uses_dual_barrier(&self) -> bool {
        self.uses_dual_barrier
    }

    fn check_len(&self, p: &[f64]) -> Result<(), ConeError> {
        if p.len() != self.dim {
            return Err(ConeError::DimensionMismatch { expected: self.dim, got: p.len() });
        }
        Ok(())
    }

    /// Fixed interior point of the barrier's domain.
    pub fn barrier_point(&self) -> DVector<f64> {
        use ConeKind::*;
        let v = match &self.kind {
            Nonneg { d } => nonneg::barrier_point(*d),
            EpiNorm2 { d } => norm2::soc_barrier_point(*d),
            EpiPerSquare { d } => norm2::rsoc_barrier_point(*d),
            PosSemidef { side } => psd::barrier_point(*side),
            EpiNormInf { d } | EpiNormInfDual { d } => norminf::barrier_point(*d),
            EpiNormSpectral { r, s } | EpiNormSpectralDual { r, s } => {
                spectral::barrier_point(*r, *s)
            }
            HypoGeomean { d } => geomean::barrier_point(*d),
            HypoRootDet { side } => rootdet::barrier_point(*side),
            HypoPerLog { d } => perlog::log_barrier_point(*d),
            HypoPerLogDet { side } => perlog::logdet_barrier_point(*side),
            WsosDual { p } | Wsos { p } => wsos::barrier_point(p),
        };
        DVector::from_vec(v)
    }

    /// Fixed point in the interior of the cone itself. For dual-flagged cones
    /// this is the negated barrier gradient at [`Cone::barrier_point`].
    pub fn initial_point(&self) -> DVector<f64> {
        let t = self.barrier_point();
        if self.uses_dual_barrier {
            -self.evaluate(t.as_slice(), false).expect("barrier point is interior").grad
        } else {
            t
        }
    }

    fn domain_test(&self, p: &[f64]) -> bool {
        use ConeKind::*;
        match &self.kind {
            Nonneg { .. } => nonneg::in_domain(p),
            EpiNorm2 { .. } => norm2::soc_in_domain(p),
            EpiPerSquare { .. } => norm2::rsoc_in_domain(p),
            PosSemidef { .. } => psd::in_domain(p),
            EpiNormInf { .. } | EpiNormInfDual { .. } => norminf::in_domain(p),
            EpiNormSpectral { r, s } | EpiNormSpectralDual { r, s } => {
                spectral::in_domain(*r, *s, p)
            }
            HypoGeomean { .. } => geomean::in_domain(p),
            HypoRootDet { .. } => rootdet::in_domain(p),
            HypoPerLog { .. } => perlog::log_in_domain(p),
            HypoPerLogDet { .. } => perlog::logdet_in_domain(p),
            WsosDual { p: pm } | Wsos { p: pm } => wsos::in_domain(pm, p),
        }
    }

    /// Strict membership in the dual of the barrier's domain.
    fn domain_dual_test(&self, p: &[f64]) -> bool {
        use ConeKind::*;
        match &self.kind {
            Nonneg { .. } => nonneg::in_domain(p),
            EpiNorm2 { .. } => norm2::soc_in_domain(p),
            EpiPerSquare { .. } => norm2::rsoc_in_domain(p),
            PosSemidef { .. } => psd::in_domain(p),
            EpiNormInf { .. } | EpiNormInfDual { .. } => norminf::in_dual(p),
            EpiNormSpectral { r, s } | EpiNormSpectralDual { r, s } => {
                spectral::in_dual(*r, *s, p)
            }
            HypoGeomean { .. } => geomean::in_dual(p),
            HypoRootDet { .. } => rootdet::in_dual(p),
            HypoPerLog { .. } => perlog::log_in_dual(p),
            HypoPerLogDet { .. } => perlog::logdet_in_dual(p),
            WsosDual { p: pm } | Wsos { p: pm } => wsos::in_dual(pm, p),
        }
    }

    /// Strict membership in the interior of the cone.
    pub fn in_interior(&self, s: &[f64]) -> bool {
        if s.len() != self.dim || s.iter().any(|v| !v.is_finite()) {
            return false;
        }
        if self.uses_dual_barrier {
            self.domain_dual_test(s)
        } else {
            self.domain_test(s)
        }
    }

    /// Strict membership in the interior of the dual cone.
    pub fn in_dual_interior(&self, z: &[f64]) -> bool {
        if z.len() != self.dim || z.iter().any(|v| !v.is_finite()) {
            return false;
        }
        if self.uses_dual_barrier {
            self.domain_test(z)
        } else {
            self.domain_dual_test(z)
        }
    }

    /// Strict membership in the barrier's domain (the cone, or its dual for
    /// dual-flagged cones).
    pub fn in_barrier_domain(&self, p: &[f64]) -> bool {
        p.len() == self.dim && p.iter().all(|v| v.is_finite()) && self.domain_test(p)
    }

    /// Interior point of the dual cone used for tolerance shifts.
    fn dual_reference_point(&self) -> DVector<f64> {
        let t = self.barrier_point();
        if self.uses_dual_barrier {
            t
        } else {
            -self.evaluate(t.as_slice(), false).expect("barrier point is interior").grad
        }
    }

    /// Membership in the closure of the cone, up to a shift of `tol` (relative
    /// to the point's magnitude) along a fixed interior direction.
    pub fn in_closure(&self, s: &[f64], tol: f64) -> bool {
        let t = self.initial_point();
        let shift = tol * max_abs(s).max(1.0) / max_abs(t.as_slice());
        let shifted: Vec<f64> = s.iter().zip(t.iter()).map(|(a, b)| a + shift * b).collect();
        self.in_interior(&shifted)
    }

    /// Membership in the closure of the dual cone, up to a relative shift.
    pub fn in_dual_closure(&self, z: &[f64], tol: f64) -> bool {
        let t = self.dual_reference_point();
        let shift = tol * max_abs(z).max(1.0) / max_abs(t.as_slice());
        let shifted: Vec<f64> = z.iter().zip(t.iter()).map(|(a, b)| a + shift * b).collect();
        self.in_dual_interior(&shifted)
    }

    /// Barrier value, gradient and optionally Hessian at `p`, which must lie
    /// in the interior of the barrier's domain.
    pub fn evaluate(&self, p: &[f64], want_hess: bool) -> Result<BarrierEval, ConeError> {
        self.check_len(p)?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(ConeError::NotInterior);
        }
        use ConeKind::*;
        let eval = match &self.kind {
            Nonneg { .. } => nonneg::barrier(p, want_hess),
            EpiNorm2 { .. } => norm2::soc_barrier(p, want_hess),
            EpiPerSquare { .. } => norm2::rsoc_barrier(p, want_hess),
            PosSemidef { .. } => psd::barrier(p, want_hess),
            EpiNormInf { .. } | EpiNormInfDual { .. } => norminf::barrier(p, want_hess),
            EpiNormSpectral { r, s } | EpiNormSpectralDual { r, s } => {
                spectral::barrier(*r, *s, p, want_hess)
            }
            HypoGeomean { .. } => geomean::barrier(p, want_hess),
            HypoRootDet { .. } => rootdet::barrier(p, want_hess),
            HypoPerLog { .. } => perlog::log_barrier(p, want_hess),
            HypoPerLogDet { .. } => perlog::logdet_barrier(p, want_hess),
            WsosDual { p: pm } | Wsos { p: pm } => wsos::barrier(pm, p, want_hess),
        };
        eval.ok_or(ConeError::NotInterior)
    }

    pub fn barrier_value(&self, p: &[f64]) -> Result<f64, ConeError> {
        Ok(self.evaluate(p, false)?.value)
    }

    pub fn barrier_grad(&self, p: &[f64]) -> Result<DVector<f64>, ConeError> {
        Ok(self.evaluate(p, false)?.grad)
    }

    pub fn barrier_hess(&self, p: &[f64]) -> Result<DMatrix<f64>, ConeError> {
        Ok(self.hess_block(p)?.to_dense())
    }

    pub fn hess_block(&self, p: &[f64]) -> Result<HessBlock, ConeError> {
        Ok(self.evaluate(p, true)?.hess.expect("hessian requested"))
    }

    /// Hessian-vector product (through the dense Hessian).
    pub fn hess_prod(&self, p: &[f64], v: &[f64]) -> Result<DVector<f64>, ConeError> {
        self.check_len(v)?;
        Ok(self.hess_block(p)?.mul_vec(&DVector::from_column_slice(v)))
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Gradient and Hessian of `-log(zeta)` composed with the rest of a barrier,
/// given `zeta`, its gradient and Hessian.
pub(crate) fn neg_log_terms(
    zeta: f64,
    dzeta: &DVector<f64>,
    d2zeta: &DMatrix<f64>,
) -> (DVector<f64>, DMatrix<f64>) {
    let g = -dzeta / zeta;
    let h = dzeta * dzeta.transpose() / (zeta * zeta) - d2zeta / zeta;
    (g, h)
}

#[cfg(test)]
mod tests;
