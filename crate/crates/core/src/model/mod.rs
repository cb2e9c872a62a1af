//! Conic standard form, symmetric-matrix vectorization, residuals and
//! certificate classification.

mod certificate;
mod io;
mod svec;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cones::{Cone, ConeError};

pub use certificate::{
    classify_certificate, objective_rel_diff, residual_eps, Certificate, CertificateKind,
    DEFAULT_CERT_TOL,
};
pub use io::{MatrixData, ProblemData};
pub use svec::{sdim, side_from_sdim, smat, svec, svec_index, svec_scale, svec_upper, SYMMETRY_TOL};
pub(crate) use svec::symm_kron;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("length {0} is not a triangular number")]
    NotTriangular(usize),
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("cone list is empty but q = {0}")]
    EmptyCones(usize),
    #[error("triplet ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    TripletOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("no certificate condition holds within tolerance")]
    AmbiguousCertificate,
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("instance format: {0}")]
    Format(String),
}

/// Data of `min c'x s.t. b - A x = 0, h - G x in K`. Immutable after
/// construction through [`ConicProblem::new`].
#[derive(Clone, Debug)]
pub struct ConicProblem {
    c: DVector<f64>,
    a: DMatrix<f64>,
    b: DVector<f64>,
    g: DMatrix<f64>,
    h: DVector<f64>,
    cones: Vec<Cone>,
    offsets: Vec<usize>,
}

impl ConicProblem {
    pub fn new(
        c: DVector<f64>,
        a: DMatrix<f64>,
        b: DVector<f64>,
        g: DMatrix<f64>,
        h: DVector<f64>,
        cones: Vec<Cone>,
    ) -> Result<Self, ModelError> {
        validate(&c, &a, &b, &g, &h, &cones)?;
        let mut offsets = Vec::with_capacity(cones.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for cone in &cones {
            acc += cone.dim();
            offsets.push(acc);
        }
        Ok(ConicProblem { c, a, b, g, h, cones, offsets })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn p(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> usize {
        self.h.len()
    }

    /// Total barrier parameter of the cone product.
    pub fn nu(&self) -> f64 {
        self.cones.iter().map(Cone::nu).sum()
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn h(&self) -> &DVector<f64> {
        &self.h
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Row range of cone block `k` within `h - G x`.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Returns a copy with the objective and right-hand sides scaled.
    pub fn scaled(&self, c_scale: f64, bh_scale: f64) -> Self {
        ConicProblem {
            c: &self.c * c_scale,
            b: &self.b * bh_scale,
            h: &self.h * bh_scale,
            ..self.clone()
        }
    }
}

/// Checks the dimension and finiteness invariants of a problem.
pub fn validate(
    c: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    g: &DMatrix<f64>,
    h: &DVector<f64>,
    cones: &[Cone],
) -> Result<(), ModelError> {
    let n = c.len();
    let p = b.len();
    let q = h.len();
    let dims = [
        ("rows of A", p, a.nrows()),
        ("columns of A", n, a.ncols()),
        ("rows of G", q, g.nrows()),
        ("columns of G", n, g.ncols()),
    ];
    for (what, expected, got) in dims {
        if expected != got {
            return Err(ModelError::DimensionMismatch { what, expected, got });
        }
    }
    if cones.is_empty() && q > 0 {
        return Err(ModelError::EmptyCones(q));
    }
    let total: usize = cones.iter().map(Cone::dim).sum();
    if total != q {
        return Err(ModelError::DimensionMismatch { what: "sum of cone dimensions", expected: q, got: total });
    }
    let finite = [
        ("c", c.iter().all(|v| v.is_finite())),
        ("A", a.iter().all(|v| v.is_finite())),
        ("b", b.iter().all(|v| v.is_finite())),
        ("G", g.iter().all(|v| v.is_finite())),
        ("h", h.iter().all(|v| v.is_finite())),
    ];
    for (what, ok) in finite {
        if !ok {
            return Err(ModelError::NonFinite(what));
        }
    }
    Ok(())
}

/// A primal-dual point `(x, y, z, s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimalDualPoint {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub z: DVector<f64>,
    pub s: DVector<f64>,
}

impl PrimalDualPoint {
    pub fn zeros(n: usize, p: usize, q: usize) -> Self {
        PrimalDualPoint {
            x: DVector::zeros(n),
            y: DVector::zeros(p),
            z: DVector::zeros(q),
            s: DVector::zeros(q),
        }
    }

    pub fn scaled(&self, f: f64) -> Self {
        PrimalDualPoint { x: &self.x * f, y: &self.y * f, z: &self.z * f, s: &self.s * f }
    }

    fn check(&self, problem: &ConicProblem) -> Result<(), ModelError> {
        let dims = [
            ("length of x", problem.n(), self.x.len()),
            ("length of y", problem.p(), self.y.len()),
            ("length of z", problem.q(), self.z.len()),
            ("length of s", problem.q(), self.s.len()),
        ];
        for (what, expected, got) in dims {
            if expected != got {
                return Err(ModelError::DimensionMismatch { what, expected, got });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{make_cone, ConeKind};

    fn lp(h: f64, cone_dim: usize) -> Result<ConicProblem, ModelError> {
        ConicProblem::new(
            DVector::from_vec(vec![1.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[1.0, -1.0]),
            DVector::from_vec(vec![0.0]),
            DMatrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, -1.0, -1.0]),
            DVector::from_vec(vec![0.0, 0.0, h]),
            vec![make_cone(ConeKind::Nonneg { d: cone_dim }).unwrap()],
        )
    }

    #[test]
    fn validate_examples() {
        let prob = lp(1.0, 3).unwrap();
        assert_eq!((prob.n(), prob.p(), prob.q()), (2, 1, 3));
        assert_eq!(prob.block_range(0), 0..3);
        assert!(matches!(lp(1.0, 2), Err(ModelError::DimensionMismatch { .. })));
        assert!(matches!(lp(f64::NAN, 3), Err(ModelError::NonFinite("h"))));
    }

    #[test]
    fn empty_cone_list_rejected() {
        let r = ConicProblem::new(
            DVector::zeros(1),
            DMatrix::zeros(0, 1),
            DVector::zeros(0),
            DMatrix::zeros(1, 1),
            DVector::zeros(1),
            vec![],
        );
        assert!(matches!(r, Err(ModelError::EmptyCones(1))));
    }
}
