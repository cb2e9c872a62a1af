//! JSON instance format.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ConicProblem, ModelError};
use crate::cones::{make_cone, ConeKind};

/// Matrix payload: dense rows or `(row, col, value)` triplets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixData {
    Dense(Vec<Vec<f64>>),
    Triplets(Vec<(usize, usize, f64)>),
}

impl MatrixData {
    pub fn to_matrix(&self, rows: usize, cols: usize) -> Result<DMatrix<f64>, ModelError> {
        match self {
            MatrixData::Dense(data) => {
                if data.len() != rows {
                    return Err(ModelError::DimensionMismatch { what: "matrix rows", expected: rows, got: data.len() });
                }
                let mut m = DMatrix::zeros(rows, cols);
                for (i, row) in data.iter().enumerate() {
                    if row.len() != cols {
                        return Err(ModelError::DimensionMismatch {
                            what: "matrix columns",
                            expected: cols,
                            got: row.len(),
                        });
                    }
                    for (j, v) in row.iter().enumerate() {
                        m[(i, j)] = *v;
                    }
                }
                Ok(m)
            }
            MatrixData::Triplets(ts) => {
                let mut m = DMatrix::zeros(rows, cols);
                for &(i, j, v) in ts {
                    if i >= rows || j >= cols {
                        return Err(ModelError::TripletOutOfRange { row: i, col: j, rows, cols });
                    }
                    m[(i, j)] += v;
                }
                Ok(m)
            }
        }
    }

    /// Triplets when at most a quarter of the entries are nonzero, dense rows otherwise.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let nnz = m.iter().filter(|v| **v != 0.0).count();
        if 4 * nnz <= m.len() {
            let mut ts = Vec::with_capacity(nnz);
            for j in 0..m.ncols() {
                for i in 0..m.nrows() {
                    if m[(i, j)] != 0.0 {
                        ts.push((i, j, m[(i, j)]));
                    }
                }
            }
            MatrixData::Triplets(ts)
        } else {
            MatrixData::Dense(m.row_iter().map(|r| r.iter().copied().collect()).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemData {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    pub h: Vec<f64>,
    #[serde(rename = "A")]
    pub a: MatrixData,
    #[serde(rename = "G")]
    pub g: MatrixData,
    pub cones: Vec<ConeKind>,
}

impl ProblemData {
    pub fn into_problem(self) -> Result<ConicProblem, ModelError> {
        let lens = [("length of c", self.n, self.c.len()), ("length of b", self.p, self.b.len()), ("length of h", self.q, self.h.len())];
        for (what, expected, got) in lens {
            if expected != got {
                return Err(ModelError::DimensionMismatch { what, expected, got });
            }
        }
        let a = self.a.to_matrix(self.p, self.n)?;
        let g = self.g.to_matrix(self.q, self.n)?;
        let cones = self.cones.into_iter().map(make_cone).collect::<Result<Vec<_>, _>>()?;
        ConicProblem::new(
            DVector::from_vec(self.c),
            a,
            DVector::from_vec(self.b),
            g,
            DVector::from_vec(self.h),
            cones,
        )
    }
}

impl ConicProblem {
    pub fn to_data(&self) -> ProblemData {
        ProblemData {
            n: self.n(),
            p: self.p(),
            q: self.q(),
            c: self.c.as_slice().to_vec(),
            b: self.b.as_slice().to_vec(),
            h: self.h.as_slice().to_vec(),
            a: MatrixData::from_matrix(&self.a),
            g: MatrixData::from_matrix(&self.g),
            cones: self.cones.iter().map(|c| c.kind().clone()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("problem data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let data: ProblemData = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        data.into_problem()
    }
}
