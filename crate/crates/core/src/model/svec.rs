//! Inner-product preserving vectorization of symmetric matrices.
//!
//! `svec` stacks the columns of the upper triangle and scales off-diagonal
//! entries by `sqrt(2)`, so `svec(S)' svec(Z) = tr(S Z)`.

use nalgebra::DMatrix;

use super::ModelError;

/// Relative asymmetry tolerated by [`svec`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Number of free entries of a symmetric `d x d` matrix.
pub const fn sdim(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Position of entry `(i, j)` (either order) in the svec layout.
#[inline]
pub fn svec_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

/// Side dimension `d` with `sdim(d) == len`, if `len` is triangular.
pub fn side_from_sdim(len: usize) -> Option<usize> {
    let d = ((((8 * len + 1) as f64).sqrt() - 1.0) / 2.0).round() as usize;
    (sdim(d) == len).then_some(d)
}

/// Scale applied to entry `(i, j)` when vectorizing.
#[inline]
pub fn svec_scale(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        std::f64::consts::SQRT_2
    }
}

pub fn svec(s: &DMatrix<f64>) -> Result<Vec<f64>, ModelError> {
    let d = s.nrows();
    if s.ncols() != d {
        return Err(ModelError::NotSquare { rows: d, cols: s.ncols() });
    }
    let scale = s.amax().max(1.0);
    for j in 0..d {
        for i in 0..j {
            if (s[(i, j)] - s[(j, i)]).abs() > SYMMETRY_TOL * scale {
                return Err(ModelError::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(svec_upper(s))
}

/// Vectorizes the upper triangle of `s` without checking symmetry.
pub fn svec_upper(s: &DMatrix<f64>) -> Vec<f64> {
    let d = s.nrows();
    let mut out = Vec::with_capacity(sdim(d));
    for j in 0..d {
        for i in 0..=j {
            out.push(svec_scale(i, j) * s[(i, j)]);
        }
    }
    out
}

pub fn smat(w: &[f64]) -> Result<DMatrix<f64>, ModelError> {
    let d = side_from_sdim(w.len()).ok_or(ModelError::NotTriangular(w.len()))?;
    let mut s = DMatrix::zeros(d, d);
    let mut k = 0;
    for j in 0..d {
        for i in 0..=j {
            let v = w[k] / svec_scale(i, j);
            s[(i, j)] = v;
            s[(j, i)] = v;
            k += 1;
        }
    }
    Ok(s)
}

/// Matrix of the linear map `E -> A E A` in svec coordinates, for symmetric `A`.
pub(crate) fn symm_kron(a: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let n = sdim(d);
    let mut out = DMatrix::zeros(n, n);
    let mut col = 0;
    for l in 0..d {
        for k in 0..=l {
            let ckl = svec_scale(k, l);
            let mut row = 0;
            for j in 0..d {
                for i in 0..=j {
                    if row <= col {
                        let v = svec_scale(i, j)
                            * ckl
                            * 0.5
                            * (a[(i, k)] * a[(j, l)] + a[(i, l)] * a[(j, k)]);
                        out[(row, col)] = v;
                        out[(col, row)] = v;
                    }
                    row += 1;
                }
            }
            col += 1;
        }
    }
    out
}
