use exocone::{ConeKind, ConicProblem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::assemble;
use crate::{block_rng, invalid, BenchError, Family};

/// Weight of the Frobenius-norm regularizer.
pub const REGULARIZATION: f64 = 0.1;

/// Multi-response regression with nuclear-norm loss:
///
/// ```text
/// min rho + gamma mu  s.t.  rho >= ||Y - F X||_*,  mu >= ||vec F||_2
/// ```
///
/// over `F` of size `m x m`, with `X` and `Y` standard normal `m x k`.
pub fn gen_matregression(k: usize, m: usize, seed: u64) -> Result<ConicProblem, BenchError> {
    let fam = Family::MatRegression;
    if m < 1 || k < m {
        return Err(invalid(fam, format!("need 1 <= m <= k, got k={k}, m={m}")));
    }
    let mut rng = block_rng(fam, k, m, seed, 0);
    let x = DMatrix::<f64>::from_fn(m, k, |_, _| rng.sample(StandardNormal));
    let mut rng = block_rng(fam, k, m, seed, 1);
    let y = DMatrix::<f64>::from_fn(m, k, |_, _| rng.sample(StandardNormal));

    let n = 2 + m * m;
    let mut c = DVector::zeros(n);
    c[0] = 1.0;
    c[1] = REGULARIZATION;

    let loss_rows = 1 + m * k;
    let q = loss_rows + 1 + m * m;
    let mut g = DMatrix::zeros(q, n);
    let mut h = DVector::zeros(q);
    g[(0, 0)] = -1.0;
    // Row of (F X)_{ab} depends on F_{ac} with weight X_{cb}.
    for b_col in 0..k {
        for a_row in 0..m {
            let row = 1 + a_row + m * b_col;
            h[row] = y[(a_row, b_col)];
            for c_idx in 0..m {
                g[(row, 2 + a_row + m * c_idx)] = x[(c_idx, b_col)];
            }
        }
    }
    for i in 0..=m * m {
        g[(loss_rows + i, 1 + i)] = -1.0;
    }
    let kinds = vec![ConeKind::EpiNormSpectralDual { r: m, s: k }, ConeKind::EpiNorm2 { d: m * m }];
    assemble(c, DMatrix::zeros(0, n), DVector::zeros(0), g, h, kinds)
}
