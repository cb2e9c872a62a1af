use exocone::{ConeKind, ConicProblem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use super::assemble;
use crate::{block_rng, invalid, BenchError, Family};

/// Risk-constrained portfolio rebalancing over `k` assets:
///
/// ```text
/// max g'rho  s.t.  e'rho = 0,  F rho = 0,  ||rho||_inf <= 1,  ||S rho||_1 <= gamma
/// ```
///
/// with `g ~ U(0.1, 1.1)`, `S` (the risk square root) and the `k/2 x k`
/// factor matrix `F` standard normal, and `gamma = ||S e||_1 / k`.
pub fn gen_portfolio(k: usize, seed: u64) -> Result<ConicProblem, BenchError> {
    let fam = Family::Portfolio;
    if k < 4 || !k.is_multiple_of(2) {
        return Err(invalid(fam, format!("k must be even and at least 4, got {k}")));
    }
    let returns = Uniform::new(0.1, 1.1).expect("valid range");
    let g: Vec<f64> = block_rng(fam, k, 0, seed, 0).sample_iter(returns).take(k).collect();
    let mut rng = block_rng(fam, k, 0, seed, 1);
    let risk = DMatrix::from_fn(k, k, |_, _| StandardNormal.sample(&mut rng));
    let mut rng = block_rng(fam, k, 0, seed, 2);
    let l = k / 2;
    let factors = DMatrix::<f64>::from_fn(l, k, |_, _| rng.sample(StandardNormal));

    let gamma = risk.column_sum().abs().sum() / k as f64;
    let c = -DVector::from_vec(g);
    let mut a = DMatrix::zeros(l + 1, k);
    a.row_mut(0).fill(1.0);
    a.rows_mut(1, l).copy_from(&factors);
    let b = DVector::zeros(l + 1);

    let q = 2 * k + 2;
    let mut g_mat = DMatrix::zeros(q, k);
    let mut h = DVector::zeros(q);
    h[0] = 1.0;
    for i in 0..k {
        g_mat[(1 + i, i)] = -1.0;
    }
    h[k + 1] = gamma;
    g_mat.view_mut((k + 2, 0), (k, k)).copy_from(&(-&risk));
    assemble(c, a, b, g_mat, h, vec![ConeKind::EpiNormInf { d: k }, ConeKind::EpiNormInfDual { d: k }])
}
