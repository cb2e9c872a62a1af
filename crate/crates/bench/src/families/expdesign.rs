use exocone::model::{sdim, svec_index, svec_scale};
use exocone::{ConeKind, ConicProblem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::assemble;
use crate::{block_rng, invalid, BenchError, Family, Variant};

/// Bound on the number of trials per experiment.
const TRIAL_CAP: f64 = 5.0;

/// Optimal experiment design with `m = 2k` candidate experiments and
/// `j = 2k` trials in total:
///
/// ```text
/// max rho  s.t.  e'mu = j,  0 <= mu <= l,  rho <= phi(F Diag(mu) F')
/// ```
///
/// where `phi` is the root determinant or the log determinant and `F` is a
/// standard normal `k x m` matrix shared by both variants.
pub fn gen_expdesign(k: usize, variant: Variant, seed: u64) -> Result<ConicProblem, BenchError> {
    let fam = Family::ExpDesign;
    if k < 2 {
        return Err(invalid(fam, format!("k must be at least 2, got {k}")));
    }
    let m = 2 * k;
    let mut rng = block_rng(fam, k, 0, seed, 0);
    let f = DMatrix::<f64>::from_fn(k, m, |_, _| rng.sample(StandardNormal));

    let n = 1 + m;
    let mut c = DVector::zeros(n);
    c[0] = -1.0;
    let mut a = DMatrix::zeros(1, n);
    a.view_mut((0, 1), (1, m)).fill(1.0);
    let b = DVector::from_element(1, m as f64);

    let half = TRIAL_CAP / 2.0;
    let box_rows = 1 + m;
    let lead = match variant {
        Variant::Rt => 1,
        Variant::Log => 2,
    };
    let q = box_rows + lead + sdim(k);
    let mut g = DMatrix::zeros(q, n);
    let mut h = DVector::zeros(q);
    h[0] = half;
    for t in 0..m {
        h[1 + t] = -half;
        g[(1 + t, 1 + t)] = -1.0;
    }
    g[(box_rows, 0)] = -1.0;
    if variant == Variant::Log {
        h[box_rows + 1] = 1.0;
    }
    let base = box_rows + lead;
    for j in 0..k {
        for i in 0..=j {
            let row = base + svec_index(i, j);
            let scale = svec_scale(i, j);
            for t in 0..m {
                g[(row, 1 + t)] = -scale * f[(i, t)] * f[(j, t)];
            }
        }
    }
    let det_kind = match variant {
        Variant::Rt => ConeKind::HypoRootDet { side: k },
        Variant::Log => ConeKind::HypoPerLogDet { side: k },
    };
    assemble(c, a, b, g, h, vec![ConeKind::EpiNormInf { d: m }, det_kind])
}
