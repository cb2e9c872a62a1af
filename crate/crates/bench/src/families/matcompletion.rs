use exocone::{ConeKind, ConicProblem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::assemble;
use crate::{block_rng, invalid, BenchError, Family};

/// Probability that an entry of the target matrix is observed.
pub const KNOWN_PROBABILITY: f64 = 0.8;
const MAX_PATTERN_ATTEMPTS: u64 = 64;

/// Seeds whose patterns observe 200 entries at `(k, m) = (5, 10)` and 794
/// entries at `(k, m) = (10, 10)`, the counts of the reference instances.
pub const REFERENCE_SEEDS: [(usize, usize, u64, usize); 2] = [(5, 10, 3, 200), (10, 10, 8, 794)];

/// Observed-entry pattern of a `k x l` matrix, column-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatCompletionPattern {
    pub rows: usize,
    pub cols: usize,
    pub known: Vec<bool>,
    /// Substream that produced the pattern, counted from zero.
    pub attempt: u64,
}

impl MatCompletionPattern {
    /// Samples each entry independently; a pattern with no unknown entries
    /// is redrawn from the next substream.
    pub fn sample(k: usize, m: usize, seed: u64) -> Result<Self, BenchError> {
        let fam = Family::MatCompletion;
        let l = m * k;
        for attempt in 0..MAX_PATTERN_ATTEMPTS {
            let mut rng = block_rng(fam, k, m, seed, 1 + attempt);
            let known: Vec<bool> = (0..k * l).map(|_| rng.random_bool(KNOWN_PROBABILITY)).collect();
            if known.iter().any(|&kn| !kn) {
                return Ok(MatCompletionPattern { rows: k, cols: l, known, attempt });
            }
        }
        Err(invalid(fam, "no pattern with unknown entries found"))
    }

    pub fn known_count(&self) -> usize {
        self.known.iter().filter(|&&kn| kn).count()
    }
}

/// Matrix completion with a spectral-norm objective:
///
/// ```text
/// min rho  s.t.  X_ij = A_ij for (i, j) in S,  rho >= sigma_max(X),
///                geomean(X_ij for (i, j) not in S) >= 1
/// ```
///
/// over `X` of size `k x l`, `l = m k`, with standard normal `A`.
pub fn gen_matcompletion(k: usize, m: usize, seed: u64) -> Result<ConicProblem, BenchError> {
    let fam = Family::MatCompletion;
    if k < 2 || m < 1 {
        return Err(invalid(fam, format!("need k >= 2 and m >= 1, got k={k}, m={m}")));
    }
    let l = m * k;
    let len = k * l;
    let mut rng = block_rng(fam, k, m, seed, 0);
    let values: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    let pattern = MatCompletionPattern::sample(k, m, seed)?;
    let known: Vec<usize> = (0..len).filter(|&i| pattern.known[i]).collect();
    let unknown: Vec<usize> = (0..len).filter(|&i| !pattern.known[i]).collect();

    let n = 1 + len;
    let mut c = DVector::zeros(n);
    c[0] = 1.0;
    let mut a = DMatrix::zeros(known.len(), n);
    let mut b = DVector::zeros(known.len());
    for (row, &i) in known.iter().enumerate() {
        a[(row, 1 + i)] = 1.0;
        b[row] = values[i];
    }

    let q = n + 1 + unknown.len();
    let mut g = DMatrix::zeros(q, n);
    let mut h = DVector::zeros(q);
    for i in 0..n {
        g[(i, i)] = -1.0;
    }
    h[n] = 1.0;
    for (row, &i) in unknown.iter().enumerate() {
        g[(n + 1 + row, 1 + i)] = -1.0;
    }
    let kinds = vec![ConeKind::EpiNormSpectral { r: k, s: l }, ConeKind::HypoGeomean { d: unknown.len() }];
    assemble(c, a, b, g, h, kinds)
}
