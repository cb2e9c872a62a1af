use nalgebra::DVector;

use crate::model::ConicProblem;

/// Point of the homogeneous self-dual embedding.
#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub z: DVector<f64>,
    pub s: DVector<f64>,
    pub tau: f64,
    pub kappa: f64,
}

impl Iterate {
    /// Complementarity measure `(s'z + tau kappa) / (nu + 1)`.
    pub fn mu(&self, nu: f64) -> f64 {
        (self.s.dot(&self.z) + self.tau * self.kappa) / (nu + 1.0)
    }

    /// Slice of block `k` on the side its barrier applies to.
    pub fn barrier_side<'a>(&'a self, problem: &ConicProblem, k: usize) -> &'a [f64] {
        let r = problem.block_range(k);
        if problem.cones()[k].uses_dual_barrier() {
            &self.z.as_slice()[r]
        } else {
            &self.s.as_slice()[r]
        }
    }

    /// Slice of block `k` on the side paired with the barrier side.
    pub fn other_side<'a>(&'a self, problem: &ConicProblem, k: usize) -> &'a [f64] {
        let r = problem.block_range(k);
        if problem.cones()[k].uses_dual_barrier() {
            &self.s.as_slice()[r]
        } else {
            &self.z.as_slice()[r]
        }
    }
}

/// Residuals of the embedding at an iterate.
#[derive(Clone, Debug)]
pub struct HsdeResiduals {
    /// `A'y + G'z + c tau`
    pub x: DVector<f64>,
    /// `-A x + b tau`
    pub y: DVector<f64>,
    /// `-G x + h tau - s`
    pub z: DVector<f64>,
    /// `-c'x - b'y - h'z - kappa`
    pub tau: f64,
}

pub fn hsde_residuals(problem: &ConicProblem, it: &Iterate) -> HsdeResiduals {
    let (c, b, h) = (problem.c(), problem.b(), problem.h());
    HsdeResiduals {
        x: problem.a().tr_mul(&it.y) + problem.g().tr_mul(&it.z) + c * it.tau,
        y: b * it.tau - problem.a() * &it.x,
        z: h * it.tau - problem.g() * &it.x - &it.s,
        tau: -c.dot(&it.x) - b.dot(&it.y) - h.dot(&it.z) - it.kappa,
    }
}

/// Starting point: cone initial points on the barrier side of each block,
/// the negated barrier gradient there on the other side, `x = y = 0` and
/// `tau = kappa = 1`, so `mu = 1`.
pub fn hsde_init(problem: &ConicProblem) -> Iterate {
    let q = problem.q();
    let mut s = DVector::zeros(q);
    let mut z = DVector::zeros(q);
    for (k, cone) in problem.cones().iter().enumerate() {
        let r = problem.block_range(k);
        let t = cone.barrier_point();
        let g = cone.barrier_grad(t.as_slice()).expect("barrier point is interior");
        let (bar, other) = if cone.uses_dual_barrier() { (&mut z, &mut s) } else { (&mut s, &mut z) };
        bar.rows_mut(r.start, r.len()).copy_from(&t);
        other.rows_mut(r.start, r.len()).copy_from(&(-g));
    }
    Iterate {
        x: DVector::zeros(problem.n()),
        y: DVector::zeros(problem.p()),
        z,
        s,
        tau: 1.0,
        kappa: 1.0,
    }
}
