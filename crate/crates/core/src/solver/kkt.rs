//! Newton system of the embedding. With `Delta s` and `Delta kappa`
//! eliminated, the remaining system in `(Delta x, Delta y)` is solved in the
//! null space of `A`: `A' = [Q1 Q2] R`, so `Delta x = Q1 a + Q2 b` with
//! `R'a` fixed by the equality rows and `b` from a Cholesky factorization of
//! `Q2' G' W G Q2`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};

use super::iterate::{hsde_residuals, Iterate};
use super::SolverError;
use crate::cones::{BarrierEval, HessBlock};
use crate::model::ConicProblem;

const RANK_TOL: f64 = 1e-12;
const BASE_REG: f64 = 1e-10;
const EIG_FLOOR: f64 = 1e-15;
const MAX_REFINE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionTarget {
    /// Drive residuals and complementarity toward zero.
    Predict,
    /// Keep residuals, move complementarity toward the central path.
    Center,
}

/// Search direction for every component of an [`Iterate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub z: DVector<f64>,
    pub s: DVector<f64>,
    pub tau: f64,
    pub kappa: f64,
}

impl Direction {
    pub fn max_abs(&self) -> f64 {
        let m = [&self.x, &self.y, &self.z, &self.s]
            .iter()
            .fold(0.0_f64, |m, v| m.max(super::inf_norm(v)));
        m.max(self.tau.abs()).max(self.kappa.abs())
    }

    fn add_assign(&mut self, o: &Direction) {
        self.x += &o.x;
        self.y += &o.y;
        self.z += &o.z;
        self.s += &o.s;
        self.tau += o.tau;
        self.kappa += o.kappa;
    }
}

/// Right-hand side of the six row groups of the Newton system.
#[derive(Clone, Debug)]
pub(crate) struct Rhs {
    pub r1: DVector<f64>,
    pub r2: DVector<f64>,
    pub r3: DVector<f64>,
    pub r4: f64,
    pub r5: DVector<f64>,
    pub r6: f64,
}

impl Rhs {
    fn max_abs(&self) -> f64 {
        let m = [&self.r1, &self.r2, &self.r3, &self.r5]
            .iter()
            .fold(0.0_f64, |m, v| m.max(super::inf_norm(v)));
        m.max(self.r4.abs()).max(self.r6.abs())
    }

    fn sub(&self, o: &Rhs) -> Rhs {
        Rhs {
            r1: &self.r1 - &o.r1,
            r2: &self.r2 - &o.r2,
            r3: &self.r3 - &o.r3,
            r4: self.r4 - o.r4,
            r5: &self.r5 - &o.r5,
            r6: self.r6 - o.r6,
        }
    }
}

pub(crate) fn build_rhs(
    problem: &ConicProblem,
    it: &Iterate,
    evals: &[BarrierEval],
    target: DirectionTarget,
) -> Rhs {
    let mu = it.mu(problem.nu());
    let mut r5 = DVector::zeros(problem.q());
    for (k, ev) in evals.iter().enumerate() {
        let r = problem.block_range(k);
        let other = DVector::from_column_slice(it.other_side(problem, k));
        let block = match target {
            DirectionTarget::Predict => -other,
            DirectionTarget::Center => -other - &ev.grad * mu,
        };
        r5.rows_mut(r.start, r.len()).copy_from(&block);
    }
    match target {
        DirectionTarget::Predict => {
            let res = hsde_residuals(problem, it);
            Rhs { r1: -res.x, r2: -res.y, r3: -res.z, r4: -res.tau, r5, r6: -it.tau * it.kappa }
        }
        DirectionTarget::Center => Rhs {
            r1: DVector::zeros(problem.n()),
            r2: DVector::zeros(problem.p()),
            r3: DVector::zeros(problem.q()),
            r4: 0.0,
            r5,
            r6: mu - it.tau * it.kappa,
        },
    }
}

/// Data depending only on the problem: an orthogonal basis split by the
/// range and null space of `A'`.
pub(crate) struct KktSystem {
    q1: DMatrix<f64>,
    q2: DMatrix<f64>,
    r: DMatrix<f64>,
    gq1: DMatrix<f64>,
    gq2: DMatrix<f64>,
}

impl KktSystem {
    pub fn new(problem: &ConicProblem) -> Result<Self, SolverError> {
        let n = problem.n();
        let p = problem.p();
        if p > n {
            return Err(SolverError::Factorization(format!("{p} equality rows for {n} variables")));
        }
        let (q1, q2, r) = if p == 0 {
            (DMatrix::zeros(n, 0), DMatrix::identity(n, n), DMatrix::zeros(0, 0))
        } else {
            let qr = problem.a().transpose().qr();
            let r = qr.r();
            let rmax = r.diagonal().amax();
            if r.diagonal().iter().any(|v| v.abs() <= RANK_TOL * rmax.max(1.0)) {
                return Err(SolverError::Factorization("equality rows are linearly dependent".into()));
            }
            let mut qt = DMatrix::identity(n, n);
            qr.q_tr_mul(&mut qt);
            let q = qt.transpose();
            (q.columns(0, p).into_owned(), q.columns(p, n - p).into_owned(), r)
        };
        let gq1 = problem.g() * &q1;
        let gq2 = problem.g() * &q2;
        Ok(KktSystem { q1, q2, r, gq1, gq2 })
    }
}

fn scale_block(b: &HessBlock, f: f64) -> HessBlock {
    match b {
        HessBlock::Diagonal(d) => HessBlock::Diagonal(d * f),
        HessBlock::Dense(m) => HessBlock::Dense(m * f),
    }
}

fn invert_block(b: &HessBlock) -> Option<HessBlock> {
    match b {
        HessBlock::Diagonal(d) => {
            d.iter().all(|v| *v > 0.0).then(|| HessBlock::Diagonal(d.map(|v| 1.0 / v)))
        }
        HessBlock::Dense(m) => Some(HessBlock::Dense(spd_inverse(m)?)),
    }
}

/// Inverse of a symmetric positive definite matrix. When rounding makes the
/// Cholesky factorization fail, eigenvalues are clipped from below at a
/// relative floor instead.
pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c.inverse());
    }
    let eig = SymmetricEigen::new((m + m.transpose()) * 0.5);
    let top = eig.eigenvalues.amax();
    if !(top > 0.0 && top.is_finite()) {
        return None;
    }
    let floor = EIG_FLOOR * top;
    let inv = eig.eigenvalues.map(|v| 1.0 / v.max(floor));
    Some(&eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose())
}

/// Per-iterate factorization of the Newton system.
pub(crate) struct Factor<'a> {
    problem: &'a ConicProblem,
    kkt: &'a KktSystem,
    tau: f64,
    kappa: f64,
    hmu: Vec<HessBlock>,
    wi: Vec<HessBlock>,
    chol: Option<Cholesky<f64, Dyn>>,
    wih: DVector<f64>,
    x2: DVector<f64>,
    y2: DVector<f64>,
    denom: f64,
}

impl<'a> Factor<'a> {
    pub fn new(
        problem: &'a ConicProblem,
        kkt: &'a KktSystem,
        it: &Iterate,
        evals: &[BarrierEval],
    ) -> Option<Self> {
        let mu = it.mu(problem.nu());
        let mut hmu = Vec::with_capacity(evals.len());
        let mut wi = Vec::with_capacity(evals.len());
        for (cone, ev) in problem.cones().iter().zip(evals) {
            let h = scale_block(ev.hess.as_ref()?, mu);
            let w = if cone.uses_dual_barrier() { invert_block(&h)? } else { h.clone() };
            hmu.push(h);
            wi.push(w);
        }
        let mut f = Factor {
            problem,
            kkt,
            tau: it.tau,
            kappa: it.kappa,
            hmu,
            wi,
            chol: None,
            wih: DVector::zeros(0),
            x2: DVector::zeros(0),
            y2: DVector::zeros(0),
            denom: 0.0,
        };
        f.chol = f.factor_reduced()?;
        f.wih = f.wi_apply(problem.h());
        let f2 = problem.g().tr_mul(&f.wih) - problem.c();
        let (x2, y2) = f.solve_xy(&f2, problem.b())?;
        let gx2 = problem.g() * &x2;
        f.denom = -problem.c().dot(&x2) - problem.b().dot(&y2) - f.wih.dot(&gx2)
            + problem.h().dot(&f.wih)
            + it.kappa / it.tau;
        f.x2 = x2;
        f.y2 = y2;
        (f.denom.is_finite() && f.denom != 0.0).then_some(f)
    }

    fn factor_reduced(&self) -> Option<Option<Cholesky<f64, Dyn>>> {
        let m = self.kkt.gq2.ncols();
        if m == 0 {
            return Some(None);
        }
        let mut k = DMatrix::zeros(m, m);
        for (b, w) in self.wi.iter().enumerate() {
            let r = self.problem.block_range(b);
            let g = self.kkt.gq2.rows(r.start, r.len());
            let wg = match w {
                HessBlock::Diagonal(d) => {
                    let mut wg = g.into_owned();
                    for (i, mut row) in wg.row_iter_mut().enumerate() {
                        row *= d[i];
                    }
                    wg
                }
                HessBlock::Dense(dm) => dm * g,
            };
            k.gemm_tr(1.0, &g, &wg, 1.0);
        }
        let k = (&k + k.transpose()) * 0.5;
        if let Some(c) = Cholesky::new(k.clone()) {
            return Some(Some(c));
        }
        let scale = k.diagonal().amax().max(1.0);
        let mut reg = BASE_REG * scale;
        for _ in 0..6 {
            let mut kr = k.clone();
            for i in 0..m {
                kr[(i, i)] += reg;
            }
            if let Some(c) = Cholesky::new(kr) {
                return Some(Some(c));
            }
            reg *= 100.0;
        }
        None
    }

    fn wi_apply(&self, v: &DVector<f64>) -> DVector<f64> {
        block_apply(self.problem, &self.wi, v)
    }

    fn m_apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let g = self.problem.g();
        g.tr_mul(&self.wi_apply(&(g * x)))
    }

    /// Solves `M x + A'y = f`, `A x = e` with `M = G' W G`.
    fn solve_xy(&self, f: &DVector<f64>, e: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
        let kkt = self.kkt;
        let p = kkt.r.nrows();
        let a = if p == 0 {
            DVector::zeros(0)
        } else {
            kkt.r.tr_solve_upper_triangular(e)?
        };
        let mut x = &kkt.q1 * &a;
        if let Some(chol) = &self.chol {
            let gx = &kkt.gq1 * &a;
            let mxa = self.problem.g().tr_mul(&self.wi_apply(&gx));
            let rhs = kkt.q2.tr_mul(&(f - mxa));
            let bsol = chol.solve(&rhs);
            x += &kkt.q2 * bsol;
        }
        let y = if p == 0 {
            DVector::zeros(0)
        } else {
            let rest = kkt.q1.tr_mul(&(f - self.m_apply(&x)));
            kkt.r.solve_upper_triangular(&rest)?
        };
        Some((x, y))
    }

    fn solve_once(&self, rhs: &Rhs) -> Option<Direction> {
        let problem = self.problem;
        let (g, h, c, b) = (problem.g(), problem.h(), problem.c(), problem.b());
        let mut v = DVector::zeros(problem.q());
        for (k, cone) in problem.cones().iter().enumerate() {
            let r = problem.block_range(k);
            let r3 = rhs.r3.rows(r.start, r.len()).into_owned();
            let r5 = rhs.r5.rows(r.start, r.len()).into_owned();
            let vk = if cone.uses_dual_barrier() {
                self.wi[k].mul_vec(&(r5 + r3))
            } else {
                r5 + self.hmu[k].mul_vec(&r3)
            };
            v.rows_mut(r.start, r.len()).copy_from(&vk);
        }
        let f1 = &rhs.r1 - g.tr_mul(&v);
        let (x1, y1) = self.solve_xy(&f1, &(-&rhs.r2))?;
        let gx1 = g * &x1;
        let num = rhs.r4 + rhs.r6 / self.tau + h.dot(&v) + c.dot(&x1) + b.dot(&y1) + self.wih.dot(&gx1);
        let dtau = num / self.denom;
        let dx = x1 + &self.x2 * dtau;
        let dy = y1 + &self.y2 * dtau;
        let gdx = g * &dx;
        let dz = self.wi_apply(&(&gdx - h * dtau)) + v;
        let ds = -gdx + h * dtau - &rhs.r3;
        let dkappa = (rhs.r6 - self.kappa * dtau) / self.tau;
        let d = Direction { x: dx, y: dy, z: dz, s: ds, tau: dtau, kappa: dkappa };
        (d.max_abs().is_finite()).then_some(d)
    }

    /// Left-hand side of the Newton system applied to a direction.
    pub fn apply(&self, d: &Direction) -> Rhs {
        let problem = self.problem;
        let (a, g, h, c, b) = (problem.a(), problem.g(), problem.h(), problem.c(), problem.b());
        let mut r5 = DVector::zeros(problem.q());
        for (k, cone) in problem.cones().iter().enumerate() {
            let r = problem.block_range(k);
            let ds = d.s.rows(r.start, r.len()).into_owned();
            let dz = d.z.rows(r.start, r.len()).into_owned();
            let blk = if cone.uses_dual_barrier() {
                ds + self.hmu[k].mul_vec(&dz)
            } else {
                dz + self.hmu[k].mul_vec(&ds)
            };
            r5.rows_mut(r.start, r.len()).copy_from(&blk);
        }
        Rhs {
            r1: a.tr_mul(&d.y) + g.tr_mul(&d.z) + c * d.tau,
            r2: -(a * &d.x) + b * d.tau,
            r3: -(g * &d.x) + h * d.tau - &d.s,
            r4: -c.dot(&d.x) - b.dot(&d.y) - h.dot(&d.z) - d.kappa,
            r5,
            r6: self.kappa * d.tau + self.tau * d.kappa,
        }
    }

    /// Solves with iterative refinement on the full system, stopping once
    /// a refinement step no longer shrinks the residual.
    pub fn solve(&self, rhs: &Rhs) -> Option<Direction> {
        let mut d = self.solve_once(rhs)?;
        let mut res = rhs.sub(&self.apply(&d));
        let mut res_norm = res.max_abs();
        for _ in 0..MAX_REFINE {
            let Some(corr) = self.solve_once(&res) else { break };
            let mut cand = d.clone();
            cand.add_assign(&corr);
            let cand_res = rhs.sub(&self.apply(&cand));
            let cand_norm = cand_res.max_abs();
            if !(cand_norm < res_norm) {
                break;
            }
            d = cand;
            res = cand_res;
            res_norm = cand_norm;
        }
        (d.max_abs().is_finite()).then_some(d)
    }
}

fn block_apply(problem: &ConicProblem, blocks: &[HessBlock], v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(v.len());
    for (k, b) in blocks.iter().enumerate() {
        let r = problem.block_range(k);
        let vk = v.rows(r.start, r.len()).into_owned();
        out.rows_mut(r.start, r.len()).copy_from(&b.mul_vec(&vk));
    }
    out
}
