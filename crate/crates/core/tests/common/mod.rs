#![allow(dead_code)]

use exocone::cones::diagnostics::perturbed_point;
use exocone::cones::InterpMatrices;
use exocone::interp::build_interp;
use exocone::{make_cone, Cone, ConeKind};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

/// Every catalog kind at small sizes.
pub fn small_catalog() -> Vec<ConeKind> {
    let w1 = build_interp(1, 2).unwrap().p;
    let w2 = build_interp(2, 1).unwrap().p;
    vec![
        ConeKind::Nonneg { d: 4 },
        ConeKind::EpiNorm2 { d: 3 },
        ConeKind::EpiPerSquare { d: 3 },
        ConeKind::PosSemidef { side: 3 },
        ConeKind::EpiNormInf { d: 4 },
        ConeKind::EpiNormInfDual { d: 4 },
        ConeKind::EpiNormSpectral { r: 2, s: 3 },
        ConeKind::EpiNormSpectralDual { r: 2, s: 3 },
        ConeKind::HypoGeomean { d: 4 },
        ConeKind::HypoRootDet { side: 3 },
        ConeKind::HypoPerLog { d: 3 },
        ConeKind::HypoPerLogDet { side: 3 },
        ConeKind::WsosDual { p: w1.clone() },
        ConeKind::Wsos { p: w1 },
        ConeKind::WsosDual { p: w2.clone() },
        ConeKind::Wsos { p: w2 },
    ]
}

/// Catalog kind number `idx % 14` with size parameter `n`.
pub fn sized_kind(idx: usize, n: usize) -> ConeKind {
    let n = n.max(1);
    match idx % 14 {
        0 => ConeKind::Nonneg { d: n },
        1 => ConeKind::EpiNorm2 { d: n },
        2 => ConeKind::EpiPerSquare { d: n },
        3 => ConeKind::PosSemidef { side: n },
        4 => ConeKind::EpiNormInf { d: n },
        5 => ConeKind::EpiNormInfDual { d: n },
        6 => ConeKind::EpiNormSpectral { r: n.div_ceil(2), s: n },
        7 => ConeKind::EpiNormSpectralDual { r: n.div_ceil(2), s: n },
        8 => ConeKind::HypoGeomean { d: n },
        9 => ConeKind::HypoRootDet { side: n },
        10 => ConeKind::HypoPerLog { d: n },
        11 => ConeKind::HypoPerLogDet { side: n },
        12 => ConeKind::WsosDual { p: wsos_p(n) },
        _ => ConeKind::Wsos { p: wsos_p(n) },
    }
}

fn wsos_p(n: usize) -> InterpMatrices {
    // U <= 15: (m, k) in {(1,1..7), (2,1..2)}
    if n <= 7 {
        build_interp(1, n).unwrap().p
    } else {
        build_interp(2, 1 + n % 2).unwrap().p
    }
}

pub fn cone(kind: ConeKind) -> Cone {
    make_cone(kind).unwrap()
}

/// Random point of the barrier domain.
pub fn random_point<R: Rng>(cone: &Cone, rng: &mut R) -> DVector<f64> {
    let noise: Vec<f64> = (0..cone.dim()).map(|_| rng.sample(StandardNormal)).collect();
    let spread = rng.random_range(0.05..0.8);
    let scale = f64::exp(rng.random_range(-1.0..1.0));
    perturbed_point(cone, &noise, spread, scale)
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Random problem with strictly feasible primal and dual points, so an
/// optimum exists. Blocks are drawn from the small catalog sizes.
pub fn random_feasible_problem<R: Rng>(rng: &mut R, kinds: &[ConeKind]) -> exocone::ConicProblem {
    let cones: Vec<Cone> = kinds.iter().cloned().map(cone).collect();
    let q: usize = cones.iter().map(|c| c.dim()).sum();
    let n = rng.random_range(1..=q.clamp(1, 6));
    let p = rng.random_range(0..n);
    let a = gaussian_matrix(p, n, rng);
    let g = gaussian_matrix(q, n, rng);
    let x0 = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let y0 = DVector::from_fn(p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut s0 = DVector::zeros(q);
    let mut z0 = DVector::zeros(q);
    let mut off = 0;
    for c in &cones {
        let pt = random_point(c, rng);
        let grad = -c.barrier_grad(pt.as_slice()).unwrap();
        let (s, z) = if c.uses_dual_barrier() { (grad, pt) } else { (pt, grad) };
        s0.rows_mut(off, c.dim()).copy_from(&s);
        z0.rows_mut(off, c.dim()).copy_from(&z);
        off += c.dim();
    }
    let b = &a * &x0;
    let h = &g * &x0 + s0;
    let c = -(a.tr_mul(&y0) + g.tr_mul(&z0));
    exocone::ConicProblem::new(c, a, b, g, h, cones).unwrap()
}
