//! Extended formulations: rewriting exotic cone constraints into the
//! standard cones (orthant, second-order, rotated second-order, PSD and
//! exponential), predicting the resulting sizes, and mapping solutions back.

mod rewrite;

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cones::{make_cone, Cone, ConeKind};
use crate::model::{sdim, ConicProblem, ModelError, PrimalDualPoint};
use rewrite::{Builder, Expr, Var};

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("cone kind {0} has no extended formulation")]
    Unsupported(&'static str),
    #[error("point does not match the extended problem: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which extended formulation to use for geometric-mean constraints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GeomeanMode {
    /// Exponential cones.
    #[default]
    Exp,
    /// Tower of 3-dimensional rotated second-order cones.
    Sec,
}

/// Which extended formulation to use for l1-norm epigraphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum L1Mode {
    /// `w = theta - lambda` with `2d` nonnegative variables and `d` equalities.
    #[default]
    Split,
    /// `-t <= w <= t` with `d` auxiliary variables and no equalities.
    Epigraph,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EFOptions {
    pub geomean_mode: GeomeanMode,
    pub l1_mode: L1Mode,
}

impl EFOptions {
    pub fn exp() -> Self {
        EFOptions::default()
    }

    pub fn sec() -> Self {
        EFOptions { geomean_mode: GeomeanMode::Sec, ..EFOptions::default() }
    }

    pub fn with_l1(self, l1_mode: L1Mode) -> Self {
        EFOptions { l1_mode, ..self }
    }
}

/// Rewrite applied to one cone block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteTag {
    PassThrough,
    NormInf,
    L1Split,
    L1Epigraph,
    Spectral,
    SpectralDual,
    Geomean(GeomeanMode),
    RootDet(GeomeanMode),
    Log,
    LogDet,
    WsosDual,
    Wsos,
}

fn tag_for(kind: &ConeKind, opts: &EFOptions) -> RewriteTag {
    match kind {
        k if k.is_standard() => RewriteTag::PassThrough,
        ConeKind::EpiNormInf { .. } => RewriteTag::NormInf,
        ConeKind::EpiNormInfDual { .. } => match opts.l1_mode {
            L1Mode::Split => RewriteTag::L1Split,
            L1Mode::Epigraph => RewriteTag::L1Epigraph,
        },
        ConeKind::EpiNormSpectral { .. } => RewriteTag::Spectral,
        ConeKind::EpiNormSpectralDual { .. } => RewriteTag::SpectralDual,
        ConeKind::HypoGeomean { .. } => RewriteTag::Geomean(opts.geomean_mode),
        ConeKind::HypoRootDet { .. } => RewriteTag::RootDet(opts.geomean_mode),
        ConeKind::HypoPerLog { .. } => RewriteTag::Log,
        ConeKind::HypoPerLogDet { .. } => RewriteTag::LogDet,
        ConeKind::WsosDual { .. } => RewriteTag::WsosDual,
        ConeKind::Wsos { .. } => RewriteTag::Wsos,
        _ => RewriteTag::PassThrough,
    }
}

/// Extended-formulation rows produced by one block, with coefficients on
/// the block's slack entries and on global EF variable indices.
#[derive(Clone, Debug)]
struct EfRow {
    slack: Vec<(usize, f64)>,
    aux: Vec<(usize, f64)>,
}

/// Correspondence between one natural cone block and its EF pieces.
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub kind: ConeKind,
    pub tag: RewriteTag,
    /// Rows of the block in the natural problem.
    pub nf_rows: Range<usize>,
    /// Auxiliary variable indices in the EF problem.
    pub aux_vars: Range<usize>,
    /// Cone rows in the EF problem.
    pub ef_rows: Range<usize>,
    /// Equality rows in the EF problem.
    pub eq_rows: Range<usize>,
    cone_exprs: Vec<EfRow>,
    eq_exprs: Vec<EfRow>,
}

/// Everything needed to translate EF solutions back to the natural problem.
#[derive(Clone, Debug)]
pub struct EFMapping {
    pub nf_var_count: usize,
    pub nf_eq_count: usize,
    pub nf_cone_dim: usize,
    pub ef_var_count: usize,
    pub ef_eq_count: usize,
    pub ef_cone_dim: usize,
    pub blocks: Vec<BlockMap>,
}

/// EF size contributions `(q_bar, nu_bar, n_bar, p_bar)` of one cone.
pub fn ef_cone_dims(kind: &ConeKind, opts: &EFOptions) -> Result<(usize, usize, usize, usize), BridgeError> {
    let geom = |d: usize, mode: GeomeanMode| -> (usize, usize, usize) {
        match mode {
            GeomeanMode::Exp => (2 + 3 * d, 2 + 3 * d, 1 + d),
            GeomeanMode::Sec if d == 1 => (2, 2, 0),
            GeomeanMode::Sec => {
                let n = d.next_power_of_two();
                (3 * (n - 1) + 1, 2 * (n - 1) + 1, n - 1)
            }
        }
    };
    let dims = match kind {
        k if k.is_standard() => {
            let c = make_cone(k.clone()).map_err(|_| BridgeError::Unsupported(k.tag()))?;
            (c.dim(), c.nu() as usize, 0, 0)
        }
        ConeKind::EpiNormInf { d } => (2 * d, 2 * d, 0, 0),
        ConeKind::EpiNormInfDual { d } => match opts.l1_mode {
            L1Mode::Split => (1 + 2 * d, 1 + 2 * d, 2 * d, *d),
            L1Mode::Epigraph => (1 + 2 * d, 1 + 2 * d, *d, 0),
        },
        ConeKind::EpiNormSpectral { r, s } => (sdim(r + s), r + s, 0, 0),
        ConeKind::EpiNormSpectralDual { r, s } => (1 + sdim(r + s), 1 + r + s, sdim(*r) + sdim(*s), 0),
        ConeKind::HypoGeomean { d } => {
            let (q, nu, n) = geom(*d, opts.geomean_mode);
            (q, nu, n, 0)
        }
        ConeKind::HypoRootDet { side: d } => {
            let (q, nu, n) = geom(*d, opts.geomean_mode);
            (q + sdim(2 * d), nu + 2 * d, n + sdim(*d), 0)
        }
        ConeKind::HypoPerLog { d } => (1 + 3 * d, 1 + 3 * d, *d, 0),
        ConeKind::HypoPerLogDet { side: d } => {
            let (q, nu, n) = if *d >= 2 { (1 + 3 * d, 1 + 3 * d, *d) } else { (3, 3, 0) };
            (q + sdim(2 * d), nu + 2 * d, n + sdim(*d), 0)
        }
        ConeKind::WsosDual { p } => {
            let s: Vec<usize> = p.0.iter().map(|m| m.ncols()).collect();
            (s.iter().map(|&t| sdim(t)).sum(), s.iter().sum(), 0, 0)
        }
        ConeKind::Wsos { p } => {
            let s: Vec<usize> = p.0.iter().map(|m| m.ncols()).collect();
            let tri: usize = s.iter().map(|&t| sdim(t)).sum();
            (tri, s.iter().sum(), tri, p.num_points())
        }
        other => return Err(BridgeError::Unsupported(other.tag())),
    };
    Ok(dims)
}

fn split_expr(e: &Expr, aux_base: usize) -> EfRow {
    let mut slack = Vec::new();
    let mut aux = Vec::new();
    for (v, c) in e {
        match v {
            Var::In(i) => slack.push((*i, *c)),
            Var::Aux(j) => aux.push((aux_base + j, *c)),
        }
    }
    EfRow { slack, aux }
}

/// Rewrites every non-standard cone into standard cones. The EF keeps the
/// natural variables first, then auxiliary variables block by block; the
/// natural equalities first, then new equalities block by block; and the
/// cone blocks in the natural block order. All EF constants come from `h`,
/// so objective values carry over unchanged.
pub fn extend(problem: &ConicProblem, opts: &EFOptions) -> Result<(ConicProblem, EFMapping), BridgeError> {
    let n = problem.n();
    let p = problem.p();
    let g = problem.g();
    let h = problem.h();

    // sparse rows of G
    let g_rows: Vec<Vec<(usize, f64)>> = (0..problem.q())
        .map(|i| (0..n).filter(|&j| g[(i, j)] != 0.0).map(|j| (j, g[(i, j)])).collect())
        .collect();

    let mut blocks = Vec::with_capacity(problem.cones().len());
    let mut cones: Vec<Cone> = Vec::new();
    let mut n_aux = 0;
    let mut n_eq = 0;
    let mut n_rows = 0;
    for (k, cone) in problem.cones().iter().enumerate() {
        let kind = cone.kind().clone();
        let inp: Vec<Expr> = (0..cone.dim()).map(|i| vec![(Var::In(i), 1.0)]).collect();
        let mut b = Builder::default();
        rewrite::rewrite(&mut b, &kind, &inp, opts);
        let aux_vars = n + n_aux..n + n_aux + b.n_aux;
        let mut cone_exprs = Vec::new();
        let start_rows = n_rows;
        for (ck, rows) in &b.cones {
            let c = make_cone(ck.clone()).map_err(|e| BridgeError::Model(e.into()))?;
            debug_assert_eq!(c.dim(), rows.len());
            n_rows += rows.len();
            cones.push(c);
            cone_exprs.extend(rows.iter().map(|e| split_expr(e, aux_vars.start)));
        }
        let eq_exprs: Vec<EfRow> = b.eqs.iter().map(|e| split_expr(e, aux_vars.start)).collect();
        let eq_rows = p + n_eq..p + n_eq + eq_exprs.len();
        n_eq += eq_exprs.len();
        n_aux += b.n_aux;
        blocks.push(BlockMap {
            tag: tag_for(&kind, opts),
            kind,
            nf_rows: problem.block_range(k),
            aux_vars,
            ef_rows: start_rows..n_rows,
            eq_rows,
            cone_exprs,
            eq_exprs,
        });
    }

    let nbar = n + n_aux;
    let pbar = p + n_eq;
    let qbar = n_rows;
    let mut cbar = DVector::zeros(nbar);
    cbar.rows_mut(0, n).copy_from(problem.c());
    let mut abar = DMatrix::zeros(pbar, nbar);
    abar.view_mut((0, 0), (p, n)).copy_from(problem.a());
    let mut bbar = DVector::zeros(pbar);
    bbar.rows_mut(0, p).copy_from(problem.b());
    let mut gbar = DMatrix::zeros(qbar, nbar);
    let mut hbar = DVector::zeros(qbar);

    // row value = sum_i alpha_i (h_i - G_i x) + sum_j beta_j aux_j
    let fill = |row: &EfRow, off: usize, m: &mut DMatrix<f64>, rhs: &mut DVector<f64>, r: usize| {
        for &(i, alpha) in &row.slack {
            rhs[r] += alpha * h[off + i];
            for &(j, gij) in &g_rows[off + i] {
                m[(r, j)] += alpha * gij;
            }
        }
        for &(j, beta) in &row.aux {
            m[(r, j)] -= beta;
        }
    };
    for blk in &blocks {
        let off = blk.nf_rows.start;
        for (t, row) in blk.cone_exprs.iter().enumerate() {
            fill(row, off, &mut gbar, &mut hbar, blk.ef_rows.start + t);
        }
        for (t, row) in blk.eq_exprs.iter().enumerate() {
            fill(row, off, &mut abar, &mut bbar, blk.eq_rows.start + t);
        }
    }

    let ef = ConicProblem::new(cbar, abar, bbar, gbar, hbar, cones)?;
    let mapping = EFMapping {
        nf_var_count: n,
        nf_eq_count: p,
        nf_cone_dim: problem.q(),
        ef_var_count: nbar,
        ef_eq_count: pbar,
        ef_cone_dim: qbar,
        blocks,
    };
    Ok((ef, mapping))
}

/// Translates an EF point to the natural problem. `x` and `y` are
/// restrictions; each block's `z` collects the EF duals of the rows it
/// generated; each block's `s` is fitted by least squares to the EF slacks
/// (for infinity-norm blocks, `w` and the smallest valid `u` are read off
/// the two orthant halves).
pub fn map_back(mapping: &EFMapping, ef_point: &PrimalDualPoint) -> Result<PrimalDualPoint, BridgeError> {
    let dims = [
        ("x", mapping.ef_var_count, ef_point.x.len()),
        ("y", mapping.ef_eq_count, ef_point.y.len()),
        ("z", mapping.ef_cone_dim, ef_point.z.len()),
        ("s", mapping.ef_cone_dim, ef_point.s.len()),
    ];
    for (what, want, got) in dims {
        if want != got {
            return Err(BridgeError::Mismatch(format!("{what} has length {got}, expected {want}")));
        }
    }
    let x = ef_point.x.rows(0, mapping.nf_var_count).into_owned();
    let y = ef_point.y.rows(0, mapping.nf_eq_count).into_owned();
    let mut z = DVector::zeros(mapping.nf_cone_dim);
    let mut s = DVector::zeros(mapping.nf_cone_dim);
    for blk in &mapping.blocks {
        let off = blk.nf_rows.start;
        let dim = blk.nf_rows.len();
        let duals = blk
            .cone_exprs
            .iter()
            .enumerate()
            .map(|(t, r)| (r, ef_point.z[blk.ef_rows.start + t]))
            .chain(blk.eq_exprs.iter().enumerate().map(|(t, r)| (r, ef_point.y[blk.eq_rows.start + t])));
        for (row, dual) in duals {
            for &(i, alpha) in &row.slack {
                z[off + i] += alpha * dual;
            }
        }
        let sk = if blk.tag == RewriteTag::NormInf {
            let d = dim - 1;
            let lo = &ef_point.s.as_slice()[blk.ef_rows.start..blk.ef_rows.start + d];
            let hi = &ef_point.s.as_slice()[blk.ef_rows.start + d..blk.ef_rows.end];
            let mut v = DVector::zeros(dim);
            v[0] = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).fold(f64::NEG_INFINITY, f64::max);
            for i in 0..d {
                v[1 + i] = 0.5 * (hi[i] - lo[i]);
            }
            v
        } else {
            fit_slack(blk, dim, ef_point)
        };
        s.rows_mut(off, dim).copy_from(&sk);
    }
    Ok(PrimalDualPoint { x, y, z, s })
}

fn fit_slack(blk: &BlockMap, dim: usize, ef: &PrimalDualPoint) -> DVector<f64> {
    let rows = blk.cone_exprs.len() + blk.eq_exprs.len();
    let mut m = DMatrix::<f64>::zeros(rows, dim);
    let mut rhs = DVector::<f64>::zeros(rows);
    let targets = blk
        .cone_exprs
        .iter()
        .enumerate()
        .map(|(t, r)| (r, ef.s[blk.ef_rows.start + t]))
        .chain(blk.eq_exprs.iter().map(|r| (r, 0.0)));
    for (t, (row, target)) in targets.enumerate() {
        for &(i, alpha) in &row.slack {
            m[(t, i)] += alpha;
        }
        rhs[t] = target - row.aux.iter().map(|&(j, beta)| beta * ef.x[j]).sum::<f64>();
    }
    let svd = m.svd(true, true);
    let tol = 1e-12 * svd.singular_values.max().max(1.0);
    svd.solve(&rhs, tol).unwrap_or_else(|_| DVector::zeros(dim))
}

#[cfg(test)]
mod tests;
