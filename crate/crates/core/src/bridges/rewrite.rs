//! Local rewrites of one exotic cone constraint into standard cones. Each
//! rewrite works on affine expressions of the block's slack entries and of
//! auxiliary variables, so composite rewrites can feed their outputs into
//! further rewrites.

use std::f64::consts::SQRT_2;

use crate::cones::{ConeKind, InterpMatrices};
use crate::model::{sdim, svec_index};

use super::{EFOptions, GeomeanMode, L1Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Var {
    /// Entry of the block's slack vector.
    In(usize),
    /// Local auxiliary variable.
    Aux(usize),
}

/// Linear expression; repeated variables add up.
pub(crate) type Expr = Vec<(Var, f64)>;

fn var(v: Var) -> Expr {
    vec![(v, 1.0)]
}

/// `sum_k coef_k * expr_k`
fn comb(parts: &[(&Expr, f64)]) -> Expr {
    let mut out = Expr::new();
    for (e, f) in parts {
        out.extend(e.iter().map(|(v, c)| (*v, c * f)));
    }
    out
}

fn scaled(e: &Expr, f: f64) -> Expr {
    comb(&[(e, f)])
}

#[derive(Default)]
pub(crate) struct Builder {
    pub n_aux: usize,
    pub cones: Vec<(ConeKind, Vec<Expr>)>,
    pub eqs: Vec<Expr>,
}

impl Builder {
    fn aux(&mut self, count: usize) -> Vec<Expr> {
        let start = self.n_aux;
        self.n_aux += count;
        (start..start + count).map(|j| var(Var::Aux(j))).collect()
    }

    fn cone(&mut self, kind: ConeKind, rows: Vec<Expr>) {
        self.cones.push((kind, rows));
    }
}

/// Rewrites one block given its kind and input rows.
pub(crate) fn rewrite(b: &mut Builder, kind: &ConeKind, inp: &[Expr], opts: &EFOptions) {
    match kind {
        ConeKind::EpiNormInf { d } => norm_inf(b, inp, *d),
        ConeKind::EpiNormInfDual { d } => match opts.l1_mode {
            L1Mode::Split => l1_split(b, inp, *d),
            L1Mode::Epigraph => l1_epigraph(b, inp, *d),
        },
        ConeKind::EpiNormSpectral { r, s } => spectral(b, inp, *r, *s),
        ConeKind::EpiNormSpectralDual { r, s } => spectral_dual(b, inp, *r, *s),
        ConeKind::HypoGeomean { .. } => geomean(b, inp, opts.geomean_mode),
        ConeKind::HypoRootDet { side } => rootdet(b, inp, *side, opts.geomean_mode),
        ConeKind::HypoPerLog { d } if *d >= 2 => log(b, inp),
        ConeKind::HypoPerLogDet { side } => logdet(b, inp, *side),
        ConeKind::WsosDual { p } => wsos_dual(b, inp, p),
        ConeKind::Wsos { p } => wsos(b, inp, p),
        standard => b.cone(standard.clone(), inp.to_vec()),
    }
}

/// `(u e - w, u e + w) >= 0`
fn norm_inf(b: &mut Builder, inp: &[Expr], d: usize) {
    let u = &inp[0];
    let mut rows: Vec<Expr> = (0..d).map(|i| comb(&[(u, 1.0), (&inp[1 + i], -1.0)])).collect();
    rows.extend((0..d).map(|i| comb(&[(u, 1.0), (&inp[1 + i], 1.0)])));
    b.cone(ConeKind::Nonneg { d: 2 * d }, rows);
}

/// `w = theta - lambda`, `u - e'(theta + lambda) >= 0`, `theta, lambda >= 0`
fn l1_split(b: &mut Builder, inp: &[Expr], d: usize) {
    let theta = b.aux(d);
    let lambda = b.aux(d);
    let mut first = inp[0].clone();
    for i in 0..d {
        first = comb(&[(&first, 1.0), (&theta[i], -1.0), (&lambda[i], -1.0)]);
    }
    let mut rows = vec![first];
    rows.extend(theta.iter().cloned());
    rows.extend(lambda.iter().cloned());
    b.cone(ConeKind::Nonneg { d: 1 + 2 * d }, rows);
    for i in 0..d {
        b.eqs.push(comb(&[(&inp[1 + i], 1.0), (&theta[i], -1.0), (&lambda[i], 1.0)]));
    }
}

/// `u - e't >= 0`, `t - w >= 0`, `t + w >= 0`
fn l1_epigraph(b: &mut Builder, inp: &[Expr], d: usize) {
    let t = b.aux(d);
    let mut first = inp[0].clone();
    for ti in &t {
        first = comb(&[(&first, 1.0), (ti, -1.0)]);
    }
    let mut rows = vec![first];
    rows.extend((0..d).map(|i| comb(&[(&t[i], 1.0), (&inp[1 + i], -1.0)])));
    rows.extend((0..d).map(|i| comb(&[(&t[i], 1.0), (&inp[1 + i], 1.0)])));
    b.cone(ConeKind::Nonneg { d: 1 + 2 * d }, rows);
}

/// svec rows of the `(r + s)`-sided matrix `[[TL, W], [W', BR]]`, where `W`
/// entries come from the input and the diagonal blocks from `tl`/`br`.
fn bordered_psd(
    r: usize,
    s: usize,
    w: impl Fn(usize, usize) -> Expr,
    tl: impl Fn(usize, usize) -> Expr,
    br: impl Fn(usize, usize) -> Expr,
) -> Vec<Expr> {
    let n = r + s;
    let mut rows = Vec::with_capacity(sdim(n));
    for j in 0..n {
        for i in 0..=j {
            let scale = if i == j { 1.0 } else { SQRT_2 };
            let e = if j < r {
                tl(i, j)
            } else if i >= r {
                br(i - r, j - r)
            } else {
                w(i, j - r)
            };
            rows.push(scaled(&e, scale));
        }
    }
    rows
}

/// `[[u I, W], [W', u I]]` PSD
fn spectral(b: &mut Builder, inp: &[Expr], r: usize, s: usize) {
    let u = &inp[0];
    let diag = |i: usize, j: usize| if i == j { u.clone() } else { Expr::new() };
    let rows = bordered_psd(r, s, |i, c| inp[1 + i + r * c].clone(), diag, diag);
    b.cone(ConeKind::PosSemidef { side: r + s }, rows);
}

/// `u - (tr Theta + tr Lambda) / 2 >= 0`, `[[Theta, W], [W', Lambda]]` PSD
fn spectral_dual(b: &mut Builder, inp: &[Expr], r: usize, s: usize) {
    let theta = b.aux(sdim(r));
    let lambda = b.aux(sdim(s));
    let mut first = inp[0].clone();
    for i in 0..r {
        first = comb(&[(&first, 1.0), (&theta[svec_index(i, i)], -0.5)]);
    }
    for i in 0..s {
        first = comb(&[(&first, 1.0), (&lambda[svec_index(i, i)], -0.5)]);
    }
    b.cone(ConeKind::Nonneg { d: 1 }, vec![first]);
    let unscale = |i: usize, j: usize| if i == j { 1.0 } else { 1.0 / SQRT_2 };
    let rows = bordered_psd(
        r,
        s,
        |i, c| inp[1 + i + r * c].clone(),
        |i, j| scaled(&theta[svec_index(i, j)], unscale(i, j)),
        |i, j| scaled(&lambda[svec_index(i, j)], unscale(i, j)),
    );
    b.cone(ConeKind::PosSemidef { side: r + s }, rows);
}

fn geomean(b: &mut Builder, inp: &[Expr], mode: GeomeanMode) {
    match mode {
        GeomeanMode::Exp => geomean_exp(b, inp),
        GeomeanMode::Sec => geomean_sec(b, inp),
    }
}

/// `theta >= 0`, `e'lambda >= 0`, `(lambda_i, u + theta, w_i)` exponential
fn geomean_exp(b: &mut Builder, inp: &[Expr]) {
    let d = inp.len() - 1;
    let theta = b.aux(1).pop().expect("one variable");
    let lambda = b.aux(d);
    let sum = lambda.iter().fold(Expr::new(), |acc, l| comb(&[(&acc, 1.0), (l, 1.0)]));
    b.cone(ConeKind::Nonneg { d: 2 }, vec![theta.clone(), sum]);
    let ut = comb(&[(&inp[0], 1.0), (&theta, 1.0)]);
    for i in 0..d {
        b.cone(ConeKind::HypoPerLog { d: 1 }, vec![lambda[i].clone(), ut.clone(), inp[1 + i].clone()]);
    }
}

/// Binary tower of rotated second-order cones `x_i^2 <= x_{2i} x_{2i+1}`
/// with the `w` entries at the leaves (unused leaves hold the root), and
/// `x_1 - u >= 0`.
fn geomean_sec(b: &mut Builder, inp: &[Expr]) {
    let d = inp.len() - 1;
    if d == 1 {
        b.cone(ConeKind::Nonneg { d: 2 }, vec![comb(&[(&inp[1], 1.0), (&inp[0], -1.0)]), inp[1].clone()]);
        return;
    }
    let leaves = d.next_power_of_two();
    let nodes = b.aux(leaves - 1);
    // heap numbering from 1: node i has children 2i and 2i + 1
    let node = |i: usize| -> Expr {
        if i < leaves {
            nodes[i - 1].clone()
        } else if i - leaves < d {
            inp[1 + i - leaves].clone()
        } else {
            nodes[0].clone()
        }
    };
    for i in 1..leaves {
        b.cone(ConeKind::EpiPerSquare { d: 1 }, vec![node(2 * i), node(2 * i + 1), scaled(&node(i), SQRT_2)]);
    }
    b.cone(ConeKind::Nonneg { d: 1 }, vec![comb(&[(&nodes[0], 1.0), (&inp[0], -1.0)])]);
}

/// Lower-triangular `Delta` with `[[W, Delta], [Delta', Diag(diag Delta)]]`
/// PSD; returns the expressions of `diag Delta`.
fn triangular_lift(b: &mut Builder, w: &[Expr], side: usize) -> Vec<Expr> {
    let delta = b.aux(sdim(side));
    // lower entry (i, j), i >= j, stored at svec_index(j, i)
    let lower = |i: usize, j: usize| if i >= j { delta[svec_index(j, i)].clone() } else { Expr::new() };
    let unscale = |i: usize, j: usize| if i == j { 1.0 } else { 1.0 / SQRT_2 };
    let rows = bordered_psd(
        side,
        side,
        lower,
        |i, j| scaled(&w[svec_index(i, j)], unscale(i, j)),
        |i, j| if i == j { delta[svec_index(i, i)].clone() } else { Expr::new() },
    );
    b.cone(ConeKind::PosSemidef { side: 2 * side }, rows);
    (0..side).map(|i| delta[svec_index(i, i)].clone()).collect()
}

fn rootdet(b: &mut Builder, inp: &[Expr], side: usize, mode: GeomeanMode) {
    let diag = triangular_lift(b, &inp[1..], side);
    let mut g = vec![inp[0].clone()];
    g.extend(diag);
    geomean(b, &g, mode);
}

/// `e'theta - u >= 0`, `(theta_i, v, w_i)` exponential
fn log(b: &mut Builder, inp: &[Expr]) {
    let d = inp.len() - 2;
    let theta = b.aux(d);
    let sum = theta.iter().fold(scaled(&inp[0], -1.0), |acc, t| comb(&[(&acc, 1.0), (t, 1.0)]));
    b.cone(ConeKind::Nonneg { d: 1 }, vec![sum]);
    for i in 0..d {
        b.cone(ConeKind::HypoPerLog { d: 1 }, vec![theta[i].clone(), inp[1].clone(), inp[2 + i].clone()]);
    }
}

fn logdet(b: &mut Builder, inp: &[Expr], side: usize) {
    let diag = triangular_lift(b, &inp[2..], side);
    let mut l = vec![inp[0].clone(), inp[1].clone()];
    l.extend(diag);
    if side >= 2 {
        log(b, &l);
    } else {
        b.cone(ConeKind::HypoPerLog { d: 1 }, l);
    }
}

/// `P_l' Diag(w) P_l` PSD, as linear rows in `w`.
fn wsos_dual(b: &mut Builder, inp: &[Expr], p: &InterpMatrices) {
    for pl in &p.0 {
        let s = pl.ncols();
        let mut rows = Vec::with_capacity(sdim(s));
        for j in 0..s {
            for i in 0..=j {
                let scale = if i == j { 1.0 } else { SQRT_2 };
                let mut e = Expr::new();
                for u in 0..pl.nrows() {
                    let c = scale * pl[(u, i)] * pl[(u, j)];
                    if c != 0.0 {
                        e.extend(inp[u].iter().map(|(v, x)| (*v, x * c)));
                    }
                }
                rows.push(e);
            }
        }
        b.cone(ConeKind::PosSemidef { side: s }, rows);
    }
}

/// `Theta_l` PSD and `w_u = sum_l (P_l Theta_l P_l')_{uu}`
fn wsos(b: &mut Builder, inp: &[Expr], p: &InterpMatrices) {
    let mut eqs: Vec<Expr> = inp.to_vec();
    for pl in &p.0 {
        let s = pl.ncols();
        let theta = b.aux(sdim(s));
        b.cone(ConeKind::PosSemidef { side: s }, theta.clone());
        for (u, eq) in eqs.iter_mut().enumerate() {
            for j in 0..s {
                for i in 0..=j {
                    let c = if i == j { pl[(u, i)] * pl[(u, i)] } else { SQRT_2 * pl[(u, i)] * pl[(u, j)] };
                    if c != 0.0 {
                        eq.extend(theta[svec_index(i, j)].iter().map(|(v, x)| (*v, -x * c)));
                    }
                }
            }
        }
    }
    b.eqs.extend(eqs);
}
