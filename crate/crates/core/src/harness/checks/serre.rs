//! Serre shift: tree function maps, characters, matrix units, `T_W` and the
//! projections `P_n = W^n (I - WW^*) W^{*n}`.

use crate::adic::{chi_character, level_indicator, serre_h, tree_map_w, Direction, ShiftKind, TreeFunction, Vertex};
use crate::coeff::{toeplitz_w, ConvergentSequence};
use crate::adic::{CylinderFunction, ONE, ZERO};
use crate::error::Result;
use crate::harness::random;
use crate::harness::{Ctx, Tally};
use crate::hilbert::{compare_levels, TruncatedOperator};
use crate::shifts::{make_shift, make_shift_adjoint, projection, MatrixUnitFamily, ProjectionFamily};

use super::bernoulli::matrix_unit_axioms;
use super::{condition, projection_axioms};

const SAMPLES: usize = 20;
/// Dimension caps for checks whose operators fill up with depth.
const HEAVY_DIM: usize = 4096;
const PRODUCT_DIM: usize = 1024;

fn tree_distance(a: &TreeFunction, b: &TreeFunction) -> Result<f64> {
    Ok(a.sub(b)?.sup_norm())
}

pub fn tree_maps(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let s = ctx.s();
    let mut rng = ctx.rng();
    for _ in 0..SAMPLES {
        let f = random::tree_function(&mut rng, s, 2)?;
        let a = tree_map_w(Direction::A, &f);
        let b = tree_map_w(Direction::B, &f);
        // b_W a_W = id
        t.value(tree_distance(&tree_map_w(Direction::B, &a), &f)?);
        t.value(a.eval(0, 0).norm());
        condition(t, a.tail().same_function(f.tail(), 0.0) && b.tail().same_function(f.tail(), 0.0));
        let top = f.explicit_top() + 1;
        for g in [&f, &a, &b] {
            t.value(crate::adic::limit_deviation(g, top + 1));
        }
        // the images stay in the algebra under products
        let g = random::tree_function(&mut rng, s, 1)?;
        let prod = tree_map_w(Direction::A, &f.mul(&g)?);
        t.value(tree_distance(&prod, &a.mul(&tree_map_w(Direction::A, &g))?)?);
    }
    let g0 = level_indicator(s, 0)?;
    t.value(tree_distance(&tree_map_w(Direction::A, &g0), &level_indicator(s, 1)?)?);
    Ok(())
}

/// `W^* M_{chi_(n+1)} W = M_{chi_(n+1) h_n}`, where `h_n` depends only on the
/// level. For `n = 0` this reads `M_{chi_1} (1 - M_{g_0})`.
pub fn induction(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let s = ctx.s();
    ctx.require_depth(1, "W raises the level")?;
    let w = make_shift(space, ShiftKind::W);
    let ws = make_shift_adjoint(space, ShiftKind::W);
    let id = TruncatedOperator::identity(space);
    let chi1 = chi_character(s, 1)?;
    let g0 = TruncatedOperator::diag_tree(space, &level_indicator(s, 0)?)?;
    let m_chi1 = TruncatedOperator::diag_cylinder(space, &chi1)?;
    t.ops(&TruncatedOperator::product(&[&ws, &m_chi1, &w])?, &m_chi1.mul(&id.sub(&g0)?)?)?;
    for n in 0..=4.min(ctx.depth() - 1) {
        let chi = chi_character(s, n + 1)?;
        let lhs = TruncatedOperator::product(&[&ws, &TruncatedOperator::diag_cylinder(space, &chi)?, &w])?;
        let oracle = TreeFunction::from_fn(s, n + 1, chi.clone(), |m, x| chi.eval(x) * serre_h(s, n, m))?;
        t.ops(&lhs, &TruncatedOperator::diag_tree(space, &oracle)?)?;
    }
    Ok(())
}

pub fn matrix_units(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    matrix_unit_axioms(ctx, t, MatrixUnitFamily::Serre)
}

/// `[M_F, W] = M_{F - a_W F} W`, with `F - a_W F` vanishing above level
/// `max(M, depth(f_F)) + 1`.
pub fn commutator(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let s = ctx.s();
    let w = make_shift(space, ShiftKind::W);
    let mut rng = ctx.rng();
    for _ in 0..SAMPLES {
        let f = random::tree_function(&mut rng, s, 2)?;
        let mf = TruncatedOperator::diag_tree(space, &f)?;
        let comm = mf.mul(&w)?.sub(&w.mul(&mf)?)?;
        let d = f.sub(&tree_map_w(Direction::A, &f))?;
        t.ops(&comm, &TruncatedOperator::diag_tree(space, &d)?.mul(&w)?)?;
        let bound = f.explicit_top().max(f.tail().depth()) + 1;
        condition(t, d.support_top(0.0).is_none_or(|top| top <= bound));
    }
    Ok(())
}

/// Prefix length and cylinder depth for the product check: `K + d + 2 <= N`.
fn product_grid(depth: u32) -> (usize, u32) {
    let k = 2.min(depth.saturating_sub(2) / 2);
    let d = 2.min(depth.saturating_sub(2) - k);
    (k as usize, d)
}

/// `T_W(G) T_W(G') - T_W(GG')` is block diagonal and vanishes above level
/// `K + d + 1`.
pub fn twprod(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    ctx.require_depth(2, "the cutoff level K + d + 2 must fit")?;
    let (k, d) = product_grid(ctx.depth());
    let mut rng = ctx.rng();
    for _ in 0..SAMPLES {
        let g = random::sequence(&mut rng, ctx.s(), k, d)?;
        let h = random::sequence(&mut rng, ctx.s(), k, d)?;
        let diff = toeplitz_w(space, &g)?
            .mul(&toeplitz_w(space, &h)?)?
            .sub(&toeplitz_w(space, &g.mul(&h)?)?)?;
        t.ops_all(&diff.expectation(), &diff)?;
        t.value(diff.tail_norm(k as u32 + d + 2, 1e-14)?);
    }
    Ok(())
}

/// `G_n`: one in slot `n`, zero elsewhere and in the tail.
fn unit_sequence(s: u32, n: usize) -> Result<ConvergentSequence> {
    let zero = CylinderFunction::constant(s, ZERO)?;
    let mut prefix = vec![zero.clone(); n + 1];
    prefix[n] = CylinderFunction::one(s)?;
    ConvergentSequence::new(prefix, zero)
}

pub fn toeplitz(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.capped_space(HEAVY_DIM)?;
    let s = ctx.s();
    ctx.require_depth(2, "conjugation needs room above the prefix")?;
    let depth = space.depth();
    for n in 0..4.min(depth) {
        let p = projection(space, ProjectionFamily::Serre(n))?;
        t.ops_all(&toeplitz_w(space, &unit_sequence(s, n as usize)?)?, &p)?;
    }
    let w = make_shift(space, ShiftKind::W);
    let ws = make_shift_adjoint(space, ShiftKind::W);
    let (k, d) = product_grid(depth);
    let mut rng = ctx.rng();
    for _ in 0..SAMPLES {
        let c = random::cylinder(&mut rng, s, 2)?;
        let tc = toeplitz_w(space, &ConvergentSequence::constant(c.clone()))?;
        t.ops_all(&tc, &TruncatedOperator::diag_cylinder(space, &c)?)?;
        let g = random::sequence(&mut rng, s, k, d)?;
        let tg = toeplitz_w(space, &g)?;
        t.ops_all(&toeplitz_w(space, &g.conj())?, &tg.adjoint())?;
        let up = TruncatedOperator::product(&[&w, &tg, &ws])?;
        let right = toeplitz_w(space, &g.shift_right()?)?;
        t.add(compare_levels(&up, &right, k as u32 + d + 2, depth)?);
        let down = TruncatedOperator::product(&[&ws, &tg, &w])?;
        let left = toeplitz_w(space, &g.shift_left())?;
        t.add(compare_levels(&down, &left, d, depth - 1)?);
    }
    let p0 = toeplitz_w(ctx.space, &unit_sequence(s, 0)?)?;
    let root = p0.entry(Vertex::ROOT, Vertex::ROOT)?;
    diagonal_of_p0(ctx, t, &p0)?;
    t.note(format!(
        "erratum: P_0 = I - WW^* fixes E_(0,0) (diagonal entry {:.1}); the displayed formula for P_0 E_(n,x) gives 0 at n = 0",
        root.re
    ));
    Ok(())
}

/// `<E_(n,x), P_0 E_(n,x)> = 1 - 1/s` for every `n >= 1`.
fn diagonal_of_p0(ctx: &Ctx, t: &mut Tally, p0: &TruncatedOperator) -> Result<()> {
    let want = 1.0 - 1.0 / ctx.s() as f64;
    let mut max: f64 = 0.0;
    for v in ctx.space.vertices().filter(|v| v.level >= 1) {
        max = max.max((p0.entry(v, v)? - want).norm());
    }
    t.value(max);
    Ok(())
}

pub fn projections(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.capped_space(PRODUCT_DIM)?;
    let w = make_shift(space, ShiftKind::W);
    let ws = make_shift_adjoint(space, ShiftKind::W);
    let zero = TruncatedOperator::zero(space);
    let ps = (0..=space.depth())
        .map(|n| projection(space, ProjectionFamily::Serre(n)))
        .collect::<Result<Vec<_>>>()?;
    for (n, p) in ps.iter().enumerate() {
        projection_axioms(t, p)?;
        for (m, q) in ps.iter().enumerate() {
            if m != n {
                t.ops(&p.mul(q)?, &zero)?;
            }
        }
        if n + 1 < ps.len() {
            t.ops(&w.mul(p)?, &ps[n + 1].mul(&w)?)?;
            t.ops(&TruncatedOperator::product(&[&ws, &ps[n + 1], &w])?, p)?;
        }
    }
    t.ops(&TruncatedOperator::product(&[&ws, &ps[0], &w])?, &zero)?;
    let p0 = projection(ctx.space, ProjectionFamily::Serre(0))?;
    diagonal_of_p0(ctx, t, &p0)?;
    t.value((p0.entry(Vertex::ROOT, Vertex::ROOT)? - ONE).norm());
    Ok(())
}
