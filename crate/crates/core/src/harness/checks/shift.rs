//! Checks shared by all four shifts.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::adic::{endo_map, tree_map_w, CylinderFunction, Direction, ShiftKind, TreeFunction};
use crate::error::Result;
use crate::harness::random;
use crate::harness::{Ctx, Tally};
use crate::hilbert::{validity_top, TruncatedOperator};
use crate::shifts::{make_shift, make_shift_adjoint, projection, ProjectionFamily};

use super::{condition, entrywise};

pub const LEMMA_SAMPLES: usize = 50;
pub const TRANSFER_SAMPLES: usize = 100;

pub fn isometry(ctx: &Ctx, t: &mut Tally, kind: ShiftKind) -> Result<()> {
    let j = make_shift(ctx.space, kind);
    let lhs = make_shift_adjoint(ctx.space, kind).mul(&j)?;
    t.ops(&lhs, &TruncatedOperator::identity(ctx.space))?;
    Ok(())
}

pub fn adjoint(ctx: &Ctx, t: &mut Tally, kind: ShiftKind) -> Result<()> {
    let transposed = make_shift(ctx.space, kind).adjoint();
    entrywise(t, &transposed, &make_shift_adjoint(ctx.space, kind))
}

pub fn gauge(ctx: &Ctx, t: &mut Tally, kind: ShiftKind) -> Result<()> {
    let space = ctx.space;
    let j = make_shift(space, kind);
    let js = make_shift_adjoint(space, kind);
    let mut rng = ctx.rng();
    for theta in [0.1, 0.25, 0.5, 1.0 / 3.0, 0.7] {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * theta);
        t.ops_all(&j.gauge_rotate(theta), &j.scale(phase))?;
        t.ops_all(&js.gauge_rotate(theta), &js.scale(phase.conj()))?;
        let f = random::cylinder(&mut rng, ctx.s(), 3)?;
        let m = TruncatedOperator::diag_cylinder(space, &f)?;
        t.ops_all(&m.gauge_rotate(theta), &m)?;
    }
    let zero = TruncatedOperator::zero(space);
    for d in -(ctx.depth() as i32)..=ctx.depth() as i32 {
        let want = if d == 1 { &j } else { &zero };
        t.ops_all(&j.degree_component(d), want)?;
    }
    t.ops_all(&j.expectation(), &zero)?;
    Ok(())
}

/// `beta(alpha(a)) = a`, `beta(alpha(a) b) = a beta(b)`,
/// `alpha(beta(a)) = alpha(I) a alpha(I)` and `beta(I) = I` for random words.
pub fn transfer(ctx: &Ctx, t: &mut Tally, kind: ShiftKind) -> Result<()> {
    let space = ctx.space;
    let j = make_shift(space, kind);
    let js = make_shift_adjoint(space, kind);
    let alpha = |x: &TruncatedOperator| TruncatedOperator::product(&[&j, x, &js]);
    let beta = |x: &TruncatedOperator| TruncatedOperator::product(&[&js, x, &j]);
    let id = TruncatedOperator::identity(space);
    t.ops(&beta(&id)?, &id)?;
    let alpha_i = alpha(&id)?;
    let mut rng = ctx.rng();
    for _ in 0..TRANSFER_SAMPLES {
        let mut attempts = 0;
        let pairs = loop {
            attempts += 1;
            if attempts > 200 {
                return Err(ctx.infeasible("no word sample with a nonempty validity set"));
            }
            let a = random::word_sum(&mut rng, space, kind, 4)?;
            let b = random::word_sum(&mut rng, space, kind, 4)?;
            let pairs = vec![
                (beta(&alpha(&a)?)?, a.clone()),
                (beta(&alpha(&a)?.mul(&b)?)?, a.mul(&beta(&b)?)?),
                (alpha(&beta(&a)?)?, TruncatedOperator::product(&[&alpha_i, &a, &alpha_i])?),
            ];
            if pairs.iter().all(|(l, r)| validity_top(l, r).is_some()) {
                break pairs;
            }
        };
        for (l, r) in &pairs {
            t.ops(l, r)?;
        }
    }
    Ok(())
}

pub fn lemma(ctx: &Ctx, t: &mut Tally, kind: ShiftKind) -> Result<()> {
    let space = ctx.space;
    let s = ctx.s();
    let j = make_shift(space, kind);
    let js = make_shift_adjoint(space, kind);
    let jjs = j.mul(&js)?;
    let mut rng = ctx.rng();
    let diag = |f: &CylinderFunction| TruncatedOperator::diag_cylinder(space, f);
    for _ in 0..LEMMA_SAMPLES {
        let f = random::cylinder(&mut rng, s, 3)?;
        let mf = diag(&f)?;
        match kind {
            ShiftKind::W => {
                let top = f.depth().min(2);
                let big_f = random::tree_function(&mut rng, s, top)?;
                let m_big = TruncatedOperator::diag_tree(space, &big_f)?;
                let a_big = TruncatedOperator::diag_tree(space, &tree_map_w(Direction::A, &big_f))?;
                let b_big = TruncatedOperator::diag_tree(space, &tree_map_w(Direction::B, &big_f))?;
                t.ops(&TruncatedOperator::product(&[&js, &m_big, &j])?, &b_big)?;
                t.ops(&j.mul(&m_big)?, &a_big.mul(&j)?)?;
                let af = tree_map_w(Direction::A, &TreeFunction::from_cylinder(&f));
                let maf = TruncatedOperator::diag_tree(space, &af)?;
                t.ops(&TruncatedOperator::product(&[&j, &mf, &js])?, &maf.mul(&jjs)?)?;
            }
            _ => {
                let maf = diag(&endo_map(kind, Direction::A, &f)?)?;
                let mbf = diag(&endo_map(kind, Direction::B, &f)?)?;
                t.ops(&TruncatedOperator::product(&[&js, &mf, &j])?, &mbf)?;
                t.ops(&j.mul(&mf)?, &maf.mul(&j)?)?;
                match kind {
                    ShiftKind::U => {
                        t.ops(&mf.mul(&j)?, &j.mul(&mbf)?)?;
                        t.ops(&TruncatedOperator::product(&[&j, &mf, &js])?, &maf.mul(&jjs)?)?;
                    }
                    ShiftKind::V => {
                        let p00 = projection(space, ProjectionFamily::P00)?;
                        let comp = TruncatedOperator::identity(space).sub(&p00)?;
                        t.ops(&mf.mul(&j)?, &j.mul(&mbf)?)?;
                        t.ops(&TruncatedOperator::product(&[&j, &mf, &js])?, &maf.mul(&comp)?)?;
                    }
                    _ => {
                        let b_then_a = endo_map(kind, Direction::B, &endo_map(kind, Direction::A, &f)?)?;
                        condition(t, b_then_a.same_function(&f, 1e-15));
                    }
                }
            }
        }
    }
    Ok(())
}
