//! Hensel projections, Toeplitz map and tilde maps.

use crate::adic::{endo_map, CylinderFunction, Direction, ShiftKind, Vertex};
use crate::coeff::{seq_endo_v, toeplitz_v, Tilde, XVFunction};
use crate::error::Result;
use crate::harness::random;
use crate::harness::{Ctx, Tally};
use crate::hilbert::TruncatedOperator;
use crate::shifts::{make_shift, make_shift_adjoint, projection, ProjectionFamily};

use super::bd::{norm_grid, TOEPLITZ_SAMPLES};
use super::{projection_axioms, rank_one};

pub fn projections(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let s = ctx.s();
    let v = make_shift(space, ShiftKind::V);
    let vs = make_shift_adjoint(space, ShiftKind::V);
    let zero = TruncatedOperator::zero(space);
    let root = Vertex::ROOT;
    let p00 = projection(space, ProjectionFamily::P00)?;
    // M_{a_V(1)} - VV^* is the rank-one projection onto E_(0,0)
    let av1 = endo_map(ShiftKind::V, Direction::A, &CylinderFunction::one(s)?)?;
    let direct = TruncatedOperator::diag_cylinder(space, &av1)?.sub(&v.mul(&vs)?)?;
    t.ops_all(&direct, &rank_one(space, root, root)?)?;
    t.ops_all(&p00, &rank_one(space, root, root)?)?;
    let ps = (0..=ctx.depth())
        .map(|n| projection(space, ProjectionFamily::Hensel(n)))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ctx.rng();
    for (n, p) in ps.iter().enumerate() {
        let e = Vertex {
            level: n as u32,
            index: 0,
        };
        t.ops_all(p, &rank_one(space, e, e)?)?;
        projection_axioms(t, p)?;
        for (m, q) in ps.iter().enumerate() {
            if m != n {
                t.ops(&p.mul(q)?, &zero)?;
            }
        }
        let f = random::cylinder(&mut rng, s, 3)?;
        let mf = TruncatedOperator::diag_cylinder(space, &f)?;
        t.ops(&mf.mul(p)?, &p.scale(f.eval(0)))?;
        let down = TruncatedOperator::product(&[&vs, p, &v])?;
        t.ops(&down, if n == 0 { &zero } else { &ps[n - 1] })?;
        if n < ps.len() - 1 {
            t.ops(&TruncatedOperator::product(&[&v, p, &vs])?, &ps[n + 1])?;
        }
    }
    Ok(())
}

fn conj(f: &XVFunction) -> XVFunction {
    XVFunction::new(f.function().conj(), f.prefix().iter().map(|x| x.conj()).collect())
}

pub fn toeplitz(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let (k, d) = norm_grid(ctx.depth());
    let mut rng = ctx.rng();
    for _ in 0..TOEPLITZ_SAMPLES {
        let f = random::xv_function(&mut rng, ctx.s(), k, d)?;
        let g = random::xv_function(&mut rng, ctx.s(), k, d)?;
        let tf = toeplitz_v(space, &f)?;
        let tg = toeplitz_v(space, &g)?;
        t.value(tf.spectral_norm(1e-13)? - f.sup_norm());
        t.ops_all(&toeplitz_v(space, &f.mul(&g)?)?, &tf.mul(&tg)?)?;
        t.ops_all(&toeplitz_v(space, &conj(&f))?, &tf.adjoint())?;
    }
    Ok(())
}

pub fn tilde(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let k = 3.min(ctx.depth() as usize - 1);
    let v = make_shift(space, ShiftKind::V);
    let vs = make_shift_adjoint(space, ShiftKind::V);
    let mut rng = ctx.rng();
    for _ in 0..TOEPLITZ_SAMPLES {
        let f = random::xv_function(&mut rng, ctx.s(), k, 2)?;
        let tf = toeplitz_v(space, &f)?;
        let ta = toeplitz_v(space, &seq_endo_v(Tilde::Alpha, &f)?)?;
        let tb = toeplitz_v(space, &seq_endo_v(Tilde::Beta, &f)?)?;
        t.ops(&TruncatedOperator::product(&[&v, &tf, &vs])?, &ta)?;
        t.ops(&TruncatedOperator::product(&[&vs, &tf, &v])?, &tb)?;
    }
    Ok(())
}
