//! Bunce-Deddens projections, Toeplitz map and tilde maps.

use crate::adic::{pow, ShiftKind, Vertex};
use crate::coeff::{seq_endo_u, toeplitz_u, Tilde};
use crate::error::Result;
use crate::harness::random;
use crate::harness::{Ctx, Tally};
use crate::hilbert::{compare_on_validity, TruncatedOperator, TruncatedSpace};
use crate::shifts::{make_shift, make_shift_adjoint, projection, ProjectionFamily};

use super::projection_axioms;

pub const TOEPLITZ_SAMPLES: usize = 20;

/// `E_(m,x)` lies in the range of `P_0` iff it is not in the range of `U`:
/// `m = 0`, `x = 0` or `x > s^(m-1)`.
fn in_range_p0(s: u32, v: Vertex) -> bool {
    v.level == 0 || v.index == 0 || v.index > pow(s, v.level - 1)
}

/// `P_n` from the span description: `U^n` carries `E_(m,x)` to `E_(m+n, x+n)`.
fn p_n_oracle(space: TruncatedSpace, n: u32) -> Result<TruncatedOperator> {
    let s = space.base();
    let one = num_complex::Complex64::new(1.0, 0.0);
    let entries = space
        .vertices()
        .filter(|v| v.level + n <= space.depth() && in_range_p0(s, *v))
        .map(|v| {
            let w = Vertex {
                level: v.level + n,
                index: v.index + n as u64,
            };
            (w, w, one)
        })
        .collect::<Vec<_>>();
    TruncatedOperator::from_entries(space, entries)
}

pub fn projections(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let n_max = ctx.depth();
    let ps = (0..=n_max)
        .map(|n| projection(space, ProjectionFamily::BunceDeddens(n)))
        .collect::<Result<Vec<_>>>()?;
    let u = make_shift(space, ShiftKind::U);
    let us = make_shift_adjoint(space, ShiftKind::U);
    let zero = TruncatedOperator::zero(space);
    let mut rng = ctx.rng();
    let fs = (0..5)
        .map(|_| random::cylinder(&mut rng, ctx.s(), 3).and_then(|f| TruncatedOperator::diag_cylinder(space, &f)))
        .collect::<Result<Vec<_>>>()?;
    for (n, p) in ps.iter().enumerate() {
        projection_axioms(t, p)?;
        t.ops_all(p, &p_n_oracle(space, n as u32)?)?;
        for (m, q) in ps.iter().enumerate() {
            if m != n {
                t.ops(&p.mul(q)?, &zero)?;
            }
        }
        for mf in &fs {
            t.ops(&mf.mul(p)?, &p.mul(mf)?)?;
        }
        let down = TruncatedOperator::product(&[&us, p, &u])?;
        t.ops(&down, if n == 0 { &zero } else { &ps[n - 1] })?;
        if n < ps.len() - 1 {
            t.ops(&TruncatedOperator::product(&[&u, p, &us])?, &ps[n + 1])?;
        }
    }
    Ok(())
}

/// Prefix length and cylinder depth with `K + k + 1 <= N`, capped at 3 and 2.
pub fn norm_grid(depth: u32) -> (usize, u32) {
    let k_slots = 3.min(depth / 2);
    let cyl = 2.min(depth - k_slots - 1);
    (k_slots as usize, cyl)
}

pub fn toeplitz(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let (k, d) = norm_grid(ctx.depth());
    let mut rng = ctx.rng();
    for _ in 0..TOEPLITZ_SAMPLES {
        let f = random::sequence(&mut rng, ctx.s(), k, d)?;
        let g = random::sequence(&mut rng, ctx.s(), k, d)?;
        let tf = toeplitz_u(space, &f)?;
        let tg = toeplitz_u(space, &g)?;
        t.value(tf.spectral_norm(1e-13)? - f.sup_norm());
        t.ops_all(&toeplitz_u(space, &f.mul(&g)?)?, &tf.mul(&tg)?)?;
        t.ops_all(&toeplitz_u(space, &f.conj())?, &tf.adjoint())?;
    }
    Ok(())
}

pub fn tilde(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    ctx.require_depth(2, "alpha~ adds a prefix slot")?;
    let k = 3.min(ctx.depth() as usize - 1);
    let u = make_shift(space, ShiftKind::U);
    let us = make_shift_adjoint(space, ShiftKind::U);
    let mut rng = ctx.rng();
    let mut swapped: f64 = 0.0;
    for _ in 0..TOEPLITZ_SAMPLES {
        let f = random::sequence(&mut rng, ctx.s(), k, 2)?;
        let tf = toeplitz_u(space, &f)?;
        let conj_up = TruncatedOperator::product(&[&u, &tf, &us])?;
        let conj_down = TruncatedOperator::product(&[&us, &tf, &u])?;
        let ta = toeplitz_u(space, &seq_endo_u(Tilde::Alpha, &f)?)?;
        let tb = toeplitz_u(space, &seq_endo_u(Tilde::Beta, &f)?)?;
        t.ops(&conj_up, &ta)?;
        t.ops(&conj_down, &tb)?;
        swapped = swapped.max(compare_on_validity(&conj_down, &ta)?.max);
    }
    t.note(format!(
        "erratum: U T_U(F) U^* = T_U(alpha~_U F) and U^* T_U(F) U = T_U(beta~_U F); \
         labelling U^*(.)U as alpha_U swaps the pair (swapped pairing deviates by {swapped:.3e})"
    ));
    Ok(())
}
