//! Gauge expectation, its contraction property and Fourier coefficients.

use crate::adic::ShiftKind;
use crate::coeff::{fourier_coefficient, fourier_sum, toeplitz_u, toeplitz_v};
use crate::error::Result;
use crate::harness::random;
use crate::harness::{Ctx, Tally};
use crate::hilbert::TruncatedOperator;
use crate::shifts::{shift_power, adjoint_power};

use super::entrywise;

const QUADRATURE_SAMPLES: usize = 50;
const CONTRACTION_SAMPLES: usize = 10;
const NORM_TOL: f64 = 1e-13;

pub fn quadrature(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let nodes = 2 * ctx.depth() + 1;
    let id = TruncatedOperator::identity(space);
    entrywise(t, &id.expectation(), &id)?;
    let mut rng = ctx.rng();
    for _ in 0..QUADRATURE_SAMPLES {
        let a = random::sparse_operator(&mut rng, space, 3 * space.dim())?;
        let e = a.expectation();
        entrywise(t, &a.quadrature_expectation(nodes), &e)?;
        entrywise(t, &e.expectation(), &e)?;
        let d = ctx.depth() as i32;
        let mut sum = TruncatedOperator::zero(space);
        for k in -d..=d {
            sum = sum.add(&a.degree_component(k))?;
        }
        entrywise(t, &sum, &a)?;
    }
    Ok(())
}

/// `||E(a)|| <= ||a||`; deviations count only when the inequality fails.
fn contracts(t: &mut Tally, a: &TruncatedOperator) -> Result<()> {
    let lhs = a.expectation().spectral_norm(NORM_TOL)?;
    let rhs = a.spectral_norm(NORM_TOL)?;
    t.value((lhs - rhs).max(0.0));
    Ok(())
}

pub fn contraction(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.capped_space(1024)?;
    let s = ctx.s();
    let depth = space.depth();
    let mut rng = ctx.rng();
    for _ in 0..CONTRACTION_SAMPLES {
        let a = random::sparse_operator(&mut rng, space, 2 * space.dim())?;
        contracts(t, &a)?;
        let theta = rand::Rng::gen_range(&mut rng, 0.0..1.0);
        t.value(a.gauge_rotate(theta).spectral_norm(NORM_TOL)? - a.spectral_norm(NORM_TOL)?);
        // E(a^* a) is positive: every level block is positive semidefinite
        let e = a.adjoint().mul(&a)?.expectation();
        for n in 0..=depth {
            let block = e.block(n)?;
            let min = block.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
            t.value(min.min(0.0));
        }
    }
    let k = 2.min(depth as usize / 2);
    for d in 0..=2.min(depth) {
        let f = random::sequence(&mut rng, s, k, 1)?;
        contracts(t, &toeplitz_u(space, &f)?.mul(&shift_power(space, ShiftKind::U, d)?)?)?;
        let x = random::xv_function(&mut rng, s, k, 1)?;
        contracts(t, &toeplitz_v(space, &x)?.mul(&adjoint_power(space, ShiftKind::V, d)?)?)?;
    }
    Ok(())
}

/// The coefficients `a_d` are gauge invariant, `a_d J^d` (or `J^{*|d|} a_d`)
/// is the degree-`d` part of `a`, and the terms sum back to `a`.
pub fn fourier(ctx: &Ctx, t: &mut Tally) -> Result<()> {
    let space = ctx.space;
    let top = 3.min(ctx.depth()) as i32;
    let mut rng = ctx.rng();
    for kind in ShiftKind::ALL {
        for _ in 0..5 {
            let a = random::word_sum(&mut rng, space, kind, 3)?;
            let coefficients = (-top..=top)
                .map(|d| fourier_coefficient(&a, d, kind).map(|c| (d, c)))
                .collect::<Result<Vec<_>>>()?;
            for (d, c) in &coefficients {
                t.ops_all(&c.gauge_rotate(0.37), c)?;
                let term = fourier_sum(space, kind, std::slice::from_ref(&(*d, c.clone())))?;
                t.ops(&term, &a.degree_component(*d))?;
            }
            t.ops(&fourier_sum(space, kind, &coefficients)?, &a)?;
        }
    }
    Ok(())
}
