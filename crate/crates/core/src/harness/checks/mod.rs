pub mod bd;
pub mod bernoulli;
pub mod expectation;
pub mod hensel;
pub mod serre;
pub mod shift;

use num_complex::Complex64;

use crate::adic::Vertex;
use crate::error::Result;
use crate::hilbert::{Residual, TruncatedOperator, TruncatedSpace};

use super::Tally;

/// Highest level used for exhaustive index grids (matrix units, the
/// correction sweep) at base `s`.
pub fn grid_level(s: u32) -> u32 {
    match s {
        2 => 3,
        3 => 2,
        _ => 1,
    }
}

pub fn vertices_up_to(space: TruncatedSpace, top: u32) -> Vec<Vertex> {
    space.vertices().take_while(|v| v.level <= top).collect()
}

/// `E_a E_b^*`.
pub fn rank_one(space: TruncatedSpace, a: Vertex, b: Vertex) -> Result<TruncatedOperator> {
    TruncatedOperator::from_entries(space, [(a, b, Complex64::new(1.0, 0.0))])
}

/// Entrywise deviation, counted over all `dim` columns.
pub fn entrywise(t: &mut Tally, a: &TruncatedOperator, b: &TruncatedOperator) -> Result<()> {
    let max = a.max_abs_diff(b)?;
    t.add(Residual {
        max,
        count: a.space().dim(),
    });
    Ok(())
}

/// Checks `p^* = p` and `p^2 = p` on the validity set.
pub fn projection_axioms(t: &mut Tally, p: &TruncatedOperator) -> Result<()> {
    t.ops(&p.adjoint(), p)?;
    t.ops(&p.mul(p)?, p)?;
    Ok(())
}

/// A violated boolean condition counts as a unit residual.
pub fn condition(t: &mut Tally, holds: bool) {
    t.value(if holds { 0.0 } else { 1.0 });
}
