//! Seeded random inputs for the checks.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adic::{pow, CylinderFunction, ShiftKind, TreeFunction, Vertex};
use crate::coeff::{ConvergentSequence, XVFunction};
use crate::error::Result;
use crate::hilbert::{TruncatedOperator, TruncatedSpace};
use crate::shifts::{make_shift, make_shift_adjoint};

pub type CheckRng = ChaCha8Rng;

/// Generator for one check: the run seed mixed with the check name, so
/// checks draw independent streams regardless of execution order.
pub fn rng_for(seed: u64, name: &str) -> CheckRng {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn complex(rng: &mut CheckRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn cylinder(rng: &mut CheckRng, s: u32, max_depth: u32) -> Result<CylinderFunction> {
    let depth = rng.gen_range(0..=max_depth);
    cylinder_of_depth(rng, s, depth)
}

pub fn cylinder_of_depth(rng: &mut CheckRng, s: u32, depth: u32) -> Result<CylinderFunction> {
    let values = (0..pow(s, depth)).map(|_| complex(rng)).collect();
    CylinderFunction::new(s, depth, values)
}

/// `K` explicit slots and a tail, all of depth at most `max_depth`.
pub fn sequence(rng: &mut CheckRng, s: u32, k: usize, max_depth: u32) -> Result<ConvergentSequence> {
    let prefix = (0..k)
        .map(|_| cylinder(rng, s, max_depth))
        .collect::<Result<Vec<_>>>()?;
    ConvergentSequence::new(prefix, cylinder(rng, s, max_depth)?)
}

pub fn xv_function(rng: &mut CheckRng, s: u32, k: usize, max_depth: u32) -> Result<XVFunction> {
    let f = cylinder(rng, s, max_depth)?;
    Ok(XVFunction::new(f, (0..k).map(|_| complex(rng)).collect()))
}

/// Explicit levels `0..=top` and a tail of depth at most `top`.
pub fn tree_function(rng: &mut CheckRng, s: u32, top: u32) -> Result<TreeFunction> {
    let tail = cylinder(rng, s, top)?;
    let levels = (0..=top)
        .map(|n| (0..pow(s, n)).map(|_| complex(rng)).collect())
        .collect();
    TreeFunction::new(levels, tail)
}

/// `nnz` entries at random positions with random values.
pub fn sparse_operator(rng: &mut CheckRng, space: TruncatedSpace, nnz: usize) -> Result<TruncatedOperator> {
    let entries = (0..nnz)
        .map(|_| {
            let r = rng.gen_range(0..space.dim());
            let c = rng.gen_range(0..space.dim());
            (space.vertex(r), space.vertex(c), complex(rng))
        })
        .collect::<Vec<(Vertex, Vertex, Complex64)>>();
    TruncatedOperator::from_entries(space, entries)
}

/// A word of length `1..=max_len` in `J`, `J^*` and random diagonals of
/// depth at most 2.
pub fn word(rng: &mut CheckRng, space: TruncatedSpace, kind: ShiftKind, max_len: usize) -> Result<TruncatedOperator> {
    let len = rng.gen_range(1..=max_len);
    let mut out = TruncatedOperator::identity(space);
    for _ in 0..len {
        let letter = match rng.gen_range(0..3) {
            0 => make_shift(space, kind),
            1 => make_shift_adjoint(space, kind),
            _ => TruncatedOperator::diag_cylinder(space, &cylinder(rng, space.base(), 2)?)?,
        };
        out = letter.mul(&out)?;
    }
    Ok(out)
}

/// `c_1 w_1 + c_2 w_2` for two random words.
pub fn word_sum(rng: &mut CheckRng, space: TruncatedSpace, kind: ShiftKind, max_len: usize) -> Result<TruncatedOperator> {
    let w1 = word(rng, space, kind, max_len)?.scale(complex(rng));
    let w2 = word(rng, space, kind, max_len)?;
    w1.add_scaled(&w2, complex(rng))
}
