//! The representation `u_j e_l = e_{sl+j}` of the Cuntz relations on a
//! finite window of `l^2(Z)`, the embedding `phi(n,x) = s^n + x` of the tree,
//! the compression `T_S(a) = iota^* a iota` and its correction terms.

use num_complex::Complex64;

use crate::adic::{pow, Vertex, ONE};
use crate::error::{Error, Result};
use crate::hilbert::{TruncatedOperator, TruncatedSpace};
use crate::shifts::cuntz_word;
use crate::sparse::SparseMatrix;

pub fn phi(s: u32, v: Vertex) -> i64 {
    (pow(s, v.level) + v.index) as i64
}

/// The vertex `(n, x)` with `s^n <= l < 2 s^n`, if any.
pub fn phi_inv(s: u32, l: i64) -> Option<Vertex> {
    if l < 1 {
        return None;
    }
    let l = l as u64;
    let mut n = 0;
    let mut p = 1u64;
    while p.checked_mul(s as u64).is_some_and(|q| q <= l) {
        p *= s as u64;
        n += 1;
    }
    (l < 2 * p).then_some(Vertex {
        level: n,
        index: l - p,
    })
}

/// Basis `e_l` for `lo <= l <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineSpace {
    base: u32,
    lo: i64,
    hi: i64,
}

impl LineSpace {
    pub fn new(s: u32, lo: i64, hi: i64) -> Result<Self> {
        crate::adic::check_base(s)?;
        if !(lo <= 0 && 0 < hi) {
            return Err(Error::InvalidParam(format!("line window [{lo}, {hi}] must contain 0 and 1")));
        }
        Ok(LineSpace { base: s, lo, hi })
    }

    /// `[-s^N, 2 s^N]`.
    pub fn for_tree(tree: TruncatedSpace) -> Self {
        let top = pow(tree.base(), tree.depth()) as i64;
        LineSpace {
            base: tree.base(),
            lo: -top,
            hi: 2 * top,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, l: i64) -> bool {
        self.lo <= l && l <= self.hi
    }

    pub fn index(&self, l: i64) -> usize {
        assert!(self.contains(l), "e_{l} outside the window");
        (l - self.lo) as usize
    }

    pub fn point(&self, idx: usize) -> i64 {
        self.lo + idx as i64
    }
}

/// An operator on the window together with the columns on which it agrees
/// with the operator on all of `l^2(Z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOperator {
    space: LineSpace,
    matrix: SparseMatrix,
    exact: Vec<bool>,
}

impl LineOperator {
    fn from_images(space: LineSpace, images: impl Fn(i64) -> Option<i64>) -> Self {
        let mut triplets = Vec::new();
        let mut exact = Vec::with_capacity(space.dim());
        for c in 0..space.dim() {
            let l = space.point(c);
            match images(l) {
                Some(t) if space.contains(t) => {
                    triplets.push((space.index(t), c, ONE));
                    exact.push(true);
                }
                Some(_) => exact.push(false),
                None => exact.push(true),
            }
        }
        LineOperator {
            space,
            matrix: SparseMatrix::from_triplets(space.dim(), space.dim(), triplets),
            exact,
        }
    }

    pub fn identity(space: LineSpace) -> Self {
        Self::from_images(space, Some)
    }

    /// `u_j e_l = e_{sl+j}`.
    pub fn generator(space: LineSpace, j: u32) -> Result<Self> {
        let s = space.base();
        check_digit(s, j)?;
        Ok(Self::from_images(space, |l| Some(s as i64 * l + j as i64)))
    }

    /// `u_j^* e_l = e_{(l-j)/s}` if `l = j mod s`, else 0.
    pub fn generator_adjoint(space: LineSpace, j: u32) -> Result<Self> {
        let s = space.base() as i64;
        check_digit(space.base(), j)?;
        Ok(Self::from_images(space, |l| {
            let d = l - j as i64;
            (d.rem_euclid(s) == 0).then(|| d.div_euclid(s))
        }))
    }

    /// `u_(n,x) = u_{x_0} ... u_{x_(n-1)}`, so `u_(n,x) e_l = e_{s^n l + x}`.
    pub fn word(space: LineSpace, n: u32, x: u64) -> Result<Self> {
        let v = Vertex::new(space.base(), n, x)?;
        let mut out = Self::identity(space);
        for d in v.digits(space.base()) {
            out = out.mul(&Self::generator(space, d)?)?;
        }
        Ok(out)
    }

    /// `u_(n,x)^*`, built from the adjoint generators.
    pub fn word_adjoint(space: LineSpace, n: u32, x: u64) -> Result<Self> {
        let v = Vertex::new(space.base(), n, x)?;
        let mut out = Self::identity(space);
        for d in v.digits(space.base()) {
            out = Self::generator_adjoint(space, d)?.mul(&out)?;
        }
        Ok(out)
    }

    pub fn space(&self) -> LineSpace {
        self.space
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn is_exact(&self, l: i64) -> bool {
        self.space.contains(l) && self.exact[self.space.index(l)]
    }

    pub fn exact_columns(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.space.dim())
            .filter(|&c| self.exact[c])
            .map(|c| self.space.point(c))
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    /// `self * rhs`. A column is exact when `rhs` is exact there and `self`
    /// is exact on every row `rhs` reaches.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_space(rhs)?;
        let exact = (0..self.space.dim())
            .map(|c| rhs.exact[c] && rhs.matrix.column(c).all(|(r, _)| self.exact[r]))
            .collect();
        Ok(LineOperator {
            space: self.space,
            matrix: self.matrix.mul(&rhs.matrix),
            exact,
        })
    }

    pub fn add_scaled(&self, other: &Self, a: Complex64) -> Result<Self> {
        self.same_space(other)?;
        Ok(LineOperator {
            space: self.space,
            matrix: self.matrix.add_scaled(&other.matrix, a),
            exact: self.exact.iter().zip(&other.exact).map(|(a, b)| *a && *b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, -ONE)
    }

    /// Largest column deviation from `other` over columns exact for both
    /// and satisfying `keep`, with the number of such columns.
    pub fn compare(&self, other: &Self, keep: impl Fn(i64) -> bool) -> Result<(f64, usize)> {
        self.same_space(other)?;
        let diff = self.matrix.add_scaled(&other.matrix, -ONE);
        let mut max: f64 = 0.0;
        let mut count = 0;
        for c in 0..self.space.dim() {
            if self.exact[c] && other.exact[c] && keep(self.space.point(c)) {
                count += 1;
                max = max.max(diff.column(c).map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt());
            }
        }
        Ok((max, count))
    }
}

fn check_digit(s: u32, j: u32) -> Result<()> {
    if j >= s {
        return Err(Error::IndexOutOfRange {
            what: "Cuntz generator",
            index: j as u64,
            limit: s as u64,
        });
    }
    Ok(())
}

/// `iota E_(n,x) = e_{phi(n,x)}` from the tree truncation into a window.
#[derive(Debug, Clone)]
pub struct Iota {
    tree: TruncatedSpace,
    line: LineSpace,
    matrix: SparseMatrix,
}

impl Iota {
    pub fn new(tree: TruncatedSpace, line: LineSpace) -> Result<Self> {
        if tree.base() != line.base() {
            return Err(Error::BaseMismatch(tree.base(), line.base()));
        }
        let needed = 2 * pow(tree.base(), tree.depth()) as i64;
        if line.hi() < needed {
            return Err(Error::WindowTooSmall {
                lo: line.lo(),
                hi: line.hi(),
                needed,
            });
        }
        let s = tree.base();
        let triplets: Vec<_> = tree
            .vertices()
            .enumerate()
            .map(|(c, v)| (line.index(phi(s, v)), c, ONE))
            .collect();
        Ok(Iota {
            tree,
            line,
            matrix: SparseMatrix::from_triplets(line.dim(), tree.dim(), triplets),
        })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// `iota^* iota`, which is the identity.
    pub fn gram(&self) -> TruncatedOperator {
        TruncatedOperator::from_parts(
            self.tree,
            self.matrix.adjoint().mul(&self.matrix),
            crate::hilbert::Budget::LEVEL_PRESERVING,
        )
    }

    /// `T_S(a) = iota^* a iota` and the tree columns where it is exact.
    ///
    /// A column `(n, x)` is exact when `a` is exact at `e_{phi(n,x)}` and
    /// the image has no component on `phi` of a vertex above level `N`.
    pub fn toeplitz(&self, a: &LineOperator) -> Result<ToeplitzImage> {
        if a.space() != self.line {
            return Err(Error::SpaceMismatch);
        }
        let s = self.tree.base();
        let depth = self.tree.depth();
        let matrix = self.matrix.adjoint().mul(&a.matrix().mul(&self.matrix));
        let exact = self
            .tree
            .vertices()
            .map(|v| {
                let l = phi(s, v);
                a.is_exact(l)
                    && a.matrix()
                        .column(self.line.index(l))
                        .all(|(r, _)| phi_inv(s, self.line.point(r)).is_none_or(|w| w.level <= depth))
            })
            .collect();
        Ok(ToeplitzImage {
            operator: TruncatedOperator::from_parts(
                self.tree,
                matrix,
                crate::hilbert::Budget::opaque(depth),
            ),
            exact,
        })
    }
}

/// A tree operator together with a per-column exactness mask.
#[derive(Debug, Clone)]
pub struct ToeplitzImage {
    pub operator: TruncatedOperator,
    pub exact: Vec<bool>,
}

impl ToeplitzImage {
    /// Product; exactness propagates as for [`LineOperator::mul`].
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let exact = (0..self.exact.len())
            .map(|c| rhs.exact[c] && rhs.operator.matrix().column(c).all(|(r, _)| self.exact[r]))
            .collect();
        Ok(ToeplitzImage {
            operator: self.operator.mul(&rhs.operator)?,
            exact,
        })
    }

    pub fn exact_count(&self) -> usize {
        self.exact.iter().filter(|&&e| e).count()
    }

    /// Restriction to the exact columns.
    pub fn masked(&self) -> TruncatedOperator {
        let m = self.operator.matrix().filter(|_, c| self.exact[c]);
        TruncatedOperator::from_parts(self.operator.space(), m, self.operator.budget())
    }
}

/// `T_S(u_(n,x) u_(m,y)^*) - S_(n,x) S_(m,y)^*`, computed through the line
/// representation. Columns are exact where both terms are.
pub fn ts_correction(
    tree: TruncatedSpace,
    line: LineSpace,
    target: Vertex,
    source: Vertex,
) -> Result<ToeplitzImage> {
    let iota = Iota::new(tree, line)?;
    let word = LineOperator::word(line, target.level, target.index)?
        .mul(&LineOperator::word_adjoint(line, source.level, source.index)?)?;
    let image = iota.toeplitz(&word)?;
    let tree_word = cuntz_word(tree, target.level, target.index)?
        .mul(&cuntz_word(tree, source.level, source.index)?.adjoint())?;
    let top = crate::hilbert::validity_top(&tree_word, &tree_word);
    let levels = tree.levels();
    let exact = image
        .exact
        .iter()
        .zip(&levels)
        .map(|(&e, &lv)| e && top.is_some_and(|t| lv <= t))
        .collect();
    Ok(ToeplitzImage {
        operator: image.operator.sub(&tree_word)?,
        exact,
    })
}

/// The correction as a rank-at-most-one operator: if `x = phi(j, x')` and
/// `y = phi(l, y')` it sends `E_(l,y')` to `E_(j,x')`, otherwise it is zero.
pub fn closed_form_correction(tree: TruncatedSpace, target: Vertex, source: Vertex) -> Result<TruncatedOperator> {
    let s = tree.base();
    Vertex::new(s, target.level, target.index)?;
    Vertex::new(s, source.level, source.index)?;
    let entries = match (phi_inv(s, target.index as i64), phi_inv(s, source.index as i64)) {
        (Some(to), Some(from)) if to.level <= tree.depth() && from.level <= tree.depth() => vec![(to, from, ONE)],
        _ => Vec::new(),
    };
    TruncatedOperator::from_entries(tree, entries)
}
