//! The truncated Hilbert space `H_{<=N}` spanned by tree vertices up to level
//! `N`, and sparse operators on it.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::adic::{check_base, pow, CylinderFunction, TreeFunction, Vertex};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Operators whose support (after dropping empty rows and columns) fits in
/// this size get an exact dense SVD.
pub const DENSE_NORM_LIMIT: usize = 512;
pub const POWER_ITERATION_CAP: usize = 10_000;

/// Span of `E_(n,x)` for `n <= depth`, enumerated level by level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedSpace {
    base: u32,
    depth: u32,
    dim: usize,
}

impl TruncatedSpace {
    pub fn new(s: u32, depth: u32) -> Result<Self> {
        check_base(s)?;
        let dim = ((pow(s, depth + 1) - 1) / (s as u64 - 1)) as usize;
        Ok(TruncatedSpace {
            base: s,
            depth,
            dim,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the first basis vector on `level`.
    pub fn level_offset(&self, level: u32) -> usize {
        ((pow(self.base, level) - 1) / (self.base as u64 - 1)) as usize
    }

    pub fn level_dim(&self, level: u32) -> usize {
        pow(self.base, level) as usize
    }

    pub fn index(&self, v: Vertex) -> Result<usize> {
        if v.level > self.depth {
            return Err(Error::LevelOutOfRange {
                level: v.level,
                depth: self.depth,
            });
        }
        if !v.is_valid(self.base) {
            return Err(Error::InvalidVertex {
                base: self.base,
                level: v.level,
                index: v.index,
            });
        }
        Ok(self.level_offset(v.level) + v.index as usize)
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        assert!(idx < self.dim, "basis index {idx} outside dimension {}", self.dim);
        let mut level = 0;
        while self.level_offset(level + 1) <= idx {
            level += 1;
        }
        Vertex {
            level,
            index: (idx - self.level_offset(level)) as u64,
        }
    }

    pub fn level_of(&self, idx: usize) -> u32 {
        self.vertex(idx).level
    }

    /// Level of every basis index, for bulk lookups.
    pub fn levels(&self) -> Vec<u32> {
        (0..=self.depth)
            .flat_map(|n| std::iter::repeat_n(n, self.level_dim(n)))
            .collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.depth).flat_map(move |n| (0..pow(self.base, n)).map(move |x| Vertex { level: n, index: x }))
    }

    pub fn vertices_at(&self, level: u32) -> impl Iterator<Item = Vertex> {
        (0..pow(self.base, level)).map(move |x| Vertex { level, index: x })
    }

    pub fn basis_vector(&self, v: Vertex) -> Result<Vec<Complex64>> {
        let mut e = vec![Complex64::new(0.0, 0.0); self.dim];
        e[self.index(v)?] = Complex64::new(1.0, 0.0);
        Ok(e)
    }
}

/// How far an operator can move a vector between levels, used to decide on
/// which basis vectors a truncated computation agrees with the untruncated one.
///
/// `peak` is the highest level gained (relative to the input) anywhere along
/// the composition; `net_lo..=net_hi` is the range of net level changes.
/// A column at level `n` is exact whenever `n + peak <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub peak: u32,
    pub net_lo: i32,
    pub net_hi: i32,
}

impl Budget {
    pub const LEVEL_PRESERVING: Budget = Budget {
        peak: 0,
        net_lo: 0,
        net_hi: 0,
    };
    pub const RAISING: Budget = Budget {
        peak: 1,
        net_lo: 1,
        net_hi: 1,
    };
    pub const LOWERING: Budget = Budget {
        peak: 0,
        net_lo: -1,
        net_hi: -1,
    };

    /// An operator given by its matrix alone: exact everywhere, any degree.
    pub fn opaque(depth: u32) -> Budget {
        Budget {
            peak: 0,
            net_lo: -(depth as i32),
            net_hi: depth as i32,
        }
    }

    /// `self` applied after `first`.
    pub fn then_after(self, first: Budget) -> Budget {
        let peak = (first.net_hi + self.peak as i32).max(first.peak as i32).max(0) as u32;
        Budget {
            peak,
            net_lo: self.net_lo + first.net_lo,
            net_hi: self.net_hi + first.net_hi,
        }
    }

    pub fn join(self, other: Budget) -> Budget {
        Budget {
            peak: self.peak.max(other.peak),
            net_lo: self.net_lo.min(other.net_lo),
            net_hi: self.net_hi.max(other.net_hi),
        }
    }

    pub fn adjoint(self) -> Budget {
        Budget {
            peak: (self.peak as i32 - self.net_lo).max(0) as u32,
            net_lo: -self.net_hi,
            net_hi: -self.net_lo,
        }
    }

    pub fn homogeneous(self, degree: i32) -> Budget {
        Budget {
            peak: self.peak.max(degree.max(0) as u32),
            net_lo: degree,
            net_hi: degree,
        }
    }
}

/// A sparse operator on `H_{<=N}` together with its level budget.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    space: TruncatedSpace,
    matrix: SparseMatrix,
    budget: Budget,
}

impl TruncatedOperator {
    pub fn from_parts(space: TruncatedSpace, matrix: SparseMatrix, budget: Budget) -> Self {
        assert_eq!(matrix.nrows(), space.dim());
        assert_eq!(matrix.ncols(), space.dim());
        TruncatedOperator {
            space,
            matrix,
            budget,
        }
    }

    /// Operator with the given matrix entries `(row, col, value)`.
    pub fn from_entries(
        space: TruncatedSpace,
        entries: impl IntoIterator<Item = (Vertex, Vertex, Complex64)>,
    ) -> Result<Self> {
        let triplets = entries
            .into_iter()
            .map(|(r, c, v)| Ok((space.index(r)?, space.index(c)?, v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(
            space,
            SparseMatrix::from_triplets(space.dim(), space.dim(), triplets),
            Budget::opaque(space.depth()),
        ))
    }

    /// Built column by column: `images(v)` lists `(target, value)` pairs for
    /// basis vector `v`. Targets above the truncation are dropped.
    pub fn from_images(
        space: TruncatedSpace,
        budget: Budget,
        images: impl Fn(Vertex) -> Vec<(Vertex, Complex64)>,
    ) -> Self {
        let mut triplets = Vec::new();
        for (c, v) in space.vertices().enumerate() {
            for (w, val) in images(v) {
                if w.level <= space.depth() {
                    let r = space.index(w).expect("image vertex must be valid");
                    triplets.push((r, c, val));
                }
            }
        }
        Self::from_parts(
            space,
            SparseMatrix::from_triplets(space.dim(), space.dim(), triplets),
            budget,
        )
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        Self::from_parts(space, SparseMatrix::identity(space.dim()), Budget::LEVEL_PRESERVING)
    }

    pub fn zero(space: TruncatedSpace) -> Self {
        Self::from_parts(
            space,
            SparseMatrix::zeros(space.dim(), space.dim()),
            Budget::LEVEL_PRESERVING,
        )
    }

    /// `M_f E_(n,x) = f(x) E_(n,x)`.
    pub fn diag_cylinder(space: TruncatedSpace, f: &CylinderFunction) -> Result<Self> {
        if f.base() != space.base() {
            return Err(Error::BaseMismatch(space.base(), f.base()));
        }
        Ok(Self::from_images(space, Budget::LEVEL_PRESERVING, |v| {
            vec![(v, f.eval(v.index))]
        }))
    }

    /// `M_F E_(n,x) = F(n,x) E_(n,x)`.
    pub fn diag_tree(space: TruncatedSpace, f: &TreeFunction) -> Result<Self> {
        if f.base() != space.base() {
            return Err(Error::BaseMismatch(space.base(), f.base()));
        }
        Ok(Self::from_images(space, Budget::LEVEL_PRESERVING, |v| {
            vec![(v, f.eval(v.level, v.index))]
        }))
    }

    pub fn space(&self) -> TruncatedSpace {
        self.space
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn add_scaled(&self, other: &Self, a: Complex64) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self::from_parts(
            self.space,
            self.matrix.add_scaled(&other.matrix, a),
            self.budget.join(other.budget),
        ))
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_parts(self.space, self.matrix.scale(a), self.budget)
    }

    pub fn scale_real(&self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0))
    }

    /// `self * rhs` (rhs acts first).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_space(rhs)?;
        Ok(Self::from_parts(
            self.space,
            self.matrix.mul(&rhs.matrix),
            self.budget.then_after(rhs.budget),
        ))
    }

    /// Product of a chain, evaluated right to left.
    pub fn product(factors: &[&TruncatedOperator]) -> Result<Self> {
        let (last, rest) = factors.split_last().expect("empty product");
        rest.iter()
            .rev()
            .try_fold((*last).clone(), |acc, f| f.mul(&acc))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::identity(self.space);
        for _ in 0..k {
            out = self.mul(&out)?;
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.space, self.matrix.adjoint(), self.budget.adjoint())
    }

    pub fn entry(&self, row: Vertex, col: Vertex) -> Result<Complex64> {
        Ok(self.matrix.get(self.space.index(row)?, self.space.index(col)?))
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(x)
    }

    /// Image of a basis vector as (vertex, coefficient) pairs.
    pub fn apply_basis(&self, v: Vertex) -> Result<Vec<(Vertex, Complex64)>> {
        let c = self.space.index(v)?;
        Ok(self
            .matrix
            .column(c)
            .map(|(r, val)| (self.space.vertex(r), val))
            .collect())
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        Ok(self.matrix.add_scaled(&other.matrix, Complex64::new(-1.0, 0.0)).max_abs())
    }

    /// Part mapping level `n` into level `n + d`.
    pub fn degree_component(&self, d: i32) -> Self {
        let levels = self.space.levels();
        Self::from_parts(
            self.space,
            self.matrix
                .filter(|r, c| levels[r] as i64 - levels[c] as i64 == d as i64),
            self.budget.homogeneous(d),
        )
    }

    /// Gauge average: the degree-zero (block-diagonal) part.
    pub fn expectation(&self) -> Self {
        self.degree_component(0)
    }

    /// `U_t a U_t^{-1}` with `U_t E_(n,x) = exp(2 pi i n t) E_(n,x)`.
    pub fn gauge_rotate(&self, theta: f64) -> Self {
        let levels = self.space.levels();
        Self::from_parts(
            self.space,
            self.matrix.map_entries(|r, c, v| {
                let d = levels[r] as f64 - levels[c] as f64;
                v * Complex64::from_polar(1.0, 2.0 * PI * d * theta)
            }),
            self.budget,
        )
    }

    /// Average of the gauge rotations at `q / nodes`, `q = 0..nodes`.
    pub fn quadrature_expectation(&self, nodes: u32) -> Self {
        let mut acc = Self::zero(self.space).with_budget(self.budget);
        for q in 0..nodes {
            let rotated = self.gauge_rotate(q as f64 / nodes as f64);
            acc = acc.add(&rotated).expect("same space");
        }
        acc.scale_real(1.0 / nodes as f64)
    }

    /// Dense `H_n -> H_n` block.
    pub fn block(&self, level: u32) -> Result<DMatrix<Complex64>> {
        if level > self.space.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                depth: self.space.depth(),
            });
        }
        let start = self.space.level_offset(level);
        let idx: Vec<usize> = (start..start + self.space.level_dim(level)).collect();
        Ok(self.matrix.submatrix(&idx, &idx))
    }

    /// Spectral norm of the compression to levels `>= level`.
    pub fn tail_norm(&self, level: u32, tol: f64) -> Result<f64> {
        if level > self.space.depth() {
            return Err(Error::LevelOutOfRange {
                level,
                depth: self.space.depth(),
            });
        }
        let levels = self.space.levels();
        let compressed = self.matrix.filter(|r, c| levels[r] >= level && levels[c] >= level);
        spectral_norm(&compressed, tol)
    }

    pub fn spectral_norm(&self, tol: f64) -> Result<f64> {
        spectral_norm(&self.matrix, tol)
    }

    /// Matrix dump: a header line, then `row col re im` per stored entry in
    /// row-major order, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut entries: Vec<_> = self.matrix.entries().collect();
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut out = format!(
            "# s={} N={} dim={} ordering=level-lex\n",
            self.space.base(),
            self.space.depth(),
            self.space.dim()
        );
        for (r, c, v) in entries {
            writeln!(out, "{r} {c} {:.16e} {:.16e}", v.re, v.im).expect("write to string");
        }
        out
    }
}

/// Largest deviation between two operators over their common validity set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residual {
    /// Largest column 2-norm of the difference.
    pub max: f64,
    /// Number of basis vectors compared.
    pub count: usize,
}

impl Residual {
    pub fn merge(self, other: Residual) -> Residual {
        Residual {
            max: self.max.max(other.max).abs(),
            count: self.count + other.count,
        }
    }

    pub fn scalar(diff: f64) -> Residual {
        Residual { max: diff, count: 1 }
    }
}

/// Highest level whose basis vectors are exact for both operators.
pub fn validity_top(a: &TruncatedOperator, b: &TruncatedOperator) -> Option<u32> {
    let peak = a.budget.peak.max(b.budget.peak);
    a.space.depth().checked_sub(peak)
}

/// Compares two operators column by column on the levels where both are
/// exact. Every row is compared.
pub fn compare_on_validity(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<Residual> {
    match validity_top(a, b) {
        Some(top) => compare_up_to(a, b, top),
        None => Ok(Residual::default()),
    }
}

/// Column comparison over basis vectors with level `<= top`.
pub fn compare_up_to(a: &TruncatedOperator, b: &TruncatedOperator, top: u32) -> Result<Residual> {
    compare_levels(a, b, 0, top)
}

/// Column comparison over basis vectors with level in `lo..=hi`.
pub fn compare_levels(a: &TruncatedOperator, b: &TruncatedOperator, lo: u32, hi: u32) -> Result<Residual> {
    a.same_space(b)?;
    let space = a.space;
    let hi = hi.min(space.depth());
    if lo > hi {
        return Ok(Residual::default());
    }
    let cols = space.level_offset(lo)..space.level_offset(hi + 1);
    let count = cols.len();
    let diff = a.matrix.add_scaled(&b.matrix, Complex64::new(-1.0, 0.0));
    let max = cols
        .map(|c| diff.column(c).map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    Ok(Residual { max, count })
}

/// Largest singular value.
///
/// The matrix is split into independent blocks (connected components of its
/// row/column incidence graph). Blocks up to [`DENSE_NORM_LIMIT`] get a dense
/// SVD; larger ones use power iteration on `a^* a` from a fixed start vector.
pub fn spectral_norm(matrix: &SparseMatrix, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParam(format!("tolerance must be positive, got {tol}")));
    }
    let mut best: f64 = 0.0;
    for (rows, cols) in components(matrix) {
        let sigma = if rows.len() <= DENSE_NORM_LIMIT && cols.len() <= DENSE_NORM_LIMIT {
            let dense = matrix.submatrix(&rows, &cols);
            dense.singular_values().iter().copied().fold(0.0, f64::max)
        } else {
            let sub = compress(matrix, &rows, &cols);
            power_norm(&sub, tol)?
        };
        best = best.max(sigma);
    }
    Ok(best)
}

/// Singular values of the nonzero part of a matrix, largest first.
pub fn singular_values(matrix: &SparseMatrix) -> Vec<f64> {
    let (rows, cols) = matrix.support();
    if rows.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = matrix.submatrix(&rows, &cols).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn compress(matrix: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
    let mut pos = vec![usize::MAX; matrix.nrows()];
    for (i, &r) in rows.iter().enumerate() {
        pos[r] = i;
    }
    let triplets = cols.iter().enumerate().flat_map(|(j, &c)| {
        let pos = &pos;
        matrix.column(c).map(move |(r, v)| (pos[r], j, v))
    });
    SparseMatrix::from_triplets(rows.len(), cols.len(), triplets.collect::<Vec<_>>())
}

fn components(matrix: &SparseMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let nr = matrix.nrows();
    let nc = matrix.ncols();
    // nodes: rows 0..nr, columns nr..nr+nc
    let mut parent: Vec<usize> = (0..nr + nc).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut used = vec![false; nr + nc];
    for (r, c, _) in matrix.entries() {
        used[r] = true;
        used[nr + c] = true;
        let a = find(&mut parent, r);
        let b = find(&mut parent, nr + c);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for node in (0..nr + nc).filter(|&n| used[n]) {
        let root = find(&mut parent, node);
        let g = groups.entry(root).or_default();
        if node < nr {
            g.0.push(node);
        } else {
            g.1.push(node - nr);
        }
    }
    groups.into_values().collect()
}

fn power_norm(a: &SparseMatrix, tol: f64) -> Result<f64> {
    let n = a.ncols();
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i % 7) as f64 / 10.0, (i % 3) as f64 / 20.0))
        .collect();
    normalize(&mut v);
    let mut mu = 0.0;
    let mut resid = f64::INFINITY;
    for _ in 0..POWER_ITERATION_CAP {
        let av = a.mul_vec(&v);
        let mut w = a.adjoint_mul_vec(&av);
        // Rayleigh quotient of a^* a at unit v
        mu = av.iter().map(|z| z.norm_sqr()).sum::<f64>();
        resid = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - vi * mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if mu == 0.0 {
            return Ok(0.0);
        }
        if resid <= tol * mu.max(1e-300) {
            return Ok(mu.sqrt());
        }
        normalize(&mut w);
        v = w;
    }
    Err(Error::NormNotConverged {
        lower: mu.sqrt(),
        upper: (mu + resid).sqrt(),
    })
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}
