//! Exact arithmetic on residues of the s-adic integers: tree vertices (balls),
//! locally constant (cylinder) functions, functions on the tree, and the
//! function maps that accompany each shift.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `s^n`. Panics on overflow, which only happens far outside desk scale.
pub fn pow(s: u32, n: u32) -> u64 {
    (s as u64)
        .checked_pow(n)
        .unwrap_or_else(|| panic!("s^n overflows u64 (s = {s}, n = {n})"))
}

pub fn check_base(s: u32) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidBase(s));
    }
    Ok(())
}

/// The four shifts on the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ShiftKind {
    /// Bunce-Deddens (additive) shift.
    U,
    /// Hensel (multiplicative) shift.
    V,
    /// Bernoulli (averaging) shift.
    S,
    /// Serre (edge) shift.
    W,
}

impl ShiftKind {
    pub const ALL: [ShiftKind; 4] = [ShiftKind::U, ShiftKind::V, ShiftKind::S, ShiftKind::W];

    pub fn letter(self) -> char {
        match self {
            ShiftKind::U => 'U',
            ShiftKind::V => 'V',
            ShiftKind::S => 'S',
            ShiftKind::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'U' => Some(ShiftKind::U),
            'V' => Some(ShiftKind::V),
            'S' => Some(ShiftKind::S),
            'W' => Some(ShiftKind::W),
            _ => None,
        }
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Which of the paired function maps: `a` pushes forward along the shift,
/// `b` pulls back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    A,
    B,
}

/// A tree vertex `(n, x)`: the ball of radius `s^-n` centred at `x`, with
/// `0 <= x < s^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: u32,
    pub index: u64,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { level: 0, index: 0 };

    pub fn new(s: u32, level: u32, index: u64) -> Result<Self> {
        check_base(s)?;
        if index >= pow(s, level) {
            return Err(Error::InvalidVertex {
                base: s,
                level,
                index,
            });
        }
        Ok(Vertex { level, index })
    }

    pub fn is_valid(&self, s: u32) -> bool {
        self.index < pow(s, self.level)
    }

    pub fn parent(&self, s: u32) -> Result<Option<Vertex>> {
        self.validate(s)?;
        if self.level == 0 {
            return Ok(None);
        }
        let level = self.level - 1;
        Ok(Some(Vertex {
            level,
            index: self.index % pow(s, level),
        }))
    }

    pub fn children(&self, s: u32) -> Result<Vec<Vertex>> {
        self.validate(s)?;
        let step = pow(s, self.level);
        Ok((0..s as u64)
            .map(|j| Vertex {
                level: self.level + 1,
                index: self.index + j * step,
            })
            .collect())
    }

    /// Base-s digits of the index, least significant first, padded to `level`.
    pub fn digits(&self, s: u32) -> Vec<u32> {
        let mut x = self.index;
        (0..self.level)
            .map(|_| {
                let d = (x % s as u64) as u32;
                x /= s as u64;
                d
            })
            .collect()
    }

    fn validate(&self, s: u32) -> Result<()> {
        check_base(s)?;
        if !self.is_valid(s) {
            return Err(Error::InvalidVertex {
                base: s,
                level: self.level,
                index: self.index,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.index)
    }
}

/// A locally constant function on `Z_s` that depends only on `x mod s^depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderFunction {
    base: u32,
    depth: u32,
    values: Vec<Complex64>,
}

impl CylinderFunction {
    pub fn new(s: u32, depth: u32, values: Vec<Complex64>) -> Result<Self> {
        check_base(s)?;
        let expected = pow(s, depth) as usize;
        if values.len() != expected {
            return Err(Error::TableSize {
                expected,
                got: values.len(),
            });
        }
        Ok(CylinderFunction {
            base: s,
            depth,
            values,
        })
    }

    pub fn from_fn(s: u32, depth: u32, f: impl Fn(u64) -> Complex64) -> Result<Self> {
        check_base(s)?;
        let values = (0..pow(s, depth)).map(f).collect();
        Self::new(s, depth, values)
    }

    pub fn constant(s: u32, c: Complex64) -> Result<Self> {
        Self::new(s, 0, vec![c])
    }

    pub fn one(s: u32) -> Result<Self> {
        Self::constant(s, ONE)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, x: u64) -> Complex64 {
        self.values[(x % self.values.len() as u64) as usize]
    }

    pub fn lift(&self, depth: u32) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::LiftBelowDepth {
                depth: self.depth,
                target: depth,
            });
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        Self::from_fn(self.base, depth, |r| self.eval(r))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Equality as functions on `Z_s`, after lifting both to a common depth.
    pub fn same_function(&self, other: &Self, tol: f64) -> bool {
        self.base == other.base
            && self.max_difference(other).map(|d| d <= tol).unwrap_or(false)
    }

    pub fn max_difference(&self, other: &Self) -> Result<f64> {
        let d = self.zip_with(other, |a, b| a - b)?;
        Ok(d.sup_norm())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        CylinderFunction {
            base: self.base,
            depth: self.depth,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base, other.base));
        }
        let depth = self.depth.max(other.depth);
        Self::from_fn(self.base, depth, |r| f(self.eval(r), other.eval(r)))
    }
}

/// The function maps paired with the shifts U, V and S.
///
/// Translations (U) keep the depth; the pull-backs of V and S drop one digit
/// and the push-forwards add one.
pub fn endo_map(kind: ShiftKind, dir: Direction, f: &CylinderFunction) -> Result<CylinderFunction> {
    let s = f.base;
    let k = f.depth;
    let m = pow(s, k);
    let s64 = s as u64;
    match (kind, dir) {
        (ShiftKind::U, Direction::A) => {
            CylinderFunction::from_fn(s, k, |r| f.eval((r + m - 1) % m))
        }
        (ShiftKind::U, Direction::B) => CylinderFunction::from_fn(s, k, |r| f.eval((r + 1) % m)),
        (ShiftKind::V, Direction::A) => CylinderFunction::from_fn(s, k + 1, |r| {
            if r % s64 == 0 {
                f.eval(r / s64)
            } else {
                ZERO
            }
        }),
        (ShiftKind::V, Direction::B) => {
            CylinderFunction::from_fn(s, k.saturating_sub(1), |r| f.eval(s64 * r))
        }
        (ShiftKind::S, Direction::A) => CylinderFunction::from_fn(s, k + 1, |r| f.eval(r / s64)),
        (ShiftKind::S, Direction::B) => {
            CylinderFunction::from_fn(s, k.saturating_sub(1), |r| {
                let total: Complex64 = (0..s64).map(|j| f.eval(s64 * r + j)).sum();
                total / s as f64
            })
        }
        (ShiftKind::W, _) => Err(Error::UnsupportedShift('W')),
    }
}

/// A function on the tree vertices that agrees with a cylinder function
/// (the tail) on every level above the explicit ones.
///
/// Explicit levels `0..=M` are stored verbatim; `F(n, x) = tail(x)` for
/// `n > M`. The tail's depth never exceeds `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeFunction {
    levels: Vec<Vec<Complex64>>,
    tail: CylinderFunction,
}

impl TreeFunction {
    /// Builds from explicit level tables. Missing levels up to the tail depth
    /// are filled in from the tail.
    pub fn new(levels: Vec<Vec<Complex64>>, tail: CylinderFunction) -> Result<Self> {
        let s = tail.base;
        let mut levels = levels;
        for (n, table) in levels.iter().enumerate() {
            let expected = pow(s, n as u32) as usize;
            if table.len() != expected {
                return Err(Error::TableSize {
                    expected,
                    got: table.len(),
                });
            }
        }
        while levels.len() <= tail.depth as usize {
            let n = levels.len() as u32;
            levels.push((0..pow(s, n)).map(|x| tail.eval(x)).collect());
        }
        Ok(TreeFunction { levels, tail })
    }

    /// `F(n, x) = f(x)` at every level.
    pub fn from_cylinder(f: &CylinderFunction) -> Self {
        TreeFunction::new(Vec::new(), f.clone()).expect("tail-only tree function is valid")
    }

    pub fn from_fn(
        s: u32,
        top: u32,
        tail: CylinderFunction,
        f: impl Fn(u32, u64) -> Complex64,
    ) -> Result<Self> {
        if tail.base != s {
            return Err(Error::BaseMismatch(s, tail.base));
        }
        let levels = (0..=top)
            .map(|n| (0..pow(s, n)).map(|x| f(n, x)).collect())
            .collect();
        Self::new(levels, tail)
    }

    pub fn base(&self) -> u32 {
        self.tail.base
    }

    /// Highest explicit level `M`.
    pub fn explicit_top(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn tail(&self) -> &CylinderFunction {
        &self.tail
    }

    pub fn explicit_levels(&self) -> &[Vec<Complex64>] {
        &self.levels
    }

    /// `F(n, x mod s^n)`.
    pub fn eval(&self, level: u32, x: u64) -> Complex64 {
        let s = self.base();
        match self.levels.get(level as usize) {
            Some(table) => table[(x % pow(s, level)) as usize],
            None => self.tail.eval(x % pow(s, level)),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.levels
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(self.tail.sup_norm(), f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        let s = self.base();
        if other.base() != s {
            return Err(Error::BaseMismatch(s, other.base()));
        }
        let tail = self.tail.zip_with(&other.tail, &f)?;
        let top = self.explicit_top().max(other.explicit_top());
        TreeFunction::from_fn(s, top, tail, |n, x| f(self.eval(n, x), other.eval(n, x)))
    }

    /// Largest level carrying a nonzero value, or `None` for the zero function.
    /// Returns `u32::MAX` when the tail itself is nonzero.
    pub fn support_top(&self, tol: f64) -> Option<u32> {
        if self.tail.sup_norm() > tol {
            return Some(u32::MAX);
        }
        self.levels
            .iter()
            .rposition(|t| t.iter().any(|v| v.norm() > tol))
            .map(|n| n as u32)
    }
}

/// The Serre function maps on tree functions.
///
/// `a_W F(n, x) = F(n-1, x mod s^(n-1))` (zero at the root) and
/// `b_W F(n, x) = (1/s) sum_j F(n+1, x + j s^n)`. Both keep the tail.
pub fn tree_map_w(dir: Direction, f: &TreeFunction) -> TreeFunction {
    let s = f.base();
    let top = f.explicit_top();
    match dir {
        Direction::A => TreeFunction::from_fn(s, top + 1, f.tail.clone(), |n, x| {
            if n == 0 {
                ZERO
            } else {
                f.eval(n - 1, x % pow(s, n - 1))
            }
        }),
        Direction::B => TreeFunction::from_fn(s, top, f.tail.clone(), |n, x| {
            let step = pow(s, n);
            let total: Complex64 = (0..s as u64).map(|j| f.eval(n + 1, x + j * step)).sum();
            total / s as f64
        }),
    }
    .expect("levels are generated with the right sizes")
}

/// `sup_x |F(n, x mod s^n) - f_F(x)|` over residues modulo `s^max(n, depth)`.
pub fn limit_deviation(f: &TreeFunction, level: u32) -> f64 {
    let s = f.base();
    let k = level.max(f.tail.depth);
    (0..pow(s, k))
        .map(|x| (f.eval(level, x % pow(s, level)) - f.tail.eval(x)).norm())
        .fold(0.0, f64::max)
}

/// Indicator of the residue class `j mod s`.
pub fn chi_residue(s: u32, j: u32) -> Result<CylinderFunction> {
    if j >= s {
        return Err(Error::IndexOutOfRange {
            what: "residue",
            index: j as u64,
            limit: s as u64,
        });
    }
    CylinderFunction::from_fn(s, 1, |r| if r == j as u64 { ONE } else { ZERO })
}

/// The character `x -> exp(2 pi i x / s^n)`.
pub fn chi_character(s: u32, n: u32) -> Result<CylinderFunction> {
    let m = pow(s, n) as f64;
    CylinderFunction::from_fn(s, n, |r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m))
}

/// Indicator of level `n`.
pub fn level_indicator(s: u32, n: u32) -> Result<TreeFunction> {
    let zero = CylinderFunction::constant(s, ZERO)?;
    TreeFunction::from_fn(s, n, zero, |m, _| if m == n { ONE } else { ZERO })
}

/// Indicator of the single vertex `(m, l)`.
pub fn vertex_indicator(s: u32, m: u32, l: u64) -> Result<TreeFunction> {
    Vertex::new(s, m, l)?;
    let zero = CylinderFunction::constant(s, ZERO)?;
    TreeFunction::from_fn(s, m, zero, |n, x| if n == m && x == l { ONE } else { ZERO })
}

/// `h_n(m) = (1/s) sum_{j<s} exp(2 pi i j s^m / s^(n+1))`.
///
/// Equal to 1 for `m > n` and 0 for `m = n`.
pub fn serre_h(s: u32, n: u32, m: u32) -> Complex64 {
    if m > n {
        return ONE;
    }
    let denom = pow(s, n + 1 - m) as f64;
    let total: Complex64 = (0..s)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / denom))
        .sum();
    total / s as f64
}
