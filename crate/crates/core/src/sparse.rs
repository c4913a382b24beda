//! Compressed-column complex sparse matrices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            col_ptr: vec![0; ncols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_columns(n, (0..n).map(|i| vec![(i, Complex64::new(1.0, 0.0))]))
    }

    /// Duplicates are summed and exact zeros dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let mut cols: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) outside {nrows}x{ncols}");
            *cols[c].entry(r).or_default() += v;
        }
        Self::from_columns(nrows, cols.into_iter().map(|m| m.into_iter().collect::<Vec<_>>()))
    }

    /// Columns given as (row, value) lists; rows must be sorted and unique.
    fn from_columns(nrows: usize, columns: impl IntoIterator<Item = Vec<(usize, Complex64)>>) -> Self {
        let mut col_ptr = vec![0];
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        for col in columns {
            for (r, v) in col {
                if v != Complex64::new(0.0, 0.0) {
                    row_idx.push(r);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        SparseMatrix {
            nrows,
            ncols: col_ptr.len() - 1,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    /// All stored entries as (row, col, value), column-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.ncols).flat_map(move |c| self.column(c).map(move |(r, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        match self.row_idx[range.clone()].binary_search(&r) {
            Ok(i) => self.values[range.start + i],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.nrows];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v.conj()));
        }
        Self::from_columns(self.ncols, cols)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self::from_columns(
            self.nrows,
            (0..self.ncols).map(|c| self.column(c).map(|(r, v)| (r, v * a)).collect()),
        )
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, other: &Self, a: Complex64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let cols = (0..self.ncols).map(|c| {
            let mut acc: BTreeMap<usize, Complex64> = self.column(c).collect();
            for (r, v) in other.column(c) {
                *acc.entry(r).or_default() += a * v;
            }
            acc.into_iter().collect::<Vec<_>>()
        });
        Self::from_columns(self.nrows, cols)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let mut acc = vec![Complex64::new(0.0, 0.0); self.nrows];
        let mut touched = vec![false; self.nrows];
        let mut rows = Vec::new();
        let cols: Vec<Vec<(usize, Complex64)>> = (0..rhs.ncols)
            .map(|c| {
                for (k, b) in rhs.column(c) {
                    for (r, a) in self.column(k) {
                        if !touched[r] {
                            touched[r] = true;
                            rows.push(r);
                        }
                        acc[r] += a * b;
                    }
                }
                rows.sort_unstable();
                let col = rows
                    .drain(..)
                    .map(|r| {
                        touched[r] = false;
                        let v = std::mem::take(&mut acc[r]);
                        (r, v)
                    })
                    .collect();
                col
            })
            .collect();
        Self::from_columns(self.nrows, cols)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.nrows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (r, v) in self.column(c) {
                y[r] += v * xc;
            }
        }
        y
    }

    /// `self^* x` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.ncols)
            .map(|c| self.column(c).map(|(r, v)| v.conj() * x[r]).sum())
            .collect()
    }

    /// Keeps the entries accepted by `keep(row, col)`.
    pub fn filter(&self, keep: impl Fn(usize, usize) -> bool) -> Self {
        Self::from_columns(
            self.nrows,
            (0..self.ncols).map(|c| self.column(c).filter(|&(r, _)| keep(r, c)).collect()),
        )
    }

    pub fn map_entries(&self, f: impl Fn(usize, usize, Complex64) -> Complex64) -> Self {
        Self::from_columns(
            self.nrows,
            (0..self.ncols).map(|c| self.column(c).map(|(r, v)| (r, f(r, c, v))).collect()),
        )
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
        let mut pos = vec![usize::MAX; self.nrows];
        for (i, &r) in rows.iter().enumerate() {
            pos[r] = i;
        }
        let mut out = DMatrix::zeros(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for (r, v) in self.column(c) {
                if pos[r] != usize::MAX {
                    out[(pos[r], j)] = v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.entries() {
            out[(r, c)] = v;
        }
        out
    }

    /// Rows and columns carrying at least one stored entry.
    pub fn support(&self) -> (Vec<usize>, Vec<usize>) {
        let mut rows = vec![false; self.nrows];
        let mut cols = Vec::new();
        for c in 0..self.ncols {
            let mut any = false;
            for (r, _) in self.column(c) {
                rows[r] = true;
                any = true;
            }
            if any {
                cols.push(c);
            }
        }
        let rows = rows
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        (rows, cols)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
