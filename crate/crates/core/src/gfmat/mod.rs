//! Dense exact matrices over prime fields GF(p), 2 <= p <= 13.
//!
//! This is the carrier type for everything else in the crate. Matrices are
//! immutable values; all operations return fresh matrices. Zero-row and
//! zero-column matrices are first-class (they show up as degenerate pieces
//! of decompositions) and every tie-break is lexicographic on the row-major
//! entry encoding so results are reproducible across runs and schedules.

mod subspace;
pub(crate) mod text;

pub use subspace::{
    distance_to_subspace, enumerate_subspaces, SubspaceBasis, SubspaceIter,
};

use crate::error::{Error, Result};

const SUPPORTED_PRIMES: [u8; 6] = [2, 3, 5, 7, 11, 13];

/// A prime modulus in the supported range, with inverse lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u8);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if SUPPORTED_PRIMES.contains(&(p as u8)) && p <= 13 {
            Ok(Prime(p as u8))
        } else {
            Err(Error::BadModulus(p))
        }
    }

    #[inline]
    pub fn value(&self) -> u8 {
        self.0
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        (s % self.0 as u16) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        let s = a as i16 - b as i16;
        s.rem_euclid(self.0 as i16) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Multiplicative inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.0);
        // p <= 13, a scan is fine
        (1..self.0).find(|&b| self.mul(a, b) == 1).unwrap()
    }
}

/// Dense m x n matrix over GF(p), row-major entries in [0, p).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FieldMatrix {
    pub fn zero(p: Prime, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> FieldMatrix {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_entries(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Result<FieldMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if let Some(&e) = data.iter().find(|&&e| e >= p.value()) {
            return Err(Error::Parse(format!("entry {} out of range for p={}", e, p.value())));
        }
        Ok(FieldMatrix { p, rows, cols, data })
    }

    pub fn from_rows(p: Prime, rows: &[Vec<u8>]) -> Result<FieldMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<u8> = rows.iter().flatten().copied().collect();
        Self::from_entries(p, rows.len(), cols, data)
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        debug_assert!(v < self.p.value());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[u8] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row(i).iter().filter(|&&e| e != 0).count()
    }

    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|i| self.row_weight(i)).max().unwrap_or(0)
    }

    pub fn total_nonzeros(&self) -> usize {
        self.data.iter().filter(|&&e| e != 0).count()
    }

    /// True if every row has at most `t` nonzero entries.
    pub fn is_row_sparse(&self, t: usize) -> bool {
        (0..self.rows).all(|i| self.row_weight(i) <= t)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = Self::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape(rhs)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| self.p.add(a, b))
            .collect();
        Ok(FieldMatrix { p: self.p, rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape(rhs)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| self.p.sub(a, b))
            .collect();
        Ok(FieldMatrix { p: self.p, rows: self.rows, cols: self.cols, data })
    }

    fn same_shape(&self, rhs: &FieldMatrix) -> Result<()> {
        if self.p != rhs.p || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} (p={}) vs {}x{} (p={})",
                self.rows,
                self.cols,
                self.p.value(),
                rhs.rows,
                rhs.cols,
                rhs.p.value()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != rhs.p || self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p.value() as u32;
        let mut out = Self::zero(self.p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u32;
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j) as u32;
                    out.data[i * rhs.cols + j] = ((cur + a * rhs.get(k, j) as u32) % p) as u8;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[u8]) -> Result<Vec<u8>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {} columns",
                x.len(),
                self.cols
            )));
        }
        let p = self.p.value() as u32;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc: u32 = 0;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) as u32 * x[j] as u32) % p;
                }
                acc as u8
            })
            .collect())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != rhs.p || self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zero(self.p, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j));
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != rhs.p || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(FieldMatrix { p: self.p, rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    pub fn select_columns(&self, indices: &[usize]) -> FieldMatrix {
        let mut out = Self::zero(self.p, self.rows, indices.len());
        for (jj, &j) in indices.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, indices: &[usize]) -> FieldMatrix {
        let mut out = Self::zero(self.p, indices.len(), self.cols);
        for (ii, &i) in indices.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j));
            }
        }
        out
    }

    /// Pad with zero columns on the right up to `cols` total.
    pub fn pad_columns(&self, cols: usize) -> FieldMatrix {
        assert!(cols >= self.cols);
        let mut out = Self::zero(self.p, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, f: u8) {
        for j in 0..self.cols {
            let v = self.p.mul(self.get(i, j), f);
            self.set(i, j, v);
        }
    }

    // row_i -= f * row_src
    fn row_sub_scaled(&mut self, i: usize, src: usize, f: u8) {
        for j in 0..self.cols {
            let v = self.p.sub(self.get(i, j), self.p.mul(f, self.get(src, j)));
            self.set(i, j, v);
        }
    }

    /// Reduced row-echelon form, with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(pr) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(r, pr);
            let inv = a.p.inv(a.get(r, c));
            a.scale_row(r, inv);
            for i in 0..a.rows {
                if i != r {
                    let f = a.get(i, c);
                    if f != 0 {
                        a.row_sub_scaled(i, r, f);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        Rref { matrix: a, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut tracker = SpanTracker::new(self.p, self.cols);
        for i in 0..self.rows {
            tracker.insert(self.row(i));
        }
        tracker.rank()
    }

    /// Right kernel `{x : self * x = 0}` as a matrix whose rows form a
    /// canonical (RREF) basis.
    pub fn nullspace(&self) -> FieldMatrix {
        let red = self.rref();
        let n = self.cols;
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; n];
            for &c in &red.pivots {
                s[c] = true;
            }
            s
        };
        let free: Vec<usize> = (0..n).filter(|&j| !pivot_set[j]).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![0u8; n];
            v[f] = 1;
            for (r, &c) in red.pivots.iter().enumerate() {
                // x[c] = -R[r][f]
                v[c] = self.p.neg(red.matrix.get(r, f));
            }
            rows.push(v);
        }
        let basis = FieldMatrix::from_rows(self.p, &rows).expect("kernel rows are well formed");
        basis.rref().matrix_without_zero_rows()
    }

    /// Solve `self * X = y` columnwise. When multiple solutions exist the
    /// lexicographically least X (row-major entries as integers) is returned;
    /// fails with `NoSolution` naming the first unsolvable column.
    pub fn solve_right(&self, y: &FieldMatrix) -> Result<FieldMatrix> {
        if self.p != y.p || self.rows != y.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve {}x{} against rhs {}x{}",
                self.rows, self.cols, y.rows, y.cols
            )));
        }
        let aug = self.hstack(y)?;
        let red = aug.rref();
        let n = self.cols;
        // consistency: a pivot in the rhs block means some y column escapes
        // the column space of self
        if let Some(&c) = red.pivots.iter().find(|&&c| c >= n) {
            return Err(Error::NoSolution { col: c - n });
        }
        let null = self.nullspace();
        let mut x = FieldMatrix::zero(self.p, n, y.cols);
        for j in 0..y.cols {
            // particular solution: free variables zero
            let mut sol = vec![0u8; n];
            for (r, &c) in red.pivots.iter().enumerate() {
                sol[c] = red.matrix.get(r, n + j);
            }
            // reduce by the kernel basis: zeroes every kernel pivot
            // coordinate, which is exactly the lexicographic minimum of the
            // affine solution set
            for nr in 0..null.nrows() {
                let pivot = (0..n).find(|&c| null.get(nr, c) != 0).unwrap();
                let f = sol[pivot];
                if f != 0 {
                    for c in 0..n {
                        sol[c] = self.p.sub(sol[c], self.p.mul(f, null.get(nr, c)));
                    }
                }
            }
            for i in 0..n {
                x.set(i, j, sol[i]);
            }
        }
        debug_assert_eq!(self.mul(&x).unwrap(), *y);
        Ok(x)
    }

    /// Greedy basis extension: the lexicographically first set of `target`
    /// column indices whose addition to `self`'s columns spans the column
    /// space of `[self | target]`.
    pub fn extend_to_basis(&self, target: &FieldMatrix) -> Vec<usize> {
        assert_eq!(self.rows, target.rows, "ambient row count must match");
        let mut tracker = SpanTracker::new(self.p, self.rows);
        for j in 0..self.cols {
            tracker.insert(&self.column(j));
        }
        let mut picked = Vec::new();
        for j in 0..target.cols {
            if tracker.insert(&target.column(j)) {
                picked.push(j);
            }
        }
        picked
    }
}

/// Result of a reduced row-echelon computation.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// The nonzero rows of the echelon form.
    pub fn matrix_without_zero_rows(&self) -> FieldMatrix {
        let data: Vec<u8> = self.matrix.data[..self.rank * self.matrix.cols].to_vec();
        FieldMatrix {
            p: self.matrix.p,
            rows: self.rank,
            cols: self.matrix.cols,
            data,
        }
    }
}

impl std::ops::Deref for Rref {
    type Target = FieldMatrix;
    fn deref(&self) -> &FieldMatrix {
        &self.matrix
    }
}

/// Incremental row-space tracker used by rank computations, containment
/// checks and greedy basis extension. Rows are kept pivot-normalized and
/// sorted by pivot column.
pub struct SpanTracker {
    p: Prime,
    width: usize,
    // (pivot column, reduced row with leading 1)
    rows: Vec<(usize, Vec<u8>)>,
}

impl SpanTracker {
    pub fn new(p: Prime, width: usize) -> SpanTracker {
        SpanTracker { p, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f != 0 {
                for j in 0..self.width {
                    v[j] = self.p.sub(v[j], self.p.mul(f, row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&e| e == 0)
    }

    /// Insert a vector; returns true if it increased the rank.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = self.reduce(v);
        let Some(pivot) = (0..self.width).find(|&j| v[j] != 0) else {
            return false;
        };
        let inv = self.p.inv(v[pivot]);
        for e in v.iter_mut() {
            *e = self.p.mul(*e, inv);
        }
        let pos = self.rows.partition_point(|(pv, _)| *pv < pivot);
        self.rows.insert(pos, (pivot, v));
        true
    }

    /// Feed every row of a matrix.
    pub fn insert_rows(&mut self, m: &FieldMatrix) {
        for i in 0..m.nrows() {
            self.insert(m.row(i));
        }
    }
}
