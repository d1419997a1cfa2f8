//! Canonical subspace bases and exhaustive subspace enumeration.
//!
//! A subspace of GF(p)^m is represented by the reduced row-echelon form of
//! a basis, so equality of subspaces is equality of representations. The
//! enumeration visits every subspace of a given dimension exactly once, in
//! a fixed canonical order: pivot-column sets in lexicographic order, then
//! free entries counting up in row-major reading order.

use super::{FieldMatrix, Prime, SpanTracker};
use crate::budget::{gaussian_binomial, sat_pow, Budget};
use crate::error::{Error, Result};
use crate::stepper::{next_combination, next_digits};

/// A subspace of GF(p)^ambient in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceBasis {
    basis: FieldMatrix,
}

impl SubspaceBasis {
    /// Zero subspace of GF(p)^ambient.
    pub fn zero(p: Prime, ambient: usize) -> SubspaceBasis {
        SubspaceBasis { basis: FieldMatrix::zero(p, 0, ambient) }
    }

    /// Span of the rows of `m`.
    pub fn from_rows(m: &FieldMatrix) -> SubspaceBasis {
        SubspaceBasis { basis: m.rref().matrix_without_zero_rows() }
    }

    /// Column space of `m`, as a subspace of GF(p)^{nrows}.
    pub fn from_columns(m: &FieldMatrix) -> SubspaceBasis {
        Self::from_rows(&m.transpose())
    }

    /// Construct directly from rows already known to be in RREF with no
    /// zero rows (used by the enumerator, which builds canonical forms).
    fn from_canonical(basis: FieldMatrix) -> SubspaceBasis {
        debug_assert_eq!(basis.rref().matrix_without_zero_rows(), basis);
        SubspaceBasis { basis }
    }

    pub fn prime(&self) -> Prime {
        self.basis.prime()
    }

    pub fn ambient(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// The canonical basis matrix (dim x ambient, RREF).
    pub fn basis(&self) -> &FieldMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut t = SpanTracker::new(self.prime(), self.ambient());
        t.insert_rows(&self.basis);
        t.contains(v)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        let mut t = SpanTracker::new(self.prime(), self.ambient());
        t.insert_rows(&self.basis);
        (0..other.dim()).all(|i| t.contains(other.basis.row(i)))
    }

    /// dim(self + other).
    pub fn union_dim(&self, other: &SubspaceBasis) -> usize {
        let mut t = SpanTracker::new(self.prime(), self.ambient());
        t.insert_rows(&self.basis);
        t.insert_rows(&other.basis);
        t.rank()
    }

    /// dim(self meet other) via the dimension formula.
    pub fn intersection_dim(&self, other: &SubspaceBasis) -> usize {
        self.dim() + other.dim() - self.union_dim(other)
    }

    /// Basis of the intersection. Solves for row-coefficient pairs (a, b)
    /// with a*self = b*other through the kernel of the stacked transpose.
    pub fn intersection(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let p = self.prime();
        let du = self.dim();
        // columns: [self^T | -other^T], kernel rows give (a, b)
        let mut stacked = FieldMatrix::zero(p, self.ambient(), du + other.dim());
        for i in 0..du {
            for j in 0..self.ambient() {
                stacked.set(j, i, self.basis.get(i, j));
            }
        }
        for i in 0..other.dim() {
            for j in 0..self.ambient() {
                stacked.set(j, du + i, p.neg(other.basis.get(i, j)));
            }
        }
        let kernel = stacked.nullspace();
        let mut rows = Vec::new();
        for r in 0..kernel.nrows() {
            let a = &kernel.row(r)[..du];
            let mut v = vec![0u8; self.ambient()];
            for (i, &c) in a.iter().enumerate() {
                if c != 0 {
                    for j in 0..self.ambient() {
                        v[j] = p.add(v[j], p.mul(c, self.basis.get(i, j)));
                    }
                }
            }
            rows.push(v);
        }
        let m = FieldMatrix::from_rows(p, &rows).expect("intersection rows well formed");
        SubspaceBasis::from_rows(&m)
    }

    /// Iterate all p^dim member vectors, coefficient odometer order.
    pub fn members(&self) -> MemberIter<'_> {
        MemberIter {
            space: self,
            coeffs: vec![0; self.dim()],
            done: false,
        }
    }

    pub fn member_count(&self) -> u128 {
        sat_pow(self.prime().value() as u128, self.dim() as u32)
    }
}

pub struct MemberIter<'a> {
    space: &'a SubspaceBasis,
    coeffs: Vec<u8>,
    done: bool,
}

impl Iterator for MemberIter<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let p = self.space.prime();
        let mut v = vec![0u8; self.space.ambient()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                for j in 0..self.space.ambient() {
                    v[j] = p.add(v[j], p.mul(c, self.space.basis.get(i, j)));
                }
            }
        }
        if !next_digits(&mut self.coeffs, p.value()) {
            self.done = true;
        }
        Some(v)
    }
}

/// Minimum Hamming distance from `v` to any member of `L`, by exhaustive
/// scan of all p^dim members.
pub fn distance_to_subspace(v: &[u8], space: &SubspaceBasis, budget: Budget) -> Result<usize> {
    if v.len() != space.ambient() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} vs ambient {}",
            v.len(),
            space.ambient()
        )));
    }
    budget.check(space.member_count(), "distance_to_subspace")?;
    Ok(distance_to_subspace_unchecked(v, space))
}

pub(crate) fn distance_to_subspace_unchecked(v: &[u8], space: &SubspaceBasis) -> usize {
    space
        .members()
        .map(|u| hamming(v, &u))
        .min()
        .expect("member iterator yields at least the zero vector")
}

pub(crate) fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Stream of every `dim`-dimensional subspace of GF(p)^ambient, each
/// exactly once, in canonical order. The total equals the Gaussian
/// binomial `[ambient choose dim]_p`.
pub fn enumerate_subspaces(
    p: Prime,
    ambient: usize,
    dim: usize,
    budget: Budget,
) -> Result<SubspaceIter> {
    if dim > ambient {
        return Err(Error::PreconditionViolated(format!(
            "dim {} exceeds ambient {}",
            dim, ambient
        )));
    }
    let count = gaussian_binomial(ambient, dim, p.value() as u64);
    budget.check(count, "enumerate_subspaces")?;
    Ok(SubspaceIter::new(p, ambient, dim))
}

#[derive(Debug)]
pub struct SubspaceIter {
    p: Prime,
    ambient: usize,
    dim: usize,
    pivots: Vec<usize>,
    free_cells: Vec<(usize, usize)>,
    free_vals: Vec<u8>,
    exhausted: bool,
}

impl SubspaceIter {
    fn new(p: Prime, ambient: usize, dim: usize) -> SubspaceIter {
        let pivots: Vec<usize> = (0..dim).collect();
        let mut it = SubspaceIter {
            p,
            ambient,
            dim,
            pivots,
            free_cells: Vec::new(),
            free_vals: Vec::new(),
            exhausted: false,
        };
        it.reset_free_cells();
        it
    }

    fn reset_free_cells(&mut self) {
        let is_pivot: Vec<bool> = {
            let mut s = vec![false; self.ambient];
            for &c in &self.pivots {
                s[c] = true;
            }
            s
        };
        self.free_cells.clear();
        for (i, &pc) in self.pivots.iter().enumerate() {
            for j in pc + 1..self.ambient {
                if !is_pivot[j] {
                    self.free_cells.push((i, j));
                }
            }
        }
        self.free_vals = vec![0; self.free_cells.len()];
    }

    fn build(&self) -> SubspaceBasis {
        let mut m = FieldMatrix::zero(self.p, self.dim, self.ambient);
        for (i, &pc) in self.pivots.iter().enumerate() {
            m.set(i, pc, 1);
        }
        for (cell, &v) in self.free_cells.iter().zip(&self.free_vals) {
            m.set(cell.0, cell.1, v);
        }
        SubspaceBasis::from_canonical(m)
    }

}

impl Iterator for SubspaceIter {
    type Item = SubspaceBasis;

    fn next(&mut self) -> Option<SubspaceBasis> {
        if self.exhausted {
            return None;
        }
        let out = self.build();
        // free entries count up first; on wrap, move to the next
        // pivot-column combination
        if !next_digits(&mut self.free_vals, self.p.value()) {
            if next_combination(&mut self.pivots, self.ambient) {
                self.reset_free_cells();
            } else {
                self.exhausted = true;
            }
        }
        Some(out)
    }
}
