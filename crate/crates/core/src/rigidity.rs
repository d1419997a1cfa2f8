//! Exact rigidity thresholds with certificates.
//!
//! Dropping the rank of M below r by edits is the same as moving every row
//! of the edited matrix into some subspace L of dimension at most r-1, so
//! the searches here range over subspaces (Gaussian-binomially many)
//! instead of over edited matrices. A certificate reports the exact
//! threshold: the cheapest edit cost any such L admits, under either the
//! per-row maximum (row rigidity) or the total count (global rigidity).
//! M is (r, t)-rigid precisely when t < threshold.

use rayon::prelude::*;

use crate::budget::{gaussian_binomial, sat_pow, Budget};
use crate::dims::{inner_dimension, DimWitness};
use crate::error::{Error, Result};
use crate::gfmat::{enumerate_subspaces, FieldMatrix, SubspaceBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RigidityKind {
    Row,
    Global,
}

/// Exact rigidity threshold for one (M, r) pair.
#[derive(Debug, Clone)]
pub struct RigidityCertificate {
    pub kind: RigidityKind,
    pub r: usize,
    /// Minimum over all subspaces L with dim(L) <= r-1 of the edit cost
    /// moving every row of M into L (max per row, or total).
    pub threshold: usize,
    /// A minimizing L, first in enumeration order (dimension ascending,
    /// then canonical subspace order).
    pub refuting_l: SubspaceBasis,
    /// Number of subspaces examined.
    pub scanned: u128,
}

impl RigidityCertificate {
    /// M is (r, t)-rigid for this kind iff t < threshold.
    pub fn is_rigid_at(&self, t: usize) -> bool {
        t < self.threshold
    }
}

fn candidate_subspaces(
    m: &FieldMatrix,
    r: usize,
    budget: Budget,
) -> Result<(Vec<SubspaceBasis>, u128)> {
    let p = m.prime();
    let n = m.ncols();
    let max_dim = (r - 1).min(n);
    // predicted elementary visits: every member of every candidate L is
    // compared against every row
    let mut needed: u128 = 0;
    for d in 0..=max_dim {
        let spaces = gaussian_binomial(n, d, p.value() as u64);
        let members = sat_pow(p.value() as u128, d as u32);
        needed = needed
            .saturating_add(spaces.saturating_mul(members).saturating_mul(m.nrows().max(1) as u128));
    }
    budget.check(needed, "rigidity_threshold")?;
    let mut candidates = Vec::new();
    for d in 0..=max_dim {
        candidates.extend(enumerate_subspaces(p, n, d, budget)?);
    }
    Ok((candidates, needed))
}

fn threshold_search(
    m: &FieldMatrix,
    r: usize,
    kind: RigidityKind,
    budget: Budget,
) -> Result<RigidityCertificate> {
    if r == 0 {
        return Err(Error::PreconditionViolated("rank parameter r must be >= 1".into()));
    }
    let (candidates, _) = candidate_subspaces(m, r, budget)?;
    let rows: Vec<&[u8]> = (0..m.nrows()).map(|i| m.row(i)).collect();
    let best = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, l)| {
            let members: Vec<Vec<u8>> = l.members().collect();
            let mut cost = 0usize;
            for row in &rows {
                let d = members
                    .iter()
                    .map(|u| row.iter().zip(u).filter(|(a, b)| a != b).count())
                    .min()
                    .unwrap();
                match kind {
                    RigidityKind::Row => cost = cost.max(d),
                    RigidityKind::Global => cost += d,
                }
            }
            (cost, idx)
        })
        .min()
        .expect("the zero subspace is always a candidate");
    Ok(RigidityCertificate {
        kind,
        r,
        threshold: best.0,
        refuting_l: candidates[best.1].clone(),
        scanned: candidates.len() as u128,
    })
}

/// Exact row-rigidity threshold: min over L (dim <= r-1) of the maximum
/// row distance to L.
pub fn row_rigidity_threshold(m: &FieldMatrix, r: usize, budget: Budget) -> Result<RigidityCertificate> {
    threshold_search(m, r, RigidityKind::Row, budget)
}

/// Exact global-rigidity threshold: min over L (dim <= r-1) of the total
/// row distance to L.
pub fn global_rigidity_threshold(m: &FieldMatrix, r: usize, budget: Budget) -> Result<RigidityCertificate> {
    threshold_search(m, r, RigidityKind::Global, budget)
}

/// The low-rank matrix realizing a refutation: every row of `m` replaced by
/// its nearest member of `l` (first member in coefficient-odometer order
/// among those attaining the minimum distance).
pub fn nearest_matrix(m: &FieldMatrix, l: &SubspaceBasis, budget: Budget) -> Result<FieldMatrix> {
    if l.ambient() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "subspace ambient {} vs {} columns",
            l.ambient(),
            m.ncols()
        )));
    }
    budget.check(
        l.member_count().saturating_mul(m.nrows().max(1) as u128),
        "nearest_matrix",
    )?;
    let members: Vec<Vec<u8>> = l.members().collect();
    let mut rows = Vec::with_capacity(m.nrows());
    for i in 0..m.nrows() {
        let row = m.row(i);
        let nearest = members
            .iter()
            .min_by_key(|u| row.iter().zip(u.iter()).filter(|(a, b)| a != b).count())
            .unwrap();
        rows.push(nearest.clone());
    }
    FieldMatrix::from_rows(m.prime(), &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrongMethod {
    /// Via the inner-dimension oracle: strongly rigid iff d_M(t) <= rank - r.
    /// Requires full column rank.
    InnerDim,
    /// Via full enumeration of GL(n, p): row rigidity of M*T for every
    /// invertible T.
    GlEnum,
}

#[derive(Debug, Clone)]
pub enum StrongEvidence {
    InnerDim(DimWitness),
    GlSweep {
        checked: u128,
        /// Least invertible T (lexicographic) whose M*T fails row rigidity,
        /// with that failure's certificate.
        counterexample: Option<(FieldMatrix, RigidityCertificate)>,
    },
}

#[derive(Debug, Clone)]
pub struct StrongRigidity {
    pub rigid: bool,
    pub method: StrongMethod,
    pub evidence: StrongEvidence,
}

/// All invertible n x n matrices over GF(p), lexicographic order.
pub fn enumerate_gl(m_template: &FieldMatrix, n: usize, budget: Budget) -> Result<Vec<FieldMatrix>> {
    let p = m_template.prime();
    let total = sat_pow(p.value() as u128, (n * n) as u32);
    budget.check(total, "enumerate_gl")?;
    let mut out = Vec::new();
    let mut entries = vec![0u8; n * n];
    loop {
        let cand = FieldMatrix::from_entries(p, n, n, entries.clone())?;
        if cand.rank() == n {
            out.push(cand);
        }
        if !crate::stepper::next_digits(&mut entries, p.value()) {
            return Ok(out);
        }
    }
}

/// Is M (r, t)-strongly row rigid: does M*T stay (r, t)-row rigid for every
/// invertible T?
pub fn strong_row_rigidity(
    m: &FieldMatrix,
    r: usize,
    t: usize,
    method: StrongMethod,
    budget: Budget,
) -> Result<StrongRigidity> {
    match method {
        StrongMethod::InnerDim => {
            let rank = m.rank();
            if rank < m.ncols() {
                return Err(Error::RankDeficient { rank, cols: m.ncols() });
            }
            let w = inner_dimension(m, t, budget)?;
            let rigid = r <= rank && w.value <= rank - r;
            Ok(StrongRigidity { rigid, method, evidence: StrongEvidence::InnerDim(w) })
        }
        StrongMethod::GlEnum => {
            let n = m.ncols();
            let gl = enumerate_gl(m, n, budget)?;
            // every M*T has M's shape, so one pre-flight covers the whole sweep
            candidate_subspaces(m, r, budget)?;
            let failure = gl
                .par_iter()
                .enumerate()
                .filter_map(|(idx, tmat)| {
                    let mt = m.mul(tmat).expect("square T matches column count");
                    let cert = row_rigidity_threshold(&mt, r, budget)
                        .expect("budget pre-checked for this shape");
                    (!cert.is_rigid_at(t)).then_some((idx, cert))
                })
                .min_by_key(|(idx, _)| *idx);
            let counterexample = failure.map(|(idx, cert)| (gl[idx].clone(), cert));
            Ok(StrongRigidity {
                rigid: counterexample.is_none(),
                method,
                evidence: StrongEvidence::GlSweep { checked: gl.len() as u128, counterexample },
            })
        }
    }
}

/// Checks the consequence of a non-rigid decomposition: if M = A + B with
/// A t-row-sparse, rank(B) <= r and M of full column rank n, the inner
/// dimension of M at sparsity t must be at least n - 2r. Returns whether
/// that bound holds (a `false` is a falsification event).
pub fn decomposition_forces_inner_dim(
    m: &FieldMatrix,
    a: &FieldMatrix,
    b: &FieldMatrix,
    r: usize,
    t: usize,
    budget: Budget,
) -> Result<bool> {
    let sum = a.add(b)?;
    if sum != *m {
        return Err(Error::PreconditionViolated("A + B does not reproduce M".into()));
    }
    if !a.is_row_sparse(t) {
        return Err(Error::PreconditionViolated(format!("A is not {t}-row sparse")));
    }
    if b.rank() > r {
        return Err(Error::PreconditionViolated(format!(
            "rank(B) = {} exceeds r = {r}",
            b.rank()
        )));
    }
    let n = m.ncols();
    if m.rank() != n {
        return Err(Error::PreconditionViolated(format!(
            "M must have full column rank, rank {} < {n}",
            m.rank()
        )));
    }
    let d = inner_dimension(m, t, budget)?;
    Ok(d.value + 2 * r >= n)
}
