//! Row-to-global rigidity amplification through linear locally decodable
//! codes.
//!
//! The only property consumed here is the span property: after deleting
//! any delta fraction of the generator's rows, every standard basis vector
//! is still spanned by at most q of the remaining rows. Applying such a
//! generator to each column of a row-rigid matrix spreads one far row over
//! many rows, which is what turns a per-row bound into a total-count bound.

use num_rational::Ratio;
use rayon::prelude::*;

use crate::budget::{sat_binomial, Budget};
use crate::error::{Error, Result};
use crate::gfmat::{FieldMatrix, Prime, SpanTracker};

/// A linear code generator with a declared (q, delta) span property.
#[derive(Debug, Clone)]
pub struct LinearLdc {
    generator: FieldMatrix,
    q_queries: usize,
    delta: Ratio<u64>,
    /// Whether the span property was exhaustively verified at
    /// construction. Large generators may be accepted as declared-only.
    verified: bool,
}

impl LinearLdc {
    /// Construct and exhaustively verify the span property.
    pub fn verified(
        generator: FieldMatrix,
        q_queries: usize,
        delta: Ratio<u64>,
        budget: Budget,
    ) -> Result<LinearLdc> {
        match ldc_span_check(&generator, q_queries, delta, budget)? {
            SpanCheck::Holds { .. } => Ok(LinearLdc { generator, q_queries, delta, verified: true }),
            SpanCheck::Counterexample { removed_rows, basis_index } => {
                Err(Error::PreconditionViolated(format!(
                    "span property fails: removing rows {removed_rows:?} strands e_{basis_index}"
                )))
            }
        }
    }

    /// Accept the parameters as declared, without verification. Reports
    /// downstream carry the unverified flag.
    pub fn declared(generator: FieldMatrix, q_queries: usize, delta: Ratio<u64>) -> LinearLdc {
        LinearLdc { generator, q_queries, delta, verified: false }
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn queries(&self) -> usize {
        self.q_queries
    }

    pub fn delta(&self) -> Ratio<u64> {
        self.delta
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Codeword length (rows of the generator).
    pub fn code_length(&self) -> usize {
        self.generator.nrows()
    }

    /// Message length (columns of the generator).
    pub fn message_length(&self) -> usize {
        self.generator.ncols()
    }
}

/// The Hadamard generator over GF(2): one row per vector a in GF(2)^k, in
/// lexicographic order, so row a computes the inner product with a. Rows a
/// and a + e_i always sum to e_i, which gives 2-query decoding at
/// delta = 1/4.
pub fn hadamard_ldc(k: usize, budget: Budget) -> Result<LinearLdc> {
    if k == 0 || k > 12 {
        return Err(Error::PreconditionViolated(format!("need 1 <= k <= 12, got {k}")));
    }
    let p = Prime::new(2)?;
    let rows = 1usize << k;
    let mut g = FieldMatrix::zero(p, rows, k);
    for a in 0..rows {
        for bit in 0..k {
            // leftmost column is the most significant bit
            if a >> (k - 1 - bit) & 1 == 1 {
                g.set(a, bit, 1);
            }
        }
    }
    let delta = Ratio::new(1, 4);
    match LinearLdc::verified(g.clone(), 2, delta, budget) {
        Ok(ldc) => Ok(ldc),
        Err(Error::BudgetExceeded { .. }) => Ok(LinearLdc::declared(g, 2, delta)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone)]
pub enum SpanCheck {
    Holds { scanned: u128 },
    /// Least violating configuration: removal set in ascending-size then
    /// lexicographic order, and the first stranded basis index.
    Counterexample { removed_rows: Vec<usize>, basis_index: usize },
}

struct SpanSearch<'a> {
    rows: &'a [usize],
    generator: &'a FieldMatrix,
    target: Vec<u8>,
}

impl SpanSearch<'_> {
    // subsets of the kept rows of size <= left, lexicographic
    fn found(&self, start: usize, left: usize, chosen: &mut Vec<usize>) -> bool {
        let mut tracker = SpanTracker::new(self.generator.prime(), self.generator.ncols());
        for &r in chosen.iter() {
            tracker.insert(self.generator.row(r));
        }
        if tracker.contains(&self.target) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for idx in start..self.rows.len() {
            chosen.push(self.rows[idx]);
            if self.found(idx + 1, left - 1, chosen) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
        false
    }
}

fn spans_with_q_rows(rows: &[usize], e_index: usize, q: usize, generator: &FieldMatrix) -> bool {
    let mut target = vec![0u8; generator.ncols()];
    target[e_index] = 1;
    SpanSearch { rows, generator, target }.found(0, q, &mut Vec::new())
}

/// Exhaustively verify the span property of a generator: for every row set
/// R keeping at least a (1 - delta) fraction, and every basis vector e_i,
/// some subset of at most q rows of R spans e_i.
pub fn ldc_span_check(
    generator: &FieldMatrix,
    q_queries: usize,
    delta: Ratio<u64>,
    budget: Budget,
) -> Result<SpanCheck> {
    let m = generator.nrows();
    let n = generator.ncols();
    // |R| >= (1 - delta) m  <=>  |removed| <= floor(delta m)
    let max_removed = ((delta * Ratio::from_integer(m as u64)).floor().to_integer()) as usize;
    let max_removed = max_removed.min(m);
    let mut needed: u128 = 0;
    for j in 0..=max_removed {
        let sets = sat_binomial(m as u64, j as u64);
        let kept = (m - j) as u64;
        let mut per_check: u128 = 0;
        for c in 0..=q_queries.min(kept as usize) {
            per_check = per_check.saturating_add(sat_binomial(kept, c as u64));
        }
        needed = needed.saturating_add(sets.saturating_mul(per_check).saturating_mul(n as u128));
    }
    budget.check(needed, "ldc_span_check")?;

    let mut scanned: u128 = 0;
    for removed_count in 0..=max_removed {
        let mut removal: Vec<usize> = (0..removed_count).collect();
        loop {
            scanned += 1;
            let removed: Vec<bool> = {
                let mut f = vec![false; m];
                for &r in &removal {
                    f[r] = true;
                }
                f
            };
            let kept: Vec<usize> = (0..m).filter(|&r| !removed[r]).collect();
            for i in 0..n {
                if !spans_with_q_rows(&kept, i, q_queries, generator) {
                    return Ok(SpanCheck::Counterexample {
                        removed_rows: removal.clone(),
                        basis_index: i,
                    });
                }
            }
            if !crate::stepper::next_combination(&mut removal, m) {
                break;
            }
        }
    }
    Ok(SpanCheck::Holds { scanned })
}

/// Encode each column of `m` through the LDC generator: E * M.
pub fn apply_ldc(ldc: &LinearLdc, m: &FieldMatrix) -> Result<FieldMatrix> {
    if ldc.generator.ncols() != m.nrows() || ldc.generator.prime() != m.prime() {
        return Err(Error::DimensionMismatch(format!(
            "generator expects {} message symbols, matrix has {} rows",
            ldc.generator.ncols(),
            m.nrows()
        )));
    }
    ldc.generator.mul(m)
}

/// Stack `copies` verbatim repetitions of the columns side by side. Rank
/// is preserved exactly; reducing the result below rank r requires
/// reducing every copy.
pub fn stack_square(m: &FieldMatrix, copies: usize) -> Result<FieldMatrix> {
    if copies == 0 {
        return Err(Error::PreconditionViolated("copies must be >= 1".into()));
    }
    let mut out = m.clone();
    for _ in 1..copies {
        out = out.hstack(m)?;
    }
    if out.rank() != m.rank() {
        return Err(Error::InternalVerificationFailed(
            "stacking changed the rank".into(),
        ));
    }
    Ok(out)
}

/// The amplification inequality checked at desk scale: with row threshold
/// tau = row_rigidity_threshold(M, r), the encoded matrix's global
/// threshold must exceed floor(delta * (tau - 1) * m' / q).
pub fn amplified_floor(ldc: &LinearLdc, row_threshold: usize) -> usize {
    if row_threshold == 0 {
        return 0;
    }
    let bound = ldc.delta
        * Ratio::from_integer((row_threshold - 1) as u64)
        * Ratio::from_integer(ldc.code_length() as u64)
        / Ratio::from_integer(ldc.q_queries as u64);
    bound.floor().to_integer() as usize
}

/// Parallel sweep asserting that encoding commutes with every invertible
/// column transformation: (E*M)*T = E*(M*T) for all T in GL(n, p).
pub fn commutes_with_gl(ldc: &LinearLdc, m: &FieldMatrix, budget: Budget) -> Result<u128> {
    let encoded = apply_ldc(ldc, m)?;
    let gl = crate::rigidity::enumerate_gl(m, m.ncols(), budget)?;
    let bad = gl
        .par_iter()
        .find_map_any(|t| {
            let lhs = encoded.mul(t).expect("square T");
            let rhs = apply_ldc(ldc, &m.mul(t).expect("square T")).expect("shapes fixed");
            (lhs != rhs).then_some(())
        });
    if bad.is_some() {
        return Err(Error::InternalVerificationFailed(
            "encoding failed to commute with a basis change".into(),
        ));
    }
    Ok(gl.len() as u128)
}
