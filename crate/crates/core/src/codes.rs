//! Desk-scale linear code catalog and the code-based strongly rigid
//! matrices built from generator columns.
//!
//! Minimum distances are always computed by exhausting the nonzero
//! codewords, never trusted from the catalog; p^k is capped at 2^12 so
//! that stays instant.

use crate::budget::sat_pow;
use crate::error::{Error, Result};
use crate::gfmat::{FieldMatrix, Prime};

const MAX_CODEWORDS: u128 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    /// Two blocks of four repeated coordinates: length 8, dimension 2,
    /// rate 1/4.
    RepetitionBlock,
    /// The [7, 4, 3] Hamming code.
    Hamming74,
    /// The [8, 4, 4] extended Hamming code.
    ExtendedHamming84,
    /// Caller-supplied generator.
    UserGenerator,
}

impl CodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            CodeKind::RepetitionBlock => "repetition-block",
            CodeKind::Hamming74 => "hamming74",
            CodeKind::ExtendedHamming84 => "extended-hamming84",
            CodeKind::UserGenerator => "user-generator",
        }
    }

    pub fn parse(s: &str) -> Result<CodeKind> {
        match s {
            "repetition-block" | "repetition_block" => Ok(CodeKind::RepetitionBlock),
            "hamming74" => Ok(CodeKind::Hamming74),
            "extended-hamming84" | "extended_hamming84" => Ok(CodeKind::ExtendedHamming84),
            other => Err(Error::Parse(format!("unknown code kind {other:?}"))),
        }
    }
}

/// A linear code presented by generator columns: G is n_code x k_code and
/// the codewords are G * message.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub p: Prime,
    pub length: usize,
    pub dimension: usize,
    pub generator: FieldMatrix,
    /// Exhaustively computed minimum Hamming weight of a nonzero codeword.
    pub min_distance: usize,
}

fn compute_min_distance(g: &FieldMatrix) -> Result<usize> {
    let p = g.prime();
    let k = g.ncols();
    let total = sat_pow(p.value() as u128, k as u32);
    if total > MAX_CODEWORDS {
        return Err(Error::PreconditionViolated(format!(
            "{total} codewords exceed the exhaustive-distance cap {MAX_CODEWORDS}"
        )));
    }
    let mut msg = vec![0u8; k];
    let mut min = usize::MAX;
    // advance first: the zero message is not a codeword to weigh
    while crate::stepper::next_digits(&mut msg, p.value()) {
        let word = g.mul_vec(&msg)?;
        let w = word.iter().filter(|&&e| e != 0).count();
        min = min.min(w);
    }
    Ok(min)
}

fn finish(kind: CodeKind, g: FieldMatrix) -> Result<CodeSpec> {
    let k = g.ncols();
    if g.rank() != k {
        return Err(Error::RankDeficient { rank: g.rank(), cols: k });
    }
    let min_distance = compute_min_distance(&g)?;
    Ok(CodeSpec {
        kind,
        p: g.prime(),
        length: g.nrows(),
        dimension: k,
        generator: g,
        min_distance,
    })
}

/// Build a catalog code over GF(p).
pub fn build_code(kind: CodeKind, p: Prime) -> Result<CodeSpec> {
    match kind {
        CodeKind::RepetitionBlock => {
            let mut g = FieldMatrix::zero(p, 8, 2);
            for i in 0..4 {
                g.set(i, 0, 1);
                g.set(4 + i, 1, 1);
            }
            finish(kind, g)
        }
        CodeKind::Hamming74 => {
            if p.value() != 2 {
                return Err(Error::UnsupportedCodeKind { p: p.value() });
            }
            let mut g = FieldMatrix::zero(p, 7, 4);
            for i in 0..4 {
                g.set(i, i, 1);
            }
            for (row, parity) in [(4, [1, 1, 0, 1]), (5, [1, 0, 1, 1]), (6, [0, 1, 1, 1])] {
                for (j, &v) in parity.iter().enumerate() {
                    g.set(row, j, v);
                }
            }
            finish(kind, g)
        }
        CodeKind::ExtendedHamming84 => {
            let base = build_code(CodeKind::Hamming74, p)?;
            // overall parity row: sum of the seven code coordinates
            let mut g = FieldMatrix::zero(p, 8, 4);
            for i in 0..7 {
                for j in 0..4 {
                    g.set(i, j, base.generator.get(i, j));
                }
            }
            for j in 0..4 {
                let mut acc = 0u8;
                for i in 0..7 {
                    acc = p.add(acc, base.generator.get(i, j));
                }
                g.set(7, j, acc);
            }
            finish(kind, g)
        }
        CodeKind::UserGenerator => Err(Error::Parse(
            "user generators go through build_user_code".into(),
        )),
    }
}

/// Wrap a caller-supplied generator, validating rank and computing the
/// distance.
pub fn build_user_code(g: FieldMatrix) -> Result<CodeSpec> {
    finish(CodeKind::UserGenerator, g)
}

/// The code-based rigidity candidate: the generator itself, columns being
/// a basis of the code, ready for rigidity certification.
pub fn code_matrix(code: &CodeSpec) -> FieldMatrix {
    code.generator.clone()
}

pub fn catalog(p: Prime) -> Vec<CodeSpec> {
    [CodeKind::RepetitionBlock, CodeKind::Hamming74, CodeKind::ExtendedHamming84]
        .into_iter()
        .filter_map(|kind| build_code(kind, p).ok())
        .collect()
}
