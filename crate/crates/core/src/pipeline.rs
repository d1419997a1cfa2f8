//! End-to-end implication chains, each stage re-verified.

use num_rational::Ratio;

use crate::amplify::{amplified_floor, apply_ldc, hadamard_ldc, stack_square, LinearLdc};
use crate::budget::Budget;
use crate::dims::{outer_dimension, OuterDim};
use crate::error::{Error, Result};
use crate::extract::{ds_lower_to_rigid, DsLowerOutcome, ExtractOutcome};
use crate::gfmat::FieldMatrix;
use crate::rigidity::{
    global_rigidity_threshold, row_rigidity_threshold, strong_row_rigidity, RigidityCertificate,
    StrongMethod, StrongRigidity,
};

/// Rigidity-to-data-structure direction: strong row rigidity at (r, t)
/// forces outer dimension at least n + r, hence no (n + r - 1, t) linear
/// data structure.
#[derive(Debug, Clone)]
pub enum DsLbOutcome {
    /// The matrix is not strongly rigid at (r, t); no bound follows.
    HypothesisFails { strong: StrongRigidity },
    LowerBound {
        strong: StrongRigidity,
        /// AboveMax at s_max = n + r - 1: the exhaustive confirmation.
        outer: OuterDim,
        s_max: usize,
        t: usize,
    },
}

pub fn pipeline_rigid_to_ds_lb(
    m: &FieldMatrix,
    r: usize,
    t: usize,
    budget: Budget,
) -> Result<DsLbOutcome> {
    if r == 0 {
        return Err(Error::PreconditionViolated("r must be >= 1".into()));
    }
    let strong = strong_row_rigidity(m, r, t, StrongMethod::InnerDim, budget)?;
    if !strong.rigid {
        return Ok(DsLbOutcome::HypothesisFails { strong });
    }
    let n = m.ncols();
    let s_max = n + r - 1;
    let outer = outer_dimension(m, t, s_max, budget)?;
    // the dimension inequality d + D >= 2n, with d <= n - r certified
    // above, forces D >= n + r; the exhaustive scan must agree
    if let OuterDim::Found(w) = &outer {
        return Err(Error::InternalVerificationFailed(format!(
            "outer dimension {} at s_max {s_max} contradicts the dimension inequality",
            w.value
        )));
    }
    Ok(DsLbOutcome::LowerBound { strong, outer, s_max, t })
}

/// The square stage of the amplification chain.
#[derive(Debug, Clone)]
pub struct SquareStage {
    pub ldc: LinearLdc,
    pub encoded: FieldMatrix,
    pub copies: usize,
    pub stacked: FieldMatrix,
    pub row_threshold_before: RigidityCertificate,
    pub amplified_floor: usize,
    pub global_cert_encoded: RigidityCertificate,
    pub global_cert_stacked: RigidityCertificate,
}

#[derive(Debug, Clone)]
pub struct SquarePipeline {
    pub ds_stage: DsLowerOutcome,
    /// Present only when the extraction found a rigid submatrix.
    pub square_stage: Option<SquareStage>,
}

/// Data-structure-to-square-rigidity direction: extract a rigid submatrix,
/// encode it through a Hadamard generator, stack to (near) square shape,
/// and certify the global threshold of the result exhaustively.
pub fn pipeline_ds_to_square_rigid(
    m: &FieldMatrix,
    eps: Ratio<u64>,
    t: usize,
    ldc_k: usize,
    r: usize,
    budget: Budget,
) -> Result<SquarePipeline> {
    let ds_stage = ds_lower_to_rigid(m, eps, t, budget)?;
    let rigid = match &ds_stage.outcome {
        ExtractOutcome::Cover(_) => {
            return Ok(SquarePipeline { ds_stage, square_stage: None });
        }
        ExtractOutcome::RigidSubmatrix(rigid) => rigid.clone(),
    };
    if ldc_k != rigid.matrix.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "ldc message length {ldc_k} must equal the submatrix row count {}",
            rigid.matrix.nrows()
        )));
    }
    let ldc = hadamard_ldc(ldc_k, budget)?;
    let encoded = apply_ldc(&ldc, &rigid.matrix)?;

    let row_threshold_before = row_rigidity_threshold(&rigid.matrix, r, budget)?;
    let floor_bound = amplified_floor(&ldc, row_threshold_before.threshold);
    let global_cert_encoded = global_rigidity_threshold(&encoded, r, budget)?;
    if global_cert_encoded.threshold <= floor_bound {
        return Err(Error::InternalVerificationFailed(format!(
            "amplification bound failed: global threshold {} vs floor {floor_bound}",
            global_cert_encoded.threshold
        )));
    }

    let width = rigid.matrix.ncols();
    let copies = encoded.nrows().div_ceil(width).max(1);
    let stacked = stack_square(&encoded, copies)?;
    let global_cert_stacked = global_rigidity_threshold(&stacked, r, budget)?;
    if global_cert_stacked.threshold != copies * global_cert_encoded.threshold {
        return Err(Error::InternalVerificationFailed(format!(
            "stacking additivity failed: {} vs {} copies of {}",
            global_cert_stacked.threshold, copies, global_cert_encoded.threshold
        )));
    }

    Ok(SquarePipeline {
        ds_stage,
        square_stage: Some(SquareStage {
            ldc,
            encoded,
            copies,
            stacked,
            row_threshold_before,
            amplified_floor: floor_bound,
            global_cert_encoded,
            global_cert_stacked,
        }),
    })
}
