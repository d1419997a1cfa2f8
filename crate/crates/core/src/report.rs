//! JSON views of certificates and outcomes.
//!
//! Reports embed matrices as the canonical text format inside JSON strings
//! so a report is self-contained, and digests identify inputs. JSON
//! objects serialize with sorted keys, so identical outcomes give
//! byte-identical reports.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::amplify::LinearLdc;
use crate::dims::{DimWitness, OuterDim};
use crate::ds::{CountingBranch, DsViolation, LinearDs, SumsetOutcome};
use crate::extract::{Cover, DsLowerOutcome, ExtractOutcome, RigidSubmatrix};
use crate::gfmat::{FieldMatrix, SubspaceBasis};
use crate::pipeline::{DsLbOutcome, SquarePipeline};
use crate::rigidity::{RigidityCertificate, RigidityKind, StrongEvidence, StrongRigidity};

pub fn matrix_digest(m: &FieldMatrix) -> String {
    let mut h = Sha256::new();
    h.update(m.to_text().as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn matrix_value(m: &FieldMatrix) -> Value {
    json!({
        "p": m.prime().value(),
        "m": m.nrows(),
        "n": m.ncols(),
        "text": m.to_text(),
    })
}

pub fn subspace_value(s: &SubspaceBasis) -> Value {
    json!({
        "ambient": s.ambient(),
        "dim": s.dim(),
        "basis": matrix_value(s.basis()),
    })
}

pub fn dim_witness_value(w: &DimWitness) -> Value {
    json!({
        "value": w.value,
        "witness": matrix_value(w.witness.matrix()),
        "witness_sparsity": w.witness.sparsity(),
        "intersection_or_cover": subspace_value(&w.intersection_or_cover),
        "exhausted": w.exhausted.to_string(),
    })
}

pub fn outer_dim_value(d: &OuterDim) -> Value {
    match d {
        OuterDim::Found(w) => json!({ "kind": "found", "certificate": dim_witness_value(w) }),
        OuterDim::AboveMax { s_max, exhausted } => json!({
            "kind": "above-max",
            "s_max": s_max,
            "exhausted": exhausted.to_string(),
        }),
    }
}

pub fn rigidity_value(c: &RigidityCertificate) -> Value {
    json!({
        "kind": match c.kind { RigidityKind::Row => "row", RigidityKind::Global => "global" },
        "r": c.r,
        "threshold": c.threshold,
        "refuting_l": subspace_value(&c.refuting_l),
        "scanned": c.scanned.to_string(),
    })
}

pub fn strong_value(s: &StrongRigidity) -> Value {
    let evidence = match &s.evidence {
        StrongEvidence::InnerDim(w) => json!({
            "method": "inner-dim",
            "inner": dim_witness_value(w),
        }),
        StrongEvidence::GlSweep { checked, counterexample } => json!({
            "method": "gl-enum",
            "checked": checked.to_string(),
            "counterexample": counterexample.as_ref().map(|(t, cert)| json!({
                "transform": matrix_value(t),
                "certificate": rigidity_value(cert),
            })),
        }),
    };
    json!({ "rigid": s.rigid, "evidence": evidence })
}

pub fn ds_value(ds: &LinearDs) -> Value {
    json!({
        "s": ds.space(),
        "t": ds.probes(),
        "preproc": matrix_value(ds.preproc()),
        "query": matrix_value(ds.query()),
    })
}

pub fn violations_value(violations: &[DsViolation]) -> Value {
    let items: Vec<Value> = violations
        .iter()
        .map(|v| match v {
            DsViolation::Shape(s) => json!({ "kind": "shape", "detail": s }),
            DsViolation::Sparsity { row, weight, bound } => json!({
                "kind": "sparsity", "row": row, "weight": weight, "bound": bound,
            }),
            DsViolation::Entry { row, col, expected, got } => json!({
                "kind": "entry", "row": row, "col": col, "expected": expected, "got": got,
            }),
        })
        .collect();
    json!(items)
}

pub fn sumset_value(o: &SumsetOutcome) -> Value {
    match o {
        SumsetOutcome::Evasive { scanned } => {
            json!({ "kind": "evasive", "scanned": scanned.to_string() })
        }
        SumsetOutcome::Witness(w) => json!({
            "kind": "witness",
            "points": w.points,
            "covered": w.covered.iter().map(|row| {
                row.iter().map(|(i, c)| json!([i, c])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        }),
    }
}

pub fn counting_branch_value(b: &CountingBranch) -> Value {
    match b {
        CountingBranch::Partitioned { t, cells } => {
            json!({ "kind": "partitioned", "t": t, "cells": cells })
        }
        CountingBranch::Trivial => json!({ "kind": "trivial" }),
    }
}

pub fn rigid_submatrix_value(r: &RigidSubmatrix) -> Value {
    json!({
        "matrix": matrix_value(&r.matrix),
        "source_columns": r.source_columns,
        "iteration": r.iteration,
        "nominal_width": r.nominal_width,
        "r": r.threshold_r,
        "t": r.sparsity_t,
        "inner": dim_witness_value(&r.inner_cert),
        "row_rigidity": rigidity_value(&r.row_cert),
    })
}

pub fn cover_value(c: &Cover) -> Value {
    json!({
        "cover": matrix_value(c.cover.matrix()),
        "coeffs": matrix_value(&c.coeffs),
        "total_sparsity": c.total_sparsity,
        "sparsity_bound": c.sparsity_bound,
        "total_space": c.total_space,
        "space_bound": c.space_bound,
        "iterations": c.per_iteration.len(),
    })
}

pub fn extract_value(o: &ExtractOutcome) -> Value {
    match o {
        ExtractOutcome::RigidSubmatrix(r) => {
            json!({ "kind": "rigid-submatrix", "certificate": rigid_submatrix_value(r) })
        }
        ExtractOutcome::Cover(c) => json!({ "kind": "cover", "certificate": cover_value(c) }),
    }
}

pub fn ds_lower_value(o: &DsLowerOutcome) -> Value {
    json!({
        "k_iters": o.k_iters,
        "outcome": extract_value(&o.outcome),
        "strong": o.strong_cert.as_ref().map(strong_value),
        "implied_ds": o.implied_ds.as_ref().map(ds_value),
    })
}

pub fn ldc_value(l: &LinearLdc) -> Value {
    json!({
        "generator": matrix_value(l.generator()),
        "q": l.queries(),
        "delta": l.delta().to_string(),
        "verified": l.is_verified(),
        "code_length": l.code_length(),
        "message_length": l.message_length(),
    })
}

pub fn ds_lb_value(o: &DsLbOutcome) -> Value {
    match o {
        DsLbOutcome::HypothesisFails { strong } => json!({
            "kind": "hypothesis-fails",
            "strong": strong_value(strong),
        }),
        DsLbOutcome::LowerBound { strong, outer, s_max, t } => json!({
            "kind": "lower-bound",
            "strong": strong_value(strong),
            "outer": outer_dim_value(outer),
            "s_max": s_max,
            "t": t,
            "statement": format!("no ({s_max}, {t}) linear data structure computes this map"),
        }),
    }
}

pub fn square_pipeline_value(o: &SquarePipeline) -> Value {
    json!({
        "ds_stage": ds_lower_value(&o.ds_stage),
        "square_stage": o.square_stage.as_ref().map(|s| json!({
            "ldc": ldc_value(&s.ldc),
            "encoded": matrix_value(&s.encoded),
            "copies": s.copies,
            "stacked": matrix_value(&s.stacked),
            "row_threshold_before": rigidity_value(&s.row_threshold_before),
            "amplified_floor": s.amplified_floor,
            "global_encoded": rigidity_value(&s.global_cert_encoded),
            "global_stacked": rigidity_value(&s.global_cert_stacked),
        })),
    })
}
