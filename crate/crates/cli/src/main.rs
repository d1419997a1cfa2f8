//! rigx: exact certificates for sparse covers, rigidity thresholds and
//! linear data structure bounds over small prime fields.
//!
//! Every subcommand reads matrices in the `gfmat` text format, runs an
//! exhaustive search under an explicit candidate budget, and prints one
//! JSON report on standard output. Reports are byte-identical across
//! re-runs and thread counts; timing is emitted only with --timings so
//! the default output stays deterministic.
//!
//! Exit codes: 0 outcome produced, 2 precondition or hypothesis failed,
//! 3 budget exceeded, 4 input/format error, 1 internal error.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{json, Value};

use rigx_core::amplify::{hadamard_ldc, ldc_span_check, stack_square, SpanCheck};
use rigx_core::budget::DEFAULT_BUDGET;
use rigx_core::codes::{build_code, catalog, code_matrix, CodeKind};
use rigx_core::dims::{inner_dimension, outer_dimension};
use rigx_core::ds::{counting_lower_search, counting_upper_ds, sumset_evasive, verify_ds, LinearDs};
use rigx_core::extract::{find_rigid_submatrix, succinct_schedule_run};
use rigx_core::gfmat::{FieldMatrix, Prime};
use rigx_core::pipeline::{pipeline_ds_to_square_rigid, pipeline_rigid_to_ds_lb, DsLbOutcome};
use rigx_core::report;
use rigx_core::rigidity::{
    global_rigidity_threshold, row_rigidity_threshold, strong_row_rigidity, StrongMethod,
};
use rigx_core::{Budget, Error};

#[derive(Parser)]
#[command(name = "rigx", version, about)]
struct Cli {
    /// Elementary candidate-visit budget per operation
    /// (env: RIGX_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads (0 = all cores). Outputs never depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Include elapsed_ms in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inner dimension of the matrix's column space at sparsity t.
    InnerDim(MatrixT),
    /// Outer dimension at sparsity t, searching up to --s-max columns.
    OuterDim {
        #[command(flatten)]
        base: MatrixT,
        #[arg(long)]
        s_max: usize,
    },
    /// Rigidity certificates: exact row/global thresholds, or the strong
    /// rigidity decision at (r, t).
    Rigidity {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum)]
        mode: RigidityMode,
        #[arg(long, value_enum, default_value_t = MethodArg::InnerDim)]
        method: MethodArg,
        /// Sparsity parameter, required for --mode strong.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Sumset evasiveness of the matrix's rows by brute force.
    Sumset {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
    },
    /// Verify a data structure file against a target matrix.
    VerifyDs {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        ds: String,
    },
    /// Synthesize the partition-table data structure for the target.
    SynthCounting {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        s: usize,
        /// Rational, e.g. 1 or 1/2.
        #[arg(long)]
        eps: String,
        /// Also write the data structure to this file.
        #[arg(long)]
        emit_ds: Option<String>,
    },
    /// Exhaustively find the hardest m x n problem for space s.
    CountingSearch {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
    },
    /// Run the rigid-submatrix extraction (geometric or explicit schedule).
    Extract {
        #[arg(long)]
        matrix: String,
        /// Rational in (0,1), e.g. 1/2. Required unless --schedule is given.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Explicit schedule "r1,t1;r2,t2;...". Overrides eps/k/t.
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Build the Hadamard generator; --check verifies the span property.
    Ldc {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        check: bool,
    },
    /// Encode a matrix through an LDC and certify the amplification bound.
    Amplify {
        #[arg(long)]
        matrix: String,
        /// Only "hadamard:<k>" is in the catalog.
        #[arg(long)]
        ldc: String,
        #[arg(long)]
        r: usize,
    },
    /// Stack verbatim column copies.
    Stack {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        copies: usize,
    },
    /// Code catalog: emit a generator or list computed distances.
    Code {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long)]
        emit_matrix: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Full chain: extraction, LDC encoding, stacking, exhaustive
    /// certification of the square output.
    PipelineSquare {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        ldc_k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Strong rigidity at (r, t) implies no (n + r - 1, t) data structure.
    PipelineDslb {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct MatrixT {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    t: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum RigidityMode {
    Row,
    Global,
    Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    InnerDim,
    GlEnum,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // worker count is an implementation detail; results never depend on it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let budget = Budget(
        cli.budget
            .or_else(|| std::env::var("RIGX_BUDGET").ok().and_then(|v| v.parse().ok()))
            .unwrap_or(DEFAULT_BUDGET),
    );
    let started = Instant::now();
    match run(&cli.command, budget) {
        Ok((operation, inputs, parameters, outcome, exit)) => {
            let mut top = serde_json::Map::new();
            top.insert("schema".into(), json!(1));
            top.insert("tool".into(), json!("rigx"));
            top.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            top.insert("operation".into(), json!(operation));
            top.insert("budget".into(), json!(budget.0));
            top.insert("inputs".into(), inputs);
            top.insert("parameters".into(), parameters);
            top.insert("outcome".into(), outcome);
            if cli.timings {
                top.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(top)).unwrap());
            exit
        }
        Err(e) => {
            eprintln!("rigx: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                Error::Parse(_) | Error::BadModulus(_) => ExitCode::from(4),
                Error::PreconditionViolated(_)
                | Error::RankDeficient { .. }
                | Error::DimensionMismatch(_)
                | Error::NoSolution { .. }
                | Error::NotACover
                | Error::NotComputingTarget { .. }
                | Error::UnsupportedCodeKind { .. } => ExitCode::from(2),
                Error::InternalVerificationFailed(_) => ExitCode::from(1),
            }
        }
    }
}

type RunOutput = (&'static str, Value, Value, Value, ExitCode);

fn read_matrix(path: &str) -> Result<FieldMatrix, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    FieldMatrix::from_text(&text)
}

fn matrix_input(name: &str, path: &str, m: &FieldMatrix) -> Value {
    json!({
        name: {
            "path": path,
            "sha256": report::matrix_digest(m),
            "p": m.prime().value(),
            "m": m.nrows(),
            "n": m.ncols(),
        }
    })
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || Error::Parse(format!("expected a rational like 1 or 1/2, got {s:?}"));
    match parts.as_slice() {
        [a] => Ok(Ratio::from_integer(a.parse().map_err(|_| bad())?)),
        [a, b] => {
            let num: u64 = a.parse().map_err(|_| bad())?;
            let den: u64 = b.parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(num, den))
        }
        _ => Err(bad()),
    }
}

fn parse_schedule(s: &str) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let mut rs = Vec::new();
    let mut ts = Vec::new();
    if s.is_empty() {
        return Ok((rs, ts));
    }
    for step in s.split(';') {
        let parts: Vec<&str> = step.split(',').collect();
        let [r, t] = parts.as_slice() else {
            return Err(Error::Parse(format!("bad schedule step {step:?}, want r,t")));
        };
        rs.push(r.trim().parse().map_err(|_| Error::Parse(format!("bad r in {step:?}")))?);
        ts.push(t.trim().parse().map_err(|_| Error::Parse(format!("bad t in {step:?}")))?);
    }
    Ok((rs, ts))
}

fn run(command: &Command, budget: Budget) -> Result<RunOutput, Error> {
    let ok = ExitCode::SUCCESS;
    match command {
        Command::InnerDim(args) => {
            let m = read_matrix(&args.matrix)?;
            let w = inner_dimension(&m, args.t, budget)?;
            Ok((
                "inner-dim",
                matrix_input("matrix", &args.matrix, &m),
                json!({ "t": args.t }),
                json!({
                    "op": "inner-dim",
                    "p": m.prime().value(), "m": m.nrows(), "n": m.ncols(), "t": args.t,
                    "value": w.value,
                    "witness": report::matrix_value(w.witness.matrix()),
                    "intersection": report::subspace_value(&w.intersection_or_cover),
                    "exhausted": w.exhausted.to_string(),
                }),
                ok,
            ))
        }
        Command::OuterDim { base, s_max } => {
            let m = read_matrix(&base.matrix)?;
            let d = outer_dimension(&m, base.t, *s_max, budget)?;
            Ok((
                "outer-dim",
                matrix_input("matrix", &base.matrix, &m),
                json!({ "t": base.t, "s_max": s_max }),
                json!({
                    "op": "outer-dim",
                    "p": m.prime().value(), "m": m.nrows(), "n": m.ncols(), "t": base.t,
                    "result": report::outer_dim_value(&d),
                }),
                ok,
            ))
        }
        Command::Rigidity { matrix, r, mode, method, t } => {
            let m = read_matrix(matrix)?;
            let inputs = matrix_input("matrix", matrix, &m);
            match mode {
                RigidityMode::Row | RigidityMode::Global => {
                    let cert = match mode {
                        RigidityMode::Row => row_rigidity_threshold(&m, *r, budget)?,
                        _ => global_rigidity_threshold(&m, *r, budget)?,
                    };
                    Ok((
                        "rigidity",
                        inputs,
                        json!({ "r": r, "mode": match mode { RigidityMode::Row => "row", _ => "global" } }),
                        report::rigidity_value(&cert),
                        ok,
                    ))
                }
                RigidityMode::Strong => {
                    let t = t.ok_or_else(|| {
                        Error::PreconditionViolated("--t is required for --mode strong".into())
                    })?;
                    let method = match method {
                        MethodArg::InnerDim => StrongMethod::InnerDim,
                        MethodArg::GlEnum => StrongMethod::GlEnum,
                    };
                    let s = strong_row_rigidity(&m, *r, t, method, budget)?;
                    Ok((
                        "rigidity",
                        inputs,
                        json!({ "r": r, "t": t, "mode": "strong" }),
                        report::strong_value(&s),
                        ok,
                    ))
                }
            }
        }
        Command::Sumset { matrix, s, t } => {
            let m = read_matrix(matrix)?;
            let rows: Vec<Vec<u8>> = (0..m.nrows()).map(|i| m.row(i).to_vec()).collect();
            let out = sumset_evasive(&rows, m.prime(), m.ncols(), *s, *t, budget)?;
            Ok((
                "sumset",
                matrix_input("matrix", matrix, &m),
                json!({ "s": s, "t": t }),
                report::sumset_value(&out),
                ok,
            ))
        }
        Command::VerifyDs { matrix, ds } => {
            let m = read_matrix(matrix)?;
            let ds_text = fs::read_to_string(ds)
                .map_err(|e| Error::Parse(format!("cannot read {ds}: {e}")))?;
            let parsed = LinearDs::from_text(&ds_text)?;
            let violations = verify_ds(&m, &parsed);
            let mut inputs = matrix_input("matrix", matrix, &m).as_object().unwrap().clone();
            inputs.insert("ds".into(), json!({ "path": ds, "s": parsed.space(), "t": parsed.probes() }));
            Ok((
                "verify-ds",
                Value::Object(inputs),
                json!({}),
                json!({
                    "valid": violations.is_empty(),
                    "violations": report::violations_value(&violations),
                }),
                ok,
            ))
        }
        Command::SynthCounting { matrix, s, eps, emit_ds } => {
            let m = read_matrix(matrix)?;
            let eps = parse_ratio(eps)?;
            let (ds, branch) = counting_upper_ds(&m, *s, eps)?;
            if let Some(path) = emit_ds {
                fs::write(path, ds.to_text())
                    .map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
            }
            Ok((
                "synth-counting",
                matrix_input("matrix", matrix, &m),
                json!({ "s": s, "eps": eps.to_string() }),
                json!({
                    "branch": report::counting_branch_value(&branch),
                    "ds": report::ds_value(&ds),
                    "valid": verify_ds(&m, &ds).is_empty(),
                }),
                ok,
            ))
        }
        Command::CountingSearch { p, n, m, s } => {
            let prime = Prime::new(*p)?;
            let out = counting_lower_search(prime, *n, *m, *s, budget)?;
            Ok((
                "counting-search",
                json!({}),
                json!({ "p": p, "n": n, "m": m, "s": s }),
                json!({
                    "t_min_worst": out.t_min_worst,
                    "hardest": report::matrix_value(&out.hardest),
                    "scanned": out.scanned.to_string(),
                }),
                ok,
            ))
        }
        Command::Extract { matrix, eps, k, t, schedule } => {
            let m = read_matrix(matrix)?;
            let (outcome, params) = if let Some(schedule) = schedule {
                let (rs, ts) = parse_schedule(schedule)?;
                let out = succinct_schedule_run(&m, &rs, &ts, budget)?;
                (out, json!({ "schedule": { "r": rs, "t": ts } }))
            } else {
                let eps = parse_ratio(eps.as_deref().ok_or_else(|| {
                    Error::PreconditionViolated("need --eps/--k/--t or --schedule".into())
                })?)?;
                let k = k.ok_or_else(|| Error::PreconditionViolated("missing --k".into()))?;
                let t = t.ok_or_else(|| Error::PreconditionViolated("missing --t".into()))?;
                let out = find_rigid_submatrix(&m, eps, k, t, budget)?;
                (out, json!({ "eps": eps.to_string(), "k": k, "t": t }))
            };
            Ok((
                "extract",
                matrix_input("matrix", matrix, &m),
                params,
                report::extract_value(&outcome),
                ok,
            ))
        }
        Command::Ldc { k, check } => {
            let ldc = hadamard_ldc(*k, budget)?;
            let check_result = if *check {
                Some(match ldc_span_check(ldc.generator(), ldc.queries(), ldc.delta(), budget)? {
                    SpanCheck::Holds { scanned } => {
                        json!({ "holds": true, "scanned": scanned.to_string() })
                    }
                    SpanCheck::Counterexample { removed_rows, basis_index } => {
                        json!({ "holds": false, "removed_rows": removed_rows, "basis_index": basis_index })
                    }
                })
            } else {
                None
            };
            Ok((
                "ldc",
                json!({}),
                json!({ "k": k, "check": check }),
                json!({ "ldc": report::ldc_value(&ldc), "span_check": check_result }),
                ok,
            ))
        }
        Command::Amplify { matrix, ldc, r } => {
            let m = read_matrix(matrix)?;
            let k = ldc
                .strip_prefix("hadamard:")
                .and_then(|v| v.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown ldc spec {ldc:?}, want hadamard:<k>")))?;
            let ldc = hadamard_ldc(k, budget)?;
            let encoded = rigx_core::amplify::apply_ldc(&ldc, &m)?;
            let row_cert = row_rigidity_threshold(&m, *r, budget)?;
            let floor_bound = rigx_core::amplify::amplified_floor(&ldc, row_cert.threshold);
            let global_cert = global_rigidity_threshold(&encoded, *r, budget)?;
            if global_cert.threshold <= floor_bound {
                return Err(Error::InternalVerificationFailed(format!(
                    "amplification bound failed: {} vs floor {floor_bound}",
                    global_cert.threshold
                )));
            }
            Ok((
                "amplify",
                matrix_input("matrix", matrix, &m),
                json!({ "ldc": format!("hadamard:{k}"), "r": r }),
                json!({
                    "ldc": report::ldc_value(&ldc),
                    "encoded": report::matrix_value(&encoded),
                    "row_threshold": report::rigidity_value(&row_cert),
                    "amplified_floor": floor_bound,
                    "global_threshold": report::rigidity_value(&global_cert),
                }),
                ok,
            ))
        }
        Command::Stack { matrix, copies } => {
            let m = read_matrix(matrix)?;
            let stacked = stack_square(&m, *copies)?;
            Ok((
                "stack",
                matrix_input("matrix", matrix, &m),
                json!({ "copies": copies }),
                json!({ "stacked": report::matrix_value(&stacked), "rank": stacked.rank() }),
                ok,
            ))
        }
        Command::Code { kind, p, emit_matrix, list } => {
            let prime = Prime::new(*p)?;
            if *list {
                let entries: Vec<Value> = catalog(prime)
                    .iter()
                    .map(|c| {
                        json!({
                            "kind": c.kind.name(),
                            "length": c.length,
                            "dimension": c.dimension,
                            "min_distance": c.min_distance,
                        })
                    })
                    .collect();
                return Ok(("code", json!({}), json!({ "p": p, "list": true }), json!(entries), ok));
            }
            let kind = kind
                .as_deref()
                .ok_or_else(|| Error::PreconditionViolated("need --kind or --list".into()))?;
            let code = build_code(CodeKind::parse(kind)?, prime)?;
            let matrix = code_matrix(&code);
            if let Some(path) = emit_matrix {
                fs::write(path, matrix.to_text())
                    .map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
            }
            Ok((
                "code",
                json!({}),
                json!({ "kind": code.kind.name(), "p": p }),
                json!({
                    "length": code.length,
                    "dimension": code.dimension,
                    "min_distance": code.min_distance,
                    "matrix": report::matrix_value(&matrix),
                }),
                ok,
            ))
        }
        Command::PipelineSquare { matrix, eps, t, ldc_k, r } => {
            let m = read_matrix(matrix)?;
            let eps = parse_ratio(eps)?;
            let out = pipeline_ds_to_square_rigid(&m, eps, *t, *ldc_k, *r, budget)?;
            Ok((
                "pipeline-square",
                matrix_input("matrix", matrix, &m),
                json!({ "eps": eps.to_string(), "t": t, "ldc_k": ldc_k, "r": r }),
                report::square_pipeline_value(&out),
                ok,
            ))
        }
        Command::PipelineDslb { matrix, r, t } => {
            let m = read_matrix(matrix)?;
            let out = pipeline_rigid_to_ds_lb(&m, *r, *t, budget)?;
            let exit = match &out {
                DsLbOutcome::HypothesisFails { .. } => ExitCode::from(2),
                DsLbOutcome::LowerBound { .. } => ok,
            };
            Ok((
                "pipeline-dslb",
                matrix_input("matrix", matrix, &m),
                json!({ "r": r, "t": t }),
                report::ds_lb_value(&out),
                exit,
            ))
        }
    }
}
