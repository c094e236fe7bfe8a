//! Command implementations shared by the binary and the tests.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use toric_flops_core::mmp::FlopSequence;
use toric_flops_core::{
    cartier_data, decompose, intersect, is_ample_relative, is_nef_lp, is_nef_relative, mori_extremal_classes,
    validate_fan, verify_sequence, wall_curve, walls, Boundary, DivisorError, Fan, MmpError, MmpOptions, ToricDivisor,
    Verdict,
};

use crate::enumerate::{enumerate_triangulations, EnumerateError, MAX_RAYS};
use crate::format::{
    rats, to_json_ints, to_json_rats, FanJson, FormatError, JsonInt, JsonRat, ProblemInput, QueryInput, SequenceJson,
};
use crate::graph::{flop_graph, node_label};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_STEP_LIMIT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Mmp(#[from] MmpError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Enumerate(#[from] EnumerateError),
    #[error("verification failed at step {step}: {reason}")]
    Verification { step: usize, reason: String },
}

impl From<DivisorError> for CliError {
    fn from(e: DivisorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Format(FormatError::Json(_) | FormatError::Value(_)) => EXIT_PARSE,
            CliError::Format(FormatError::BaseCone(_)) | CliError::Input(_) => EXIT_HYPOTHESIS,
            CliError::Mmp(MmpError::StepLimit { .. }) => EXIT_STEP_LIMIT,
            CliError::Mmp(e) if e.is_hypothesis_violation() => EXIT_HYPOTHESIS,
            CliError::Enumerate(_) => EXIT_HYPOTHESIS,
            CliError::Write { .. } | CliError::Mmp(_) | CliError::Verification { .. } => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub max_steps: Option<usize>,
    pub seed: Option<u64>,
    pub format: OutputFormat,
    pub trace: bool,
}

/// What a command produced: the artifact and optional diagnostics for stderr.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub output: String,
    pub log: String,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// The number of projective fans on the source rays when that is small
/// enough to enumerate, else 1000.
pub fn default_max_steps(problem: &toric_flops_core::Problem) -> usize {
    if problem.source.num_rays() > MAX_RAYS {
        return 1000;
    }
    match enumerate_triangulations(&problem.base, problem.source.rays()) {
        Ok(fans) if !fans.is_empty() => fans.len(),
        _ => 1000,
    }
}

pub fn ledger_lines(seq: &FlopSequence) -> String {
    let c = &seq.config;
    let mut s = format!("k = {}, e = {}, l = {}\n", c.k, c.e, c.l);
    for (i, step) in seq.steps.iter().enumerate() {
        let _ = writeln!(
            s,
            "step {}: class [{}] t0 = {} (K+B)·R = {} L·R = {} H·R = {} k = {} e = {}",
            i + 1,
            step.ray.class.relation.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            step.t0,
            step.ray.kb,
            step.ray.l,
            step.ray.h,
            c.k,
            c.e,
        );
    }
    s
}

pub fn run_decompose(input: &str, flags: &Flags) -> Result<Outcome, CliError> {
    let parsed = ProblemInput::from_json(input)?;
    let problem = parsed.to_problem()?;
    let max_steps = flags.max_steps.or(parsed.options.max_steps).unwrap_or_else(|| default_max_steps(&problem));
    let seed = flags.seed.or(parsed.options.seed);
    let seq = decompose(&problem, &MmpOptions { max_steps })?;
    let log = if flags.trace { ledger_lines(&seq) } else { String::new() };
    Ok(Outcome { output: pretty(&SequenceJson::from_sequence(&seq, seed)), log })
}

pub fn run_verify(input: &str) -> Result<Outcome, CliError> {
    let seq = SequenceJson::from_json(input)?.to_sequence()?;
    match verify_sequence(&seq) {
        Verdict::Pass => Ok(Outcome { output: format!("PASS ({} steps)\n", seq.steps.len()), log: String::new() }),
        Verdict::Fail { step, reason } => Err(CliError::Verification { step, reason }),
    }
}

fn validated_fan(q: &QueryInput) -> Result<Fan, CliError> {
    let fan = q.fan()?;
    let base = q.base()?;
    validate_fan(&fan, &base).map_err(|e| CliError::Input(format!("fan is invalid: {e}")))?;
    Ok(fan)
}

fn divisor(q: &QueryInput, fan: &Fan) -> Result<ToricDivisor, CliError> {
    let d = q.divisor.as_ref().ok_or_else(|| FormatError::Value("missing field `divisor`".into()))?;
    let d = ToricDivisor(rats(&d.coeffs));
    if d.0.len() != fan.num_rays() {
        return Err(CliError::Input(format!(
            "divisor has {} coefficients but the fan has {} rays",
            d.0.len(),
            fan.num_rays()
        )));
    }
    Ok(d)
}

pub fn run_nef(input: &str) -> Result<Outcome, CliError> {
    let q = QueryInput::from_json(input)?;
    let fan = validated_fan(&q)?;
    let d = divisor(&q, &fan)?;
    let cartier = cartier_data(&fan, &d)?;
    let out = json!({
        "nef": is_nef_relative(&fan, &d)?,
        "nef_lp": is_nef_lp(&fan, &d)?,
        "ample": is_ample_relative(&fan, &d)?,
        "cartier_index": JsonInt(cartier.index),
    });
    Ok(Outcome { output: pretty(&out), log: String::new() })
}

pub fn run_mori(input: &str) -> Result<Outcome, CliError> {
    let q = QueryInput::from_json(input)?;
    let fan = validated_fan(&q)?;
    let mut wall_list = Vec::new();
    for w in walls(&fan).iter().filter(|w| w.is_interior()) {
        let c = wall_curve(&fan, w).map_err(|e| CliError::Input(e.to_string()))?;
        wall_list.push(json!({ "rays": w.rays, "cones": w.cones, "class": to_json_ints(&c.relation) }));
    }
    let mori = mori_extremal_classes(&fan).map_err(|e| CliError::Input(e.to_string()))?;
    let extreme: Vec<Vec<JsonInt>> = mori.extreme.iter().map(|c| to_json_ints(&c.relation)).collect();
    Ok(Outcome { output: pretty(&json!({ "walls": wall_list, "extreme": extreme })), log: String::new() })
}

pub fn run_intersect(input: &str) -> Result<Outcome, CliError> {
    let q = QueryInput::from_json(input)?;
    let fan = validated_fan(&q)?;
    let d = divisor(&q, &fan)?;
    let mori = mori_extremal_classes(&fan).map_err(|e| CliError::Input(e.to_string()))?;
    let classes = match &q.curve {
        Some(c) => {
            let rel = crate::format::ints(c);
            let found = mori
                .generators
                .iter()
                .find(|g| g.relation == rel)
                .ok_or_else(|| CliError::Input(format!("{rel:?} is not the class of a wall curve")))?;
            vec![found.clone()]
        }
        None => mori.extreme.clone(),
    };
    let mut rows = Vec::new();
    for c in &classes {
        let x = intersect(&fan, &d, c).map_err(|e| CliError::Input(e.to_string()))?;
        rows.push(json!({ "class": to_json_ints(&c.relation), "value": JsonRat(x) }));
    }
    Ok(Outcome { output: pretty(&json!({ "intersections": rows })), log: String::new() })
}

pub fn run_enumerate(input: &str, flags: &Flags) -> Result<Outcome, CliError> {
    let q = QueryInput::from_json(input)?;
    let base = q.base()?;
    let rays = q.ray_list()?;
    let fans = enumerate_triangulations(&base, &rays)?;
    let list: Vec<_> = fans.iter().map(|f| json!({ "label": node_label(f), "fan": FanJson::from_fan(f) })).collect();
    let seed = flags.seed.or(q.options.seed);
    Ok(Outcome { output: pretty(&json!({ "count": fans.len(), "seed": seed, "fans": list })), log: String::new() })
}

pub fn run_flop_graph(input: &str, flags: &Flags) -> Result<Outcome, CliError> {
    let q = QueryInput::from_json(input)?;
    let base = q.base()?;
    let rays = q.ray_list()?;
    let boundary: Boundary = q.boundary(rays.len());
    let g = flop_graph(&base, &rays, &boundary)?;
    let output = match flags.format {
        OutputFormat::Dot => g.to_dot(),
        OutputFormat::Json => {
            let nodes: Vec<_> = g
                .nodes
                .iter()
                .zip(&g.witnesses)
                .map(|(f, w)| json!({ "label": node_label(f), "fan": FanJson::from_fan(f), "ample": to_json_rats(&w.0) }))
                .collect();
            let edges: Vec<_> = g
                .edges
                .iter()
                .map(|e| json!({ "a": e.a, "b": e.b, "class": to_json_ints(&e.class), "k_trivial": e.k_trivial }))
                .collect();
            pretty(&json!({
                "seed": flags.seed.or(q.options.seed),
                "nodes": nodes,
                "edges": edges,
                "connected": g.is_connected(),
                "components": g.components().len(),
                "escapes": g.escapes,
            }))
        }
    };
    Ok(Outcome { output, log: String::new() })
}
