//! JSON encodings.
//!
//! Integers are JSON numbers, or decimal strings when they do not fit in an
//! `i64`. Rationals are read as `[num, den]`, `"p/q"`, `"p"` or a bare
//! integer, and always written as `[num, den]` in lowest terms.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use toric_flops_core::certificate::{transport, CertificateStatus, CrepancyCertificate};
use toric_flops_core::mmp::{extremal_pairings, FlopSequence, FlopStep, MmpConfig, RayPairings};
use toric_flops_core::{BaseCone, Boundary, CurveClass, Fan, FanError, Int, IntVec, Rat, ToricDivisor};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Value(String),
    #[error("invalid base cone: {0}")]
    BaseCone(FanError),
}

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError::Value(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub Int);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRat(pub Rat);

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(u64),
    Text(String),
}

impl IntRepr {
    fn into_int(self) -> Result<Int, String> {
        match self {
            IntRepr::Small(x) => Ok(Int::from(x)),
            IntRepr::Big(x) => Ok(Int::from(x)),
            IntRepr::Text(s) => parse_int(&s),
        }
    }
}

fn parse_int(s: &str) -> Result<Int, String> {
    let t = s.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not an integer: {s:?}"));
    }
    t.parse::<BigInt>().map_err(|e| format!("not an integer: {s:?} ({e})"))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (parse_int(n)?, parse_int(d)?),
        None => (parse_int(s)?, Int::from(1)),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(n, d))
}

fn int_to_json(x: &Int) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        IntRepr::deserialize(d)?.into_int().map(JsonInt).map_err(serde::de::Error::custom)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        int_to_json(&self.0).serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Pair(IntRepr, IntRepr),
    Whole(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = match RatRepr::deserialize(d)? {
            RatRepr::Pair(n, den) => {
                let n = n.into_int().map_err(serde::de::Error::custom)?;
                let den = den.into_int().map_err(serde::de::Error::custom)?;
                if den.is_zero() {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Rat::new(n, den)
            }
            RatRepr::Whole(x) => Rat::from_integer(Int::from(x)),
            RatRepr::Text(s) => parse_rat(&s).map_err(serde::de::Error::custom)?,
        };
        Ok(JsonRat(r))
    }
}

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [int_to_json(self.0.numer()), int_to_json(self.0.denom())].serialize(s)
    }
}

pub fn ints(v: &[JsonInt]) -> IntVec {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn rats(v: &[JsonRat]) -> Vec<Rat> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn to_json_ints(v: &[Int]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

pub fn to_json_rats(v: &[Rat]) -> Vec<JsonRat> {
    v.iter().cloned().map(JsonRat).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<Vec<JsonInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanJson {
    pub fn to_fan(&self) -> Fan {
        Fan::new(self.rays.iter().map(|r| ints(r)).collect(), self.max_cones.clone())
    }

    pub fn from_fan(fan: &Fan) -> Self {
        Self { rays: fan.rays().iter().map(|r| to_json_ints(r)).collect(), max_cones: fan.cones().to_vec() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffsJson {
    pub coeffs: Vec<JsonRat>,
}

impl CoeffsJson {
    pub fn from_coeffs(c: &[Rat]) -> Self {
        Self { coeffs: to_json_rats(c) }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OptionsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Input of `decompose`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemInput {
    pub dim: usize,
    pub base_cone: Vec<Vec<JsonInt>>,
    pub source: FanJson,
    pub target: FanJson,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<CoeffsJson>,
    #[serde(rename = "L_target", default, skip_serializing_if = "Option::is_none")]
    pub l_target: Option<CoeffsJson>,
    #[serde(rename = "H_source", default, skip_serializing_if = "Option::is_none")]
    pub h_source: Option<CoeffsJson>,
    #[serde(default)]
    pub options: OptionsJson,
}

pub fn base_cone(dim: usize, gens: &[Vec<JsonInt>]) -> Result<BaseCone, FormatError> {
    let gens: Vec<IntVec> = gens.iter().map(|g| ints(g)).collect();
    if let Some(g) = gens.iter().find(|g| g.len() != dim) {
        return Err(bad(format!("base cone generator {g:?} does not have dimension {dim}")));
    }
    BaseCone::new(gens).map_err(FormatError::BaseCone)
}

fn check_fan_dim(name: &str, fan: &FanJson, dim: usize) -> Result<(), FormatError> {
    match fan.rays.iter().position(|r| r.len() != dim) {
        Some(i) => Err(bad(format!("{name} ray {i} does not have dimension {dim}"))),
        None => Ok(()),
    }
}

impl ProblemInput {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let p: ProblemInput = serde_json::from_str(text)?;
        check_fan_dim("source", &p.source, p.dim)?;
        check_fan_dim("target", &p.target, p.dim)?;
        Ok(p)
    }

    pub fn to_problem(&self) -> Result<toric_flops_core::Problem, FormatError> {
        let source = self.source.to_fan();
        let boundary = match &self.boundary {
            Some(b) => Boundary(rats(&b.coeffs)),
            None => Boundary::zero(source.num_rays()),
        };
        Ok(toric_flops_core::Problem {
            base: base_cone(self.dim, &self.base_cone)?,
            target: self.target.to_fan(),
            source,
            boundary,
            l_target: self.l_target.as_ref().map(|c| ToricDivisor(rats(&c.coeffs))),
            h_source: self.h_source.as_ref().map(|c| ToricDivisor(rats(&c.coeffs))),
        })
    }
}

/// Input of the single-fan commands (`nef`, `mori`, `intersect`) and of the
/// enumeration commands. A problem file is accepted too: its source fan and
/// boundary are used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryInput {
    pub dim: usize,
    #[serde(default)]
    pub base_cone: Option<Vec<Vec<JsonInt>>>,
    #[serde(default, alias = "source")]
    pub fan: Option<FanJson>,
    /// Ray list for enumeration; defaults to the fan's rays.
    #[serde(default)]
    pub rays: Option<Vec<Vec<JsonInt>>>,
    #[serde(default)]
    pub divisor: Option<CoeffsJson>,
    /// Relation vector of a curve class.
    #[serde(default)]
    pub curve: Option<Vec<JsonInt>>,
    #[serde(rename = "B", default)]
    pub boundary: Option<CoeffsJson>,
    #[serde(default)]
    pub options: OptionsJson,
}

impl QueryInput {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let q: QueryInput = serde_json::from_str(text)?;
        if let Some(f) = &q.fan {
            check_fan_dim("fan", f, q.dim)?;
        }
        if let Some(r) = &q.rays {
            if let Some(i) = r.iter().position(|r| r.len() != q.dim) {
                return Err(bad(format!("ray {i} does not have dimension {}", q.dim)));
            }
        }
        Ok(q)
    }

    pub fn fan(&self) -> Result<Fan, FormatError> {
        self.fan.as_ref().map(FanJson::to_fan).ok_or_else(|| bad("missing field `fan`"))
    }

    pub fn ray_list(&self) -> Result<Vec<IntVec>, FormatError> {
        match (&self.rays, &self.fan) {
            (Some(r), _) => Ok(r.iter().map(|v| ints(v)).collect()),
            (None, Some(f)) => Ok(f.to_fan().rays().to_vec()),
            (None, None) => Err(bad("missing field `rays` (or `fan`)")),
        }
    }

    /// The given base cone, or the cone spanned by the rays.
    pub fn base(&self) -> Result<BaseCone, FormatError> {
        match &self.base_cone {
            Some(b) => base_cone(self.dim, b),
            None => BaseCone::new(self.ray_list()?).map_err(FormatError::BaseCone),
        }
    }

    pub fn boundary(&self, num_rays: usize) -> Boundary {
        match &self.boundary {
            Some(b) => Boundary(rats(&b.coeffs)),
            None => Boundary::zero(num_rays),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsJson {
    pub k: JsonInt,
    pub e: JsonRat,
    pub l: JsonRat,
    #[serde(rename = "L")]
    pub l_divisor: Vec<JsonRat>,
    #[serde(rename = "L_target", default, skip_serializing_if = "Option::is_none")]
    pub l_target: Option<Vec<JsonRat>>,
    #[serde(rename = "H")]
    pub h: Vec<JsonRat>,
    #[serde(default)]
    pub max_steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatusJson {
    pub result: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<JsonInt>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub refinement_rays: Vec<Vec<JsonInt>>,
    pub refinement_cones: Vec<Vec<usize>>,
    pub pullback_before: Vec<JsonRat>,
    pub pullback_after: Vec<JsonRat>,
    pub status: StatusJson,
}

/// Per-step pairing record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerJson {
    pub t0: JsonRat,
    #[serde(rename = "KB_R")]
    pub kb: JsonRat,
    #[serde(rename = "L_R")]
    pub l: JsonRat,
    #[serde(rename = "H_R")]
    pub h: JsonRat,
    pub k: JsonInt,
    pub e: JsonRat,
    #[serde(rename = "KB_elL_R")]
    pub flip_pairing: JsonRat,
    #[serde(rename = "KB_elL_et0H_R")]
    pub scaled_pairing: JsonRat,
    #[serde(default)]
    pub alternatives: Vec<Vec<JsonInt>>,
    #[serde(default)]
    pub length_bound_holds: bool,
    #[serde(default)]
    pub scaling_klt: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepJson {
    pub ray_class: Vec<JsonInt>,
    pub t0: JsonRat,
    pub fan_after: FanJson,
    pub certificate: CertificateJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<LedgerJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub base_cone: Vec<Vec<JsonInt>>,
    pub source: FanJson,
    pub target: FanJson,
    #[serde(rename = "B")]
    pub boundary: CoeffsJson,
    pub params: ParamsJson,
    pub steps: Vec<StepJson>,
    pub final_fan: FanJson,
}

fn status_json(s: &CertificateStatus) -> StatusJson {
    match s {
        CertificateStatus::Pass => StatusJson { result: "PASS".into(), ray: None },
        CertificateStatus::Fail { ray } => StatusJson { result: "FAIL".into(), ray: Some(to_json_ints(ray)) },
    }
}

fn status_from_json(s: &StatusJson) -> Result<CertificateStatus, FormatError> {
    match (s.result.as_str(), &s.ray) {
        ("PASS", _) => Ok(CertificateStatus::Pass),
        ("FAIL", Some(r)) => Ok(CertificateStatus::Fail { ray: ints(r) }),
        (other, _) => Err(bad(format!("unknown certificate status {other:?}"))),
    }
}

impl SequenceJson {
    pub fn from_sequence(seq: &FlopSequence, seed: Option<u64>) -> Self {
        let c = &seq.config;
        let steps = seq
            .steps
            .iter()
            .map(|s| StepJson {
                ray_class: to_json_ints(&s.ray.class.relation),
                t0: JsonRat(s.t0.clone()),
                fan_after: FanJson::from_fan(&s.after),
                certificate: CertificateJson {
                    refinement_rays: s.certificate.refinement.rays().iter().map(|r| to_json_ints(r)).collect(),
                    refinement_cones: s.certificate.refinement.cones().to_vec(),
                    pullback_before: to_json_rats(&s.certificate.pullback_before),
                    pullback_after: to_json_rats(&s.certificate.pullback_after),
                    status: status_json(&s.certificate.status),
                },
                ledger: Some(LedgerJson {
                    t0: JsonRat(s.t0.clone()),
                    kb: JsonRat(s.ray.kb.clone()),
                    l: JsonRat(s.ray.l.clone()),
                    h: JsonRat(s.ray.h.clone()),
                    k: JsonInt(c.k.clone()),
                    e: JsonRat(c.e.clone()),
                    flip_pairing: JsonRat(s.flip_pairing(c)),
                    scaled_pairing: JsonRat(s.scaled_pairing(c)),
                    alternatives: s.alternatives.iter().map(|a| to_json_ints(a)).collect(),
                    length_bound_holds: s.length_bound_holds,
                    scaling_klt: s.scaling_klt,
                }),
            })
            .collect();
        Self {
            dim: c.dim,
            seed,
            base_cone: seq.base.generators().iter().map(|g| to_json_ints(g)).collect(),
            source: FanJson::from_fan(&seq.source),
            target: FanJson::from_fan(&seq.target),
            boundary: CoeffsJson::from_coeffs(seq.boundary.coeffs()),
            params: ParamsJson {
                k: JsonInt(c.k.clone()),
                e: JsonRat(c.e.clone()),
                l: JsonRat(c.l.clone()),
                l_divisor: to_json_rats(&c.l_divisor.0),
                l_target: Some(to_json_rats(&c.l_target.0)),
                h: to_json_rats(&c.h.0),
                max_steps: c.max_steps,
            },
            steps,
            final_fan: FanJson::from_fan(&seq.final_fan),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the sequence. Steps without a ledger get their pairings
    /// recomputed (zero if the class is not extremal, which the verifier
    /// reports).
    pub fn to_sequence(&self) -> Result<FlopSequence, FormatError> {
        let source = self.source.to_fan();
        let target = self.target.to_fan();
        let p = &self.params;
        let l_divisor = ToricDivisor(rats(&p.l_divisor));
        let l_target = match &p.l_target {
            Some(l) => ToricDivisor(rats(l)),
            None => ToricDivisor(
                transport(&source, &l_divisor.0, &target).ok_or_else(|| bad("source and target ray sets differ"))?,
            ),
        };
        let config = MmpConfig {
            dim: self.dim,
            k: p.k.0.clone(),
            e: p.e.0.clone(),
            l: p.l.0.clone(),
            l_target,
            l_divisor,
            h: ToricDivisor(rats(&p.h)),
            max_steps: p.max_steps,
        };
        let boundary = Boundary(rats(&self.boundary.coeffs));
        let mut before = source.clone();
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let after = s.fan_after.to_fan();
            let relation = ints(&s.ray_class);
            let (kb, l, h) = match &s.ledger {
                Some(g) => (g.kb.0.clone(), g.l.0.clone(), g.h.0.clone()),
                None => extremal_pairings(&before, &source, &boundary, &config)
                    .ok()
                    .and_then(|ps| ps.into_iter().find(|p| p.class.relation == relation))
                    .map(|p| (p.kb, p.l, p.h))
                    .unwrap_or_default(),
            };
            let certificate = CrepancyCertificate {
                refinement: Fan::new(
                    s.certificate.refinement_rays.iter().map(|r| ints(r)).collect(),
                    s.certificate.refinement_cones.clone(),
                ),
                pullback_before: rats(&s.certificate.pullback_before),
                pullback_after: rats(&s.certificate.pullback_after),
                status: status_from_json(&s.certificate.status)?,
            };
            steps.push(FlopStep {
                ray: RayPairings { class: CurveClass { relation, wall: None }, kb, l, h },
                t0: s.t0.0.clone(),
                before: before.clone(),
                after: after.clone(),
                alternatives: s
                    .ledger
                    .as_ref()
                    .map(|g| g.alternatives.iter().map(|a| ints(a)).collect())
                    .unwrap_or_default(),
                length_bound_holds: s.ledger.as_ref().is_some_and(|g| g.length_bound_holds),
                scaling_klt: s.ledger.as_ref().is_some_and(|g| g.scaling_klt),
                certificate,
            });
            before = after;
        }
        Ok(FlopSequence {
            base: base_cone(self.dim, &self.base_cone)?,
            source,
            target,
            boundary,
            config,
            steps,
            final_fan: self.final_fan.to_fan(),
        })
    }
}
