//! Independent re-check of a [`FlopSequence`].
//!
//! Nothing stored in the sequence is trusted beyond the fans, divisors and
//! parameters; pairings, thresholds, flips and certificates are recomputed.

use alloc::format;
use alloc::string::String;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::Rat;
use crate::certificate::{crepancy_certificate, log_canonical, transport, CrepancyCertificate};
use crate::divisor::{cartier_data, is_ample_relative};
use crate::fan::{validate_fan, Fan};
use crate::flop::execute_flop;
use crate::mmp::{compute_t0, extremal_pairings, MmpConfig, MmpState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// `step` is 1-based; 0 refers to the global parameters.
    Fail {
        step: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        *self == Verdict::Pass
    }
}

fn fail(step: usize, reason: String) -> Verdict {
    Verdict::Fail { step, reason }
}

/// Equality up to the order of cones and refinement rays.
fn same_certificate(a: &CrepancyCertificate, b: &CrepancyCertificate) -> bool {
    if a.status != b.status
        || !a.refinement.same_as(&b.refinement)
        || a.pullback_before.len() != b.pullback_before.len()
        || a.pullback_after.len() != b.pullback_after.len()
    {
        return false;
    }
    let before = transport(&b.refinement, &b.pullback_before, &a.refinement);
    let after = transport(&b.refinement, &b.pullback_after, &a.refinement);
    before.as_deref() == Some(&a.pullback_before[..]) && after.as_deref() == Some(&a.pullback_after[..])
}

pub fn verify_sequence(seq: &crate::mmp::FlopSequence) -> Verdict {
    match check(seq) {
        Ok(()) => Verdict::Pass,
        Err(v) => v,
    }
}

fn check(seq: &crate::mmp::FlopSequence) -> Result<(), Verdict> {
    let config = &seq.config;
    let source = &seq.source;
    let b = &seq.boundary;
    let target =
        seq.target.reindexed(source.rays()).ok_or_else(|| fail(0, "source and target ray sets differ".into()))?;

    validate_fan(source, &seq.base).map_err(|e| fail(0, format!("source invalid: {e}")))?;
    validate_fan(&target, &seq.base).map_err(|e| fail(0, format!("target invalid: {e}")))?;
    if b.coeffs().len() != source.num_rays()
        || config.l_divisor.0.len() != source.num_rays()
        || config.h.0.len() != source.num_rays()
        || config.l_target.0.len() != target.num_rays()
    {
        return Err(fail(0, "divisor lengths do not match the ray count".into()));
    }
    let kb = log_canonical(source, source, b).expect("same fan");
    let k = cartier_data(source, &kb).map_err(|e| fail(0, format!("{e}")))?.index;
    if k != config.k {
        return Err(fail(0, format!("k = {} but the Cartier index of K+B is {k}", config.k)));
    }
    if config.e != MmpConfig::expected_e(&config.k, source.dim()) {
        return Err(fail(0, format!("e = {} is not 1/(2kd+1)", config.e)));
    }
    if !config.l.is_positive() {
        return Err(fail(0, format!("l = {} is not positive", config.l)));
    }
    if !config.h.is_effective() || !is_ample_relative(source, &config.h).unwrap_or(false) {
        return Err(fail(0, "H is not effective and ample on the source".into()));
    }
    if !config.l_target.is_effective() || !is_ample_relative(&target, &config.l_target).unwrap_or(false) {
        return Err(fail(0, "L' is not effective and ample on the target".into()));
    }
    let transported = transport(&target, &config.l_target.0, source);
    if transported.as_deref() != Some(&config.l_divisor.0[..]) {
        return Err(fail(0, "L is not the strict transform of L'".into()));
    }

    let mut fan: Fan = source.clone();
    let mut last_t0 = None;
    for (i, step) in seq.steps.iter().enumerate() {
        let n = i + 1;
        if !step.before.same_as(&fan) {
            return Err(fail(n, "recorded starting fan differs from the previous result".into()));
        }
        let state = MmpState { fan: fan.clone(), step: i, last_t0: last_t0.clone() };
        let pairings = extremal_pairings(&fan, source, b, config).map_err(|e| fail(n, format!("{e}")))?;
        let Some(p) = pairings.iter().find(|p| p.class.relation == step.ray.class.relation) else {
            return Err(fail(n, "flopped class is not extremal".into()));
        };
        if p.kb != step.ray.kb || p.l != step.ray.l || p.h != step.ray.h {
            return Err(fail(n, "recorded pairings differ from recomputed ones".into()));
        }
        if !p.kb.is_zero() {
            return Err(fail(n, format!("(K+B)·R = {} is not zero", p.kb)));
        }
        let t0 = compute_t0(&state, config, &pairings).map_err(|e| fail(n, format!("{e}")))?;
        if t0 != step.t0 {
            return Err(fail(n, format!("recorded t0 = {} but recomputed {t0}", step.t0)));
        }
        if !p.combined(&config.l, &t0).is_zero() {
            return Err(fail(n, "K+B+lL+t0·H does not vanish on the flopped class".into()));
        }
        if !p.combined(&(&config.e * &config.l), &Rat::zero()).is_negative() {
            return Err(fail(n, "K+B+elL is not negative on the flopped class".into()));
        }
        let after = execute_flop(&fan, &p.class).map_err(|e| fail(n, format!("{e}")))?;
        if !after.same_as(&step.after) {
            return Err(fail(n, "recorded fan after the flop differs from the recomputed flop".into()));
        }
        let cert = crepancy_certificate(&fan, b, &after).map_err(|e| fail(n, format!("{e}")))?;
        if !cert.passed() {
            return Err(fail(n, format!("crepancy certificate fails: {:?}", cert.status)));
        }
        if !same_certificate(&cert, &step.certificate) {
            return Err(fail(n, "recorded certificate differs from the recomputed one".into()));
        }
        let kb_after = log_canonical(&after, source, b).expect("equal ray sets");
        let index = cartier_data(&after, &kb_after).map_err(|e| fail(n, format!("{e}")))?.index;
        if !config.k.is_multiple_of(&index) {
            return Err(fail(n, format!("Cartier index {index} does not divide k = {}", config.k)));
        }
        fan = after;
        last_t0 = Some(t0);
    }

    let state = MmpState { fan: fan.clone(), step: seq.steps.len(), last_t0 };
    let n = seq.steps.len() + 1;
    let pairings = extremal_pairings(&fan, source, b, config).map_err(|e| fail(n, format!("{e}")))?;
    let t0 = compute_t0(&state, config, &pairings).map_err(|e| fail(n, format!("{e}")))?;
    if !t0.is_zero() {
        return Err(fail(n, format!("sequence stops early: t0 = {t0}")));
    }
    if !fan.same_as(&seq.final_fan) {
        return Err(fail(n, "recorded final fan differs from the last step".into()));
    }
    if !fan.same_as(&target) {
        return Err(fail(n, "final fan is not the target".into()));
    }
    Ok(())
}
