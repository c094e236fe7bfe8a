//! Flop decomposition by a K-trivial minimal model program with scaling.
//!
//! Setup: `L′` ample on the target and its strict transform `L` on the
//! source, a small `l` keeping `B + lL` klt, `H` ample on the source, `k` the
//! Cartier index of `K + B` and `e = 1/(2kd + 1)`. Each step computes the
//! nef threshold `t₀` over the K-trivial extremal classes that are negative
//! for `K + B + lL`, picks a class where `K + B + lL + t₀H` vanishes, flips it
//! and certifies the flip crepant for `K + B`. The loop ends when
//! `K + B + elL` is nef, which forces the current fan to be the target.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{int, Int, IntVec, Rat};
use crate::certificate::{crepancy_certificate, log_canonical, transport, CrepancyCertificate};
use crate::curve::{intersect, mori_extremal_classes, CurveClass};
use crate::divisor::{cartier_data, find_relative_ample, is_ample_relative, is_nef_relative, ToricDivisor};
use crate::error::MmpError;
use crate::fan::{is_klt_pair, is_terminal_pair, iso_in_codim1, validate_fan, BaseCone, Boundary, Fan};
use crate::flop::execute_flop;

/// A decomposition problem. Divisors are indexed by the source ray order;
/// `l_target` by the target ray order.
#[derive(Debug, Clone)]
pub struct Problem {
    pub base: BaseCone,
    pub source: Fan,
    pub target: Fan,
    pub boundary: Boundary,
    pub l_target: Option<ToricDivisor>,
    pub h_source: Option<ToricDivisor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmpOptions {
    pub max_steps: usize,
}

impl Default for MmpOptions {
    fn default() -> Self {
        Self { max_steps: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpConfig {
    pub dim: usize,
    pub k: Int,
    pub e: Rat,
    pub l: Rat,
    /// Ample on the target, in target ray order.
    pub l_target: ToricDivisor,
    /// Strict transform of `l_target`, in source ray order.
    pub l_divisor: ToricDivisor,
    pub h: ToricDivisor,
    pub max_steps: usize,
}

impl MmpConfig {
    pub fn expected_e(k: &Int, dim: usize) -> Rat {
        Rat::new(Int::one(), int(2) * k * int(dim as i64) + Int::one())
    }
}

#[derive(Debug, Clone)]
pub struct MmpState {
    pub fan: Fan,
    pub step: usize,
    pub last_t0: Option<Rat>,
}

/// Pairings of one extremal class with the divisors driving the program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayPairings {
    pub class: CurveClass,
    /// `(K+B)·R`
    pub kb: Rat,
    /// `L·R`
    pub l: Rat,
    /// `H·R`
    pub h: Rat,
}

impl RayPairings {
    /// `(K+B+sL+tH)·R`
    pub fn combined(&self, s: &Rat, t: &Rat) -> Rat {
        &self.kb + s * &self.l + t * &self.h
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    Flop { ray: Box<RayPairings>, alternatives: Vec<IntVec> },
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlopStep {
    pub ray: RayPairings,
    pub t0: Rat,
    pub before: Fan,
    pub after: Fan,
    /// Other classes achieving `t₀`, not chosen by the tie-break.
    pub alternatives: Vec<IntVec>,
    /// `(K+B+lL)·R ≥ −2d` for the chosen wall-curve normalization.
    pub length_bound_holds: bool,
    /// Whether `B + lL + t₀H` has all coefficients in `[0, 1)`.
    pub scaling_klt: bool,
    pub certificate: CrepancyCertificate,
}

impl FlopStep {
    /// `(K+B+elL)·R`
    pub fn flip_pairing(&self, config: &MmpConfig) -> Rat {
        self.ray.combined(&(&config.e * &config.l), &Rat::zero())
    }

    /// `(K+B+elL+et₀H)·R`
    pub fn scaled_pairing(&self, config: &MmpConfig) -> Rat {
        self.ray.combined(&(&config.e * &config.l), &(&config.e * &self.t0))
    }
}

#[derive(Debug, Clone)]
pub struct FlopSequence {
    pub base: BaseCone,
    pub source: Fan,
    pub target: Fan,
    pub boundary: Boundary,
    pub config: MmpConfig,
    pub steps: Vec<FlopStep>,
    pub final_fan: Fan,
}

impl FlopSequence {
    /// The effective divisor `D = e·l·L` making every step a flip of
    /// `(X, B + D)`.
    pub fn flip_divisor(&self) -> ToricDivisor {
        self.config.l_divisor.scaled(&(&self.config.e * &self.config.l))
    }
}

fn kb_divisor(fan: &Fan, source: &Fan, b: &Boundary) -> ToricDivisor {
    log_canonical(fan, source, b).expect("fans share the source ray set")
}

/// The largest `1/m`, `m ≥ 2` an integer, with every `bᵨ + lLᵨ < 1`.
pub fn scaling_constant(b: &[Rat], l: &[Rat]) -> Rat {
    let mut m = int(2);
    for (b, lc) in b.iter().zip(l) {
        if lc.is_positive() {
            let need = (lc / (Rat::one() - b)).floor().to_integer() + Int::one();
            if need > m {
                m = need;
            }
        }
    }
    Rat::new(Int::one(), m)
}

/// Checks the hypotheses and fixes `k, e, l, L, H`.
///
/// The target must already be expressed in the source ray order.
pub fn setup_parameters(problem: &Problem) -> Result<MmpConfig, MmpError> {
    let Problem { base, source, target, boundary, .. } = problem;
    validate_fan(source, base).map_err(|e| MmpError::InvalidFan { which: "source", source: e })?;
    validate_fan(target, base).map_err(|e| MmpError::InvalidFan { which: "target", source: e })?;
    if source.dim() != target.dim() {
        return Err(MmpError::DimensionMismatch);
    }
    if boundary.coeffs().len() != source.num_rays() {
        return Err(MmpError::BoundaryLength { expected: source.num_rays(), found: boundary.coeffs().len() });
    }
    if !iso_in_codim1(source, target) {
        return Err(MmpError::NotIsoInCodim1);
    }
    if !is_klt_pair(boundary) {
        return Err(MmpError::NotKlt);
    }
    let b_target = Boundary(transport(source, boundary.coeffs(), target).expect("equal ray sets"));
    if !is_terminal_pair(source, boundary) {
        return Err(MmpError::NotTerminal("source"));
    }
    if !is_terminal_pair(target, &b_target) {
        return Err(MmpError::NotTerminal("target"));
    }
    if !is_nef_relative(source, &kb_divisor(source, source, boundary))? {
        return Err(MmpError::NotNef("source"));
    }
    if !is_nef_relative(target, &kb_divisor(target, source, boundary))? {
        return Err(MmpError::NotNef("target"));
    }

    let l_target = match &problem.l_target {
        Some(l) => {
            if l.0.len() != target.num_rays() || !l.is_effective() || !is_ample_relative(target, l)? {
                return Err(MmpError::BadAuxiliaryDivisor("L'"));
            }
            l.clone()
        }
        None => find_relative_ample(target).ok_or(MmpError::NotProjective("target"))?,
    };
    let l_divisor = ToricDivisor(transport(target, &l_target.0, source).expect("equal ray sets"));
    let h = match &problem.h_source {
        Some(h) => {
            if h.0.len() != source.num_rays() || !h.is_effective() || !is_ample_relative(source, h)? {
                return Err(MmpError::BadAuxiliaryDivisor("H"));
            }
            h.clone()
        }
        None => find_relative_ample(source).ok_or(MmpError::NotProjective("source"))?,
    };

    let l = scaling_constant(boundary.coeffs(), &l_divisor.0);

    let k = cartier_data(source, &kb_divisor(source, source, boundary))?.index;
    let dim = source.dim();
    Ok(MmpConfig { dim, e: MmpConfig::expected_e(&k, dim), k, l, l_target, l_divisor, h, max_steps: 0 })
}

/// Pairings of every extremal class of the current fan.
pub fn extremal_pairings(
    fan: &Fan,
    source: &Fan,
    boundary: &Boundary,
    config: &MmpConfig,
) -> Result<Vec<RayPairings>, MmpError> {
    let kb = kb_divisor(fan, source, boundary);
    let l = ToricDivisor(transport(source, &config.l_divisor.0, fan).expect("equal ray sets"));
    let h = ToricDivisor(transport(source, &config.h.0, fan).expect("equal ray sets"));
    let mori = mori_extremal_classes(fan)?;
    mori.extreme
        .into_iter()
        .map(|class| {
            Ok(RayPairings {
                kb: intersect(fan, &kb, &class)?,
                l: intersect(fan, &l, &class)?,
                h: intersect(fan, &h, &class)?,
                class,
            })
        })
        .collect()
}

fn invariant(step: usize, reason: String) -> MmpError {
    MmpError::Invariant { step, reason }
}

/// The nef threshold over K-trivial extremal classes negative for
/// `K + B + lL`; zero when there is none.
///
/// Afterwards `K + B + elL + et₀H` is checked to be nonnegative on every
/// extremal class.
pub fn compute_t0(state: &MmpState, config: &MmpConfig, pairings: &[RayPairings]) -> Result<Rat, MmpError> {
    let step = state.step;
    if let Some(p) = pairings.iter().find(|p| p.kb.is_negative()) {
        return Err(invariant(step, format!("K+B is negative on {:?}", p.class.relation)));
    }
    let mut t0 = Rat::zero();
    for p in pairings {
        let base = p.combined(&config.l, &Rat::zero());
        if !p.kb.is_zero() || !base.is_negative() {
            continue;
        }
        if !p.h.is_positive() {
            return Err(invariant(step, format!("H·R = {} is not positive on {:?}", p.h, p.class.relation)));
        }
        let ratio = -base / &p.h;
        if ratio > t0 {
            t0 = ratio;
        }
    }
    let el = &config.e * &config.l;
    let et = &config.e * &t0;
    if let Some(p) = pairings.iter().find(|p| p.combined(&el, &et).is_negative()) {
        return Err(invariant(step, format!("K+B+elL+e·t0·H is negative on {:?}", p.class.relation)));
    }
    if let Some(prev) = &state.last_t0 {
        if &t0 > prev {
            return Err(invariant(step, format!("t0 increased from {prev} to {t0}")));
        }
    }
    Ok(t0)
}

/// The lexicographically smallest K-trivial class on which
/// `K + B + lL + t₀H` vanishes and `K + B + elL` is negative, or
/// [`Selection::Done`] when `t₀ = 0` and `K + B + elL` is nef.
pub fn select_ray(
    state: &MmpState,
    config: &MmpConfig,
    pairings: &[RayPairings],
    t0: &Rat,
) -> Result<Selection, MmpError> {
    let el = &config.e * &config.l;
    if t0.is_zero() {
        if let Some(p) = pairings.iter().find(|p| p.combined(&el, &Rat::zero()).is_negative()) {
            return Err(invariant(state.step, format!("t0 = 0 but K+B+elL is negative on {:?}", p.class.relation)));
        }
        return Ok(Selection::Done);
    }
    let mut candidates: Vec<&RayPairings> = pairings
        .iter()
        .filter(|p| {
            p.kb.is_zero() && p.combined(&config.l, t0).is_zero() && p.combined(&el, &Rat::zero()).is_negative()
        })
        .collect();
    candidates.sort_by(|a, b| a.class.relation.cmp(&b.class.relation));
    let Some(first) = candidates.first() else {
        return Err(invariant(state.step, format!("no extremal class achieves t0 = {t0}")));
    };
    Ok(Selection::Flop {
        ray: Box::new((*first).clone()),
        alternatives: candidates[1..].iter().map(|p| p.class.relation.clone()).collect(),
    })
}

fn scaling_klt(boundary: &Boundary, config: &MmpConfig, t0: &Rat) -> bool {
    let coeffs: Vec<Rat> = boundary
        .coeffs()
        .iter()
        .zip(&config.l_divisor.0)
        .zip(&config.h.0)
        .map(|((b, l), h)| b + &config.l * l + t0 * h)
        .collect();
    is_klt_pair(&Boundary(coeffs))
}

/// Runs the program from `problem.source` to `problem.target`.
///
/// The target is re-indexed to the source ray order first (rays are matched
/// as vectors), so every fan in the output shares the source ray order.
pub fn decompose(problem: &Problem, options: &MmpOptions) -> Result<FlopSequence, MmpError> {
    let mut problem = problem.clone();
    if !iso_in_codim1(&problem.source, &problem.target) {
        validate_fan(&problem.source, &problem.base)
            .map_err(|e| MmpError::InvalidFan { which: "source", source: e })?;
        validate_fan(&problem.target, &problem.base)
            .map_err(|e| MmpError::InvalidFan { which: "target", source: e })?;
        return Err(MmpError::NotIsoInCodim1);
    }
    let original_target = problem.target.clone();
    problem.target = problem.target.reindexed(problem.source.rays()).expect("equal ray sets");
    if let Some(l) = &problem.l_target {
        if l.0.len() != original_target.num_rays() {
            return Err(MmpError::BadAuxiliaryDivisor("L'"));
        }
        problem.l_target = Some(ToricDivisor(transport(&original_target, &l.0, &problem.target).expect("same rays")));
    }
    let mut config = setup_parameters(&problem)?;
    config.max_steps = options.max_steps;
    let Problem { base, source, target, boundary, .. } = &problem;

    let mut state = MmpState { fan: source.clone(), step: 0, last_t0: None };
    let mut steps: Vec<FlopStep> = Vec::new();
    loop {
        let pairings = extremal_pairings(&state.fan, source, boundary, &config)?;
        let t0 = compute_t0(&state, &config, &pairings)?;
        let (ray, alternatives) = match select_ray(&state, &config, &pairings, &t0)? {
            Selection::Done => {
                if !state.fan.same_as(target) {
                    return Err(MmpError::BrokenHypothesis(format!(
                        "K+B+elL is nef after {} steps but the fan differs from the target",
                        state.step
                    )));
                }
                return Ok(FlopSequence {
                    base: base.clone(),
                    source: source.clone(),
                    target: target.clone(),
                    boundary: boundary.clone(),
                    config,
                    steps,
                    final_fan: state.fan,
                });
            }
            Selection::Flop { ray, alternatives } => (*ray, alternatives),
        };
        if state.step >= options.max_steps {
            return Err(MmpError::StepLimit {
                limit: options.max_steps,
                trace: steps.iter().map(|s| s.ray.class.relation.clone()).collect(),
            });
        }
        let step = state.step + 1;
        let after = execute_flop(&state.fan, &ray.class)?;
        validate_fan(&after, base).map_err(|e| invariant(step, format!("flipped fan invalid: {e}")))?;
        let certificate = crepancy_certificate(&state.fan, boundary, &after)?;
        if !certificate.passed() {
            return Err(invariant(step, format!("crepancy certificate failed: {:?}", certificate.status)));
        }
        let index = cartier_data(&after, &kb_divisor(&after, source, boundary))?.index;
        if !config.k.is_multiple_of(&index) {
            return Err(MmpError::CartierIndex { step, found: index, k: config.k.clone() });
        }
        let length_bound = Rat::from_integer(int(-2 * state.fan.dim() as i64));
        let length_bound_holds = ray.combined(&config.l, &Rat::zero()) >= length_bound;
        let flop = FlopStep {
            scaling_klt: scaling_klt(boundary, &config, &t0),
            ray,
            t0: t0.clone(),
            before: state.fan.clone(),
            after: after.clone(),
            alternatives,
            length_bound_holds,
            certificate,
        };
        steps.push(flop);
        state = MmpState { fan: after, step, last_t0: Some(t0) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat};
    use crate::fan::fixtures::*;

    fn conifold_problem() -> Problem {
        Problem {
            base: conifold_base(),
            source: fan_a(),
            target: fan_b(),
            boundary: Boundary::zero(4),
            l_target: None,
            h_source: None,
        }
    }

    #[test]
    fn conifold_parameters() {
        let mut p = conifold_problem();
        p.l_target = Some(ToricDivisor::unit(4, 0));
        let c = setup_parameters(&p).unwrap();
        assert_eq!(c.k, int(1));
        assert_eq!(c.e, rat(1, 7));
        assert_eq!(c.l, rat(1, 2));
        assert_eq!(c.l_divisor, ToricDivisor::unit(4, 0));
        assert!(is_ample_relative(&fan_a(), &c.h).unwrap());
    }

    #[test]
    fn l_respects_large_boundary() {
        let mut p = conifold_problem();
        p.boundary = Boundary(alloc::vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        p.l_target = Some(ToricDivisor(alloc::vec![rat(5, 1), rat(0, 1), rat(0, 1), rat(0, 1)]));
        let c = setup_parameters(&p).unwrap();
        // 5/m < 1 needs m ≥ 6
        assert_eq!(c.l, rat(1, 6));
    }

    #[test]
    fn scaling_constant_examples() {
        assert_eq!(scaling_constant(&[rat(0, 1)], &[rat(1, 1)]), rat(1, 2));
        assert_eq!(scaling_constant(&[rat(6, 7), rat(0, 1)], &[rat(1, 1), rat(0, 1)]), rat(1, 8));
        assert_eq!(scaling_constant(&[rat(1, 2)], &[rat(1, 4)]), rat(1, 2));
        assert_eq!(scaling_constant(&[rat(0, 1)], &[rat(0, 1)]), rat(1, 2));
    }

    #[test]
    fn conifold_t0_and_selection() {
        let mut p = conifold_problem();
        p.l_target = Some(ToricDivisor::unit(4, 0));
        p.h_source = Some(ToricDivisor::unit(4, 1));
        let c = setup_parameters(&p).unwrap();
        let state = MmpState { fan: fan_a(), step: 0, last_t0: None };
        let pairings = extremal_pairings(&state.fan, &p.source, &p.boundary, &c).unwrap();
        assert_eq!(pairings.len(), 1);
        assert_eq!(pairings[0].kb, rat(0, 1));
        assert_eq!(&c.l * &pairings[0].l, rat(-1, 2));
        assert_eq!(pairings[0].h, rat(1, 1));
        let t0 = compute_t0(&state, &c, &pairings).unwrap();
        assert_eq!(t0, rat(1, 2));
        match select_ray(&state, &c, &pairings, &t0).unwrap() {
            Selection::Flop { ray, alternatives } => {
                assert_eq!(ray.class.relation, int_vec(&[-1, 1, -1, 1]));
                assert!(alternatives.is_empty());
            }
            Selection::Done => panic!("expected a flop"),
        }
    }

    #[test]
    fn t0_is_the_largest_ratio() {
        let config = MmpConfig {
            dim: 3,
            k: int(1),
            e: rat(1, 7),
            l: rat(1, 1),
            l_target: ToricDivisor::zero(0),
            l_divisor: ToricDivisor::zero(0),
            h: ToricDivisor::zero(0),
            max_steps: 1,
        };
        let class = |v: &[i64]| CurveClass { relation: int_vec(v), wall: None };
        let pairings = alloc::vec![
            RayPairings { class: class(&[1, 0]), kb: rat(0, 1), l: rat(-1, 1), h: rat(3, 1) },
            RayPairings { class: class(&[0, 1]), kb: rat(0, 1), l: rat(-1, 1), h: rat(2, 1) },
        ];
        let state = MmpState { fan: fan_a(), step: 0, last_t0: None };
        assert_eq!(compute_t0(&state, &config, &pairings).unwrap(), rat(1, 2));
        let nef = alloc::vec![RayPairings { class: class(&[1, 0]), kb: rat(0, 1), l: rat(1, 1), h: rat(1, 1) }];
        assert_eq!(compute_t0(&state, &config, &nef).unwrap(), rat(0, 1));
        assert_eq!(select_ray(&state, &config, &nef, &rat(0, 1)).unwrap(), Selection::Done);
    }

    #[test]
    fn conifold_decomposition() {
        let seq = decompose(&conifold_problem(), &MmpOptions::default()).unwrap();
        assert_eq!(seq.steps.len(), 1);
        let s = &seq.steps[0];
        assert_eq!(s.ray.kb, rat(0, 1));
        assert!(s.flip_pairing(&seq.config).is_negative());
        assert_eq!(s.scaled_pairing(&seq.config), rat(0, 1));
        assert!(s.certificate.passed());
        assert!(seq.final_fan.same_as(&fan_b()));
    }

    #[test]
    fn identity_decomposition() {
        let mut p = conifold_problem();
        p.target = fan_a();
        let seq = decompose(&p, &MmpOptions::default()).unwrap();
        assert!(seq.steps.is_empty());
    }

    #[test]
    fn step_limit() {
        let err = decompose(&conifold_problem(), &MmpOptions { max_steps: 0 }).unwrap_err();
        assert!(matches!(err, MmpError::StepLimit { limit: 0, .. }));
    }

    #[test]
    fn hypothesis_violations() {
        let mut p = conifold_problem();
        p.boundary = Boundary(alloc::vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(decompose(&p, &MmpOptions::default()).unwrap_err(), MmpError::NotKlt);

        let mut p = conifold_problem();
        let mut rays = conifold_rays();
        rays.push(int_vec(&[1, 1, 2]));
        p.target = Fan::new(
            rays,
            alloc::vec![alloc::vec![0, 1, 4], alloc::vec![1, 2, 4], alloc::vec![2, 3, 4], alloc::vec![0, 3, 4]],
        );
        assert_eq!(decompose(&p, &MmpOptions::default()).unwrap_err(), MmpError::NotIsoInCodim1);
    }
}
