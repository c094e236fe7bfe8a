use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::arith::{Int, IntVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone has no generators")]
    Empty,
    #[error("zero generator at position {0}")]
    ZeroGenerator(usize),
    #[error("generators have inconsistent dimensions")]
    DimensionMismatch,
    #[error("cone is not pointed; it contains the line through {lineality:?}")]
    NonPointed { lineality: IntVec },
    #[error("generator {0} is outside the given subspace")]
    OutsideSubspace(usize),
    #[error("negative height bound")]
    NegativeBound,
    #[error("lattice point vertices are linearly dependent")]
    DegenerateVertices,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("fan has no maximal cones")]
    Empty,
    #[error("ray {ray} has dimension {found}, expected {expected}")]
    DimensionMismatch { ray: usize, expected: usize, found: usize },
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} references ray index {index} out of range")]
    BadRayIndex { cone: usize, index: usize },
    #[error("cone {0} is not simplicial and full-dimensional")]
    NonSimplicial(usize),
    #[error("cones {0} and {1} coincide")]
    DuplicateCone(usize, usize),
    #[error("ray {0} is not used by any maximal cone")]
    UnusedRay(usize),
    #[error("ray {0} lies outside the base cone")]
    RayOutsideBase(usize),
    #[error("support differs from the base cone near the face {face:?}")]
    SupportMismatch { face: Vec<usize> },
    #[error("cones {0} and {1} do not meet along a common face")]
    Overlap(usize, usize),
    #[error("base cone is not full-dimensional and pointed")]
    BadBaseCone,
    #[error("fan is not a refinement: cone {0} lies in no cone of the coarser fan")]
    NotRefinement(usize),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    RayMismatch { expected: usize, found: usize },
    #[error("divisor is not Q-Cartier on cone {0}")]
    NotQCartier(usize),
    #[error("Cartier data disagree on the face shared by cones {0} and {1}")]
    Inconsistent(usize, usize),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("wall {0:?} is a boundary wall")]
    BoundaryWall(Vec<usize>),
    #[error("curve class has no wall on this fan")]
    NotWallDerived,
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    RayMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlopError {
    #[error("class {0:?} is not an extremal class of the fan")]
    NotExtremal(IntVec),
    #[error("no interior wall carries the class {0:?}")]
    NoWall(IntVec),
    #[error("contraction of {0:?} is not small (negative part has fewer than two rays)")]
    NotSmall(IntVec),
    #[error("wall configuration of {0:?} is not a union of circuit triangulations")]
    ClassMismatch(IntVec),
    #[error("flip produced an invalid fan: {0}")]
    InvalidResult(FanError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Failures of the flop decomposition driver.
///
/// Variants up to [`MmpError::BrokenHypothesis`] report inputs that violate
/// the hypotheses of the decomposition theorem; the rest are step-limit or
/// internal invariant failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmpError {
    #[error("{which} fan is invalid: {source}")]
    InvalidFan { which: &'static str, source: FanError },
    #[error("source and target have different dimensions")]
    DimensionMismatch,
    #[error("boundary has {found} coefficients but the fan has {expected} rays")]
    BoundaryLength { expected: usize, found: usize },
    #[error("boundary is not klt: coefficients must lie in [0, 1)")]
    NotKlt,
    #[error("{0} pair is not terminal")]
    NotTerminal(&'static str),
    #[error("K+B is not relatively nef on the {0} fan")]
    NotNef(&'static str),
    #[error("source and target are not isomorphic in codimension one (ray sets differ)")]
    NotIsoInCodim1,
    #[error("{0} fan is not projective over the base (no relatively ample divisor)")]
    NotProjective(&'static str),
    #[error("supplied {0} divisor is not effective and relatively ample")]
    BadAuxiliaryDivisor(&'static str),
    #[error("broken hypothesis: {0}")]
    BrokenHypothesis(String),
    #[error("step limit {limit} reached without arriving at the target (suspected non-termination)")]
    StepLimit { limit: usize, trace: Vec<IntVec> },
    #[error("internal invariant failed at step {step}: {reason}")]
    Invariant { step: usize, reason: String },
    #[error("Cartier index {found} of K+B does not divide k = {k} after step {step}")]
    CartierIndex { step: usize, found: Int, k: Int },
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Flop(#[from] FlopError),
}

impl MmpError {
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            MmpError::InvalidFan { .. }
                | MmpError::DimensionMismatch
                | MmpError::BoundaryLength { .. }
                | MmpError::NotKlt
                | MmpError::NotTerminal(_)
                | MmpError::NotNef(_)
                | MmpError::NotIsoInCodim1
                | MmpError::NotProjective(_)
                | MmpError::BadAuxiliaryDivisor(_)
                | MmpError::BrokenHypothesis(_)
        )
    }
}
