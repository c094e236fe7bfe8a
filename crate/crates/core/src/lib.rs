//! Exact toric flop decomposition.
//!
//! Given two simplicial fans refining a common pointed base cone, with the same
//! ray set and a boundary making both terminal with nef log canonical divisor,
//! [`decompose`] connects them by a sequence of K-trivial circuit flips chosen
//! by a minimal model program with scaling, and certifies each step crepant on
//! a common refinement.
//!
//! Everything is exact: integers are arbitrary precision and all scalar
//! quantities are reduced rationals. The crate is `no_std` and only needs
//! `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod certificate;
pub mod curve;
pub mod dd;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod flop;
pub mod lattice;
pub mod lp;
pub mod mmp;
pub mod refine;
pub mod verify;

pub use arith::{Int, IntVec, Rat, RatVec};
pub use certificate::{crepancy_certificate, CertificateStatus, CrepancyCertificate};
pub use curve::{intersect, mori_extremal_classes, wall_curve, CurveClass, MoriCone};
pub use dd::{extreme_rays, ConeDesc};
pub use divisor::{
    canonical_divisor, cartier_data, find_relative_ample, is_ample_relative, is_nef_lp, is_nef_relative, pullback,
    CartierData, ToricDivisor,
};
pub use error::{ArithError, ConeError, CurveError, DivisorError, FanError, FlopError, MmpError};
pub use fan::{
    is_klt_pair, is_terminal_pair, iso_in_codim1, meet_properly, multiplicity, validate_fan, walls, BaseCone, Boundary,
    Fan, Wall,
};
pub use flop::execute_flop;
pub use lattice::{enumerate_lattice_points, LatticePoint};
pub use mmp::{
    compute_t0, decompose, extremal_pairings, scaling_constant, select_ray, setup_parameters, FlopSequence, FlopStep,
    MmpConfig, MmpOptions, MmpState, Problem, RayPairings, Selection,
};
pub use refine::common_refinement;
pub use verify::{verify_sequence, Verdict};
