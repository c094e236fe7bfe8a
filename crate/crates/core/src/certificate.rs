//! Crepancy certificates: the log canonical divisors of two fans pulled back
//! to a common refinement must coincide coefficient by coefficient.

use alloc::vec::Vec;

use crate::arith::{IntVec, Rat};
use crate::divisor::{canonical_divisor, pullback, ToricDivisor};
use crate::error::MmpError;
use crate::fan::{iso_in_codim1, Boundary, Fan};
use crate::refine::common_refinement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateStatus {
    Pass,
    /// First refinement ray where the pullbacks differ.
    Fail {
        ray: IntVec,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrepancyCertificate {
    pub refinement: Fan,
    pub pullback_before: Vec<Rat>,
    pub pullback_after: Vec<Rat>,
    pub status: CertificateStatus,
}

impl CrepancyCertificate {
    pub fn passed(&self) -> bool {
        self.status == CertificateStatus::Pass
    }
}

pub fn compare_pullbacks(refinement: &Fan, before: &[Rat], after: &[Rat]) -> CertificateStatus {
    match (0..refinement.num_rays()).find(|&i| before.get(i) != after.get(i)) {
        Some(i) => CertificateStatus::Fail { ray: refinement.rays()[i].clone() },
        None => CertificateStatus::Pass,
    }
}

/// Transports coefficients given in `from`'s ray order to `to`'s ray order.
pub fn transport(from: &Fan, coeffs: &[Rat], to: &Fan) -> Option<Vec<Rat>> {
    to.rays().iter().map(|r| from.ray_index(r).map(|i| coeffs[i].clone())).collect()
}

/// `K + B` on `fan`, with `b` given in the ray order of `reference`.
pub fn log_canonical(fan: &Fan, reference: &Fan, b: &Boundary) -> Option<ToricDivisor> {
    let b = transport(reference, b.coeffs(), fan)?;
    let k = canonical_divisor(fan);
    Some(ToricDivisor(k.0.iter().zip(b).map(|(x, y)| x + y).collect()))
}

/// Pulls `d_before` and `d_after` back to the common refinement and compares.
pub fn certify(
    before: &Fan,
    d_before: &ToricDivisor,
    after: &Fan,
    d_after: &ToricDivisor,
) -> Result<CrepancyCertificate, MmpError> {
    let refinement = common_refinement(before, after)
        .map_err(|e| MmpError::Invariant { step: 0, reason: alloc::format!("common refinement failed: {e}") })?;
    let pb = pullback(before, d_before, &refinement)?;
    let pa = pullback(after, d_after, &refinement)?;
    let status = compare_pullbacks(&refinement, &pb.0, &pa.0);
    Ok(CrepancyCertificate { refinement, pullback_before: pb.0, pullback_after: pa.0, status })
}

/// Certificate that `before ⇢ after` is crepant for `K + B`; `b` is indexed by
/// the rays of `before`.
pub fn crepancy_certificate(before: &Fan, b: &Boundary, after: &Fan) -> Result<CrepancyCertificate, MmpError> {
    if !iso_in_codim1(before, after) {
        return Err(MmpError::NotIsoInCodim1);
    }
    if b.coeffs().len() != before.num_rays() {
        return Err(MmpError::BoundaryLength { expected: before.num_rays(), found: b.coeffs().len() });
    }
    let kb_before = log_canonical(before, before, b).expect("same fan");
    let kb_after = log_canonical(after, before, b).expect("equal ray sets");
    certify(before, &kb_before, after, &kb_after)
}
