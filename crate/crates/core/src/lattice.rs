//! Lattice points of small simplices `{Σ λᵢ vᵢ : λᵢ ≥ 0, Σ λᵢ ≤ h}`.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arith::{inverse, pivot_columns, rank, Int, IntVec, Rat, RatVec};
use crate::error::ConeError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub point: IntVec,
    /// Barycentric coordinates `λ` with respect to the vertices.
    pub coords: RatVec,
    /// `Σ λᵢ`.
    pub height: Rat,
}

/// All integer points of the region spanned by `vertices` up to barycentric
/// height `height_bound`, in lexicographic order of the points.
///
/// The vertices must be linearly independent so that heights are well
/// defined.
pub fn enumerate_lattice_points(vertices: &[RatVec], height_bound: &Rat) -> Result<Vec<LatticePoint>, ConeError> {
    if height_bound.is_negative() {
        return Err(ConeError::NegativeBound);
    }
    let Some(first) = vertices.first() else {
        return Err(ConeError::Empty);
    };
    let d = first.len();
    if vertices.iter().any(|v| v.len() != d) {
        return Err(ConeError::DimensionMismatch);
    }
    let k = vertices.len();
    if rank(vertices) < k {
        return Err(ConeError::DegenerateVertices);
    }
    // d × k matrix with the vertices as columns; choose k independent rows.
    let columns: Vec<RatVec> = (0..d).map(|i| vertices.iter().map(|v| v[i].clone()).collect()).collect();
    let transposed: Vec<RatVec> = vertices.to_vec();
    let rows = pivot_columns(&transposed);
    let square: Vec<RatVec> = rows.iter().map(|&r| columns[r].clone()).collect();
    let inv = inverse(&square).expect("independent vertex rows");

    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let mut min = Rat::zero();
        let mut max = Rat::zero();
        for v in vertices {
            let x = &v[i] * height_bound;
            if x < min {
                min = x.clone();
            }
            if x > max {
                max = x;
            }
        }
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }

    let mut out = Vec::new();
    let mut cur: IntVec = lo.clone();
    loop {
        if let Some(p) = locate(&cur, &rows, &inv, vertices, height_bound) {
            out.push(p);
        }
        // odometer increment
        let mut i = d;
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.point.cmp(&b.point));
                return Ok(out);
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                cur[i + 1..d].clone_from_slice(&lo[i + 1..d]);
                break;
            }
        }
    }
}

fn locate(x: &[Int], rows: &[usize], inv: &[RatVec], vertices: &[RatVec], bound: &Rat) -> Option<LatticePoint> {
    let sub: Vec<Rat> = rows.iter().map(|&r| Rat::from_integer(x[r].clone())).collect();
    let coords: RatVec = inv.iter().map(|row| row.iter().zip(&sub).map(|(a, b)| a * b).sum()).collect();
    if coords.iter().any(Signed::is_negative) {
        return None;
    }
    let height: Rat = coords.iter().sum();
    if &height > bound {
        return None;
    }
    for (i, xi) in x.iter().enumerate() {
        let v: Rat = vertices.iter().zip(&coords).map(|(vert, c)| &vert[i] * c).sum();
        if v != Rat::from_integer(xi.clone()) {
            return None;
        }
    }
    Some(LatticePoint { point: x.to_vec(), coords, height })
}
