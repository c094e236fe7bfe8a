//! Common simplicial refinement of two fans with the same support.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::arith::{rank_int, sum_vecs, IntVec};
use crate::dd::{cone_contains, facets, rays_of_inequalities};
use crate::error::FanError;
use crate::fan::{simplicial_inequalities, walls, Fan};

/// Pulling order: rays new to both fans first, then the original rays, each
/// group lexicographic.
fn pull_key(v: &IntVec, original: &BTreeSet<IntVec>) -> (bool, IntVec) {
    (original.contains(v), v.clone())
}

/// Pulling triangulation of the cone spanned by `cell` (indices into `rays`,
/// already sorted in pulling order) of dimension `k`.
fn pull(cell: &[usize], k: usize, rays: &[IntVec], out: &mut Vec<Vec<usize>>) -> Result<(), FanError> {
    if cell.len() == k {
        out.push(cell.to_vec());
        return Ok(());
    }
    let apex = cell[0];
    let gens: Vec<IntVec> = cell.iter().map(|&i| rays[i].clone()).collect();
    for f in facets(&gens)? {
        if f.members.contains(&0) {
            continue;
        }
        let sub: Vec<usize> = f.members.iter().map(|&m| cell[m]).collect();
        let mut simplices = Vec::new();
        pull(&sub, k - 1, rays, &mut simplices)?;
        for mut s in simplices {
            s.insert(0, apex);
            out.push(s);
        }
    }
    Ok(())
}

/// The simplicial fan obtained by triangulating all full-dimensional
/// intersections `σ ∩ σ′` (σ from `a`, σ′ from `b`) with a pulling
/// triangulation under one global ray order.
///
/// Rays are listed as: rays of `a`, rays only in `b`, then new rays, the last
/// two groups lexicographically.
pub fn common_refinement(a: &Fan, b: &Fan) -> Result<Fan, FanError> {
    let d = a.dim();
    let ineq_a: Vec<Vec<IntVec>> = (0..a.cones().len())
        .map(|c| simplicial_inequalities(&a.cone_generators(c)).ok_or(FanError::NonSimplicial(c)))
        .collect::<Result<_, _>>()?;
    let ineq_b: Vec<Vec<IntVec>> = (0..b.cones().len())
        .map(|c| simplicial_inequalities(&b.cone_generators(c)).ok_or(FanError::NonSimplicial(c)))
        .collect::<Result<_, _>>()?;

    let mut cells: Vec<Vec<IntVec>> = Vec::new();
    for ha in &ineq_a {
        for hb in &ineq_b {
            let rows: Vec<IntVec> = ha.iter().chain(hb).cloned().collect();
            let rays: Vec<IntVec> = rays_of_inequalities(&rows, d)?.into_iter().map(|r| r.ray).collect();
            if rays.len() >= d && rank_int(&rays) == d {
                cells.push(rays);
            }
        }
    }

    let original: BTreeSet<IntVec> = a.rays().iter().chain(b.rays()).cloned().collect();
    let mut all: Vec<IntVec> = a.rays().to_vec();
    let mut b_only: Vec<IntVec> = b.rays().iter().filter(|r| a.ray_index(r).is_none()).cloned().collect();
    b_only.sort();
    let mut fresh: Vec<IntVec> = cells
        .iter()
        .flatten()
        .filter(|r| !original.contains(*r))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    fresh.sort();
    all.extend(b_only);
    all.extend(fresh);
    let index: BTreeMap<IntVec, usize> = all.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for cell in &cells {
        let mut ordered: Vec<&IntVec> = cell.iter().collect();
        ordered.sort_by_key(|v| pull_key(v, &original));
        let idx: Vec<usize> = ordered.iter().map(|v| index[*v]).collect();
        let mut out = Vec::new();
        pull(&idx, d, &all, &mut out)?;
        for mut s in out {
            s.sort_unstable();
            simplices.insert(s);
        }
    }

    // drop rays no simplex uses and renumber
    let used: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
    let keep: Vec<usize> = (0..all.len()).filter(|i| used.contains(i)).collect();
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let rays: Vec<IntVec> = keep.iter().map(|&i| all[i].clone()).collect();
    let cones = simplices.into_iter().map(|s| s.iter().map(|i| renumber[i]).collect()).collect();
    let out = Fan::new(rays, cones);

    check_same_support(a, &out)?;
    check_same_support(b, &out)?;
    Ok(out)
}

/// Every boundary face of the refinement must sit inside a boundary wall of
/// the coarser fan; otherwise the supports differ.
fn check_same_support(coarse: &Fan, refined: &Fan) -> Result<(), FanError> {
    let boundary: Vec<Vec<IntVec>> = walls(coarse)
        .into_iter()
        .filter(|w| !w.is_interior())
        .map(|w| w.rays.iter().map(|&i| coarse.rays()[i].clone()).collect())
        .collect();
    for w in walls(refined).into_iter().filter(|w| !w.is_interior()) {
        let gens: Vec<&IntVec> = w.rays.iter().map(|&i| &refined.rays()[i]).collect();
        let center = sum_vecs(refined.dim(), gens.iter().copied());
        let on_boundary = boundary.iter().any(|bw| cone_contains(bw, &center).unwrap_or(false));
        if !on_boundary {
            return Err(FanError::SupportMismatch { face: w.rays });
        }
    }
    Ok(())
}
