//! Cone conversions by the double description method.
//!
//! The workhorse is [`rays_of_inequalities`], which enumerates the extreme
//! rays of a pointed cone `{y : A·y ≥ 0}`. Generator-described cones are
//! handled through duality inside the linear span of their generators.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::arith::{
    dot, inverse, is_zero_vec, nullspace, pivot_columns, primitive, primitive_of_rat, rank, rank_int,
    solve_linear_exact, to_rat_vec, Int, IntVec, Rat, RatVec,
};
use crate::error::ConeError;

/// A polyhedral cone given by generators, optionally with inequalities
/// `a·x ≥ 0` describing the same cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDesc {
    pub generators: Vec<IntVec>,
    pub inequalities: Option<Vec<RatVec>>,
}

impl ConeDesc {
    pub fn from_generators(generators: Vec<IntVec>) -> Self {
        Self { generators, inequalities: None }
    }
}

/// An extreme ray of an inequality cone together with the indices of the
/// inequalities it makes tight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdRay {
    pub ray: IntVec,
    pub tight: BTreeSet<usize>,
}

/// A facet of a generator cone: its inner normal (zero off the coordinates
/// used to chart the span) and the generators lying on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: IntVec,
    pub members: Vec<usize>,
}

fn lineality_of(rows: &[IntVec], dim: usize) -> IntVec {
    let m: Vec<RatVec> = rows.iter().map(|r| to_rat_vec(r)).collect();
    let ns = nullspace(&m, dim);
    primitive_of_rat(&ns[0])
}

/// Extreme rays of `{y ∈ Q^dim : rows·y ≥ 0}`, sorted lexicographically.
///
/// Constraints are inserted in the given order. Fails with
/// [`ConeError::NonPointed`] when the constraint rows do not have full rank.
pub fn rays_of_inequalities(rows: &[IntVec], dim: usize) -> Result<Vec<DdRay>, ConeError> {
    if rows.iter().any(|r| r.len() != dim) {
        return Err(ConeError::DimensionMismatch);
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    // greedy independent subset in input order
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<RatVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        basis_rows.push(to_rat_vec(r));
        if rank(&basis_rows) == basis.len() + 1 {
            basis.push(i);
        } else {
            basis_rows.pop();
        }
    }
    if basis.len() < dim {
        return Err(ConeError::NonPointed { lineality: lineality_of(rows, dim) });
    }
    let inv = inverse(&basis_rows).expect("independent rows");
    let mut rays: Vec<DdRay> = (0..dim)
        .map(|j| {
            let col: RatVec = inv.iter().map(|row| row[j].clone()).collect();
            let tight = basis.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &b)| b).collect();
            DdRay { ray: primitive_of_rat(&col), tight }
        })
        .collect();

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (idx, row) in rows.iter().enumerate() {
        if in_basis.contains(&idx) {
            continue;
        }
        let values: Vec<Int> = rays.iter().map(|r| dot(row, &r.ray)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if minus.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.tight.insert(idx);
                }
            }
            continue;
        }
        let mut next: Vec<DdRay> = Vec::new();
        for &p in &plus {
            for &n in &minus {
                let common: BTreeSet<usize> = rays[p].tight.intersection(&rays[n].tight).copied().collect();
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).filter(|&o| o != p && o != n).all(|o| !common.is_subset(&rays[o].tight));
                if !adjacent {
                    continue;
                }
                let combo: IntVec =
                    rays[n].ray.iter().zip(&rays[p].ray).map(|(xn, xp)| &values[p] * xn - &values[n] * xp).collect();
                let mut tight = common;
                tight.insert(idx);
                next.push(DdRay { ray: primitive(&combo), tight });
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if values[i].is_positive() {
                next.push(r.clone());
            } else if values[i].is_zero() {
                let mut r = r.clone();
                r.tight.insert(idx);
                next.push(r);
            }
        }
        rays = next;
    }
    rays.sort_by(|a, b| a.ray.cmp(&b.ray));
    rays.dedup_by(|a, b| a.ray == b.ray);
    Ok(rays)
}

/// Coordinates charting the linear span of `gens`: pivot columns of the
/// generator matrix, so that projecting onto them is injective on the span.
struct SpanChart {
    coords: Vec<usize>,
}

impl SpanChart {
    fn new(gens: &[IntVec]) -> Self {
        let m: Vec<RatVec> = gens.iter().map(|g| to_rat_vec(g)).collect();
        Self { coords: pivot_columns(&m) }
    }

    fn project(&self, v: &[Int]) -> IntVec {
        self.coords.iter().map(|&c| v[c].clone()).collect()
    }

    fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The span vector whose projection is `c`.
    fn lift(&self, gens: &[IntVec], c: &[Rat]) -> IntVec {
        // columns: generators; rows: charted coordinates
        let a: Vec<RatVec> =
            self.coords.iter().map(|&k| gens.iter().map(|g| Rat::from_integer(g[k].clone())).collect()).collect();
        let y = solve_linear_exact(&a, c).expect("square system").expect("chart is injective");
        let n = gens[0].len();
        let mut x = vec![Rat::zero(); n];
        for (g, coef) in gens.iter().zip(&y) {
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += coef * Rat::from_integer(gi.clone());
            }
        }
        primitive_of_rat(&x)
    }

    fn embed_normal(&self, f: &[Int], n: usize) -> IntVec {
        let mut out = vec![Int::zero(); n];
        for (&c, x) in self.coords.iter().zip(f) {
            out[c] = x.clone();
        }
        out
    }
}

fn check_generators(gens: &[IntVec]) -> Result<usize, ConeError> {
    let first = gens.first().ok_or(ConeError::Empty)?;
    let n = first.len();
    for (i, g) in gens.iter().enumerate() {
        if g.len() != n {
            return Err(ConeError::DimensionMismatch);
        }
        if is_zero_vec(g) {
            return Err(ConeError::ZeroGenerator(i));
        }
    }
    Ok(n)
}

/// Facets of the pointed cone generated by `gens`, relative to its span.
///
/// Facets are sorted by their member lists. A one-dimensional cone has no
/// facet with members; it yields a single facet with an empty member list.
pub fn facets(gens: &[IntVec]) -> Result<Vec<Facet>, ConeError> {
    let n = check_generators(gens)?;
    let chart = SpanChart::new(gens);
    let projected: Vec<IntVec> = gens.iter().map(|g| chart.project(g)).collect();
    let dual = rays_of_inequalities(&projected, chart.dim())?;
    let normals: Vec<IntVec> = dual.iter().map(|r| r.ray.clone()).collect();
    if rank_int(&normals) < chart.dim() {
        let c = lineality_of(&normals_or_empty(&normals, chart.dim()), chart.dim());
        return Err(ConeError::NonPointed { lineality: chart.lift(gens, &to_rat_vec(&c)) });
    }
    let mut out: Vec<Facet> = dual
        .into_iter()
        .map(|r| Facet { normal: chart.embed_normal(&r.ray, n), members: r.tight.into_iter().collect() })
        .collect();
    out.sort_by(|a, b| a.members.cmp(&b.members));
    Ok(out)
}

fn normals_or_empty(normals: &[IntVec], dim: usize) -> Vec<IntVec> {
    if normals.is_empty() {
        vec![vec![Int::zero(); dim]]
    } else {
        normals.to_vec()
    }
}

/// Minimal primitive generators of the extreme rays of a pointed cone,
/// sorted lexicographically.
///
/// `within` optionally lists linear equations `w·x = 0` that every generator
/// must satisfy (the ambient subspace the cone is considered in).
pub fn extreme_rays(cone: &ConeDesc, within: Option<&[IntVec]>) -> Result<Vec<IntVec>, ConeError> {
    if cone.generators.is_empty() {
        if let Some(ineqs) = &cone.inequalities {
            let rows: Vec<IntVec> = ineqs.iter().map(|r| primitive_of_rat(r)).collect();
            let dim = rows.first().map_or(0, Vec::len);
            let rays = rays_of_inequalities(&rows, dim)?;
            return Ok(rays.into_iter().map(|r| r.ray).collect());
        }
    }
    check_generators(&cone.generators)?;
    if let Some(eqs) = within {
        for (i, g) in cone.generators.iter().enumerate() {
            if eqs.iter().any(|w| !dot(w, g).is_zero()) {
                return Err(ConeError::OutsideSubspace(i));
            }
        }
    }
    let gens: Vec<IntVec> = cone.generators.iter().map(|g| primitive(g)).collect::<BTreeSet<_>>().into_iter().collect();
    let chart = SpanChart::new(&gens);
    let r = chart.dim();
    let fs = facets(&gens)?;
    let projected_normals: Vec<IntVec> = fs.iter().map(|f| chart.project(&f.normal)).collect();
    let out = gens
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            let tight: Vec<IntVec> = fs
                .iter()
                .zip(&projected_normals)
                .filter(|(f, _)| f.members.contains(&i))
                .map(|(_, p)| p.clone())
                .collect();
            rank_int(&tight) + 1 == r
        })
        .map(|(_, g)| g.clone())
        .collect();
    Ok(out)
}

/// Whether `v` lies in the cone generated by `gens` (by exact LP-free
/// elimination: `v` is tested against every facet).
pub fn cone_contains(gens: &[IntVec], v: &[Int]) -> Result<bool, ConeError> {
    let n = check_generators(gens)?;
    let mut with_v: Vec<IntVec> = gens.to_vec();
    with_v.push(v.to_vec());
    if !is_zero_vec(v) && rank_int(&with_v) > rank_int(gens) {
        return Ok(false);
    }
    let fs = facets(gens)?;
    debug_assert!(fs.iter().all(|f| f.normal.len() == n));
    Ok(fs.iter().all(|f| !dot(&f.normal, v).is_negative()))
}
