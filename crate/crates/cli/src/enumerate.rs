//! Brute-force enumeration of the simplicial fans on a fixed ray set.
//!
//! Every fan contains exactly one cone holding the generic point
//! `q + εe₁ + ε²e₂ + …` (`q` interior to the base), so the search seeds with
//! each such cone and then repeatedly closes the smallest open wall, trying
//! every ray on its far side. Each fan is produced once.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use toric_flops_core::arith::{det, inverse, sum_vecs, to_rat_vec};
use toric_flops_core::{find_relative_ample, meet_properly, validate_fan, BaseCone, Fan, FanError, IntVec, Rat};

/// Instances above this many rays are refused.
pub const MAX_RAYS: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("{found} rays exceed the enumeration cap of {MAX_RAYS}")]
    TooLarge { found: usize },
    #[error("ray list is invalid: {0}")]
    InvalidRays(FanError),
}

type Cone = Vec<usize>;

struct Search<'a> {
    rays: &'a [IntVec],
    base: &'a BaseCone,
    found: Vec<BTreeSet<Cone>>,
}

fn generators(rays: &[IntVec], cone: &[usize]) -> Vec<IntVec> {
    cone.iter().map(|&i| rays[i].clone()).collect()
}

/// Sign of `⟨n, v⟩` for the hyperplane through the rays of `face`, oriented
/// so that `toward` is positive.
fn side(rays: &[IntVec], face: &[usize], toward: usize, v: usize) -> i32 {
    let mut m = generators(rays, face);
    m.push(rays[v].clone());
    let s = det(&m);
    m.pop();
    m.push(rays[toward].clone());
    let t = det(&m);
    match (s.is_positive(), s.is_zero(), t.is_positive()) {
        (_, true, _) => 0,
        (a, false, b) if a == b => 1,
        _ => -1,
    }
}

/// Whether the cone contains the lexicographically perturbed point
/// `q + εe₁ + ε²e₂ + …`.
fn contains_generic_point(rays: &[IntVec], cone: &[usize], q: &[toric_flops_core::Int]) -> bool {
    let gens = generators(rays, cone);
    let d = gens.len();
    // columns are the generators; row i of G⁻¹ gives the i-th coordinate
    let g: Vec<Vec<Rat>> = (0..d).map(|r| gens.iter().map(|v| Rat::from_integer(v[r].clone())).collect()).collect();
    let Some(inv) = inverse(&g) else { return false };
    let q = to_rat_vec(q);
    inv.iter().all(|row| {
        let lead: Rat = row.iter().zip(&q).map(|(a, b)| a * b).sum();
        let mut key = vec![lead];
        key.extend(row.iter().cloned());
        match key.iter().find(|x| !x.is_zero()) {
            Some(x) => x.is_positive(),
            None => false,
        }
    })
}

impl Search<'_> {
    fn facets_of(cone: &[usize]) -> impl Iterator<Item = (Cone, usize)> + '_ {
        (0..cone.len()).map(move |i| {
            let mut f = cone.to_vec();
            let apex = f.remove(i);
            (f, apex)
        })
    }

    /// The smallest facet with one coface that is not on the base boundary.
    fn open_facet(&self, chosen: &BTreeSet<Cone>) -> Option<(Cone, usize)> {
        let mut count: std::collections::BTreeMap<Cone, (usize, usize)> = Default::default();
        for c in chosen {
            for (f, apex) in Self::facets_of(c) {
                count.entry(f).or_insert((0, apex)).0 += 1;
            }
        }
        count
            .into_iter()
            .filter(|(f, (n, _))| *n == 1 && !self.base.on_one_facet(f.iter().map(|&i| &self.rays[i])))
            .map(|(f, (_, apex))| (f, apex))
            .next()
    }

    fn fits(&self, chosen: &BTreeSet<Cone>, cone: &[usize]) -> bool {
        let g = generators(self.rays, cone);
        chosen.iter().all(|c| meet_properly(&generators(self.rays, c), &g))
    }

    fn extend(&mut self, chosen: &mut BTreeSet<Cone>) {
        let Some((facet, apex)) = self.open_facet(chosen) else {
            let used: BTreeSet<usize> = chosen.iter().flatten().copied().collect();
            if used.len() == self.rays.len() {
                self.found.push(chosen.clone());
            }
            return;
        };
        for r in 0..self.rays.len() {
            if facet.contains(&r) || side(self.rays, &facet, apex, r) >= 0 {
                continue;
            }
            let mut cone = facet.clone();
            cone.push(r);
            cone.sort_unstable();
            if chosen.contains(&cone) || !self.fits(chosen, &cone) {
                continue;
            }
            chosen.insert(cone.clone());
            self.extend(chosen);
            chosen.remove(&cone);
        }
    }
}

/// All simplicial fans supported on `base` whose rays are exactly `rays`
/// (every ray used), in any order of discovery.
pub fn enumerate_all_triangulations(base: &BaseCone, rays: &[IntVec]) -> Result<Vec<Fan>, EnumerateError> {
    if rays.len() > MAX_RAYS {
        return Err(EnumerateError::TooLarge { found: rays.len() });
    }
    let d = base.dim();
    let probe = Fan::new(rays.to_vec(), vec![]);
    let rays = probe.rays();
    for (i, r) in rays.iter().enumerate() {
        if r.len() != d {
            return Err(EnumerateError::InvalidRays(FanError::DimensionMismatch {
                ray: i,
                expected: d,
                found: r.len(),
            }));
        }
        if r.iter().all(Zero::is_zero) {
            return Err(EnumerateError::InvalidRays(FanError::ZeroRay(i)));
        }
        if let Some(j) = rays[..i].iter().position(|q| q == r) {
            return Err(EnumerateError::InvalidRays(FanError::DuplicateRay(j, i)));
        }
        if !base.contains(r) {
            return Err(EnumerateError::InvalidRays(FanError::RayOutsideBase(i)));
        }
    }
    let q = sum_vecs(d, base.generators().iter());
    let mut search = Search { rays, base, found: Vec::new() };
    for seed in toric_flops_core::fan::simplicial_candidates(rays) {
        if !contains_generic_point(rays, &seed, &q) {
            continue;
        }
        let mut chosen = BTreeSet::from([seed]);
        search.extend(&mut chosen);
    }
    let fans: Vec<Fan> = search
        .found
        .into_iter()
        .map(|cones| Fan::new(rays.to_vec(), cones.into_iter().collect()))
        .filter(|f| validate_fan(f, base).is_ok())
        .collect();
    Ok(fans)
}

/// The fans of [`enumerate_all_triangulations`] that are projective over the
/// base, sorted by their canonical cone lists.
pub fn enumerate_triangulations(base: &BaseCone, rays: &[IntVec]) -> Result<Vec<Fan>, EnumerateError> {
    let mut fans: Vec<Fan> =
        enumerate_all_triangulations(base, rays)?.into_iter().filter(|f| find_relative_ample(f).is_some()).collect();
    fans.sort_by_cached_key(Fan::canonical);
    Ok(fans)
}
