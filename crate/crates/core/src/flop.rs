//! Circuit (bistellar) flips of simplicial fans.
//!
//! For an extremal class with relation `a`, let `J₊`/`J₋` be the rays with
//! positive/negative coefficient and `J = J₊ ∪ J₋`. Every wall carrying the
//! class sits in a group of cones `(J ∖ {j}) ∪ K`, `j ∈ J₊`, for some link
//! `K` disjoint from `J`. The flip replaces each such group by
//! `(J ∖ {j}) ∪ K`, `j ∈ J₋`. The ray set is unchanged as long as `|J₋| ≥ 2`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::curve::{mori_extremal_classes, wall_curve, CurveClass};
use crate::error::FlopError;
use crate::fan::{validate_fan, walls, BaseCone, Fan};

pub fn execute_flop(fan: &Fan, class: &CurveClass) -> Result<Fan, FlopError> {
    let rel = &class.relation;
    let mori = mori_extremal_classes(fan)?;
    if !mori.extreme.iter().any(|c| &c.relation == rel) {
        return Err(FlopError::NotExtremal(rel.clone()));
    }
    let plus: BTreeSet<usize> = (0..rel.len()).filter(|&i| rel[i].is_positive()).collect();
    let minus: BTreeSet<usize> = (0..rel.len()).filter(|&i| rel[i].is_negative()).collect();
    if minus.len() < 2 || plus.len() < 2 {
        return Err(FlopError::NotSmall(rel.clone()));
    }
    let support: BTreeSet<usize> = plus.union(&minus).copied().collect();

    let mut links: BTreeSet<Vec<usize>> = BTreeSet::new();
    for w in walls(fan).iter().filter(|w| w.is_interior()) {
        if &wall_curve(fan, w)?.relation != rel {
            continue;
        }
        let mut merged: BTreeSet<usize> = w.rays.iter().copied().collect();
        let (u, u2) = w.opposite_rays(fan).expect("interior wall");
        merged.insert(u);
        merged.insert(u2);
        if !support.is_subset(&merged) {
            return Err(FlopError::ClassMismatch(rel.clone()));
        }
        links.insert(merged.difference(&support).copied().collect());
    }
    if links.is_empty() {
        return Err(FlopError::NoWall(rel.clone()));
    }

    let existing: BTreeMap<&Vec<usize>, usize> = fan.cones().iter().enumerate().map(|(i, c)| (c, i)).collect();
    let cone_of = |link: &Vec<usize>, omit: usize| -> Vec<usize> {
        let mut c: Vec<usize> = support.iter().copied().filter(|&j| j != omit).chain(link.iter().copied()).collect();
        c.sort_unstable();
        c
    };
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut added: Vec<Vec<usize>> = Vec::new();
    for link in &links {
        for &j in &plus {
            let c = cone_of(link, j);
            let idx = existing.get(&c).ok_or_else(|| FlopError::ClassMismatch(rel.clone()))?;
            removed.insert(*idx);
        }
        for &j in &minus {
            added.push(cone_of(link, j));
        }
    }
    let mut cones: Vec<Vec<usize>> =
        fan.cones().iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, c)| c.clone()).collect();
    cones.extend(added);
    let out = fan.with_cones(cones);

    let base = BaseCone::new(fan.rays().to_vec()).map_err(FlopError::InvalidResult)?;
    validate_fan(&out, &base).map_err(FlopError::InvalidResult)?;
    debug_assert!(rel.iter().any(|x| !x.is_zero()));
    Ok(out)
}
