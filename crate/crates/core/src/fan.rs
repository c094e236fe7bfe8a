//! Simplicial fans refining a pointed base cone.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{
    det, dot, inverse, is_primitive, is_zero_vec, maximal_minor_gcd, primitive, primitive_of_rat, rank_int, subsets,
    to_rat_vec, Int, IntVec, Rat, RatVec,
};
use crate::dd::{facets, rays_of_inequalities};
use crate::error::FanError;
use crate::lattice::enumerate_lattice_points;

/// The cone of the affine base `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCone {
    generators: Vec<IntVec>,
    facet_normals: Vec<IntVec>,
}

impl BaseCone {
    pub fn new(generators: Vec<IntVec>) -> Result<Self, FanError> {
        let generators: Vec<IntVec> = generators.iter().map(|g| primitive(g)).collect();
        let dim = generators.first().map_or(0, Vec::len);
        if dim == 0 || rank_int(&generators) < dim {
            return Err(FanError::BadBaseCone);
        }
        let fs = facets(&generators).map_err(|_| FanError::BadBaseCone)?;
        let facet_normals = fs.into_iter().map(|f| f.normal).collect();
        Ok(Self { generators, facet_normals })
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    /// Inner facet normals.
    pub fn facet_normals(&self) -> &[IntVec] {
        &self.facet_normals
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.facet_normals.iter().all(|f| !dot(f, v).is_negative())
    }

    /// Whether all the given vectors lie on one common facet.
    pub fn on_one_facet<'a>(&self, vs: impl IntoIterator<Item = &'a IntVec> + Clone) -> bool {
        self.facet_normals.iter().any(|f| vs.clone().into_iter().all(|v| dot(f, v).is_zero()))
    }
}

/// A fan given by primitive rays and simplicial maximal cones (sorted ray
/// index sets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rays: Vec<IntVec>,
    cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Rays are made primitive and each cone's index list is sorted; no other
    /// checking happens here (see [`validate_fan`]).
    pub fn new(rays: Vec<IntVec>, cones: Vec<Vec<usize>>) -> Self {
        let rays = rays.iter().map(|r| primitive(r)).collect();
        let cones = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Self { rays, cones }
    }

    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_generators(&self, cone: usize) -> Vec<IntVec> {
        self.cones[cone].iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn ray_index(&self, v: &[Int]) -> Option<usize> {
        self.rays.iter().position(|r| r.as_slice() == v)
    }

    pub fn ray_set(&self) -> BTreeSet<IntVec> {
        self.rays.iter().cloned().collect()
    }

    /// Cones as sorted lists of ray vectors, sorted; independent of ray and
    /// cone order.
    pub fn canonical(&self) -> Vec<Vec<IntVec>> {
        let mut out: Vec<Vec<IntVec>> = self
            .cones
            .iter()
            .map(|c| {
                let mut v: Vec<IntVec> = c.iter().map(|&i| self.rays[i].clone()).collect();
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    /// Equality as sets of maximal cones over identical ray sets.
    pub fn same_as(&self, other: &Fan) -> bool {
        self.ray_set() == other.ray_set() && self.canonical() == other.canonical()
    }

    /// The same fan with its rays listed in the given order; `None` unless the
    /// ray sets agree.
    pub fn reindexed(&self, order: &[IntVec]) -> Option<Fan> {
        if order.len() != self.rays.len() {
            return None;
        }
        let map: Vec<usize> = self.rays.iter().map(|r| order.iter().position(|o| o == r)).collect::<Option<_>>()?;
        let cones = self.cones.iter().map(|c| c.iter().map(|&i| map[i]).collect()).collect();
        Some(Fan::new(order.to_vec(), cones))
    }

    pub(crate) fn with_cones(&self, cones: Vec<Vec<usize>>) -> Fan {
        Fan::new(self.rays.clone(), cones)
    }
}

/// Coefficients `bᵨ` of a torus-invariant boundary, one per ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary(pub Vec<Rat>);

impl Boundary {
    pub fn zero(num_rays: usize) -> Self {
        Boundary(alloc::vec![Rat::zero(); num_rays])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }
}

/// A codimension-one face of a fan together with its maximal cofaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub cones: Vec<usize>,
}

impl Wall {
    pub fn is_interior(&self) -> bool {
        self.cones.len() == 2
    }

    /// The rays `u ∈ σ∖τ` and `u′ ∈ σ′∖τ` of an interior wall, where `σ` and
    /// `σ′` are its first and second coface.
    pub fn opposite_rays(&self, fan: &Fan) -> Option<(usize, usize)> {
        if !self.is_interior() {
            return None;
        }
        let pick = |c: usize| fan.cones[c].iter().copied().find(|i| !self.rays.contains(i));
        Some((pick(self.cones[0])?, pick(self.cones[1])?))
    }
}

fn faces(fan: &Fan) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let d = fan.dim();
    let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, cone) in fan.cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let face: Vec<usize> = cone.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
            if face.len() + 1 == d {
                map.entry(face).or_default().push(ci);
            }
        }
    }
    map
}

/// All codimension-one faces with their cofaces, ordered by ray index set.
pub fn walls(fan: &Fan) -> Vec<Wall> {
    faces(fan).into_iter().map(|(rays, cones)| Wall { rays, cones }).collect()
}

/// Inner facet normals of a full-dimensional simplicial cone.
pub(crate) fn simplicial_inequalities(gens: &[IntVec]) -> Option<Vec<IntVec>> {
    let m: Vec<RatVec> = gens.iter().map(|g| to_rat_vec(g)).collect();
    // rows of (Gᵀ)⁻¹ pair to δ with the generators
    let gt: Vec<RatVec> = (0..m.len()).map(|i| m.iter().map(|g| g[i].clone()).collect()).collect();
    let inv = inverse(&gt)?;
    Some(inv.iter().map(|row| primitive_of_rat(row)).collect())
}

/// Whether two full-dimensional simplicial cones meet in their common face.
pub fn meet_properly(a: &[IntVec], b: &[IntVec]) -> bool {
    let (Some(ha), Some(hb)) = (simplicial_inequalities(a), simplicial_inequalities(b)) else {
        return false;
    };
    let rows: Vec<IntVec> = ha.into_iter().chain(hb).collect();
    let Ok(rays) = rays_of_inequalities(&rows, a[0].len()) else {
        return false;
    };
    let got: BTreeSet<IntVec> = rays.into_iter().map(|r| r.ray).collect();
    let sa: BTreeSet<&IntVec> = a.iter().collect();
    let shared: BTreeSet<IntVec> = b.iter().filter(|v| sa.contains(v)).cloned().collect();
    got == shared
}

/// Checks every fan invariant against the base cone, reporting the first
/// violation.
pub fn validate_fan(fan: &Fan, base: &BaseCone) -> Result<(), FanError> {
    let d = base.dim();
    if fan.cones.is_empty() {
        return Err(FanError::Empty);
    }
    for (i, r) in fan.rays.iter().enumerate() {
        if r.len() != d {
            return Err(FanError::DimensionMismatch { ray: i, expected: d, found: r.len() });
        }
        if is_zero_vec(r) {
            return Err(FanError::ZeroRay(i));
        }
        if let Some(j) = fan.rays[..i].iter().position(|q| q == r) {
            return Err(FanError::DuplicateRay(j, i));
        }
    }
    let mut used = alloc::vec![false; fan.rays.len()];
    let mut seen: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
    for (ci, cone) in fan.cones.iter().enumerate() {
        if let Some(&bad) = cone.iter().find(|&&i| i >= fan.rays.len()) {
            return Err(FanError::BadRayIndex { cone: ci, index: bad });
        }
        let distinct: BTreeSet<usize> = cone.iter().copied().collect();
        if cone.len() != d || distinct.len() != d || det(&fan.cone_generators(ci)).is_zero() {
            return Err(FanError::NonSimplicial(ci));
        }
        if let Some(&prev) = seen.get(cone) {
            return Err(FanError::DuplicateCone(prev, ci));
        }
        seen.insert(cone, ci);
        for &i in cone {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(FanError::UnusedRay(i));
    }
    if let Some(i) = fan.rays.iter().position(|r| !base.contains(r)) {
        return Err(FanError::RayOutsideBase(i));
    }
    let face_map = faces(fan);
    for (face, cofaces) in &face_map {
        let gens: Vec<&IntVec> = face.iter().map(|&i| &fan.rays[i]).collect();
        if cofaces.len() == 1 && !base.on_one_facet(gens.iter().copied()) {
            return Err(FanError::SupportMismatch { face: face.clone() });
        }
    }
    for (face, cofaces) in &face_map {
        let gens: Vec<&IntVec> = face.iter().map(|&i| &fan.rays[i]).collect();
        if cofaces.len() > 2 || (cofaces.len() == 2 && base.on_one_facet(gens.iter().copied())) {
            return Err(FanError::Overlap(cofaces[0], cofaces[1]));
        }
    }
    let gens: Vec<Vec<IntVec>> = (0..fan.cones.len()).map(|c| fan.cone_generators(c)).collect();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !meet_properly(&gens[i], &gens[j]) {
                return Err(FanError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

/// Lattice index of a full-dimensional simplicial cone: `|det|` of its
/// primitive generators. Equals 1 exactly for smooth cones.
pub fn multiplicity(gens: &[IntVec]) -> Result<Int, FanError> {
    let d = gens.first().map_or(0, Vec::len);
    if gens.len() != d {
        return Err(FanError::NonSimplicial(0));
    }
    let m = det(gens).abs();
    if m.is_zero() {
        return Err(FanError::NonSimplicial(0));
    }
    Ok(m)
}

/// Multiplicity of a simplicial cone of any dimension: the index of the
/// lattice spanned by its generators inside the saturated sublattice.
pub fn face_multiplicity(gens: &[IntVec]) -> Int {
    maximal_minor_gcd(gens)
}

pub fn is_klt_pair(b: &Boundary) -> bool {
    b.0.iter().all(|x| !x.is_negative() && x < &Rat::one())
}

/// Toric terminality of `(X, B)`: with `ψ(vᵨ) = 1 − bᵨ` extended linearly on
/// each cone, every primitive lattice point of the support that is not a ray
/// generator must have `ψ > 1`.
pub fn is_terminal_pair(fan: &Fan, b: &Boundary) -> bool {
    assert_eq!(b.0.len(), fan.num_rays(), "boundary length must match the ray count");
    for (ci, cone) in fan.cones.iter().enumerate() {
        let weights: Vec<Rat> = cone.iter().map(|&i| Rat::one() - &b.0[i]).collect();
        let Some(min) = weights.iter().min().cloned() else {
            continue;
        };
        if !min.is_positive() {
            return false;
        }
        let verts: Vec<RatVec> = fan.cone_generators(ci).iter().map(|g| to_rat_vec(g)).collect();
        let Ok(points) = enumerate_lattice_points(&verts, &min.recip()) else {
            return false;
        };
        for p in points {
            if is_zero_vec(&p.point) || !is_primitive(&p.point) || fan.ray_index(&p.point).is_some() {
                continue;
            }
            let psi: Rat = p.coords.iter().zip(&weights).map(|(l, w)| l * w).sum();
            if psi <= Rat::one() {
                return false;
            }
        }
    }
    true
}

/// Isomorphism in codimension one: equal ray sets.
pub fn iso_in_codim1(a: &Fan, b: &Fan) -> bool {
    a.ray_set() == b.ray_set()
}

/// All `d`-subsets of the rays spanning a full-dimensional cone; helper for
/// enumeration code.
pub fn simplicial_candidates(rays: &[IntVec]) -> Vec<Vec<usize>> {
    let d = rays.first().map_or(0, Vec::len);
    subsets(rays.len(), d)
        .into_iter()
        .filter(|s| {
            let g: Vec<IntVec> = s.iter().map(|&i| rays[i].clone()).collect();
            !det(&g).is_zero()
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::arith::{int, int_vec, rat};
    use alloc::vec;

    #[test]
    fn conifold_fans_are_valid() {
        assert_eq!(validate_fan(&fan_a(), &conifold_base()), Ok(()));
        assert_eq!(validate_fan(&fan_b(), &conifold_base()), Ok(()));
    }

    #[test]
    fn overlapping_cones_fail_support() {
        let bad = Fan::new(conifold_rays(), vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert!(matches!(validate_fan(&bad, &conifold_base()), Err(FanError::SupportMismatch { .. })));
    }

    #[test]
    fn one_cone_fan() {
        let base = BaseCone::new(vec![int_vec(&[1, 0]), int_vec(&[0, 1])]).unwrap();
        let fan = Fan::new(vec![int_vec(&[1, 0]), int_vec(&[0, 1])], vec![vec![0, 1]]);
        assert_eq!(validate_fan(&fan, &base), Ok(()));
        assert!(walls(&fan).iter().all(|w| !w.is_interior()));
    }

    #[test]
    fn other_violations() {
        let base = conifold_base();
        let unused = Fan::new(
            vec![
                int_vec(&[0, 0, 1]),
                int_vec(&[1, 0, 1]),
                int_vec(&[1, 1, 1]),
                int_vec(&[0, 1, 1]),
                int_vec(&[1, 1, 2]),
            ],
            vec![vec![0, 1, 2], vec![0, 2, 3]],
        );
        assert_eq!(validate_fan(&unused, &base), Err(FanError::UnusedRay(4)));
        let flat = Fan::new(conifold_rays(), vec![vec![0, 1, 1], vec![0, 2, 3]]);
        assert_eq!(validate_fan(&flat, &base), Err(FanError::NonSimplicial(0)));
        let outside =
            Fan::new(vec![int_vec(&[0, 0, 1]), int_vec(&[2, 0, 1]), int_vec(&[0, 1, 1])], vec![vec![0, 1, 2]]);
        assert_eq!(validate_fan(&outside, &base), Err(FanError::RayOutsideBase(1)));
        let dup = Fan::new(conifold_rays(), vec![vec![0, 1, 2], vec![0, 2, 3], vec![2, 0, 1]]);
        assert_eq!(validate_fan(&dup, &base), Err(FanError::DuplicateCone(0, 2)));
    }

    #[test]
    fn conifold_walls() {
        let wa: Vec<Wall> = walls(&fan_a()).into_iter().filter(Wall::is_interior).collect();
        assert_eq!(wa.len(), 1);
        assert_eq!(wa[0].rays, vec![0, 2]);
        let wb: Vec<Wall> = walls(&fan_b()).into_iter().filter(Wall::is_interior).collect();
        assert_eq!(wb.len(), 1);
        assert_eq!(wb[0].rays, vec![1, 3]);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity(&conifold_rays()[..3]).unwrap(), int(1));
        assert_eq!(multiplicity(&[int_vec(&[1, 0]), int_vec(&[1, 2])]).unwrap(), int(2));
        let e: Vec<IntVec> = (0..4).map(|i| (0..4).map(|j| int((i == j) as i64)).collect()).collect();
        assert_eq!(multiplicity(&e).unwrap(), int(1));
        assert!(multiplicity(&[int_vec(&[1, 0]), int_vec(&[2, 0])]).is_err());
        assert!(multiplicity(&[int_vec(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn terminality() {
        let b0 = Boundary::zero(4);
        assert!(is_terminal_pair(&fan_a(), &b0));
        let rays = vec![int_vec(&[0, 0, 1]), int_vec(&[2, 0, 1]), int_vec(&[0, 2, 1])];
        let fan = Fan::new(rays, vec![vec![0, 1, 2]]);
        assert!(!is_terminal_pair(&fan, &Boundary::zero(3)));
        let (_, smooth) = smooth_2d();
        assert!(is_terminal_pair(&smooth, &Boundary::zero(3)));
    }

    #[test]
    fn klt() {
        assert!(is_klt_pair(&Boundary::zero(3)));
        assert!(!is_klt_pair(&Boundary(vec![rat(0, 1), rat(1, 1)])));
        assert!(is_klt_pair(&Boundary(vec![rat(6, 7)])));
        assert!(!is_klt_pair(&Boundary(vec![rat(-1, 7)])));
    }

    #[test]
    fn codim_one() {
        assert!(iso_in_codim1(&fan_a(), &fan_b()));
        assert!(iso_in_codim1(&fan_a(), &fan_a()));
        let mut rays = conifold_rays();
        rays.push(int_vec(&[1, 1, 2]));
        let star = Fan::new(rays, vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]]);
        assert!(!iso_in_codim1(&fan_a(), &star));
        assert_eq!(validate_fan(&star, &conifold_base()), Ok(()));
    }

    #[test]
    fn canonical_ignores_order() {
        let a = fan_a();
        let permuted = Fan::new(conifold_rays(), vec![vec![3, 2, 0], vec![2, 1, 0]]);
        assert!(a.same_as(&permuted));
        assert!(!a.same_as(&fan_b()));
        let mut order = conifold_rays();
        order.reverse();
        let re = a.reindexed(&order).unwrap();
        assert!(re.same_as(&a));
        assert_eq!(re.rays()[0], int_vec(&[0, 1, 1]));
    }
}
