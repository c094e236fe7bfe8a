//! Wall curves, intersection numbers and the relative Mori cone.
//!
//! Curve classes live in the relation space `{a : Σ aᵨ vᵨ = 0}` of the ray
//! matrix. A wall curve is the primitive relation among the rays of the two
//! maximal cones adjacent to an interior wall, positive on the two rays off
//! the wall.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{dot_rat_int, primitive_of_rat, solve_linear_exact, to_rat_vec, IntVec, Rat, RatVec};
use crate::dd::{extreme_rays, ConeDesc};
use crate::divisor::ToricDivisor;
use crate::error::{ConeError, CurveError};
use crate::fan::{face_multiplicity, multiplicity, walls, Fan, Wall};

#[derive(Debug, Clone)]
pub struct CurveClass {
    pub relation: IntVec,
    /// The wall this class was read off, when it is a wall curve.
    pub wall: Option<Wall>,
}

impl PartialEq for CurveClass {
    fn eq(&self, other: &Self) -> bool {
        self.relation == other.relation
    }
}

impl Eq for CurveClass {}

impl CurveClass {
    pub fn negated(&self) -> IntVec {
        self.relation.iter().map(|x| -x).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct MoriCone {
    /// One wall curve per interior wall, in wall order.
    pub generators: Vec<CurveClass>,
    /// Classes spanning the extreme rays, sorted by relation vector.
    pub extreme: Vec<CurveClass>,
}

/// Solves `Σ_{i∈σ} xᵢ vᵢ = target` for the generators of cone `σ`.
pub(crate) fn coordinates_in_cone(fan: &Fan, cone: usize, target: &[crate::arith::Int]) -> RatVec {
    let gens = fan.cone_generators(cone);
    let d = fan.dim();
    let a: Vec<RatVec> = (0..d).map(|r| gens.iter().map(|g| Rat::from_integer(g[r].clone())).collect()).collect();
    solve_linear_exact(&a, &to_rat_vec(target)).expect("square system").expect("simplicial cone is full-dimensional")
}

pub fn wall_curve(fan: &Fan, wall: &Wall) -> Result<CurveClass, CurveError> {
    let (u, u2) = wall.opposite_rays(fan).ok_or_else(|| CurveError::BoundaryWall(wall.rays.clone()))?;
    let sigma = wall.cones[0];
    let x = coordinates_in_cone(fan, sigma, &fan.rays()[u2]);
    let mut rel: RatVec = alloc::vec![Rat::zero(); fan.num_rays()];
    for (&i, xi) in fan.cones()[sigma].iter().zip(&x) {
        rel[i] = -xi.clone();
    }
    rel[u2] = Rat::from_integer(1.into());
    let relation = primitive_of_rat(&rel);
    debug_assert!(relation[u] > 0.into() && relation[u2] > 0.into());
    Ok(CurveClass { relation, wall: Some(wall.clone()) })
}

/// `⟨m_σ, v⟩` for the Cartier functional of `d` on cone `σ`, i.e. `ψ_σ(v)`.
fn psi_on_cone(fan: &Fan, cone: usize, d: &ToricDivisor, v: &[crate::arith::Int]) -> Rat {
    let x = coordinates_in_cone(fan, cone, v);
    // ψ_σ(vᵨ) = −dᵨ on the generators, extended linearly
    -fan.cones()[cone].iter().zip(&x).map(|(&i, xi)| xi * &d.0[i]).sum::<Rat>()
}

/// Intersection number `D · C` of a Q-Cartier divisor with a wall curve.
///
/// Computed as the jump `ψ_σ(u′) − ψ_σ′(u′)` of the support function across
/// the wall, scaled by `mult(τ)/mult(σ′)`.
pub fn intersect(fan: &Fan, d: &ToricDivisor, c: &CurveClass) -> Result<Rat, CurveError> {
    if d.0.len() != fan.num_rays() {
        return Err(CurveError::RayMismatch { expected: fan.num_rays(), found: d.0.len() });
    }
    let wall = c.wall.as_ref().ok_or(CurveError::NotWallDerived)?;
    let fits =
        wall.cones.iter().all(|&ci| ci < fan.cones().len() && wall.rays.iter().all(|r| fan.cones()[ci].contains(r)));
    if !fits {
        return Err(CurveError::NotWallDerived);
    }
    let (_, u2) = wall.opposite_rays(fan).ok_or_else(|| CurveError::BoundaryWall(wall.rays.clone()))?;
    let jump = psi_on_cone(fan, wall.cones[0], d, &fan.rays()[u2]) + &d.0[u2];
    let tau: Vec<IntVec> = wall.rays.iter().map(|&i| fan.rays()[i].clone()).collect();
    let mult_tau = face_multiplicity(&tau);
    let mult_sigma2 = multiplicity(&fan.cone_generators(wall.cones[1])).map_err(|_| CurveError::NotWallDerived)?;
    Ok(jump * Rat::new(mult_tau, mult_sigma2))
}

/// Intersection numbers of every unit divisor `Dᵨ` with a wall curve: the
/// linear functional `d ↦ D·C` as a coefficient vector.
pub fn pairing_functional(fan: &Fan, c: &CurveClass) -> Result<RatVec, CurveError> {
    (0..fan.num_rays()).map(|i| intersect(fan, &ToricDivisor::unit(fan.num_rays(), i), c)).collect()
}

/// Relation-space equations: row `k` lists the `k`-th coordinate of every ray.
pub fn relation_equations(fan: &Fan) -> Vec<IntVec> {
    (0..fan.dim()).map(|k| fan.rays().iter().map(|r| r[k].clone()).collect()).collect()
}

pub fn mori_extremal_classes(fan: &Fan) -> Result<MoriCone, CurveError> {
    let generators: Vec<CurveClass> =
        walls(fan).iter().filter(|w| w.is_interior()).map(|w| wall_curve(fan, w)).collect::<Result<_, _>>()?;
    if generators.is_empty() {
        return Ok(MoriCone::default());
    }
    let distinct: Vec<IntVec> =
        generators.iter().map(|c| c.relation.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let eqs = relation_equations(fan);
    let rays = extreme_rays(&ConeDesc::from_generators(distinct), Some(&eqs))?;
    let extreme = rays
        .into_iter()
        .map(|r| generators.iter().find(|g| g.relation == r).cloned().ok_or(CurveError::Cone(ConeError::Empty)))
        .collect::<Result<_, _>>()?;
    Ok(MoriCone { generators, extreme })
}

/// `a·d`: the relation paired with divisor coefficients. Proportional to
/// `D·C` with a positive factor for wall curves.
pub fn relation_pairing(c: &CurveClass, d: &ToricDivisor) -> Rat {
    dot_rat_int(&d.0, &c.relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_vec, rat};
    use crate::divisor::canonical_divisor;
    use crate::fan::fixtures::*;
    use alloc::vec;

    fn interior(fan: &Fan) -> Vec<Wall> {
        walls(fan).into_iter().filter(Wall::is_interior).collect()
    }

    #[test]
    fn conifold_wall_curves() {
        let a = fan_a();
        let c = wall_curve(&a, &interior(&a)[0]).unwrap();
        assert_eq!(c.relation, int_vec(&[-1, 1, -1, 1]));
        let b = fan_b();
        let c = wall_curve(&b, &interior(&b)[0]).unwrap();
        assert_eq!(c.relation, int_vec(&[1, -1, 1, -1]));
    }

    #[test]
    fn smooth_surface_wall_curve() {
        let (_, fan) = smooth_2d();
        let c = wall_curve(&fan, &interior(&fan)[0]).unwrap();
        assert_eq!(c.relation, int_vec(&[1, -1, 1]));
    }

    #[test]
    fn boundary_wall_rejected() {
        let a = fan_a();
        let w = walls(&a).into_iter().find(|w| !w.is_interior()).unwrap();
        assert!(matches!(wall_curve(&a, &w), Err(CurveError::BoundaryWall(_))));
    }

    #[test]
    fn conifold_intersections() {
        let a = fan_a();
        let c = wall_curve(&a, &interior(&a)[0]).unwrap();
        assert_eq!(intersect(&a, &canonical_divisor(&a), &c).unwrap(), rat(0, 1));
        assert_eq!(intersect(&a, &ToricDivisor::unit(4, 0), &c).unwrap(), rat(-1, 1));
        assert_eq!(intersect(&a, &ToricDivisor::unit(4, 1), &c).unwrap(), rat(1, 1));
        // div(χ^m) has coefficients ⟨m, vᵨ⟩
        let m = int_vec(&[2, -1, 5]);
        let principal = ToricDivisor(a.rays().iter().map(|v| Rat::from_integer(crate::arith::dot(&m, v))).collect());
        assert_eq!(intersect(&a, &principal, &c).unwrap(), rat(0, 1));
    }

    #[test]
    fn unwalled_class_rejected() {
        let a = fan_a();
        let c = CurveClass { relation: int_vec(&[-1, 1, -1, 1]), wall: None };
        assert_eq!(intersect(&a, &ToricDivisor::unit(4, 0), &c), Err(CurveError::NotWallDerived));
    }

    #[test]
    fn conifold_mori_cone() {
        let m = mori_extremal_classes(&fan_a()).unwrap();
        assert_eq!(m.generators.len(), 1);
        assert_eq!(m.extreme.len(), 1);
        assert_eq!(m.extreme[0].relation, int_vec(&[-1, 1, -1, 1]));
    }

    fn lift(points: &[[i64; 2]]) -> Vec<IntVec> {
        points.iter().map(|p| int_vec(&[p[0], p[1], 1])).collect()
    }

    #[test]
    fn rectangle_with_parallel_diagonals() {
        let rays = lift(&[[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1]]);
        let fan = Fan::new(rays, vec![vec![0, 1, 4], vec![0, 3, 4], vec![1, 2, 5], vec![1, 4, 5]]);
        let m = mori_extremal_classes(&fan).unwrap();
        // three walls with distinct classes in a rank-3 space: nothing to drop
        assert_eq!(m.generators.len(), 3);
        assert_eq!(m.extreme.len(), 3);
        assert_eq!(m.generators[1].relation, int_vec(&[1, -1, 0, 0, -1, 1]));
    }

    #[test]
    fn hexagon_drops_interior_classes() {
        let rays = lift(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1], [0, 0]]);
        let cones = vec![vec![0, 1, 6], vec![0, 5, 6], vec![1, 2, 6], vec![2, 3, 6], vec![3, 4, 5], vec![3, 5, 6]];
        let m = mori_extremal_classes(&Fan::new(rays, cones)).unwrap();
        assert_eq!(m.generators.len(), 6);
        assert_eq!(m.extreme.len(), 4);
        let ext: Vec<IntVec> = m.extreme.iter().map(|c| c.relation.clone()).collect();
        for g in &m.generators {
            assert!(crate::dd::cone_contains(&ext, &g.relation).unwrap());
        }
    }

    #[test]
    fn one_cone_mori_cone_is_empty() {
        let fan = Fan::new(vec![int_vec(&[1, 0]), int_vec(&[0, 1])], vec![vec![0, 1]]);
        let m = mori_extremal_classes(&fan).unwrap();
        assert!(m.generators.is_empty() && m.extreme.is_empty());
    }
}
