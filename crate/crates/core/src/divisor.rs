//! Torus-invariant divisors, Cartier data and relative positivity.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_traits::{One, Signed, Zero};

use crate::arith::{dot_rat_int, lcm_all, primitive_of_rat, rat_int, solve_linear_exact, Int, Rat, RatVec};
use crate::curve::{intersect, pairing_functional, wall_curve};
use crate::error::{DivisorError, FanError};
use crate::fan::{simplicial_inequalities, walls, Fan, Wall};
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Coefficients `dᵨ` of `Σ dᵨ Dᵨ`, indexed by the ray order of the fan the
/// divisor lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricDivisor(pub Vec<Rat>);

impl ToricDivisor {
    pub fn zero(num_rays: usize) -> Self {
        ToricDivisor(vec![Rat::zero(); num_rays])
    }

    pub fn unit(num_rays: usize, ray: usize) -> Self {
        let mut d = Self::zero(num_rays);
        d.0[ray] = Rat::one();
        d
    }

    pub fn from_ints(coeffs: &[Int]) -> Self {
        ToricDivisor(coeffs.iter().map(rat_int).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        ToricDivisor(self.0.iter().map(|x| x * s).collect())
    }
}

impl Add for &ToricDivisor {
    type Output = ToricDivisor;

    fn add(self, rhs: &ToricDivisor) -> ToricDivisor {
        ToricDivisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Mul<&ToricDivisor> for &Rat {
    type Output = ToricDivisor;

    fn mul(self, rhs: &ToricDivisor) -> ToricDivisor {
        rhs.scaled(self)
    }
}

/// Per-cone linear functionals `m_σ` with `⟨m_σ, vᵨ⟩ = −dᵨ` for every ray of
/// `σ`, and the Cartier index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    pub functionals: Vec<RatVec>,
    pub index: Int,
}

impl CartierData {
    /// `ψ_D(v)` for `v` in cone `σ`.
    pub fn eval(&self, cone: usize, v: &[Int]) -> Rat {
        dot_rat_int(&self.functionals[cone], v)
    }
}

fn check_len(fan: &Fan, d: &ToricDivisor) -> Result<(), DivisorError> {
    if d.0.len() != fan.num_rays() {
        return Err(DivisorError::RayMismatch { expected: fan.num_rays(), found: d.0.len() });
    }
    Ok(())
}

pub fn cartier_data(fan: &Fan, d: &ToricDivisor) -> Result<CartierData, DivisorError> {
    check_len(fan, d)?;
    let mut functionals = Vec::with_capacity(fan.cones().len());
    for (ci, cone) in fan.cones().iter().enumerate() {
        let rows: Vec<RatVec> = cone.iter().map(|&i| fan.rays()[i].iter().map(rat_int).collect()).collect();
        let rhs: Vec<Rat> = cone.iter().map(|&i| -d.0[i].clone()).collect();
        let m = solve_linear_exact(&rows, &rhs)
            .map_err(|_| DivisorError::NotQCartier(ci))?
            .ok_or(DivisorError::NotQCartier(ci))?;
        functionals.push(m);
    }
    for w in walls(fan).iter().filter(|w| w.is_interior()) {
        let (a, b) = (w.cones[0], w.cones[1]);
        let agree = w
            .rays
            .iter()
            .all(|&r| dot_rat_int(&functionals[a], &fan.rays()[r]) == dot_rat_int(&functionals[b], &fan.rays()[r]));
        if !agree {
            return Err(DivisorError::Inconsistent(a, b));
        }
    }
    let index = lcm_all(functionals.iter().flatten().chain(&d.0).map(|x| x.denom()));
    Ok(CartierData { functionals, index })
}

/// `K_X = −Σ Dᵨ`.
pub fn canonical_divisor(fan: &Fan) -> ToricDivisor {
    ToricDivisor(vec![-Rat::one(); fan.num_rays()])
}

fn wall_pairings(fan: &Fan, d: &ToricDivisor) -> Result<Vec<Rat>, DivisorError> {
    check_len(fan, d)?;
    walls(fan)
        .iter()
        .filter(|w| w.is_interior())
        .map(|w| {
            let c = wall_curve(fan, w)?;
            Ok(intersect(fan, d, &c)?)
        })
        .collect()
}

/// Nef over the base: `D·C ≥ 0` for every interior wall curve.
pub fn is_nef_relative(fan: &Fan, d: &ToricDivisor) -> Result<bool, DivisorError> {
    Ok(wall_pairings(fan, d)?.iter().all(|p| !p.is_negative()))
}

/// Ample over the base: `D·C > 0` for every interior wall curve.
pub fn is_ample_relative(fan: &Fan, d: &ToricDivisor) -> Result<bool, DivisorError> {
    Ok(wall_pairings(fan, d)?.iter().all(Signed::is_positive))
}

/// Nefness through global convexity of the support function, decided by one
/// exact LP per maximal cone: is there `m` with `⟨m, vᵨ⟩ = −dᵨ` on the cone
/// and `⟨m, vᵨ⟩ ≥ −dᵨ` on every other ray?
///
/// Does not look at walls or curve classes.
pub fn is_nef_lp(fan: &Fan, d: &ToricDivisor) -> Result<bool, DivisorError> {
    check_len(fan, d)?;
    let dim = fan.dim();
    for cone in fan.cones() {
        let mut lp = LinearProgram::new(dim);
        lp.free = vec![true; dim];
        for (i, v) in fan.rays().iter().enumerate() {
            let rel = if cone.contains(&i) { Relation::Eq } else { Relation::Ge };
            lp.add(v.iter().map(rat_int).collect(), rel, -d.0[i].clone());
        }
        if lp.solve() == LpOutcome::Infeasible {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pullback of a Q-Cartier divisor to a refinement: the coefficient at a
/// refinement ray `v` is `−ψ_D(v)`.
pub fn pullback(fan: &Fan, d: &ToricDivisor, refinement: &Fan) -> Result<ToricDivisor, DivisorError> {
    let data = cartier_data(fan, d)?;
    let ineqs: Vec<Vec<crate::arith::IntVec>> = (0..fan.cones().len())
        .map(|c| simplicial_inequalities(&fan.cone_generators(c)).ok_or(FanError::NonSimplicial(c)))
        .collect::<Result<_, _>>()?;
    let inside = |cone: usize, v: &[Int]| ineqs[cone].iter().all(|n| !crate::arith::dot(n, v).is_negative());
    for (ri, rc) in refinement.cones().iter().enumerate() {
        let ok = (0..fan.cones().len()).any(|c| rc.iter().all(|&r| inside(c, &refinement.rays()[r])));
        if !ok {
            return Err(FanError::NotRefinement(ri).into());
        }
    }
    let coeffs = refinement
        .rays()
        .iter()
        .map(|v| {
            let c = (0..fan.cones().len()).find(|&c| inside(c, v)).expect("refinement covered");
            -data.eval(c, v)
        })
        .collect();
    Ok(ToricDivisor(coeffs))
}

/// An effective divisor that is ample over the base, or `None` when the fan
/// is not projective over the base.
///
/// Solves `min Σ dᵨ` subject to `dᵨ ≥ 0` and `D·C ≥ 1` for every interior
/// wall curve, then clears denominators and divides by the gcd.
pub fn find_relative_ample(fan: &Fan) -> Option<ToricDivisor> {
    let n = fan.num_rays();
    let interior: Vec<Wall> = walls(fan).into_iter().filter(Wall::is_interior).collect();
    let mut lp = LinearProgram::new(n);
    lp.objective = vec![Rat::one(); n];
    for w in &interior {
        let c = wall_curve(fan, w).ok()?;
        let f = pairing_functional(fan, &c).ok()?;
        lp.add(f, Relation::Ge, Rat::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(ToricDivisor::from_ints(&primitive_of_rat(&x))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, int_vec, rat};
    use crate::fan::fixtures::*;
    use crate::refine::common_refinement;

    fn rv(v: &[i64]) -> RatVec {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn canonical_cartier_data_is_height() {
        let a = fan_a();
        let k = canonical_divisor(&a);
        assert_eq!(k.0, rv(&[-1, -1, -1, -1]));
        let data = cartier_data(&a, &k).unwrap();
        assert_eq!(data.functionals, vec![rv(&[0, 0, 1]), rv(&[0, 0, 1])]);
        assert_eq!(data.index, int(1));
    }

    #[test]
    fn unit_divisor_on_fan_b() {
        let b = fan_b();
        let data = cartier_data(&b, &ToricDivisor::unit(4, 0)).unwrap();
        // cones {v1 v2 v4} and {v2 v3 v4}
        assert_eq!(data.functionals, vec![rv(&[1, 1, -1]), rv(&[0, 0, 0])]);
        assert_eq!(data.index, int(1));
        let zero = cartier_data(&b, &ToricDivisor::zero(4)).unwrap();
        assert!(zero.functionals.iter().flatten().all(Zero::is_zero));
    }

    #[test]
    fn ray_mismatch() {
        assert_eq!(
            cartier_data(&fan_a(), &ToricDivisor::zero(3)),
            Err(DivisorError::RayMismatch { expected: 4, found: 3 })
        );
    }

    #[test]
    fn nefness_examples() {
        let a = fan_a();
        let b = fan_b();
        assert!(is_nef_relative(&a, &canonical_divisor(&a)).unwrap());
        assert!(!is_ample_relative(&a, &canonical_divisor(&a)).unwrap());
        assert!(!is_nef_relative(&a, &ToricDivisor::unit(4, 0)).unwrap());
        assert!(is_ample_relative(&b, &ToricDivisor::unit(4, 0)).unwrap());
        for fan in [&a, &b] {
            for i in 0..4 {
                let d = ToricDivisor::unit(4, i);
                assert_eq!(is_nef_lp(fan, &d).unwrap(), is_nef_relative(fan, &d).unwrap());
            }
        }
    }

    #[test]
    fn pullback_to_common_refinement() {
        let a = fan_a();
        let r = common_refinement(&a, &fan_b()).unwrap();
        let p = pullback(&a, &canonical_divisor(&a), &r).unwrap();
        let w = r.ray_index(&int_vec(&[1, 1, 2])).unwrap();
        assert_eq!(p.0[w], rat(-2, 1));
        for (i, v) in r.rays().iter().enumerate() {
            if i != w {
                assert!(a.ray_index(v).is_some());
                assert_eq!(p.0[i], rat(-1, 1));
            }
        }
        assert_eq!(pullback(&a, &ToricDivisor::zero(4), &r).unwrap(), ToricDivisor::zero(5));
        let d = ToricDivisor(rv(&[3, -1, 2, 5]));
        assert_eq!(pullback(&a, &d, &a).unwrap(), d);
    }

    #[test]
    fn pullback_requires_refinement() {
        assert!(matches!(
            pullback(&fan_a(), &ToricDivisor::zero(4), &fan_b()),
            Err(DivisorError::Fan(FanError::NotRefinement(_)))
        ));
    }

    #[test]
    fn relative_ample_divisors() {
        let b = fan_b();
        let lb = find_relative_ample(&b).unwrap();
        assert!(lb.is_effective());
        assert!(is_ample_relative(&b, &lb).unwrap());
        let a = fan_a();
        let la = find_relative_ample(&a).unwrap();
        assert!(is_ample_relative(&a, &la).unwrap());
        assert!(is_ample_relative(&a, &ToricDivisor::unit(4, 1)).unwrap());
        let one = Fan::new(vec![int_vec(&[1, 0]), int_vec(&[0, 1])], vec![vec![0, 1]]);
        assert_eq!(find_relative_ample(&one), Some(ToricDivisor::zero(2)));
    }
}
