use toric_flops_core::arith::{int, int_vec, rat};
use toric_flops_core::{
    decompose, setup_parameters, verify_sequence, BaseCone, Boundary, Fan, IntVec, MmpError, MmpOptions, Problem,
    ToricDivisor, Verdict,
};

fn lift(points: &[[i64; 2]]) -> Vec<IntVec> {
    points.iter().map(|p| int_vec(&[p[0], p[1], 1])).collect()
}

fn conifold(boundary: Boundary) -> Problem {
    let rays = lift(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
    Problem {
        base: BaseCone::new(rays.clone()).unwrap(),
        source: Fan::new(rays.clone(), vec![vec![0, 1, 2], vec![0, 2, 3]]),
        target: Fan::new(rays, vec![vec![0, 1, 3], vec![1, 2, 3]]),
        boundary,
        l_target: None,
        h_source: None,
    }
}

/// Rectangle triangulations with both diagonals through (1,0): one fan uses
/// (1,0)-(0,1) and (1,0)-(2,1), the other (0,0)-(1,1) and (1,1)-(2,0).
fn rectangle_pair() -> Problem {
    let rays = lift(&[[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1]]);
    Problem {
        base: BaseCone::new(lift(&[[0, 0], [2, 0], [0, 1], [2, 1]])).unwrap(),
        source: Fan::new(rays.clone(), vec![vec![0, 1, 3], vec![1, 3, 4], vec![1, 2, 5], vec![1, 4, 5]]),
        target: Fan::new(rays, vec![vec![0, 1, 4], vec![0, 3, 4], vec![1, 2, 4], vec![2, 4, 5]]),
        boundary: Boundary::zero(6),
        l_target: None,
        h_source: None,
    }
}

#[test]
fn fractional_boundary_changes_k_and_e() {
    let p = conifold(Boundary(vec![rat(1, 3), rat(1, 3), rat(0, 1), rat(0, 1)]));
    let seq = decompose(&p, &MmpOptions::default()).unwrap();
    assert_eq!(seq.config.k, int(3));
    assert_eq!(seq.config.e, rat(1, 19));
    assert_eq!(seq.steps.len(), 1);
    assert_eq!(verify_sequence(&seq), Verdict::Pass);
    assert_eq!(seq.flip_divisor(), seq.config.l_divisor.scaled(&(&seq.config.e * &seq.config.l)));
}

#[test]
fn two_flops_on_the_rectangle() {
    let seq = decompose(&rectangle_pair(), &MmpOptions::default()).unwrap();
    assert_eq!(seq.steps.len(), 2);
    for pair in seq.steps.windows(2) {
        assert!(pair[1].t0 <= pair[0].t0);
        assert!(pair[0].after.same_as(&pair[1].before));
    }
    assert_eq!(verify_sequence(&seq), Verdict::Pass);
}

#[test]
fn target_given_in_another_ray_order() {
    let mut p = rectangle_pair();
    let mut order = p.target.rays().to_vec();
    order.reverse();
    p.target = p.target.reindexed(&order).unwrap();
    let seq = decompose(&p, &MmpOptions::default()).unwrap();
    assert!(seq.final_fan.same_as(&p.target));
}

#[test]
fn explicit_auxiliary_divisors() {
    let mut p = conifold(Boundary::zero(4));
    p.l_target = Some(ToricDivisor::from_ints(&[int(0), int(0), int(1), int(0)]));
    p.h_source = Some(ToricDivisor::from_ints(&[int(0), int(1), int(0), int(0)]));
    let c = setup_parameters(&p).unwrap();
    assert_eq!(c.l_divisor, p.l_target.clone().unwrap());
    assert_eq!(c.h, p.h_source.clone().unwrap());
    assert_eq!(verify_sequence(&decompose(&p, &MmpOptions::default()).unwrap()), Verdict::Pass);

    // D_{v₂} is anti-ample on the target's curve
    p.l_target = Some(ToricDivisor::from_ints(&[int(0), int(1), int(0), int(0)]));
    assert_eq!(setup_parameters(&p), Err(MmpError::BadAuxiliaryDivisor("L'")));
}

#[test]
fn distinct_hypothesis_errors() {
    let not_nef =
        decompose(&conifold(Boundary(vec![rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1)])), &MmpOptions::default());
    assert_eq!(not_nef.unwrap_err(), MmpError::NotNef("source"));

    let not_klt =
        decompose(&conifold(Boundary(vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)])), &MmpOptions::default());
    assert_eq!(not_klt.unwrap_err(), MmpError::NotKlt);

    let short = decompose(&conifold(Boundary::zero(3)), &MmpOptions::default());
    assert!(matches!(short.unwrap_err(), MmpError::BoundaryLength { expected: 4, found: 3 }));

    let rays = vec![int_vec(&[0, 0, 1]), int_vec(&[2, 0, 1]), int_vec(&[0, 2, 1])];
    let fan = Fan::new(rays.clone(), vec![vec![0, 1, 2]]);
    let p = Problem {
        base: BaseCone::new(rays).unwrap(),
        source: fan.clone(),
        target: fan,
        boundary: Boundary::zero(3),
        l_target: None,
        h_source: None,
    };
    let e = decompose(&p, &MmpOptions::default()).unwrap_err();
    assert_eq!(e, MmpError::NotTerminal("source"));
    assert!(e.is_hypothesis_violation());
}

#[test]
fn tampered_cone_list_is_located() {
    let mut seq = decompose(&rectangle_pair(), &MmpOptions::default()).unwrap();
    seq.steps[1].after = seq.steps[0].after.clone();
    assert!(matches!(verify_sequence(&seq), Verdict::Fail { step: 2, .. }));
}
