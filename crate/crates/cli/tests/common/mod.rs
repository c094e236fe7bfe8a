#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toric_flops_core::arith::{int, int_vec};
use toric_flops_core::{BaseCone, Boundary, Fan, Int, IntVec, Problem, Rat, ToricDivisor};

pub struct Family {
    pub name: &'static str,
    pub base: BaseCone,
    pub rays: Vec<IntVec>,
}

fn lift(points: &[[i64; 2]]) -> Vec<IntVec> {
    points.iter().map(|p| int_vec(&[p[0], p[1], 1])).collect()
}

pub fn conifold() -> Family {
    let rays = lift(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
    Family { name: "conifold", base: BaseCone::new(rays.clone()).unwrap(), rays }
}

/// Cone over the 2×1 rectangle with all six lattice points.
pub fn rectangle() -> Family {
    let rays = lift(&[[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1]]);
    let base = BaseCone::new(lift(&[[0, 0], [2, 0], [0, 1], [2, 1]])).unwrap();
    Family { name: "rectangle", base, rays }
}

/// Cone over the hexagon with vertices (±1,0), (0,±1), ±(1,1) and its centre.
pub fn hexagon() -> Family {
    let vertices = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
    let mut points = vertices.to_vec();
    points.push([0, 0]);
    Family { name: "hexagon", base: BaseCone::new(lift(&vertices)).unwrap(), rays: lift(&points) }
}

pub fn planar(rays: &[IntVec]) -> Vec<[i64; 2]> {
    rays.iter()
        .map(|r| {
            assert_eq!(r[2], int(1), "oracle expects height-one rays");
            [i64::try_from(&r[0]).unwrap(), i64::try_from(&r[1]).unwrap()]
        })
        .collect()
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Twice the area of the convex hull (monotone chain).
fn hull_area2(points: &[[i64; 2]]) -> i64 {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let hull: Vec<[i64; 2]> = lower.into_iter().chain(upper).collect();
    (0..hull.len()).map(|i| cross([0, 0], hull[i], hull[(i + 1) % hull.len()])).sum::<i64>().abs()
}

/// Projection interval of a triangle on the axis `n`.
fn project(t: &[[i64; 2]; 3], n: [i64; 2]) -> (i64, i64) {
    let v: Vec<i64> = t.iter().map(|p| p[0] * n[0] + p[1] * n[1]).collect();
    (*v.iter().min().unwrap(), *v.iter().max().unwrap())
}

/// Separating axis test: interiors are disjoint iff some edge normal gives
/// projections overlapping in at most a point.
fn interiors_disjoint(a: &[[i64; 2]; 3], b: &[[i64; 2]; 3]) -> bool {
    for t in [a, b] {
        for i in 0..3 {
            let (p, q) = (t[i], t[(i + 1) % 3]);
            let n = [q[1] - p[1], p[0] - q[0]];
            let (a0, a1) = project(a, n);
            let (b0, b1) = project(b, n);
            if a1 <= b0 || b1 <= a0 {
                return true;
            }
        }
    }
    false
}

/// Whether `p` lies in the closed triangle.
fn in_closed_triangle(t: &[[i64; 2]; 3], p: [i64; 2]) -> bool {
    let s: Vec<i64> = (0..3).map(|i| cross(t[i], t[(i + 1) % 3], p).signum()).collect();
    !(s.contains(&1) && s.contains(&-1))
}

/// Independent count of the triangulations of a planar point set that use
/// every point: subsets of empty triangles with pairwise disjoint interiors
/// whose areas add up to the hull area. Returned as sorted triangle index lists.
pub fn triangulations_by_area(points: &[[i64; 2]]) -> Vec<Vec<[usize; 3]>> {
    let n = points.len();
    let total = hull_area2(points);
    let mut triangles: Vec<([usize; 3], i64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let t = [points[i], points[j], points[k]];
                let area = cross(t[0], t[1], t[2]).abs();
                if area == 0 {
                    continue;
                }
                let empty = (0..n).filter(|&m| m != i && m != j && m != k).all(|m| !in_closed_triangle(&t, points[m]));
                if empty {
                    triangles.push(([i, j, k], area));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    search(points, &triangles, 0, total, &mut chosen, &mut out);
    out
}

fn search(
    points: &[[i64; 2]],
    triangles: &[([usize; 3], i64)],
    from: usize,
    remaining: i64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<[usize; 3]>>,
) {
    if remaining == 0 {
        let mut used = vec![false; points.len()];
        for &c in chosen.iter() {
            for &v in &triangles[c].0 {
                used[v] = true;
            }
        }
        if used.iter().all(|&u| u) {
            out.push(chosen.iter().map(|&c| triangles[c].0).collect());
        }
        return;
    }
    for t in from..triangles.len() {
        let (idx, area) = triangles[t];
        if area > remaining {
            continue;
        }
        let tri = idx.map(|i| points[i]);
        let ok = chosen.iter().all(|&c| interiors_disjoint(&triangles[c].0.map(|i| points[i]), &tri));
        if !ok {
            continue;
        }
        chosen.push(t);
        search(points, triangles, t + 1, remaining - area, chosen, out);
        chosen.pop();
    }
}

pub fn fan_from_triangles(rays: &[IntVec], tris: &[[usize; 3]]) -> Fan {
    Fan::new(rays.to_vec(), tris.iter().map(|t| t.to_vec()).collect())
}

pub fn problem(family: &Family, source: &Fan, target: &Fan) -> Problem {
    Problem {
        base: family.base.clone(),
        source: source.clone(),
        target: target.clone(),
        boundary: Boundary::zero(family.rays.len()),
        l_target: None,
        h_source: None,
    }
}

pub fn random_rat(rng: &mut ChaCha8Rng, span: i64) -> Rat {
    Rat::new(Int::from(rng.gen_range(-span..=span)), Int::from(rng.gen_range(1..=4)))
}

/// `⟨m, vᵨ⟩` for a random integral `m`: linearly equivalent to zero.
pub fn principal(rng: &mut ChaCha8Rng, fan: &Fan) -> ToricDivisor {
    let m: Vec<i64> = (0..fan.dim()).map(|_| rng.gen_range(-3..=3)).collect();
    ToricDivisor(
        fan.rays().iter().map(|r| Rat::from_integer(r.iter().zip(&m).map(|(a, b)| a * Int::from(*b)).sum())).collect(),
    )
}

/// A mix of generic, ample-plus-principal, principal-only, perturbed ample
/// and foreign-ample divisors, so that nef and non-nef cases both occur,
/// including ones on the boundary of the nef cone. `amples[own]` is ample on
/// `fan`; the others are ample on fans with the same rays.
pub fn random_divisor(rng: &mut ChaCha8Rng, fan: &Fan, amples: &[ToricDivisor], own: usize) -> ToricDivisor {
    let n = fan.num_rays();
    let p = principal(rng, fan);
    let a = &amples[own];
    match rng.gen_range(0..5) {
        0 => ToricDivisor((0..n).map(|_| random_rat(rng, 6)).collect()),
        1 => {
            let s = Rat::new(Int::from(rng.gen_range(0..=3)), Int::from(rng.gen_range(1..=3)));
            &(&s * a) + &p
        }
        2 => p,
        3 => {
            let mut d = a + &p;
            let i = rng.gen_range(0..n);
            d.0[i] += random_rat(rng, 2);
            d
        }
        _ => {
            let other = &amples[rng.gen_range(0..amples.len())];
            let t = Rat::new(Int::from(rng.gen_range(0..=4)), Int::from(4));
            let one = Rat::from_integer(Int::from(1));
            &(&(&t * other) + &(&(&one - &t) * a)) + &p
        }
    }
}
