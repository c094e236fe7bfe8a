//! Exact integer and rational linear algebra.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ArithError;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> RatVec {
    v.iter().map(rat_int).collect()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

pub fn lcm_all<'a>(v: impl IntoIterator<Item = &'a Int>) -> Int {
    v.into_iter().fold(Int::one(), |acc, x| acc.lcm(x))
}

/// Divides by the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> IntVec {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Smallest integer vector on the same ray as `v`.
pub fn primitive_of_rat(v: &[Rat]) -> IntVec {
    let den = lcm_all(v.iter().map(|x| x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * rat_int(&den)).to_integer()).collect();
    primitive(&scaled)
}

pub fn is_primitive(v: &[Int]) -> bool {
    gcd_all(v).is_one()
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat_int(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * rat_int(y)).sum()
}

/// Sum of the given integer vectors (all of length `dim`).
pub fn sum_vecs<'a>(dim: usize, vs: impl IntoIterator<Item = &'a IntVec>) -> IntVec {
    let mut out = vec![Int::zero(); dim];
    for v in vs {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x;
        }
    }
    out
}

/// Row echelon form in place; returns the pivot column of each nonzero row.
fn echelon(rows: &mut [RatVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (o, p) in other.iter_mut().zip(pivot_row.iter()) {
                    *o -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Pivot columns of the reduced row echelon form of `rows`.
pub fn pivot_columns(rows: &[RatVec]) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    echelon(&mut m, cols)
}

pub fn rank(rows: &[RatVec]) -> usize {
    pivot_columns(rows).len()
}

pub fn rank_int(rows: &[IntVec]) -> usize {
    let m: Vec<RatVec> = rows.iter().map(|r| to_rat_vec(r)).collect();
    rank(&m)
}

/// Basis of `{x : rows·x = 0}` in `cols` unknowns.
pub fn nullspace(rows: &[RatVec], cols: usize) -> Vec<RatVec> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); cols];
            x[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Exact solution of `a·x = b`, or `None` when the system is inconsistent.
///
/// For underdetermined systems the returned particular solution sets every
/// free unknown to zero.
pub fn solve_linear_exact(a: &[RatVec], b: &[Rat]) -> Result<Option<RatVec>, ArithError> {
    if a.len() != b.len() {
        return Err(ArithError::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let cols = a.first().map_or(0, Vec::len);
    if let Some(row) = a.iter().find(|r| r.len() != cols) {
        return Err(ArithError::DimensionMismatch { expected: cols, found: row.len() });
    }
    let mut m: Vec<RatVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &[RatVec]) -> Option<Vec<RatVec>> {
    let n = m.len();
    let mut aug: Vec<RatVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = echelon(&mut aug, n);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a square integer matrix (Bareiss, fraction free).
pub fn det(m: &[IntVec]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Vec<IntVec> = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Int::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Gcd of all maximal minors of a `k × d` integer matrix with `k ≤ d`:
/// the index of the lattice spanned by the rows inside its saturation.
pub fn maximal_minor_gcd(rows: &[IntVec]) -> Int {
    let k = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    if k == 0 {
        return Int::one();
    }
    let mut g = Int::zero();
    for cols in subsets(d, k) {
        let sub: Vec<IntVec> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&det(&sub));
        if g.is_one() {
            break;
        }
    }
    g
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn sign(x: &Rat) -> Ordering {
    x.cmp(&Rat::zero())
}

pub fn floor_int(x: &Rat) -> Int {
    x.floor().to_integer()
}

pub fn abs(x: &Int) -> Int {
    x.abs()
}
