//! Fibers of the monomial map: all degree-`d` multisets of points sharing
//! one matrix sum.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::polytope::{LatticeMatrix, PointConfiguration};

/// Largest configuration whose fibers are enumerated.
pub const MAX_FIBER_POINTS: usize = 128;

/// Largest number of degree-`d` monomials enumerated in one call.
pub const MAX_MONOMIALS: u128 = 20_000_000;

/// A monomial: sorted multiset of configuration indices.
pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub degree: usize,
    /// Row-major entries of the common point sum.
    pub target: Vec<i64>,
    pub monomials: Vec<Monomial>,
}

impl Fiber {
    pub fn target_matrix(&self, m: usize, n: usize) -> LatticeMatrix {
        LatticeMatrix::from_entries(m, n, self.target.iter().map(|&x| x.into()).collect())
    }
}

/// Points as machine-integer vectors.
pub fn small_points(config: &PointConfiguration) -> Result<Vec<Vec<i64>>> {
    config
        .points()
        .iter()
        .map(|p| p.to_i64().ok_or_else(|| invalid("entries too large for fiber enumeration")))
        .collect()
}

pub fn multiset_count(n: usize, d: usize) -> u128 {
    // C(n + d - 1, d)
    let mut c: u128 = 1;
    for k in 0..d as u128 {
        c = c * (n as u128 + k) / (k + 1);
    }
    c
}

/// Sum of the points of a monomial.
pub fn monomial_sum(points: &[Vec<i64>], mono: &[usize]) -> Vec<i64> {
    let mut s = vec![0i64; points.first().map_or(0, |p| p.len())];
    for &i in mono {
        for (a, b) in s.iter_mut().zip(&points[i]) {
            *a += b;
        }
    }
    s
}

/// All fibers of degree `d`, sorted by target. Every multiset appears in
/// exactly one fiber, so the monomial total is `C(n + d - 1, d)`.
pub fn enumerate_fibers(config: &PointConfiguration, d: usize) -> Result<Vec<Fiber>> {
    let mut fibers: Vec<Fiber> = group_by_sum(config, d)?
        .into_iter()
        .map(|(target, mut monomials)| {
            monomials.sort();
            Fiber { degree: d, target, monomials }
        })
        .collect();
    fibers.sort_by(|a, b| a.target.cmp(&b.target));
    Ok(fibers)
}

/// Fibers with at least two monomials (the only ones a move can act on).
pub fn nontrivial_fibers(config: &PointConfiguration, d: usize) -> Result<Vec<Fiber>> {
    Ok(enumerate_fibers(config, d)?.into_iter().filter(|f| f.monomials.len() > 1).collect())
}

fn group_by_sum(config: &PointConfiguration, d: usize) -> Result<HashMap<Vec<i64>, Vec<Monomial>>> {
    if d == 0 {
        return Err(invalid("fiber degree must be at least 1"));
    }
    if config.is_empty() {
        return Err(invalid("fibers of an empty configuration"));
    }
    let n = config.len();
    if n > MAX_FIBER_POINTS {
        return Err(Error::TooLarge(format!("{n} points for fiber enumeration")));
    }
    let count = multiset_count(n, d);
    if count > MAX_MONOMIALS {
        return Err(Error::TooLarge(format!("{count} monomials of degree {d}")));
    }
    let points = small_points(config)?;
    let width = points[0].len();
    let mut groups: HashMap<Vec<i64>, Vec<Monomial>> = HashMap::new();
    let mut mono = vec![0usize; d];
    let mut partial = vec![vec![0i64; width]; d + 1];
    walk(&points, n, d, 0, 0, &mut mono, &mut partial, &mut groups);
    Ok(groups)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    points: &[Vec<i64>],
    n: usize,
    d: usize,
    depth: usize,
    start: usize,
    mono: &mut Vec<usize>,
    partial: &mut Vec<Vec<i64>>,
    groups: &mut HashMap<Vec<i64>, Vec<Monomial>>,
) {
    if depth == d {
        groups.entry(partial[d].clone()).or_default().push(mono.clone());
        return;
    }
    for i in start..n {
        mono[depth] = i;
        let (lo, hi) = partial.split_at_mut(depth + 1);
        for ((dst, src), p) in hi[0].iter_mut().zip(&lo[depth]).zip(&points[i]) {
            *dst = src + p;
        }
        walk(points, n, d, depth + 1, i, mono, partial, groups);
    }
}

/// Sub-multisets of size `k` of a sorted multiset, without repeats.
pub fn sub_multisets(mono: &[usize], k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(mono: &[usize], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let mut i = from;
        while i < mono.len() {
            cur.push(mono[i]);
            rec(mono, k, i + 1, cur, out);
            cur.pop();
            // Skip equal values so each sub-multiset is produced once.
            let v = mono[i];
            while i < mono.len() && mono[i] == v {
                i += 1;
            }
        }
    }
    rec(mono, k, 0, &mut cur, &mut out);
    out
}

/// `mono - take + give` as sorted multisets; `take` must be contained in `mono`.
pub fn replace(mono: &[usize], take: &[usize], give: &[usize]) -> Option<Monomial> {
    let mut rest = Vec::with_capacity(mono.len());
    let mut t = take.iter().peekable();
    for &x in mono {
        if t.peek() == Some(&&x) {
            t.next();
        } else {
            rest.push(x);
        }
    }
    if t.next().is_some() {
        return None;
    }
    rest.extend_from_slice(give);
    rest.sort_unstable();
    Some(rest)
}

/// Whether sorted multiset `small` is contained in sorted multiset `big`.
pub fn divides(small: &[usize], big: &[usize]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{enumerate_lattice_points, Margins};

    #[test]
    fn birkhoff_fibers() {
        let cfg = enumerate_lattice_points(&Margins::birkhoff(3, 1), None).unwrap();
        assert_eq!(enumerate_fibers(&cfg, 1).unwrap().len(), 6);
        let f2 = enumerate_fibers(&cfg, 2).unwrap();
        assert_eq!(f2.iter().map(|f| f.monomials.len()).sum::<usize>(), 21);
        assert!(f2.iter().all(|f| f.monomials.len() == 1));
        let f3 = nontrivial_fibers(&cfg, 3).unwrap();
        assert_eq!(f3.len(), 1);
        assert_eq!(f3[0].monomials.len(), 2);
        assert_eq!(f3[0].target, vec![1; 9]);
    }

    #[test]
    fn multiset_helpers() {
        assert_eq!(multiset_count(6, 3), 56);
        assert_eq!(sub_multisets(&[1, 1, 2], 2), vec![vec![1, 1], vec![1, 2]]);
        assert_eq!(replace(&[1, 1, 2], &[1, 2], &[0, 3]), Some(vec![0, 1, 3]));
        assert_eq!(replace(&[1, 1, 2], &[2, 2], &[0, 3]), None);
        assert!(divides(&[1, 1], &[0, 1, 1, 4]));
        assert!(!divides(&[1, 1], &[0, 1, 4]));
    }
}
