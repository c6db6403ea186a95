//! Simplicity of `T_rc` and the partial-sum margin condition.
//!
//! Simplicity is decided from vertex/facet incidences; smoothness is taken
//! equal to it (total unimodularity). The partial-sum condition is computed
//! independently. It characterizes nondegeneracy (every vertex has exactly
//! `(m-1)(n-1)` zero entries), which implies simplicity. The converse fails
//! when a zero entry is forced without cutting a facet:
//! `(4,1,1)(2,2,2)` violates the condition yet is `Δ2 x Δ2`. Reports carry
//! both verdicts. Index sets are 0-based.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::polytope::{
    dimension, enumerate_lattice_points, facet_inequalities, northwest_corner, vertices, LatticeMatrix, Margins,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub margin_condition_holds: bool,
    /// First `(I, J)` with equal partial sums, when the condition fails.
    pub violating_pair: Option<(Vec<usize>, Vec<usize>)>,
    pub is_simple: bool,
    /// Smoothness is reported equal to simplicity.
    pub is_smooth: bool,
    pub max_facets_at_vertex: usize,
    /// Every vertex has exactly `dimension` zero entries.
    pub is_nondegenerate: bool,
    pub max_zeros_at_vertex: usize,
    /// Margin condition and simplicity agree.
    pub equivalence_holds: bool,
    pub dimension: usize,
    pub vertex_count: usize,
    pub facet_count: usize,
    pub is_multiple_of_b3: bool,
    pub multiple_k: Option<u64>,
}

/// Nonempty subsets of `0..n`, in lexicographic order of their sorted index lists.
fn subsets_lex(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    all.sort();
    all
}

/// Check that no nontrivial `(I, J)` has `sum r_I == sum c_J`.
///
/// Nontrivial means both sets nonempty and not both full. Returns the
/// lexicographically first violation (ordered by `I`, then `J`).
pub fn margin_condition(margins: &Margins) -> (bool, Option<(Vec<usize>, Vec<usize>)>) {
    let (m, n) = (margins.m(), margins.n());
    let cols = subsets_lex(n);
    let col_sums: Vec<u64> = cols.iter().map(|jj| jj.iter().map(|&j| margins.cols()[j]).sum()).collect();
    for ii in subsets_lex(m) {
        let rs: u64 = ii.iter().map(|&i| margins.rows()[i]).sum();
        for (jj, &cs) in cols.iter().zip(&col_sums) {
            if ii.len() == m && jj.len() == n {
                continue;
            }
            if rs == cs {
                return (false, Some((ii, jj.clone())));
            }
        }
    }
    (true, None)
}

/// Facets through a point: number of distinct facets among its zero entries.
fn facets_at(a: &LatticeMatrix, classes: &[Vec<(usize, usize)>]) -> usize {
    classes.iter().filter(|cls| cls.iter().any(|&(i, j)| a.get(i, j).is_zero())).count()
}

/// Simplicity from the vertex/facet incidences; also returns the largest
/// number of facets through one vertex.
pub fn is_simple(margins: &Margins) -> Result<(bool, usize)> {
    let dim = dimension(margins);
    if dim == 0 {
        return Ok((true, 0));
    }
    let config = enumerate_lattice_points(margins, None)?;
    let facets = facet_inequalities(margins)?;
    let counts: Vec<usize> = vertices(&config).into_iter().map(|v| facets_at(config.point(v), &facets.classes)).collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok((counts.iter().all(|&c| c == dim), max))
}

/// Nondegeneracy: every vertex has exactly `dim` zero entries. Also returns
/// the largest zero count at a vertex.
pub fn is_nondegenerate(margins: &Margins) -> Result<(bool, usize)> {
    let dim = dimension(margins);
    let config = enumerate_lattice_points(margins, None)?;
    let counts: Vec<usize> = vertices(&config).into_iter().map(|v| zero_entries(config.point(v))).collect();
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok((counts.iter().all(|&c| c == dim), max))
}

/// `Some(k)` iff the margins are `r = c = (k, k, k)`.
pub fn is_multiple_of_b3(margins: &Margins) -> Option<u64> {
    let mut r = margins.rows().to_vec();
    let mut c = margins.cols().to_vec();
    r.sort_unstable();
    c.sort_unstable();
    (r.len() == 3 && r == c && r.iter().all(|&x| x == r[0])).then_some(r[0])
}

pub fn smoothness_report(margins: &Margins) -> Result<SmoothnessReport> {
    let (holds, violating_pair) = margin_condition(margins);
    let (simple, max_facets) = is_simple(margins)?;
    let (nondegenerate, max_zeros) = is_nondegenerate(margins)?;
    if holds != nondegenerate {
        return Err(Error::Equivalence(format!(
            "{margins}: margin condition {holds} but nondegeneracy {nondegenerate}"
        )));
    }
    let config = enumerate_lattice_points(margins, None)?;
    let facet_count = if dimension(margins) > 0 { facet_inequalities(margins)?.distinct() } else { 0 };
    let k = is_multiple_of_b3(margins);
    Ok(SmoothnessReport {
        margin_condition_holds: holds,
        violating_pair,
        is_simple: simple,
        is_smooth: simple,
        max_facets_at_vertex: max_facets,
        is_nondegenerate: nondegenerate,
        max_zeros_at_vertex: max_zeros,
        equivalence_holds: holds == simple,
        dimension: dimension(margins),
        vertex_count: vertices(&config).len(),
        facet_count,
        is_multiple_of_b3: k.is_some(),
        multiple_k: k,
    })
}

/// The degenerate vertex built from a violating pair `(I, J)`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockVertex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub vertex: LatticeMatrix,
    pub facets_at_vertex: usize,
    pub zeros_at_vertex: usize,
}

/// Glue vertices of the `I x J` and `I^c x J^c` subproblems into one matrix.
///
/// Its support is a forest with at least two components, so it is a vertex
/// with at least `(m-1)(n-1) + 1` zero entries. Usually that many facets
/// pass through it too, but not when some `a_ij = 0` is not a facet.
pub fn block_vertex(margins: &Margins, rows: &[usize], cols: &[usize]) -> Result<BlockVertex> {
    let (m, n) = (margins.m(), margins.n());
    let rc: Vec<usize> = (0..m).filter(|i| !rows.contains(i)).collect();
    let cc: Vec<usize> = (0..n).filter(|j| !cols.contains(j)).collect();
    let pick = |idx: &[usize], v: &[u64]| idx.iter().map(|&i| v[i]).collect::<Vec<u64>>();
    if rows.is_empty() || cols.is_empty() || rc.is_empty() || cc.is_empty() {
        return Err(crate::error::invalid("block construction needs proper nonempty row and column sets"));
    }
    let inner = Margins::new(pick(rows, margins.rows()), pick(cols, margins.cols()))?;
    let outer = Margins::new(pick(&rc, margins.rows()), pick(&cc, margins.cols()))?;
    let mut a = LatticeMatrix::zeros(m, n);
    for (block, ri, ci) in [(northwest_corner(&inner), rows, cols), (northwest_corner(&outer), &rc[..], &cc[..])] {
        for (bi, &i) in ri.iter().enumerate() {
            for (bj, &j) in ci.iter().enumerate() {
                a.set(i, j, block.get(bi, bj).clone());
            }
        }
    }
    if !a.satisfies(margins) {
        return Err(internal("block vertex misses the margins"));
    }
    let facets = facet_inequalities(margins)?;
    let config = enumerate_lattice_points(margins, None)?;
    let idx = config.index_of(&a).ok_or_else(|| internal("block vertex is not a lattice point"))?;
    if !vertices(&config).contains(&idx) {
        return Err(internal(format!("block matrix {a} is not a vertex")));
    }
    Ok(BlockVertex { rows: rows.to_vec(), cols: cols.to_vec(), facets_at_vertex: facets_at(&a, &facets.classes), zeros_at_vertex: zero_entries(&a), vertex: a })
}

/// Zero count of a matrix, an upper bound on the facets through it.
pub fn zero_entries(a: &LatticeMatrix) -> usize {
    a.entries().iter().filter(|x| **x == BigInt::zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg(r: &[u64], c: &[u64]) -> Margins {
        Margins::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn birkhoff_is_not_simple() {
        let rep = smoothness_report(&mg(&[1, 1, 1], &[1, 1, 1])).unwrap();
        assert!(!rep.margin_condition_holds);
        assert_eq!(rep.violating_pair, Some((vec![0], vec![0])));
        assert!(!rep.is_simple);
        assert_eq!(rep.max_facets_at_vertex, 6);
        assert_eq!(rep.multiple_k, Some(1));
    }

    #[test]
    fn generic_margins_are_simple() {
        let m = mg(&[1, 2, 13], &[4, 5, 7]);
        let rep = smoothness_report(&m).unwrap();
        assert!(rep.margin_condition_holds && rep.is_simple);
        assert_eq!(rep.max_facets_at_vertex, 4);
        // Row 3 carries 13 > 4 + 5, so its entries never vanish.
        assert_eq!(rep.facet_count, 6);
        assert!(rep.multiple_k.is_none());
    }

    #[test]
    fn block_vertex_for_relaxed_birkhoff() {
        let m = mg(&[2, 1, 1], &[2, 1, 1]);
        let (holds, Some((i, j))) = margin_condition(&m) else { panic!("expected violation") };
        assert!(!holds);
        let b = block_vertex(&m, &i, &j).unwrap();
        assert!(b.facets_at_vertex >= 5);
        assert!(b.facets_at_vertex <= zero_entries(&b.vertex));
    }

    #[test]
    fn forced_zero_is_simple_but_degenerate() {
        let m = mg(&[4, 1, 1], &[2, 2, 2]);
        let rep = smoothness_report(&m).unwrap();
        assert!(!rep.margin_condition_holds);
        assert!(!rep.is_nondegenerate);
        // Rows 2 and 3 range over triangles and determine row 1.
        assert!(rep.is_simple);
        assert_eq!(rep.vertex_count, 9);
        assert_eq!(rep.facet_count, 6);
        assert!(!rep.equivalence_holds);
        let (i, j) = rep.violating_pair.unwrap();
        let b = block_vertex(&m, &i, &j).unwrap();
        assert_eq!(b.zeros_at_vertex, 5);
        assert_eq!(b.facets_at_vertex, 4);
    }

    #[test]
    fn multiples() {
        assert_eq!(is_multiple_of_b3(&mg(&[2, 2, 2], &[2, 2, 2])), Some(2));
        assert_eq!(is_multiple_of_b3(&mg(&[2, 1, 1], &[2, 1, 1])), None);
        let rep = smoothness_report(&mg(&[3, 3, 3], &[3, 3, 3])).unwrap();
        assert!(!rep.margin_condition_holds && !rep.is_simple);
    }
}
