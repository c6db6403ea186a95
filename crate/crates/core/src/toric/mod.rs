//! Toric ideals of point configurations, through their fibers.
//!
//! A binomial `x^u - x^v` lies in the toric ideal iff the multisets `u`
//! and `v` have the same size and the same point sum. A set of moves
//! generates the ideal up to degree `D` iff every fiber of degree `<= D`
//! is connected by the moves. Polynomials are never expanded.

pub mod fiber;

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{internal, invalid, Result};
use crate::polytope::{enumerate_lattice_points, LatticeMatrix, Margins, PointConfiguration};
use crate::smoothness::is_multiple_of_b3;
use crate::subdivision::{classify_fine_cell, fine_subdivision_with_config, reduction_witness, FineType, ReductionWitness};
use crate::triangulation::{minimal_non_faces, refine_by_pulling, PullOrder, Triangulation};
pub use fiber::{enumerate_fibers, Fiber, Monomial};
use fiber::{monomial_sum, nontrivial_fibers, replace, small_points, sub_multisets};

/// `x^plus - x^minus` over configuration indices; supports are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    pub plus: Monomial,
    pub minus: Monomial,
}

impl Binomial {
    /// Cancel common factors, then check homogeneity and balance.
    pub fn new(config: &PointConfiguration, plus: Vec<usize>, minus: Vec<usize>) -> Result<Self> {
        Self::checked(&small_points(config)?, plus, minus)
    }

    pub fn checked(points: &[Vec<i64>], mut plus: Vec<usize>, mut minus: Vec<usize>) -> Result<Self> {
        if plus.iter().chain(&minus).any(|&i| i >= points.len()) {
            return Err(invalid("binomial index outside the configuration"));
        }
        plus.sort_unstable();
        minus.sort_unstable();
        let (p, m) = cancel(&plus, &minus);
        if p.len() != m.len() {
            return Err(internal(format!("binomial {p:?} - {m:?} is not homogeneous")));
        }
        if p.is_empty() {
            return Err(invalid("binomial is zero after cancellation"));
        }
        if monomial_sum(points, &p) != monomial_sum(points, &m) {
            return Err(internal(format!("binomial {p:?} - {m:?} is not balanced")));
        }
        Ok(Binomial { plus: p, minus: m })
    }

    pub fn degree(&self) -> usize {
        self.plus.len()
    }

    /// Replace `plus` by `minus` inside a monomial.
    pub fn apply(&self, mono: &[usize]) -> Option<Monomial> {
        replace(mono, &self.plus, &self.minus)
    }

    pub fn apply_reverse(&self, mono: &[usize]) -> Option<Monomial> {
        replace(mono, &self.minus, &self.plus)
    }

    /// Exponent difference `u - v` as a dense vector.
    pub fn exponent(&self, n: usize) -> Vec<i64> {
        let mut e = vec![0i64; n];
        for &i in &self.plus {
            e[i] += 1;
        }
        for &i in &self.minus {
            e[i] -= 1;
        }
        e
    }
}

fn cancel(a: &[usize], b: &[usize]) -> (Monomial, Monomial) {
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                ra.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                rb.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                ra.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                rb.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (ra, rb)
}

/// Candidate generators; `marked` means `plus` is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveSet {
    pub moves: Vec<Binomial>,
    pub max_degree: usize,
    pub marked: bool,
}

impl MoveSet {
    pub fn new(moves: Vec<Binomial>, marked: bool) -> Self {
        let max_degree = moves.iter().map(Binomial::degree).max().unwrap_or(0);
        MoveSet { moves, max_degree, marked }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn quadratic_only(&self) -> bool {
        self.moves.iter().all(|b| b.degree() == 2)
    }
}

/// Squarefree monomial generators, pairwise incomparable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialSet {
    pub monomials: Vec<Vec<usize>>,
}

impl MonomialSet {
    pub fn max_degree(&self) -> usize {
        self.monomials.iter().map(|m| m.len()).max().unwrap_or(0)
    }
}

/// All binomials between distinct monomials of each fiber of degree
/// `2..=max_degree`, reduced to disjoint support and deduplicated.
pub fn binomials_up_to_degree(config: &PointConfiguration, max_degree: usize) -> Result<MoveSet> {
    if max_degree < 2 {
        return Err(invalid("binomials need degree at least 2"));
    }
    let points = small_points(config)?;
    let mut set: BTreeSet<Binomial> = BTreeSet::new();
    for d in 2..=max_degree {
        for f in nontrivial_fibers(config, d)? {
            for a in 0..f.monomials.len() {
                for b in a + 1..f.monomials.len() {
                    let bin = Binomial::checked(&points, f.monomials[a].clone(), f.monomials[b].clone())?;
                    set.insert(bin);
                }
            }
        }
    }
    Ok(MoveSet::new(set.into_iter().collect(), false))
}

/// Side-to-sides lookup for applying moves as multiset replacements.
struct MoveIndex {
    sizes: Vec<usize>,
    by_side: HashMap<Monomial, Vec<Monomial>>,
}

impl MoveIndex {
    fn new(moves: &MoveSet) -> Self {
        let mut by_side: HashMap<Monomial, Vec<Monomial>> = HashMap::new();
        let mut sizes = BTreeSet::new();
        for b in &moves.moves {
            by_side.entry(b.plus.clone()).or_default().push(b.minus.clone());
            by_side.entry(b.minus.clone()).or_default().push(b.plus.clone());
            sizes.insert(b.degree());
        }
        MoveIndex { sizes: sizes.into_iter().collect(), by_side }
    }

    fn neighbours(&self, mono: &[usize]) -> Vec<Monomial> {
        let mut out = Vec::new();
        for &k in self.sizes.iter().filter(|&&k| k <= mono.len()) {
            for side in sub_multisets(mono, k) {
                if let Some(others) = self.by_side.get(&side) {
                    for o in others {
                        out.extend(replace(mono, &side, o));
                    }
                }
            }
        }
        out
    }
}

/// Result of checking every fiber up to a degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCheck {
    pub holds: bool,
    pub max_degree: usize,
    /// Fibers with at least two monomials that were examined.
    pub fibers_checked: usize,
    pub first_failure: Option<Fiber>,
}

fn components(fiber: &Fiber, index: &MoveIndex) -> usize {
    let pos: HashMap<&Monomial, usize> = fiber.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let mut parent: Vec<usize> = (0..fiber.monomials.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = fiber.monomials.len();
    for (k, m) in fiber.monomials.iter().enumerate() {
        for nb in index.neighbours(m) {
            let Some(&l) = pos.get(&nb) else { continue };
            let (a, b) = (find(&mut parent, k), find(&mut parent, l));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

/// Is every fiber of degree `<= max_degree` connected by the moves?
pub fn fiber_graph_connected(config: &PointConfiguration, moves: &MoveSet, max_degree: usize) -> Result<FiberCheck> {
    let points = small_points(config)?;
    for b in &moves.moves {
        Binomial::checked(&points, b.plus.clone(), b.minus.clone())?;
    }
    let index = MoveIndex::new(moves);
    let mut checked = 0;
    for d in 2..=max_degree {
        let fibers = nontrivial_fibers(config, d)?;
        checked += fibers.len();
        let bad = fibers.par_iter().position_first(|f| components(f, &index) > 1);
        if let Some(k) = bad {
            return Ok(FiberCheck { holds: false, max_degree, fibers_checked: checked, first_failure: Some(fibers[k].clone()) });
        }
    }
    Ok(FiberCheck { holds: true, max_degree, fibers_checked: checked, first_failure: None })
}

/// Leading-term test for a marked move set: every fiber of degree
/// `<= max_degree` must contain exactly one monomial divisible by no
/// leading term.
pub fn is_groebner_to_degree(config: &PointConfiguration, moves: &MoveSet, max_degree: usize) -> Result<FiberCheck> {
    if !moves.marked {
        return Err(invalid("the leading-term test needs a marked move set"));
    }
    let leading: HashSet<&Monomial> = moves.moves.iter().map(|b| &b.plus).collect();
    let sizes: BTreeSet<usize> = leading.iter().map(|m| m.len()).collect();
    let standard = |m: &Monomial| {
        !sizes
            .iter()
            .filter(|&&k| k <= m.len())
            .any(|&k| sub_multisets(m, k).iter().any(|s| leading.contains(s)))
    };
    let mut checked = 0;
    for d in 2..=max_degree {
        let fibers = nontrivial_fibers(config, d)?;
        checked += fibers.len();
        let bad = fibers.par_iter().position_first(|f| f.monomials.iter().filter(|m| standard(m)).count() != 1);
        if let Some(k) = bad {
            return Ok(FiberCheck { holds: false, max_degree, fibers_checked: checked, first_failure: Some(fibers[k].clone()) });
        }
    }
    Ok(FiberCheck { holds: true, max_degree, fibers_checked: checked, first_failure: None })
}

/// Minimal non-faces as squarefree monomials.
pub fn stanley_reisner_initial_ideal(t: &Triangulation) -> MonomialSet {
    MonomialSet { monomials: minimal_non_faces(t).sets }
}

/// Marked binomials `x^F - x^G`, one per minimal non-face `F`.
///
/// `G` is the face monomial with the same point sum: the simplex containing
/// the barycenter of `F` writes `sum(F)` as a nonnegative integer
/// combination of its vertices, by unimodularity.
pub fn groebner_from_triangulation(t: &Triangulation) -> Result<MoveSet> {
    let frame = &t.polytope().frame;
    let points = small_points(&t.config)?;
    let mut moves = Vec::new();
    for f in minimal_non_faces(t).sets {
        if f.len() < 2 {
            return Err(invalid(format!("point {} is used by no simplex", f[0])));
        }
        let dim = frame.dim();
        let y: Vec<BigInt> = (0..dim).map(|c| f.iter().map(|&p| &frame.coords[p][c]).sum()).collect();
        let g = t
            .simplices
            .iter()
            .find_map(|s| frame.decompose(s, &y, f.len()).map(|c| (s, c)))
            .map(|(s, c)| {
                s.iter()
                    .zip(&c)
                    .flat_map(|(&v, k)| std::iter::repeat_n(v, k.to_usize().expect("small multiplicity")))
                    .collect::<Vec<usize>>()
            })
            .ok_or_else(|| internal(format!("no face monomial has the point sum of non-face {f:?}")))?;
        moves.push(Binomial::checked(&points, f, g)?);
    }
    Ok(MoveSet::new(moves, true))
}

#[derive(Clone, Debug, Serialize)]
pub struct FineDegreeBound {
    pub degree: usize,
    pub cells: usize,
    pub b3_cells: usize,
    pub simplex_cells: usize,
    pub dual_cells: usize,
}

/// Largest minimal non-face of the reverse-lex pulling refinement of the
/// fine subdivision.
pub fn fine_pipeline_degree_bound(margins: &Margins) -> Result<FineDegreeBound> {
    let (config, cells) = fine_subdivision_with_config(margins)?;
    let members: Vec<Vec<usize>> = cells.iter().map(|c| c.members.clone()).collect();
    let t = refine_by_pulling(&config, &members, &PullOrder::reverse_lex(config.len()))?;
    let types: Vec<FineType> = cells.iter().map(|c| classify_fine_cell(c).map(|k| k.fine_type)).collect::<Result<_>>()?;
    let count = |f: &dyn Fn(&FineType) -> bool| types.iter().filter(|t| f(t)).count();
    Ok(FineDegreeBound {
        degree: minimal_non_faces(&t).max_size(),
        cells: cells.len(),
        b3_cells: count(&|t| *t == FineType::B3),
        simplex_cells: count(&|t| t.is_simplex()),
        dual_cells: count(&|t| *t == FineType::Dual222),
    })
}

/// Evidence for or against generation by quadrics.
#[derive(Clone, Debug, Serialize)]
pub struct QuadraticVerdict {
    pub verdict: String,
    pub quadratic: bool,
    pub max_degree: usize,
    pub quadratic_moves: usize,
    pub fiber_oracle: FiberCheck,
    /// Target of the failing fiber, as a matrix.
    pub witness_target: Option<LatticeMatrix>,
    /// Reduction of every B3-type fine cell (3x3 margins other than B3).
    pub reductions: Option<Vec<ReductionWitness>>,
}

pub fn quadratic_generation_verdict(margins: &Margins, max_degree: usize) -> Result<QuadraticVerdict> {
    if max_degree < 3 {
        return Err(invalid("the generation check needs degree at least 3"));
    }
    let config = enumerate_lattice_points(margins, None)?;
    let quadrics = if config.len() > 1 { binomials_up_to_degree(&config, 2)? } else { MoveSet::new(Vec::new(), false) };
    let oracle = if config.len() > 1 {
        fiber_graph_connected(&config, &quadrics, max_degree)?
    } else {
        FiberCheck { holds: true, max_degree, fibers_checked: 0, first_failure: None }
    };
    let reductions = if margins.m() == 3 && margins.n() == 3 && is_multiple_of_b3(margins) != Some(1) {
        let (cfg, cells) = fine_subdivision_with_config(margins)?;
        let mut w = Vec::new();
        for c in &cells {
            if classify_fine_cell(c)?.fine_type == FineType::B3 {
                w.push(reduction_witness(margins, &cfg, c)?);
            }
        }
        Some(w)
    } else {
        None
    };
    let verdict = if oracle.holds {
        format!("quadratic (verified to degree {max_degree})")
    } else {
        "not quadratic".to_string()
    };
    Ok(QuadraticVerdict {
        verdict,
        quadratic: oracle.holds,
        max_degree,
        quadratic_moves: quadrics.len(),
        witness_target: oracle.first_failure.as_ref().map(|f| f.target_matrix(margins.m(), margins.n())),
        fiber_oracle: oracle,
        reductions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::pulling_triangulation;

    fn b3() -> PointConfiguration {
        enumerate_lattice_points(&Margins::birkhoff(3, 1), None).unwrap()
    }

    #[test]
    fn birkhoff_has_one_cubic() {
        let cfg = b3();
        assert!(binomials_up_to_degree(&cfg, 2).unwrap().is_empty());
        let cubic = binomials_up_to_degree(&cfg, 3).unwrap();
        assert_eq!(cubic.len(), 1);
        assert_eq!(cubic.moves[0].degree(), 3);
        assert!(fiber_graph_connected(&cfg, &cubic, 3).unwrap().holds);
        let none = MoveSet::new(Vec::new(), false);
        let check = fiber_graph_connected(&cfg, &none, 3).unwrap();
        assert!(!check.holds);
        assert_eq!(check.first_failure.unwrap().degree, 3);
    }

    #[test]
    fn unbalanced_binomial_rejected() {
        assert!(Binomial::new(&b3(), vec![0, 1], vec![2, 3]).is_err());
        assert!(Binomial::new(&b3(), vec![0], vec![0]).is_err());
    }

    #[test]
    fn birkhoff_groebner_from_pulling() {
        let cfg = b3();
        let t = pulling_triangulation(&cfg, &PullOrder::reverse_lex(6)).unwrap();
        let g = groebner_from_triangulation(&t).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(stanley_reisner_initial_ideal(&t).monomials, vec![g.moves[0].plus.clone()]);
        assert!(is_groebner_to_degree(&cfg, &g, 4).unwrap().holds);
        assert!(fiber_graph_connected(&cfg, &g, 4).unwrap().holds);
    }

    #[test]
    fn relaxed_birkhoff_is_quadratic() {
        let m = Margins::new(vec![2, 1, 1], vec![2, 1, 1]).unwrap();
        let v = quadratic_generation_verdict(&m, 4).unwrap();
        assert!(v.quadratic, "{}", v.verdict);
        assert_eq!(v.verdict, "quadratic (verified to degree 4)");
    }

    #[test]
    fn cancel_common_factors() {
        assert_eq!(cancel(&[0, 1, 1, 3], &[1, 2, 3]), (vec![0, 1], vec![2]));
    }
}
