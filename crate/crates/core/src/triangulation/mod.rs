//! Pulling triangulations and their combinatorics.
//!
//! A pulling triangulation of a face `G` picks the first point `v` of `G`
//! in the order and cones it over the pulling triangulations of the facets
//! of `G` that miss `v`. Per point configuration the face lattice is built
//! once; each order then costs one memoized recursion over it.

pub mod hull;
pub mod regular;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::polytope::{LatticeMatrix, PointConfiguration};
use hull::{bit, mask_of, members, FaceLattice, LatticePolytope, Mask};

pub use regular::{regularity_certificate, RegularityCertificate};

/// Sorted vertex indices of a maximal simplex.
pub type Simplex = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderRule {
    /// Decreasing `4 a11 + 6 a12 - a21 + 3 a22`.
    VFunctional,
    /// Last configuration index first: the pulling order of the reverse
    /// lexicographic term order with `x_0 > x_1 > ...`.
    ReverseLex,
    Explicit,
}

/// The order in which points are pulled; `perm[0]` is pulled first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullOrder {
    pub perm: Vec<usize>,
    pub rule: OrderRule,
    /// Adjacent pairs in `perm` whose ranking needed the tie-break.
    pub ties: Vec<(usize, usize)>,
}

impl PullOrder {
    pub fn explicit(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || std::mem::replace(&mut seen[i], true) {
                return Err(invalid("pull order must be a permutation of 0..n"));
            }
        }
        Ok(PullOrder { perm, rule: OrderRule::Explicit, ties: Vec::new() })
    }

    pub fn reverse_lex(n: usize) -> Self {
        PullOrder { perm: (0..n).rev().collect(), rule: OrderRule::ReverseLex, ties: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `ranks()[i]` is the position of point `i` in the order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.perm.len()];
        for (pos, &i) in self.perm.iter().enumerate() {
            r[i] = pos;
        }
        r
    }
}

/// `4 a11 + 6 a12 - a21 + 3 a22` on a 3x3 matrix.
pub fn v_value(a: &LatticeMatrix) -> BigInt {
    4 * a.get(0, 0) + 6 * a.get(0, 1) - a.get(1, 0) + 3 * a.get(1, 1)
}

/// Points by decreasing v-value; equal values fall back to ascending
/// row-major lexicographic order and are recorded in `ties`.
pub fn v_order(config: &PointConfiguration) -> Result<PullOrder> {
    if config.margins().m() != 3 || config.margins().n() != 3 {
        return Err(invalid("the v functional is defined on 3x3 matrices"));
    }
    let values: Vec<BigInt> = config.points().iter().map(v_value).collect();
    let mut perm: Vec<usize> = (0..config.len()).collect();
    perm.sort_by(|&a, &b| values[b].cmp(&values[a]).then_with(|| config.point(a).cmp(config.point(b))));
    let ties = perm.windows(2).filter(|w| values[w[0]] == values[w[1]]).map(|w| (w[0], w[1])).collect();
    Ok(PullOrder { perm, rule: OrderRule::VFunctional, ties })
}

/// Pulling triangulation of the face lattice as vertex masks.
pub fn pull_masks(faces: &FaceLattice, ranks: &[usize]) -> Vec<Mask> {
    let mut memo: HashMap<Mask, Vec<Mask>> = HashMap::new();
    let mut out = pull_face(faces, faces.all, ranks, &mut memo);
    out.sort_unstable();
    out
}

fn pull_face(faces: &FaceLattice, g: Mask, ranks: &[usize], memo: &mut HashMap<Mask, Vec<Mask>>) -> Vec<Mask> {
    if let Some(v) = memo.get(&g) {
        return v.clone();
    }
    let result = if faces.dim_of(g) == Some(0) {
        vec![g]
    } else {
        let v = members(g).into_iter().min_by_key(|&i| ranks[i]).expect("faces are nonempty");
        let mut acc = Vec::new();
        for &h in faces.facets_of(g) {
            if h & bit(v) == 0 {
                acc.extend(pull_face(faces, h, ranks, memo).into_iter().map(|s| s | bit(v)));
            }
        }
        acc
    };
    memo.insert(g, result.clone());
    result
}

/// Triangulated pieces of one subdivision cell, in configuration indices.
#[derive(Clone, Debug, Serialize)]
pub struct CellPiece {
    pub members: Vec<usize>,
    pub simplices: Vec<Simplex>,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    pub config: PointConfiguration,
    pub simplices: Vec<Simplex>,
    pub order: Option<PullOrder>,
    /// Cell restrictions when built by refining a subdivision.
    pub cells: Vec<CellPiece>,
    poly: Arc<LatticePolytope>,
}

/// Geometry of a transportation configuration (or a box cell of one).
pub fn polytope_of(config: &PointConfiguration) -> Result<LatticePolytope> {
    if config.is_empty() {
        return Err(invalid("empty configuration"));
    }
    LatticePolytope::new(config.ambient(), true)
}

fn to_simplices(masks: &[Mask]) -> Vec<Simplex> {
    let mut v: Vec<Simplex> = masks.iter().map(|&m| members(m)).collect();
    v.sort();
    v
}

impl Triangulation {
    /// Wrap an arbitrary simplex list (used for fixtures and foreign input).
    pub fn from_simplices(config: &PointConfiguration, simplices: Vec<Simplex>) -> Result<Self> {
        let poly = polytope_of(config)?;
        let dim = poly.dim();
        let mut simplices: Vec<Simplex> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        for s in &simplices {
            if s.len() != dim + 1 || s.iter().any(|&i| i >= config.len()) || poly.frame.affine_rank(mask_of(s)) != dim {
                return Err(invalid(format!("{s:?} is not a full-dimensional simplex of the configuration")));
            }
        }
        simplices.sort();
        Ok(Triangulation { config: config.clone(), simplices, order: None, cells: Vec::new(), poly: Arc::new(poly) })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn masks(&self) -> Vec<Mask> {
        self.simplices.iter().map(|s| mask_of(s)).collect()
    }

    /// Sum of normalized simplex volumes in the lattice of the affine span.
    pub fn normalized_volume(&self) -> BigInt {
        self.poly.total_volume_by(&self.simplices)
    }

    /// Simplices written in positions of `order` (point `perm[k]` becomes `k`).
    pub fn relabeled(&self, order: &PullOrder) -> Vec<Simplex> {
        let ranks = order.ranks();
        let mut v: Vec<Simplex> = self
            .simplices
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&i| ranks[i]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        v.sort();
        v
    }
}

pub fn pulling_triangulation(config: &PointConfiguration, order: &PullOrder) -> Result<Triangulation> {
    if order.len() != config.len() {
        return Err(invalid(format!("order has {} entries for {} points", order.len(), config.len())));
    }
    let poly = polytope_of(config)?;
    let simplices = to_simplices(&pull_masks(&poly.faces, &order.ranks()));
    Ok(Triangulation { config: config.clone(), simplices, order: Some(order.clone()), cells: Vec::new(), poly: Arc::new(poly) })
}

/// Every distinct pulling triangulation of a small polytope, over all `n!` orders.
pub fn all_pulling_triangulations(poly: &LatticePolytope) -> Result<Vec<Vec<Mask>>> {
    let n = poly.len();
    if n > 9 {
        return Err(Error::TooLarge(format!("{n}! pulling orders")));
    }
    let mut found: BTreeSet<Vec<Mask>> = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut ranks = vec![0; n];
    loop {
        for (pos, &i) in perm.iter().enumerate() {
            ranks[i] = pos;
        }
        found.insert(pull_masks(&poly.faces, &ranks));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Pull each cell in the induced order and glue the pieces.
///
/// `cells` are member lists (configuration indices) of box cells that
/// subdivide the configuration's polytope. For every pair of cells meeting
/// in a nonempty set `G`, `G` must be a common face and both cells must
/// induce the same triangulation on it.
pub fn refine_by_pulling(config: &PointConfiguration, cells: &[Vec<usize>], order: &PullOrder) -> Result<Triangulation> {
    if order.len() != config.len() {
        return Err(invalid("pull order must cover the whole configuration"));
    }
    let global_ranks = order.ranks();
    let pieces: Vec<(Vec<usize>, LatticePolytope, Vec<Mask>)> = cells
        .iter()
        .map(|m| {
            let pts: Vec<Vec<BigInt>> = m.iter().map(|&i| config.point(i).entries().to_vec()).collect();
            let poly = LatticePolytope::new(pts, true)?;
            let ranks: Vec<usize> = m.iter().map(|&i| global_ranks[i]).collect();
            let local = pull_masks(&poly.faces, &ranks);
            Ok((m.clone(), poly, local))
        })
        .collect::<Result<_>>()?;

    let to_global = |m: &[usize], local: Mask| members(local).into_iter().map(|k| m[k]).fold(0, |acc, g| acc | bit(g));
    let to_local = |m: &[usize], global: Mask| m.iter().enumerate().filter(|&(_, &g)| global & bit(g) != 0).fold(0, |acc, (k, _)| acc | bit(k));

    let cell_masks: Vec<Mask> = cells.iter().map(|m| mask_of(m)).collect();
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            let g = cell_masks[a] & cell_masks[b];
            if g == 0 {
                continue;
            }
            let mut restrictions = Vec::with_capacity(2);
            for &c in &[a, b] {
                let (m, poly, local) = &pieces[c];
                let lg = to_local(m, g);
                let Some(d) = poly.faces.dim_of(lg) else {
                    return Err(Error::Gluing(format!("cells {a} and {b} meet in {:?}, not a face of cell {c}", members(g))));
                };
                let mut r: Vec<Mask> = local
                    .iter()
                    .map(|&s| to_global(m, s & lg))
                    .filter(|s| s.count_ones() as usize == d + 1)
                    .collect();
                r.sort_unstable();
                r.dedup();
                restrictions.push(r);
            }
            if restrictions[0] != restrictions[1] {
                return Err(Error::Gluing(format!("cells {a} and {b} triangulate their common face {:?} differently", members(g))));
            }
        }
    }

    let mut all = Vec::new();
    let mut cell_pieces = Vec::with_capacity(pieces.len());
    for (m, _, local) in &pieces {
        let simplices: Vec<Mask> = local.iter().map(|&s| to_global(m, s)).collect();
        all.extend(simplices.iter().copied());
        cell_pieces.push(CellPiece { members: m.clone(), simplices: to_simplices(&simplices) });
    }
    all.sort_unstable();
    all.dedup();
    let poly = polytope_of(config)?;
    Ok(Triangulation {
        config: config.clone(),
        simplices: to_simplices(&all),
        order: Some(order.clone()),
        cells: cell_pieces,
        poly: Arc::new(poly),
    })
}

pub fn is_unimodular(t: &Triangulation) -> bool {
    t.simplices.iter().all(|s| t.poly.frame.normalized_volume(s).is_one())
}

/// Minimal non-faces of the simplicial complex generated by some simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonFaceSet {
    pub sets: Vec<Vec<usize>>,
}

impl NonFaceSet {
    pub fn max_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Sizes with multiplicities.
    pub fn degrees(&self) -> BTreeMap<usize, usize> {
        let mut d = BTreeMap::new();
        for s in &self.sets {
            *d.entry(s.len()).or_insert(0) += 1;
        }
        d
    }
}

/// Minimal non-faces over all points `0..n`, given maximal faces as masks.
///
/// A point in no simplex is a minimal non-face of size one. Larger
/// candidates are built level by level: a `k`-set is a candidate when all
/// its `(k-1)`-subsets are faces.
pub fn minimal_non_faces_of(n: usize, simplices: &[Mask]) -> NonFaceSet {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let used = simplices.iter().fold(0, |a, &s| a | s);
    for p in 0..n {
        if used & bit(p) == 0 {
            sets.push(vec![p]);
        }
    }
    let max_k = simplices.iter().map(|s| s.count_ones() as usize).max().unwrap_or(0);
    // faces[k] = all k-subsets of simplices.
    let mut levels: Vec<HashSet<Mask>> = vec![HashSet::new(); max_k + 2];
    for &s in simplices {
        let vs = members(s);
        for sub in 1u32..(1 << vs.len()) {
            let m = (0..vs.len()).filter(|&b| sub & (1 << b) != 0).fold(0, |a, b| a | bit(vs[b]));
            levels[m.count_ones() as usize].insert(m);
        }
    }
    for k in 2..=max_k + 1 {
        let mut prev: Vec<Mask> = levels[k - 1].iter().copied().collect();
        prev.sort_unstable();
        for f in prev {
            let top = 127 - f.leading_zeros() as usize;
            for p in top + 1..n {
                if used & bit(p) == 0 {
                    continue;
                }
                let cand = f | bit(p);
                if levels[k].contains(&cand) {
                    continue;
                }
                let all_faces = members(cand).into_iter().all(|q| levels[k - 1].contains(&(cand & !bit(q))));
                if all_faces {
                    sets.push(members(cand));
                }
            }
        }
    }
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    NonFaceSet { sets }
}

pub fn minimal_non_faces(t: &Triangulation) -> NonFaceSet {
    minimal_non_faces_of(t.config.len(), &t.masks())
}

/// Minimal non-faces of one cell's piece, indexed in configuration indices.
pub fn minimal_non_faces_of_cell(piece: &CellPiece) -> NonFaceSet {
    let simplices: Vec<Mask> = piece
        .simplices
        .iter()
        .map(|s| mask_of(&s.iter().map(|g| piece.members.binary_search(g).expect("simplex inside its cell")).collect::<Vec<_>>()))
        .collect();
    let local = minimal_non_faces_of(piece.members.len(), &simplices);
    NonFaceSet { sets: local.sets.into_iter().map(|s| s.into_iter().map(|k| piece.members[k]).collect()).collect() }
}

pub fn is_flag(t: &Triangulation) -> bool {
    minimal_non_faces(t).sets.iter().all(|s| s.len() == 2)
}

/// Outcome of the two-facet lemma check on one cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoFacetCheck {
    /// At most two facets miss the first pulled point.
    pub precondition: bool,
    /// Facets missing the first pulled point, as point lists.
    pub opposite_facets: Vec<Vec<usize>>,
    /// Every minimal non-face with more than two points lies in one of them.
    /// `None` when the precondition fails.
    pub conclusion: Option<bool>,
}

pub fn two_facet_lemma_check(config: &PointConfiguration, order: &PullOrder) -> Result<TwoFacetCheck> {
    let t = pulling_triangulation(config, order)?;
    let v0 = order.perm[0];
    let opposite: Vec<Mask> = t.poly.hull.facets.iter().copied().filter(|f| f & bit(v0) == 0).collect();
    let precondition = opposite.len() <= 2;
    let conclusion = precondition.then(|| {
        minimal_non_faces(&t)
            .sets
            .iter()
            .filter(|s| s.len() > 2)
            .all(|s| opposite.iter().any(|&f| mask_of(s) & !f == 0))
    });
    Ok(TwoFacetCheck { precondition, opposite_facets: opposite.iter().map(|&f| members(f)).collect(), conclusion })
}

/// Points on each facet, found by exhaustive hyperplane search. Rows are
/// sorted ascending and listed in lexicographic order.
pub fn vertex_facet_incidences(config: &PointConfiguration) -> Result<Vec<Vec<usize>>> {
    let poly = LatticePolytope::new(config.ambient(), false)?;
    let mut rows: Vec<Vec<usize>> = poly.hull.facets.iter().map(|&f| members(f)).collect();
    rows.sort();
    Ok(rows)
}

/// Apply an index map to a list of index sets and canonicalize.
pub fn relabel_sets(sets: &[Vec<usize>], map: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = sets
        .iter()
        .map(|s| {
            let mut t: Vec<usize> = s.iter().map(|&i| map[i]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    out.sort();
    out
}
