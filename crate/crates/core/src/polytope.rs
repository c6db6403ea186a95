//! Transportation polytopes and their width-one sub-boxes.
//!
//! A [`PointConfiguration`] is the complete list of lattice points of
//! `T_rc`, optionally intersected with a [`BoxConstraints`] window. All
//! downstream geometry (facets, triangulations, fibers) runs on these
//! point lists; nothing here uses floating point.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact;

/// Row sums `r` and column sums `c` of a transportation polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Margins {
    rows: Vec<u64>,
    cols: Vec<u64>,
}

impl Margins {
    pub fn new(rows: Vec<u64>, cols: Vec<u64>) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(invalid("margins must have at least one row and one column"));
        }
        if rows.iter().chain(&cols).any(|&x| x == 0) {
            return Err(invalid("margin entries must be strictly positive"));
        }
        let (sr, sc): (u64, u64) = (rows.iter().sum(), cols.iter().sum());
        if sr != sc {
            return Err(invalid(format!("row sums total {sr} but column sums total {sc}")));
        }
        Ok(Margins { rows, cols })
    }

    /// `r = c = (k, ..., k)`, the `k`-th dilate of the Birkhoff polytope.
    pub fn birkhoff(n: usize, k: u64) -> Self {
        Margins { rows: vec![k; n], cols: vec![k; n] }
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn cols(&self) -> &[u64] {
        &self.cols
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    /// Total mass `s`.
    pub fn total(&self) -> u64 {
        self.rows.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        Margins { rows: self.cols.clone(), cols: self.rows.clone() }
    }

    /// Multiply both margin vectors by `k`.
    pub fn dilate(&self, k: u64) -> Self {
        Margins {
            rows: self.rows.iter().map(|x| x * k).collect(),
            cols: self.cols.iter().map(|x| x * k).collect(),
        }
    }
}

impl fmt::Display for Margins {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({})({})", join(&self.rows), join(&self.cols))
    }
}

/// A nonnegative (or, for offsets, arbitrary) integer `m x n` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeMatrix {
    m: usize,
    n: usize,
    entries: Vec<BigInt>,
}

impl LatticeMatrix {
    pub fn zeros(m: usize, n: usize) -> Self {
        LatticeMatrix { m, n, entries: vec![BigInt::zero(); m * n] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix rows must be nonempty and of equal length"));
        }
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Ok(LatticeMatrix { m, n, entries })
    }

    pub fn from_entries(m: usize, n: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), m * n, "entry count does not match shape");
        LatticeMatrix { m, n, entries }
    }

    /// The permutation matrix with a one in entry `(i, perm[i])`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut a = LatticeMatrix::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            a.entries[i * n + j] = BigInt::one();
        }
        a
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.m).map(|i| (0..self.n).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.n).map(|j| (0..self.m).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn satisfies(&self, margins: &Margins) -> bool {
        let as_big = |v: &[u64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        (self.m, self.n) == (margins.m(), margins.n())
            && self.row_sums() == as_big(margins.rows())
            && self.col_sums() == as_big(margins.cols())
    }

    pub fn add(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.shape(), other.shape());
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        LatticeMatrix { m: self.m, n: self.n, entries }
    }

    pub fn sub(&self, other: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.shape(), other.shape());
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        LatticeMatrix { m: self.m, n: self.n, entries }
    }

    pub fn transpose(&self) -> LatticeMatrix {
        let mut t = LatticeMatrix::zeros(self.n, self.m);
        for i in 0..self.m {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Permute rows and columns: entry `(i, j)` moves to `(row_perm[i], col_perm[j])`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> LatticeMatrix {
        let mut out = LatticeMatrix::zeros(self.m, self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                out.set(row_perm[i], col_perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// Entries as machine integers; `None` if any entry does not fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|x| x.to_i64()).collect()
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        let flat = self.to_i64()?;
        Some(flat.chunks(self.n).map(|c| c.to_vec()).collect())
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.m)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl Serialize for LatticeMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.m))?;
        for i in 0..self.m {
            let row: Vec<IntValue> = (0..self.n).map(|j| IntValue(self.get(i, j).clone())).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Serializes an integer as a JSON number when it fits, else as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntValue(pub BigInt);

impl Serialize for IntValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// Exact rational rendered as `"p/q"` (or `"p"` when integral).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalValue(pub BigRational);

impl Serialize for RationalValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let q = &self.0;
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Width-one windows `k_ij <= a_ij <= k_ij + 1` on a subset of entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BoxConstraints {
    lower: BTreeMap<(usize, usize), BigInt>,
}

impl BoxConstraints {
    pub fn new() -> Self {
        Self::default()
    }

    /// Slice every listed entry with the given lower bound.
    pub fn from_lower(entries: impl IntoIterator<Item = ((usize, usize), BigInt)>) -> Result<Self> {
        let mut b = BoxConstraints::new();
        for ((i, j), k) in entries {
            b.slice(i, j, k)?;
        }
        Ok(b)
    }

    /// Window `[lower, lower + 1]` on every entry in `sliced`, lower bounds read from `offset`.
    pub fn from_offset(offset: &LatticeMatrix, sliced: &[(usize, usize)]) -> Result<Self> {
        Self::from_lower(sliced.iter().map(|&(i, j)| ((i, j), offset.get(i, j).clone())))
    }

    pub fn slice(&mut self, i: usize, j: usize, lower: BigInt) -> Result<()> {
        // The window must still meet the nonnegative orthant.
        if lower < BigInt::from(-1) {
            return Err(invalid(format!("window lower bound {lower} on ({i},{j}) excludes every nonnegative value")));
        }
        self.lower.insert((i, j), lower);
        Ok(())
    }

    /// Add a window given by both bounds; only width one is accepted.
    pub fn window(&mut self, i: usize, j: usize, lower: BigInt, upper: BigInt) -> Result<()> {
        if &upper - &lower != BigInt::one() {
            return Err(invalid(format!("box windows must have width 1, got [{lower}, {upper}]")));
        }
        self.slice(i, j, lower)
    }

    pub fn lower(&self, i: usize, j: usize) -> Option<&BigInt> {
        self.lower.get(&(i, j))
    }

    pub fn sliced(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lower.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn contains(&self, a: &LatticeMatrix) -> bool {
        self.lower.iter().all(|(&(i, j), k)| {
            let v = a.get(i, j);
            v >= k && *v <= k + 1
        })
    }

    fn check_shape(&self, m: usize, n: usize) -> Result<()> {
        match self.lower.keys().find(|&&(i, j)| i >= m || j >= n) {
            Some(&(i, j)) => Err(invalid(format!("sliced entry ({i},{j}) outside a {m}x{n} matrix"))),
            None => Ok(()),
        }
    }
}

/// The lattice points of `T_rc` (within an optional box), in a fixed order.
#[derive(Clone, Debug)]
pub struct PointConfiguration {
    margins: Margins,
    bounds: Option<BoxConstraints>,
    points: Vec<LatticeMatrix>,
    index: HashMap<LatticeMatrix, usize>,
}

impl PointConfiguration {
    pub fn margins(&self) -> &Margins {
        &self.margins
    }

    pub fn bounds(&self) -> Option<&BoxConstraints> {
        self.bounds.as_ref()
    }

    pub fn points(&self) -> &[LatticeMatrix] {
        &self.points
    }

    pub fn point(&self, idx: usize) -> &LatticeMatrix {
        &self.points[idx]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, a: &LatticeMatrix) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// Reorder the points; `order[k]` is the old index of the new `k`-th point.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() || order.iter().any(|&i| i >= self.len() || std::mem::replace(&mut seen[i], true)) {
            return Err(invalid("explicit order must be a permutation of the point indices"));
        }
        let points: Vec<LatticeMatrix> = order.iter().map(|&i| self.points[i].clone()).collect();
        Ok(Self::assemble(self.margins.clone(), self.bounds.clone(), points))
    }

    /// Points as flat integer vectors (row-major).
    pub fn ambient(&self) -> Vec<Vec<BigInt>> {
        self.points.iter().map(|p| p.entries().to_vec()).collect()
    }

    pub fn dimension(&self) -> usize {
        dimension(&self.margins)
    }

    /// Dimension of the affine hull of the points, `None` when empty.
    pub fn affine_rank(&self) -> Option<usize> {
        (!self.is_empty()).then(|| exact::affine_rank(&self.ambient()))
    }

    /// Coordinate functionals `a_ij`; every facet of the configuration's
    /// convex hull is a level set of one of them.
    pub fn coordinate_functionals(&self) -> Vec<Vec<BigInt>> {
        let mn = self.margins.m() * self.margins.n();
        (0..mn)
            .map(|k| (0..mn).map(|l| if k == l { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    }

    fn assemble(margins: Margins, bounds: Option<BoxConstraints>, points: Vec<LatticeMatrix>) -> Self {
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PointConfiguration { margins, bounds, points, index }
    }
}

/// All integer matrices with the given margins, inside the optional box.
///
/// Points come back in canonical order: ascending lexicographic on the
/// row-major entries (all points share the same total, so this is also the
/// graded order). An infeasible box yields an empty configuration.
pub fn enumerate_lattice_points(margins: &Margins, bounds: Option<&BoxConstraints>) -> Result<PointConfiguration> {
    let (m, n) = (margins.m(), margins.n());
    if let Some(b) = bounds {
        b.check_shape(m, n)?;
    }
    let to_i64 = |x: u64| i64::try_from(x).map_err(|_| invalid("margin too large"));
    let rows: Vec<i64> = margins.rows().iter().map(|&x| to_i64(x)).collect::<Result<_>>()?;
    let cols: Vec<i64> = margins.cols().iter().map(|&x| to_i64(x)).collect::<Result<_>>()?;
    let window = |i: usize, j: usize| -> Result<(i64, i64)> {
        match bounds.and_then(|b| b.lower(i, j)) {
            None => Ok((0, i64::MAX)),
            Some(k) => {
                let k = k.to_i64().ok_or_else(|| invalid("box bound too large"))?;
                Ok((k.max(0), k + 1))
            }
        }
    };
    let mut windows = vec![(0i64, 0i64); m * n];
    for i in 0..m {
        for j in 0..n {
            windows[i * n + j] = window(i, j)?;
        }
    }

    let mut found = Vec::new();
    let mut a = vec![0i64; m * n];
    let mut col_left = cols.clone();
    fill(0, 0, m, n, &rows, &mut col_left, &windows, &mut a, rows[0], &mut found);

    let mut points: Vec<LatticeMatrix> = found
        .into_iter()
        .map(|e| LatticeMatrix::from_entries(m, n, e.into_iter().map(BigInt::from).collect()))
        .collect();
    points.sort();
    Ok(PointConfiguration::assemble(margins.clone(), bounds.cloned(), points))
}

// Row-by-row search; the last entry of each row and the whole last row are
// forced by the margins.
#[allow(clippy::too_many_arguments)]
fn fill(
    i: usize,
    j: usize,
    m: usize,
    n: usize,
    rows: &[i64],
    col_left: &mut [i64],
    windows: &[(i64, i64)],
    a: &mut [i64],
    row_left: i64,
    out: &mut Vec<Vec<i64>>,
) {
    if i == m - 1 {
        // Last row takes whatever the columns still need.
        for jj in 0..n {
            let v = col_left[jj];
            let (lo, hi) = windows[i * n + jj];
            if v < lo || v > hi {
                return;
            }
        }
        if col_left.iter().sum::<i64>() != rows[i] {
            return;
        }
        for jj in 0..n {
            a[i * n + jj] = col_left[jj];
        }
        out.push(a.to_vec());
        return;
    }
    let (lo, hi) = windows[i * n + j];
    if j == n - 1 {
        let v = row_left;
        if v < lo || v > hi || v > col_left[j] {
            return;
        }
        a[i * n + j] = v;
        col_left[j] -= v;
        fill(i + 1, 0, m, n, rows, col_left, windows, a, rows[i + 1], out);
        col_left[j] += v;
        return;
    }
    let top = hi.min(row_left).min(col_left[j]);
    for v in lo..=top {
        a[i * n + j] = v;
        col_left[j] -= v;
        fill(i, j + 1, m, n, rows, col_left, windows, a, row_left - v, out);
        col_left[j] += v;
    }
}

/// `(m - 1)(n - 1)`.
pub fn dimension(margins: &Margins) -> usize {
    (margins.m() - 1) * (margins.n() - 1)
}

/// Equality constraints of `T_rc` as rows over the row-major entries.
fn margin_rows(m: usize, n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = Vec::with_capacity(m + n);
    for i in 0..m {
        rows.push((0..m * n).map(|k| BigInt::from((k / n == i) as i64)).collect());
    }
    for j in 0..n {
        rows.push((0..m * n).map(|k| BigInt::from((k % n == j) as i64)).collect());
    }
    rows
}

fn unit_row(len: usize, k: usize) -> Vec<BigInt> {
    (0..len).map(|l| BigInt::from((l == k) as i64)).collect()
}

/// Whether the inequality constraints tight at `a` pin it down uniquely.
fn is_vertex_by_rank(config: &PointConfiguration, a: &LatticeMatrix) -> bool {
    let (m, n) = a.shape();
    let mut rows = margin_rows(m, n);
    for i in 0..m {
        for j in 0..n {
            let v = a.get(i, j);
            let tight_box = config
                .bounds
                .as_ref()
                .and_then(|b| b.lower(i, j))
                .is_some_and(|k| v == k || *v == k + 1);
            if v.is_zero() || tight_box {
                rows.push(unit_row(m * n, i * n + j));
            }
        }
    }
    exact::rank(&rows) == m * n
}

/// Indices of the configuration points that are vertices of its convex hull.
///
/// Tight-constraint rank test: a point is a vertex iff the margin equations
/// together with the inequalities tight at it have full rank `mn`.
pub fn vertices(config: &PointConfiguration) -> Vec<usize> {
    (0..config.len()).filter(|&i| is_vertex_by_rank(config, &config.points[i])).collect()
}

/// Vertices of a plain transportation polytope by the support criterion:
/// a point is a vertex iff the bipartite graph of its nonzero entries is a forest.
pub fn vertices_by_forest(config: &PointConfiguration) -> Vec<usize> {
    (0..config.len()).filter(|&i| support_is_forest(&config.points[i])).collect()
}

pub fn support_is_forest(a: &LatticeMatrix) -> bool {
    let (m, n) = a.shape();
    // Union-find over m row nodes followed by n column nodes.
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..m {
        for j in 0..n {
            if a.get(i, j).is_zero() {
                continue;
            }
            let (x, y) = (find(&mut parent, i), find(&mut parent, m + j));
            if x == y {
                return false;
            }
            parent[x] = y;
        }
    }
    true
}

/// Facet-defining nonnegativity inequalities of `T_rc`.
#[derive(Clone, Debug, Serialize)]
pub struct FacetInequalities {
    /// Entries `(i, j)` for which `a_ij >= 0` defines a facet.
    pub pairs: Vec<(usize, usize)>,
    /// Pairs whose face `{a_ij = 0}` has a point with every other entry
    /// positive. Equal to `pairs` unless some `a_ij = 0` forces another zero.
    pub strict_pairs: Vec<(usize, usize)>,
    /// Relative-interior point of each facet in `pairs`: the barycenter of
    /// the lattice points with `a_ij = 0`.
    #[serde(skip)]
    pub witnesses: Vec<Vec<BigRational>>,
    /// Groups of pairs that cut out the same facet.
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl FacetInequalities {
    /// Number of geometrically distinct facets.
    pub fn distinct(&self) -> usize {
        self.classes.len()
    }
}

/// Decide which `a_ij >= 0` are facet-defining.
///
/// The face `{a_ij = 0}` is a lattice polytope, so the barycenter of its
/// lattice points lies in its relative interior. The inequality is a facet
/// when that face has dimension `dim - 1`. The sharper test "some point has
/// `a_ij = 0` and all other entries positive" is reported alongside; it
/// agrees except on degenerate shapes such as the 2x2 segment, where one
/// vanishing entry forces a second.
pub fn facet_inequalities(margins: &Margins) -> Result<FacetInequalities> {
    let dim = dimension(margins);
    if dim == 0 {
        return Err(invalid("facet inequalities need a polytope of dimension at least 1"));
    }
    let config = enumerate_lattice_points(margins, None)?;
    let (m, n) = (margins.m(), margins.n());
    let mut out = FacetInequalities { pairs: Vec::new(), strict_pairs: Vec::new(), witnesses: Vec::new(), classes: Vec::new() };
    let mut by_tight_set: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            let tight: Vec<usize> = (0..config.len()).filter(|&p| config.points[p].get(i, j).is_zero()).collect();
            if tight.is_empty() {
                continue;
            }
            let count = BigInt::from(tight.len());
            let bary: Vec<BigRational> = (0..m * n)
                .map(|k| {
                    let s: BigInt = tight.iter().map(|&p| &config.points[p].entries()[k]).sum();
                    BigRational::new(s, count.clone())
                })
                .collect();
            if bary.iter().enumerate().all(|(k, q)| k == i * n + j || q.is_positive()) {
                out.strict_pairs.push((i, j));
            }
            let face: Vec<Vec<BigInt>> = tight.iter().map(|&p| config.points[p].entries().to_vec()).collect();
            if exact::affine_rank(&face) + 1 == dim {
                out.pairs.push((i, j));
                out.witnesses.push(bary);
                by_tight_set.entry(tight).or_default().push((i, j));
            }
        }
    }
    out.classes = by_tight_set.into_values().collect();
    out.classes.sort();
    Ok(out)
}

/// Range `max - min` of an integer functional over the configuration.
pub fn facet_width(config: &PointConfiguration, functional: &[BigInt]) -> Result<BigInt> {
    let (m, n) = (config.margins.m(), config.margins.n());
    if functional.len() != m * n {
        return Err(invalid(format!("functional has {} coefficients, expected {}", functional.len(), m * n)));
    }
    if !exact::gcd_all(functional).is_one() {
        return Err(invalid("functional must be primitive (coefficient gcd 1)"));
    }
    let values: Vec<BigInt> = config
        .points
        .iter()
        .map(|p| p.entries().iter().zip(functional).map(|(a, f)| a * f).sum())
        .collect();
    match (values.iter().min(), values.iter().max()) {
        (Some(lo), Some(hi)) => Ok(hi - lo),
        _ => Err(Error::InvalidInput("facet width of an empty configuration".into())),
    }
}

/// Unit functional picking out entry `(i, j)`.
pub fn coordinate_functional(m: usize, n: usize, i: usize, j: usize) -> Vec<BigInt> {
    unit_row(m * n, i * n + j)
}

/// The northwest-corner rule: a vertex of `T_rc` with tree support.
pub fn northwest_corner(margins: &Margins) -> LatticeMatrix {
    let (m, n) = (margins.m(), margins.n());
    let mut r: Vec<u64> = margins.rows().to_vec();
    let mut c: Vec<u64> = margins.cols().to_vec();
    let mut a = LatticeMatrix::zeros(m, n);
    let (mut i, mut j) = (0, 0);
    while i < m && j < n {
        let v = r[i].min(c[j]);
        a.set(i, j, BigInt::from(v));
        r[i] -= v;
        c[j] -= v;
        if r[i] == 0 && i + 1 < m {
            i += 1;
        } else if c[j] == 0 {
            j += 1;
        } else {
            i += 1;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn margins(r: &[u64], c: &[u64]) -> Margins {
        Margins::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn birkhoff_points_are_permutations() {
        let cfg = enumerate_lattice_points(&margins(&[1, 1, 1], &[1, 1, 1]), None).unwrap();
        assert_eq!(cfg.len(), 6);
        for p in cfg.points() {
            assert!(p.satisfies(cfg.margins()));
            assert!(p.entries().iter().all(|x| *x == BigInt::zero() || x.is_one()));
        }
        assert_eq!(vertices(&cfg).len(), 6);
    }

    #[test]
    fn two_by_two_segment() {
        let mg = margins(&[1, 1], &[1, 1]);
        let cfg = enumerate_lattice_points(&mg, None).unwrap();
        assert_eq!(cfg.len(), 2);
        assert_eq!(dimension(&mg), 1);
        let f = facet_inequalities(&mg).unwrap();
        assert_eq!(f.pairs.len(), 4);
        assert_eq!(f.distinct(), 2);
        assert!(f.strict_pairs.is_empty());
    }

    #[test]
    fn margin_validation() {
        assert!(Margins::new(vec![1, 1], vec![2, 1]).is_err());
        assert!(Margins::new(vec![0, 2], vec![2]).is_err());
        assert!(Margins::new(vec![], vec![]).is_err());
    }

    #[test]
    fn wide_window_rejected() {
        let mut b = BoxConstraints::new();
        assert!(b.window(0, 0, BigInt::from(0), BigInt::from(2)).is_err());
        assert!(b.window(0, 0, BigInt::from(0), BigInt::from(1)).is_ok());
        assert!(b.slice(0, 0, BigInt::from(-2)).is_err());
    }

    #[test]
    fn box_outside_shape_rejected() {
        let b = BoxConstraints::from_lower([((3, 0), BigInt::zero())]).unwrap();
        assert!(enumerate_lattice_points(&margins(&[1, 1, 1], &[1, 1, 1]), Some(&b)).is_err());
    }

    #[test]
    fn infeasible_box_is_empty_not_error() {
        let mut b = BoxConstraints::new();
        b.slice(0, 0, BigInt::from(5)).unwrap();
        let cfg = enumerate_lattice_points(&margins(&[1, 1, 1], &[1, 1, 1]), Some(&b)).unwrap();
        assert!(cfg.is_empty());
        assert_eq!(cfg.affine_rank(), None);
    }

    #[test]
    fn cycle_support_is_not_a_vertex() {
        let cfg = enumerate_lattice_points(&margins(&[2, 2, 2], &[2, 2, 2]), None).unwrap();
        let cyc = LatticeMatrix::from_rows(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let idx = cfg.index_of(&cyc).unwrap();
        assert!(!vertices(&cfg).contains(&idx));
        let two_id = LatticeMatrix::permutation(&[0, 1, 2]).add(&LatticeMatrix::permutation(&[0, 1, 2]));
        assert!(vertices(&cfg).contains(&cfg.index_of(&two_id).unwrap()));
    }

    #[test]
    fn northwest_corner_is_a_vertex() {
        let mg = margins(&[1, 2, 13], &[4, 5, 7]);
        let a = northwest_corner(&mg);
        assert!(a.satisfies(&mg));
        assert!(support_is_forest(&a));
    }

    #[test]
    fn width_rejects_non_primitive() {
        let cfg = enumerate_lattice_points(&margins(&[1, 1, 1], &[1, 1, 1]), None).unwrap();
        let mut f = coordinate_functional(3, 3, 0, 0);
        assert_eq!(facet_width(&cfg, &f).unwrap(), BigInt::one());
        f[0] = BigInt::from(2);
        assert!(facet_width(&cfg, &f).is_err());
    }

    #[test]
    fn explicit_reorder() {
        let cfg = enumerate_lattice_points(&margins(&[1, 1], &[1, 1]), None).unwrap();
        let r = cfg.reordered(&[1, 0]).unwrap();
        assert_eq!(r.point(0), cfg.point(1));
        assert_eq!(r.index_of(cfg.point(0)), Some(1));
        assert!(cfg.reordered(&[0, 0]).is_err());
    }
}
