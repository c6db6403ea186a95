//! Width-one slab subdivisions of 3x3 transportation polytopes.
//!
//! A cell `Z_rc(K)` is the part of `T_rc` with `k_ij <= a_ij <= k_ij + 1`
//! on the sliced entries. Translating by `-K` gives the cell
//! `Z_{r-r', c-c'}(0)`, where `r'`, `c'` are the margins of `K`. The fine
//! subdivision slices all nine entries; the coarse one leaves `a11` and
//! `a21` unsliced.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{internal, invalid, Error, Result};
use crate::polytope::{enumerate_lattice_points, BoxConstraints, LatticeMatrix, Margins, PointConfiguration};
use crate::smoothness::is_multiple_of_b3;
use crate::toric::Binomial;
use crate::triangulation::{is_unimodular, polytope_of, PullOrder, Triangulation};

pub const FULL_SLICE: [(usize, usize); 9] = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)];
pub const COARSE_SLICE: [(usize, usize); 7] = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)];

#[derive(Clone, Debug)]
pub struct Cell {
    pub parent: Margins,
    /// Lower window corner; zero on unsliced entries.
    pub offset: LatticeMatrix,
    pub sliced: Vec<(usize, usize)>,
    /// `r - r'` and `c - c'`.
    pub residual: (Vec<i64>, Vec<i64>),
    /// Indices of the cell's points in the parent configuration, ascending.
    pub members: Vec<usize>,
    /// The translated cell `Z_{r-r', c-c'}(0)`; point `k` is `members[k] - K`.
    pub config: PointConfiguration,
}

impl Cell {
    pub fn residual_margins(&self) -> Result<Margins> {
        let to_u = |v: &[i64]| v.iter().map(|&x| u64::try_from(x).map_err(|_| internal("negative residual"))).collect::<Result<Vec<u64>>>();
        Margins::new(to_u(&self.residual.0)?, to_u(&self.residual.1)?)
    }

    pub fn label(&self) -> String {
        residual_label(&self.residual.0, &self.residual.1)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Serialize)]
struct CellJson<'a> {
    offset: &'a LatticeMatrix,
    residual_rows: &'a [i64],
    residual_cols: &'a [i64],
    label: String,
    members: &'a [usize],
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CellJson {
            offset: &self.offset,
            residual_rows: &self.residual.0,
            residual_cols: &self.residual.1,
            label: self.label(),
            members: &self.members,
        }
        .serialize(s)
    }
}

pub fn residual_label(rows: &[i64], cols: &[i64]) -> String {
    let j = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("({})({})", j(rows), j(cols))
}

/// Margins after sorting rows and columns descending and, if needed,
/// transposing so that `c_1 >= r_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizedMargins {
    pub raw: Margins,
    pub margins: Margins,
    /// `row_perm[k]` is the raw index (row, or column when transposed) now at row `k`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub transposed: bool,
}

impl NormalizedMargins {
    pub fn changed(&self) -> bool {
        self.raw != self.margins
    }
}

pub fn normalize_margins(margins: &Margins) -> NormalizedMargins {
    let order = |v: &[u64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[b].cmp(&v[a]));
        idx
    };
    let (rp, cp) = (order(margins.rows()), order(margins.cols()));
    let rows: Vec<u64> = rp.iter().map(|&i| margins.rows()[i]).collect();
    let cols: Vec<u64> = cp.iter().map(|&j| margins.cols()[j]).collect();
    let transposed = cols[0] < rows[0];
    let (rows, cols, rp, cp) = if transposed { (cols, rows, cp, rp) } else { (rows, cols, rp, cp) };
    NormalizedMargins {
        raw: margins.clone(),
        margins: Margins::new(rows, cols).expect("permuting valid margins keeps them valid"),
        row_perm: rp,
        col_perm: cp,
        transposed,
    }
}

fn require_3x3(margins: &Margins) -> Result<()> {
    if margins.m() != 3 || margins.n() != 3 {
        return Err(invalid(format!("slab subdivisions are implemented for 3x3 margins, got {}x{}", margins.m(), margins.n())));
    }
    Ok(())
}

/// Candidate offsets `K = A - e`, `e` a 0/1 vector on the sliced entries.
fn candidate_offsets(config: &PointConfiguration, sliced: &[(usize, usize)]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for p in config.points() {
        let a = p.to_i64().expect("desk-scale entries fit in i64");
        for e in 0u32..(1 << sliced.len()) {
            let mut k = vec![0i64; 9];
            let mut ok = true;
            for (b, &(i, j)) in sliced.iter().enumerate() {
                let v = a[i * 3 + j] - ((e >> b) & 1) as i64;
                ok &= v >= 0;
                k[i * 3 + j] = v;
            }
            if ok {
                out.insert(k);
            }
        }
    }
    out
}

fn build_cells(margins: &Margins, sliced: &[(usize, usize)]) -> Result<(PointConfiguration, Vec<Cell>)> {
    let config = enumerate_lattice_points(margins, None)?;
    let dim = config.dimension();
    let offsets: Vec<Vec<i64>> = candidate_offsets(&config, sliced).into_iter().collect();
    let cells: Vec<Option<Cell>> = offsets
        .par_iter()
        .map(|k| {
            let offset = LatticeMatrix::from_entries(3, 3, k.iter().map(|&x| BigInt::from(x)).collect());
            let bounds = BoxConstraints::from_offset(&offset, sliced)?;
            let members: Vec<usize> = (0..config.len()).filter(|&i| bounds.contains(config.point(i))).collect();
            if members.len() <= dim {
                return Ok(None);
            }
            let pts: Vec<Vec<BigInt>> = members.iter().map(|&i| config.point(i).entries().to_vec()).collect();
            if crate::exact::affine_rank(&pts) != dim {
                return Ok(None);
            }
            Ok(Some(make_cell(margins, &config, offset, sliced, members)?))
        })
        .collect::<Result<_>>()?;
    Ok((config, cells.into_iter().flatten().collect()))
}

fn make_cell(
    margins: &Margins,
    config: &PointConfiguration,
    offset: LatticeMatrix,
    sliced: &[(usize, usize)],
    members: Vec<usize>,
) -> Result<Cell> {
    let to_i = |v: &[BigInt]| v.iter().map(|x| x.to_i64().expect("small")).collect::<Vec<i64>>();
    let (rk, ck) = (to_i(&offset.row_sums()), to_i(&offset.col_sums()));
    let rows: Vec<i64> = margins.rows().iter().zip(&rk).map(|(&r, k)| r as i64 - k).collect();
    let cols: Vec<i64> = margins.cols().iter().zip(&ck).map(|(&c, k)| c as i64 - k).collect();
    let mut cell = Cell {
        parent: margins.clone(),
        offset,
        sliced: sliced.to_vec(),
        residual: (rows, cols),
        members,
        config: config.clone(),
    };
    let zero = BoxConstraints::from_lower(sliced.iter().map(|&e| (e, BigInt::zero())))?;
    let translated = enumerate_lattice_points(&cell.residual_margins()?, Some(&zero))?;
    let expected: Vec<LatticeMatrix> = cell.members.iter().map(|&i| config.point(i).sub(&cell.offset)).collect();
    if translated.points() != expected.as_slice() {
        return Err(internal(format!("translated cell {} does not match its residual enumeration", cell.label())));
    }
    cell.config = translated;
    Ok(cell)
}

/// All full-dimensional cells slicing every entry, sorted by offset.
pub fn fine_subdivision(margins: &Margins) -> Result<Vec<Cell>> {
    require_3x3(margins)?;
    Ok(build_cells(margins, &FULL_SLICE)?.1)
}

/// As [`fine_subdivision`], also returning the parent configuration.
pub fn fine_subdivision_with_config(margins: &Margins) -> Result<(PointConfiguration, Vec<Cell>)> {
    require_3x3(margins)?;
    build_cells(margins, &FULL_SLICE)
}

/// Cells slicing all entries except `a11` and `a21`.
///
/// Margins must be normalized (see [`normalize_margins`]) and must not be
/// a multiple of the Birkhoff polytope. Every cell is checked against the
/// residual and projection constraints of the case analysis.
pub fn coarse_subdivision(margins: &Margins) -> Result<Vec<Cell>> {
    Ok(coarse_subdivision_with_config(margins)?.1)
}

pub fn coarse_subdivision_with_config(margins: &Margins) -> Result<(PointConfiguration, Vec<Cell>)> {
    require_3x3(margins)?;
    if let Some(k) = is_multiple_of_b3(margins) {
        return Err(Error::Refused(format!("{margins} is a multiple of B3 (k = {k}); the coarse subdivision does not apply")));
    }
    if normalize_margins(margins).margins != *margins {
        return Err(invalid(format!("{margins} is not normalized: sort rows and columns descending with c1 >= r1")));
    }
    let (config, cells) = build_cells(margins, &COARSE_SLICE)?;
    for c in &cells {
        check_coarse_cell(c)?;
    }
    Ok((config, cells))
}

/// Residual and projection constraints every coarse cell must satisfy.
pub fn check_coarse_cell(cell: &Cell) -> Result<()> {
    let (r, c) = (&cell.residual.0, &cell.residual.1);
    let fail = |what: &str| Err(Error::Classification(format!("cell {}: {what}", cell.label())));
    let small = |x: i64| x == 1 || x == 2;
    if !(small(r[2]) && small(c[1]) && small(c[2])) {
        return fail("fully sliced residuals outside {1,2}");
    }
    if c[0] <= r[2] {
        return fail("c1 - c1' does not exceed r3 - r3'");
    }
    if r[0] == 1 && r[1] == 1 {
        return fail("both r1 - r1' and r2 - r2' equal 1");
    }
    for p in cell.config.points() {
        let a = p.to_i64().expect("small");
        let (a11, a21) = (a[0], a[3]);
        if !(r[0] - 2 <= a11 && a11 <= r[0] && r[1] - 2 <= a21 && a21 <= r[1]) {
            return fail("a_i1 outside [r_i - r_i' - 2, r_i - r_i']");
        }
        if !(c[0] - 1 <= a11 + a21 && a11 + a21 <= c[0]) {
            return fail("a11 + a21 outside [c1 - c1' - 1, c1 - c1']");
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FineType {
    /// `(1,1,1)(1,1,1)`: the Birkhoff polytope itself.
    B3,
    /// `(1,1,2)(1,1,2)`: a unimodular simplex.
    Simplex112,
    /// `(1,2,2)(1,2,2)`: a unimodular simplex.
    Simplex122,
    /// `(2,2,2)(2,2,2)`: lattice-isomorphic to B3 via `A -> J - A`.
    Dual222,
}

impl FineType {
    pub const ALL: [FineType; 4] = [FineType::B3, FineType::Simplex112, FineType::Simplex122, FineType::Dual222];

    pub fn residual(self) -> [u64; 3] {
        match self {
            FineType::B3 => [1, 1, 1],
            FineType::Simplex112 => [1, 1, 2],
            FineType::Simplex122 => [1, 2, 2],
            FineType::Dual222 => [2, 2, 2],
        }
    }

    pub fn label(self) -> String {
        let r = self.residual();
        format!("({},{},{})({},{},{})", r[0], r[1], r[2], r[0], r[1], r[2])
    }

    pub fn point_count(self) -> usize {
        match self {
            FineType::B3 | FineType::Dual222 => 6,
            _ => 5,
        }
    }

    pub fn is_simplex(self) -> bool {
        matches!(self, FineType::Simplex112 | FineType::Simplex122)
    }

    /// The representative cell `Z_{x,x}(0)` with every entry sliced.
    pub fn config(self) -> Result<PointConfiguration> {
        let r = self.residual().to_vec();
        let zero = BoxConstraints::from_lower(FULL_SLICE.iter().map(|&e| (e, BigInt::zero())))?;
        enumerate_lattice_points(&Margins::new(r.clone(), r)?, Some(&zero))
    }
}

impl fmt::Display for FineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FineClassification {
    pub fine_type: FineType,
    pub label: String,
    pub points: usize,
    pub unimodular_simplex: bool,
}

/// Type of a fully sliced cell up to row/column permutation and transpose.
pub fn classify_fine_cell(cell: &Cell) -> Result<FineClassification> {
    let (r, c) = &cell.residual;
    let mut rs = r.clone();
    let mut cs = c.clone();
    rs.sort_unstable();
    cs.sort_unstable();
    let fail = |what: String| Error::Classification(format!("fine cell {}: {what}", cell.label()));
    if rs != cs || rs.iter().any(|&x| x != 1 && x != 2) {
        return Err(fail("residuals not of the form (x,y,z)(x,y,z) with entries in {1,2}".into()));
    }
    let fine_type = match rs.iter().sum::<i64>() {
        3 => FineType::B3,
        4 => FineType::Simplex112,
        5 => FineType::Simplex122,
        6 => FineType::Dual222,
        s => return Err(fail(format!("residual total {s}"))),
    };
    if cell.len() != fine_type.point_count() {
        return Err(fail(format!("{} points, expected {}", cell.len(), fine_type.point_count())));
    }
    let unimodular_simplex = fine_type.is_simplex() && {
        let t = Triangulation::from_simplices(&cell.config, vec![(0..cell.len()).collect()])?;
        is_unimodular(&t)
    };
    if fine_type.is_simplex() && !unimodular_simplex {
        return Err(fail("simplex type is not unimodular".into()));
    }
    Ok(FineClassification { fine_type, label: fine_type.label(), points: cell.len(), unimodular_simplex })
}

/// One printed translation class of coarse cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseClass {
    /// Group tags; the class printed under IV also stands for IV'.
    pub groups: &'static [&'static str],
    pub rows: [u64; 3],
    pub cols: [u64; 3],
}

impl CoarseClass {
    pub fn label(&self) -> String {
        format!(
            "({},{},{})({},{},{})",
            self.rows[0], self.rows[1], self.rows[2], self.cols[0], self.cols[1], self.cols[2]
        )
    }

    pub fn margins(&self) -> Margins {
        Margins::new(self.rows.to_vec(), self.cols.to_vec()).expect("catalog margins are valid")
    }

    /// The cell `Z_{rows, cols}(0)` under coarse slicing.
    pub fn config(&self) -> Result<PointConfiguration> {
        let zero = BoxConstraints::from_lower(COARSE_SLICE.iter().map(|&e| (e, BigInt::zero())))?;
        enumerate_lattice_points(&self.margins(), Some(&zero))
    }
}

macro_rules! class {
    ($g:expr, [$($r:expr),*], [$($c:expr),*]) => {
        CoarseClass { groups: $g, rows: [$($r),*], cols: [$($c),*] }
    };
}

/// The 20 translation classes, as listed.
pub const COARSE_CATALOG: [CoarseClass; 20] = [
    class!(&["I"], [2, 2, 1], [1, 2, 2]),
    class!(&["II"], [2, 2, 1], [2, 2, 1]),
    class!(&["II"], [2, 2, 1], [2, 1, 2]),
    class!(&["II"], [2, 2, 2], [2, 2, 2]),
    class!(&["III"], [2, 2, 1], [3, 1, 1]),
    class!(&["III"], [2, 2, 2], [3, 2, 1]),
    class!(&["III"], [2, 2, 2], [3, 1, 2]),
    class!(&["IV", "IV'"], [1, 1, 2], [2, 1, 1]),
    class!(&["II'"], [2, 1, 1], [1, 2, 1]),
    class!(&["II'"], [2, 1, 1], [1, 1, 2]),
    class!(&["II'"], [2, 1, 2], [1, 2, 2]),
    class!(&["II'"], [1, 2, 1], [1, 2, 1]),
    class!(&["II'"], [1, 2, 1], [1, 1, 2]),
    class!(&["II'"], [1, 2, 2], [1, 2, 2]),
    class!(&["III'"], [2, 1, 1], [2, 1, 1]),
    class!(&["III'"], [2, 1, 2], [2, 2, 1]),
    class!(&["III'"], [2, 1, 2], [2, 1, 2]),
    class!(&["III'"], [1, 2, 1], [2, 1, 1]),
    class!(&["III'"], [1, 2, 2], [2, 2, 1]),
    class!(&["III'"], [1, 2, 2], [2, 1, 2]),
];

pub fn catalog_index(rows: &[i64], cols: &[i64]) -> Option<usize> {
    COARSE_CATALOG.iter().position(|c| {
        c.rows.iter().zip(rows).all(|(&a, &b)| a as i64 == b) && c.cols.iter().zip(cols).all(|(&a, &b)| a as i64 == b)
    })
}

#[derive(Clone, Debug)]
pub struct NormalizedCell {
    pub rows: Vec<i64>,
    pub cols: Vec<i64>,
    /// Minima of `a11` and `a21` over the translated cell.
    pub shift: (i64, i64),
    pub class_index: usize,
    pub class: CoarseClass,
    /// Cell points after subtracting `K` and the shift; equals the catalog cell.
    pub config: PointConfiguration,
}

/// Translate a coarse cell to its catalog representative.
pub fn normalize_cell(cell: &Cell) -> Result<NormalizedCell> {
    let pts: Vec<Vec<i64>> = cell.config.points().iter().map(|p| p.to_i64().expect("small")).collect();
    let l11 = pts.iter().map(|a| a[0]).min().ok_or_else(|| invalid("empty cell"))?;
    let l21 = pts.iter().map(|a| a[3]).min().unwrap();
    let (mut rows, mut cols) = cell.residual.clone();
    rows[0] -= l11;
    rows[1] -= l21;
    cols[0] -= l11 + l21;
    let label = residual_label(&rows, &cols);
    let class_index = catalog_index(&rows, &cols)
        .ok_or_else(|| Error::Classification(format!("coarse cell with offset {} normalizes to {label}, outside the catalog", cell.offset)))?;
    let class = COARSE_CATALOG[class_index];
    let config = class.config()?;
    let mut shift = LatticeMatrix::zeros(3, 3);
    shift.set(0, 0, BigInt::from(l11));
    shift.set(1, 0, BigInt::from(l21));
    let shifted: Vec<LatticeMatrix> = cell.config.points().iter().map(|p| p.sub(&shift)).collect();
    if shifted.as_slice() != config.points() {
        return Err(Error::Classification(format!("shifted cell {label} differs from the catalog cell")));
    }
    Ok(NormalizedCell { rows, cols, shift: (l11, l21), class_index, class, config })
}

/// Fine cells of B3 type and the cubic they carry, reduced to quadratics.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionWitness {
    pub offset: LatticeMatrix,
    /// Entry `(i, j)` with `k_ij >= 1`.
    pub direction: (usize, usize),
    /// `-1` at `(i, j)`, `+1` on the rest of row `i` and column `j`.
    pub slack: LatticeMatrix,
    /// `K + slack`, a lattice point of `T_rc` in the adjacent cell `Z(K - E_ij)`.
    pub slack_point: usize,
    /// The two quadratic relations, over parent configuration indices.
    pub quadratics: [Binomial; 2],
    /// The cubic `x^even - x^odd` of the cell.
    pub cubic: Binomial,
    /// Degree-3 monomials from the even triangle to the odd one, one move per step.
    pub path: Vec<Vec<usize>>,
}

/// Permutation matrices in one/two-line form: `perm[i]` is the column of row `i`.
const EVEN: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];
const ODD: [[usize; 3]; 3] = [[0, 2, 1], [1, 0, 2], [2, 1, 0]];

fn swap_perm(len: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.swap(a, b);
    p
}

/// The slack matrix for direction `(i, j)`.
pub fn slack_matrix(i: usize, j: usize) -> LatticeMatrix {
    let mut m = LatticeMatrix::zeros(3, 3);
    for k in 0..3 {
        if k != j {
            m.set(i, k, BigInt::one());
        }
        if k != i {
            m.set(k, j, BigInt::one());
        }
    }
    m.set(i, j, BigInt::from(-1));
    m
}

/// Reduce the cubic of a B3-type fine cell to two quadratic moves.
///
/// For direction `(1,1)` (0-based `(0,0)`) with slack `M`:
/// `M + I = P213 + P321` and `M + P132 = P312 + P231`. Other directions
/// conjugate these by the row swap `1 <-> i` and column swap `1 <-> j`.
pub fn reduction_witness(margins: &Margins, config: &PointConfiguration, b3_cell: &Cell) -> Result<ReductionWitness> {
    if is_multiple_of_b3(margins) == Some(1) {
        return Err(Error::Refused("T_rc is B3 itself; no adjacent cell exists".into()));
    }
    if b3_cell.residual != (vec![1, 1, 1], vec![1, 1, 1]) || b3_cell.sliced != FULL_SLICE {
        return Err(invalid(format!("cell {} is not a fine cell of B3 type", b3_cell.label())));
    }
    let k = &b3_cell.offset;
    let (i, j) = FULL_SLICE
        .iter()
        .copied()
        .find(|&(i, j)| k.get(i, j).is_positive())
        .ok_or_else(|| internal(format!("B3-type cell at offset {k} has no adjacent cell inside T_rc")))?;

    let rp = swap_perm(3, 0, i);
    let cp = swap_perm(3, 0, j);
    let place = |perm: &[usize]| -> Result<usize> {
        let a = k.add(&LatticeMatrix::permutation(perm).permuted(&rp, &cp));
        config.index_of(&a).ok_or_else(|| internal(format!("{a} is not a lattice point")))
    };
    let slack = slack_matrix(i, j);
    let slack_abs = k.add(&slack);
    let slack_point = config.index_of(&slack_abs).ok_or_else(|| internal(format!("slack point {slack_abs} outside T_rc")))?;
    let mut adjacent = k.clone();
    adjacent.set(i, j, k.get(i, j) - 1);
    if !BoxConstraints::from_offset(&adjacent, &FULL_SLICE)?.contains(&slack_abs) {
        return Err(internal("slack point is not in the adjacent cell"));
    }

    // Unconjugated names: P123 = I, then the cyclic shifts, then the transposition-type matrices.
    let [p123, p231, p312] = [place(&EVEN[0])?, place(&EVEN[1])?, place(&EVEN[2])?];
    let [p132, p213, p321] = [place(&ODD[0])?, place(&ODD[1])?, place(&ODD[2])?];
    let q1 = Binomial::new(config, vec![slack_point, p123], vec![p213, p321])?;
    let q2 = Binomial::new(config, vec![slack_point, p132], vec![p312, p231])?;
    let cubic = Binomial::new(config, vec![p123, p231, p312], vec![p132, p213, p321])?;

    // even --(q2 backwards)--> {I, M, P132} --(q1)--> odd
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let start = sorted(vec![p123, p231, p312]);
    let mid = q2.apply_reverse(&start).ok_or_else(|| internal("second quadratic does not apply to the even triangle"))?;
    let end = q1.apply(&mid).ok_or_else(|| internal("first quadratic does not apply after the second"))?;
    if end != sorted(vec![p132, p213, p321]) {
        return Err(internal("quadratic moves do not reach the odd triangle"));
    }
    Ok(ReductionWitness {
        offset: k.clone(),
        direction: (i, j),
        slack,
        slack_point,
        quadratics: [q1, q2],
        cubic,
        path: vec![start, mid, end],
    })
}

/// Is the configuration a 6-point circuit split 3 | 3, the shape of B3?
pub fn is_b3_like(config: &PointConfiguration) -> bool {
    if config.len() != 6 || config.affine_rank() != Some(4) {
        return false;
    }
    let Ok(poly) = polytope_of(config) else { return false };
    // A circuit of 6 points in dimension 4 with all points as vertices and two
    // triangulations is B3-like exactly when both triangulations have 3 simplices.
    let Ok(all) = crate::triangulation::all_pulling_triangulations(&poly) else { return false };
    all.len() == 2 && all.iter().all(|t| t.len() == 3)
}

/// Pull order used for fine-pipeline refinements.
pub fn default_fine_order(config: &PointConfiguration) -> PullOrder {
    PullOrder::reverse_lex(config.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg(r: &[u64], c: &[u64]) -> Margins {
        Margins::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn birkhoff_is_one_fine_cell() {
        let cells = fine_subdivision(&mg(&[1, 1, 1], &[1, 1, 1])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(classify_fine_cell(&cells[0]).unwrap().fine_type, FineType::B3);
    }

    #[test]
    fn doubled_birkhoff_fine_types() {
        let cells = fine_subdivision(&mg(&[2, 2, 2], &[2, 2, 2])).unwrap();
        let types: BTreeSet<FineType> = cells.iter().map(|c| classify_fine_cell(c).unwrap().fine_type).collect();
        assert!(types.contains(&FineType::Dual222));
        assert!(types.contains(&FineType::Simplex112) || types.contains(&FineType::Simplex122));
        let zero = cells.iter().find(|c| c.offset == LatticeMatrix::zeros(3, 3)).unwrap();
        assert_eq!(classify_fine_cell(zero).unwrap().fine_type, FineType::Dual222);
    }

    #[test]
    fn relaxed_birkhoff_single_coarse_cell() {
        let cells = coarse_subdivision(&mg(&[2, 1, 1], &[2, 1, 1])).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].len(), 7);
        let n = normalize_cell(&cells[0]).unwrap();
        assert_eq!(n.class.label(), "(2,1,1)(2,1,1)");
        assert_eq!(n.class.groups, &["III'"]);
    }

    #[test]
    fn coarse_refuses_multiples_and_unsorted() {
        assert!(matches!(coarse_subdivision(&mg(&[2, 2, 2], &[2, 2, 2])), Err(Error::Refused(_))));
        assert!(matches!(coarse_subdivision(&mg(&[1, 1, 2], &[2, 1, 1])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn normalization_sorts_and_transposes() {
        let n = normalize_margins(&mg(&[1, 3, 1], &[2, 1, 2]));
        assert_eq!(n.margins, mg(&[2, 2, 1], &[3, 1, 1]));
        assert!(n.transposed);
        assert_eq!(n.row_perm, vec![0, 2, 1]);
        assert_eq!(n.col_perm, vec![1, 0, 2]);
    }

    #[test]
    fn catalog_has_twenty_distinct_entries() {
        let labels: BTreeSet<String> = COARSE_CATALOG.iter().map(|c| c.label()).collect();
        assert_eq!(labels.len(), 20);
        for c in COARSE_CATALOG {
            let cfg = c.config().unwrap();
            assert_eq!(cfg.affine_rank(), Some(4), "{}", c.label());
            assert!(!is_b3_like(&cfg), "{} looks like B3", c.label());
        }
    }

    #[test]
    fn reduction_for_doubled_birkhoff() {
        let m = mg(&[2, 2, 2], &[2, 2, 2]);
        let (config, cells) = fine_subdivision_with_config(&m).unwrap();
        let id = LatticeMatrix::permutation(&[0, 1, 2]);
        let cell = cells.iter().find(|c| c.offset == id).unwrap();
        assert_eq!(classify_fine_cell(cell).unwrap().fine_type, FineType::B3);
        let w = reduction_witness(&m, &config, cell).unwrap();
        assert_eq!(w.direction, (0, 0));
        assert_eq!(w.slack, LatticeMatrix::from_rows(&[vec![-1, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap());
        assert_eq!(w.cubic.degree(), 3);
    }

    #[test]
    fn reduction_refused_on_birkhoff() {
        let m = mg(&[1, 1, 1], &[1, 1, 1]);
        let (config, cells) = fine_subdivision_with_config(&m).unwrap();
        assert!(matches!(reduction_witness(&m, &config, &cells[0]), Err(Error::Refused(_))));
    }
}
