//! Affine lattice frames, facets and face lattices of small point sets.
//!
//! Point subsets are `u128` bitmasks, so a polytope may carry at most 128
//! lattice points. Faces are stored as the set of lattice points they
//! contain.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{internal, Error, Result};
use crate::exact::{self, IntMatrix};

pub type Mask = u128;

pub const MAX_POINTS: usize = 128;

pub fn bit(i: usize) -> Mask {
    1u128 << i
}

pub fn members(mask: Mask) -> Vec<usize> {
    (0..MAX_POINTS).filter(|&i| mask & bit(i) != 0).collect()
}

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | bit(i))
}

/// Integer coordinates of points in a lattice basis of their affine span.
///
/// The basis spans `(aff ∩ Z^D) - p_0`, so normalized volumes computed in
/// these coordinates are with respect to the lattice of the affine hull.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    pub origin: Vec<BigInt>,
    pub basis: IntMatrix,
    pub coords: IntMatrix,
}

impl AffineFrame {
    pub fn new(points: &[Vec<BigInt>]) -> Result<Self> {
        let Some(origin) = points.first() else {
            return Err(crate::error::invalid("affine frame of an empty point set"));
        };
        let ambient = origin.len();
        let diffs = exact::differences(points);
        let basis = exact::saturated_basis(&diffs, ambient);
        let mut coords = Vec::with_capacity(points.len());
        for p in points {
            let d: Vec<BigInt> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
            let y = exact::solve_left(&basis, &d).ok_or_else(|| internal("point outside its own affine span"))?;
            let y: Option<Vec<BigInt>> = y.iter().map(exact::to_integer).collect();
            coords.push(y.ok_or_else(|| internal("lattice point has fractional frame coordinates"))?);
        }
        Ok(AffineFrame { origin: origin.clone(), basis, coords })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn edge_matrix(&self, simplex: &[usize]) -> IntMatrix {
        let o = &self.coords[simplex[0]];
        simplex[1..]
            .iter()
            .map(|&i| self.coords[i].iter().zip(o).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// `|det|` of the edge vectors; 1 means unimodular. Needs `dim + 1` vertices.
    pub fn normalized_volume(&self, simplex: &[usize]) -> BigInt {
        assert_eq!(simplex.len(), self.dim() + 1, "normalized volume needs a full-dimensional simplex");
        exact::determinant(&self.edge_matrix(simplex)).abs()
    }

    /// Affine coordinates of point `q` with respect to a full-dimensional simplex.
    pub fn barycentric(&self, simplex: &[usize], q: usize) -> Option<Vec<BigRational>> {
        let edges = self.edge_matrix(simplex);
        let d: Vec<BigInt> = self.coords[q].iter().zip(&self.coords[simplex[0]]).map(|(a, b)| a - b).collect();
        let mu = exact::solve_left(&edges, &d)?;
        let first = BigRational::from_integer(1.into()) - mu.iter().sum::<BigRational>();
        Some(std::iter::once(first).chain(mu).collect())
    }

    /// Write `y` (frame coordinates of a sum of `k` points) as an integer
    /// combination `sum c_i * simplex_i` with `sum c_i = k`, if the
    /// coefficients are nonnegative integers.
    pub fn decompose(&self, simplex: &[usize], y: &[BigInt], k: usize) -> Option<Vec<BigInt>> {
        let edges = self.edge_matrix(simplex);
        let o = &self.coords[simplex[0]];
        let kk = BigInt::from(k);
        let d: Vec<BigInt> = y.iter().zip(o).map(|(a, b)| a - &kk * b).collect();
        let mu = exact::solve_left(&edges, &d)?;
        let first = BigRational::from_integer(kk) - mu.iter().sum::<BigRational>();
        std::iter::once(first)
            .chain(mu)
            .map(|q| exact::to_integer(&q).filter(|c| !c.is_negative()))
            .collect()
    }

    pub fn affine_rank(&self, mask: Mask) -> usize {
        let pts: Vec<Vec<BigInt>> = members(mask).into_iter().map(|i| self.coords[i].clone()).collect();
        if pts.is_empty() {
            return 0;
        }
        exact::affine_rank(&pts)
    }
}

/// Facets of the convex hull of a point set, as masks of the points on them.
#[derive(Clone, Debug)]
pub struct Hull {
    pub n: usize,
    pub dim: usize,
    pub facets: Vec<Mask>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_POINTS {
        return Err(Error::TooLarge(format!("{n} points; face masks hold at most {MAX_POINTS}")));
    }
    Ok(())
}

fn sorted_unique(mut v: Vec<Mask>) -> Vec<Mask> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Hull {
    /// Exhaustive route: every hyperplane spanned by `dim` points is tested
    /// as a supporting hyperplane. Cost grows like `C(n, dim)`.
    pub fn exhaustive(frame: &AffineFrame) -> Result<Self> {
        let n = frame.coords.len();
        check_size(n)?;
        let k = frame.dim();
        let mut facets = Vec::new();
        if k > 0 {
            let mut seen = HashSet::new();
            for combo in combinations(n, k) {
                let o = &frame.coords[combo[0]];
                let diffs: IntMatrix = combo[1..]
                    .iter()
                    .map(|&i| frame.coords[i].iter().zip(o).map(|(a, b)| a - b).collect())
                    .collect();
                if exact::rank(&diffs) != k - 1 {
                    continue;
                }
                let normal = cofactor_normal(&diffs, k);
                let values: Vec<BigInt> = frame.coords.iter().map(|p| dot(&normal, p)).collect();
                let level = &values[combo[0]];
                let above = values.iter().any(|v| v > level);
                let below = values.iter().any(|v| v < level);
                if above && below {
                    continue;
                }
                let tight = (0..n).filter(|&i| values[i] == *level).fold(0, |m, i| m | bit(i));
                if seen.insert(tight) {
                    facets.push(tight);
                }
            }
        }
        Ok(Hull { n, dim: k, facets: sorted_unique(facets) })
    }

    /// Candidate route: only the level sets of the given ambient functionals
    /// are tested. Complete whenever every facet normal is among them, which
    /// holds for transportation polytopes and their box cells with the
    /// coordinate functionals.
    pub fn from_candidates(frame: &AffineFrame, ambient: &[Vec<BigInt>], candidates: &[Vec<BigInt>]) -> Result<Self> {
        let n = ambient.len();
        check_size(n)?;
        let k = frame.dim();
        let mut facets = Vec::new();
        if k > 0 {
            for f in candidates {
                let values: Vec<BigInt> = ambient.iter().map(|p| dot(f, p)).collect();
                let (lo, hi) = (values.iter().min().unwrap(), values.iter().max().unwrap());
                if lo == hi {
                    continue;
                }
                for level in [lo, hi] {
                    let tight = (0..n).filter(|&i| values[i] == *level).fold(0, |m, i| m | bit(i));
                    if frame.affine_rank(tight) + 1 == k {
                        facets.push(tight);
                    }
                }
            }
        }
        Ok(Hull { n, dim: k, facets: sorted_unique(facets) })
    }

    /// Points lying on no facet (relative interior points).
    pub fn interior(&self) -> Mask {
        let all = full_mask(self.n);
        self.facets.iter().fold(all, |m, f| m & !f)
    }
}

pub fn full_mask(n: usize) -> Mask {
    if n == 128 {
        u128::MAX
    } else {
        bit(n) - 1
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normal of the hyperplane spanned by `k - 1` vectors in `Z^k`.
fn cofactor_normal(diffs: &IntMatrix, k: usize) -> Vec<BigInt> {
    (0..k)
        .map(|j| {
            let minor: IntMatrix = diffs
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = exact::determinant(&minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// All faces of a polytope with their dimensions and facet lists.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    pub all: Mask,
    pub dim: usize,
    dims: HashMap<Mask, usize>,
    facets_of: HashMap<Mask, Vec<Mask>>,
}

impl FaceLattice {
    pub fn new(frame: &AffineFrame, hull: &Hull) -> Self {
        let all = full_mask(hull.n);
        let mut dims: HashMap<Mask, usize> = HashMap::new();
        dims.insert(all, hull.dim);
        let mut stack: Vec<Mask> = Vec::new();
        for &f in &hull.facets {
            if dims.insert(f, hull.dim - 1).is_none() {
                stack.push(f);
            }
        }
        while let Some(g) = stack.pop() {
            for &f in &hull.facets {
                let h = g & f;
                if h != 0 && !dims.contains_key(&h) {
                    dims.insert(h, frame.affine_rank(h));
                    stack.push(h);
                }
            }
        }
        let mut facets_of = HashMap::with_capacity(dims.len());
        for (&g, &d) in &dims {
            let mut fs: Vec<Mask> = if g == all {
                hull.facets.clone()
            } else if d == 0 {
                Vec::new()
            } else {
                hull.facets
                    .iter()
                    .map(|&f| g & f)
                    .filter(|&h| h != g && h != 0 && dims.get(&h) == Some(&(d - 1)))
                    .collect()
            };
            fs.sort_unstable();
            fs.dedup();
            facets_of.insert(g, fs);
        }
        FaceLattice { all, dim: hull.dim, dims, facets_of }
    }

    pub fn is_face(&self, mask: Mask) -> bool {
        self.dims.contains_key(&mask)
    }

    pub fn dim_of(&self, mask: Mask) -> Option<usize> {
        self.dims.get(&mask).copied()
    }

    pub fn facets_of(&self, mask: Mask) -> &[Mask] {
        self.facets_of.get(&mask).map_or(&[], |v| v.as_slice())
    }

    /// All faces, sorted by dimension then mask.
    pub fn faces(&self) -> Vec<(Mask, usize)> {
        let mut v: Vec<(Mask, usize)> = self.dims.iter().map(|(&m, &d)| (m, d)).collect();
        v.sort_by_key(|&(m, d)| (d, m));
        v
    }

    /// Vertices: zero-dimensional faces.
    pub fn vertices(&self) -> Mask {
        self.dims.iter().filter(|&(_, &d)| d == 0).fold(0, |acc, (&m, _)| acc | m)
    }
}

/// Frame, hull and face lattice of one point set.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    pub points: Vec<Vec<BigInt>>,
    pub frame: AffineFrame,
    pub hull: Hull,
    pub faces: FaceLattice,
}

impl LatticePolytope {
    /// Facets from the coordinate functionals when `coordinate_facets` is
    /// set, otherwise by exhaustive hyperplane search.
    pub fn new(points: Vec<Vec<BigInt>>, coordinate_facets: bool) -> Result<Self> {
        check_size(points.len())?;
        let frame = AffineFrame::new(&points)?;
        let hull = if coordinate_facets {
            let d = points[0].len();
            let units: Vec<Vec<BigInt>> = (0..d)
                .map(|k| (0..d).map(|l| BigInt::from((k == l) as i64)).collect())
                .collect();
            Hull::from_candidates(&frame, &points, &units)?
        } else {
            Hull::exhaustive(&frame)?
        };
        let faces = FaceLattice::new(&frame, &hull);
        Ok(LatticePolytope { points, frame, hull, faces })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Whether point `q` lies in the closed full-dimensional simplex.
    pub fn contains(&self, simplex: &[usize], q: usize) -> bool {
        match self.frame.barycentric(simplex, q) {
            Some(l) => l.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    pub fn total_volume_by(&self, simplices: &[Vec<usize>]) -> BigInt {
        simplices.iter().map(|s| self.frame.normalized_volume(s)).fold(BigInt::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big_row;

    fn square() -> Vec<Vec<BigInt>> {
        vec![big_row(&[0, 0]), big_row(&[1, 0]), big_row(&[0, 1]), big_row(&[1, 1])]
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn square_face_lattice() {
        let p = LatticePolytope::new(square(), false).unwrap();
        assert_eq!(p.hull.facets.len(), 4);
        // 4 vertices, 4 edges, the square itself.
        assert_eq!(p.faces.faces().len(), 9);
        assert_eq!(p.faces.vertices(), 0b1111);
        let by_coords = LatticePolytope::new(square(), true).unwrap();
        assert_eq!(by_coords.hull.facets, p.hull.facets);
    }

    #[test]
    fn frame_of_embedded_segment() {
        // Points on the line through (0,0,0) with direction (1,2,0).
        let pts = vec![big_row(&[0, 0, 0]), big_row(&[1, 2, 0]), big_row(&[3, 6, 0])];
        let f = AffineFrame::new(&pts).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.normalized_volume(&[0, 1]), BigInt::from(1));
        assert_eq!(f.normalized_volume(&[0, 2]), BigInt::from(3));
    }

    #[test]
    fn interior_point_detected() {
        let mut pts = vec![big_row(&[0, 0]), big_row(&[2, 0]), big_row(&[0, 2])];
        pts.push(big_row(&[1, 1]));
        pts.push(big_row(&[1, 0]));
        let p = LatticePolytope::new(pts, false).unwrap();
        assert_eq!(p.hull.facets.len(), 3);
        assert_eq!(p.hull.interior(), 0);
        assert_eq!(p.faces.vertices(), 0b111);
        let tri = LatticePolytope::new(vec![big_row(&[0, 0]), big_row(&[3, 0]), big_row(&[0, 3]), big_row(&[1, 1])], false).unwrap();
        assert_eq!(tri.hull.interior(), bit(3));
    }
}
