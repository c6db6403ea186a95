//! Lifting-weight certificates for regular triangulations.
//!
//! Weights `w` certify regularity when, for every maximal simplex `σ` and
//! every point `q` outside it, `q` lifts strictly above the hyperplane
//! through the lifted vertices of `σ`:
//! `w_q - Σ λ_i w_{σ_i} > 0`, where `λ` are the affine coordinates of `q`
//! in terms of `σ`. Scaling turns the strict inequalities into `>= 1`, and
//! adding a constant makes `w >= 0`, so the search is an ordinary exact
//! feasibility problem.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::hull::{bit, mask_of, members, Mask};
use super::Triangulation;
use crate::error::{Error, Result};
use crate::exact::lp::feasible_point;
use crate::polytope::RationalValue;

/// Largest configuration for which a certificate is attempted.
pub const MAX_CERTIFICATE_POINTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityCertificate {
    pub weights: Vec<BigRational>,
}

impl Serialize for RegularityCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<RationalValue> = self.weights.iter().cloned().map(RationalValue).collect();
        w.serialize(s)
    }
}

impl RegularityCertificate {
    /// Check the strict lifting condition for every simplex and every outside point.
    pub fn verify(&self, t: &Triangulation) -> bool {
        let n = t.config.len();
        self.weights.len() == n
            && t.simplices.iter().all(|s| {
                let m = mask_of(s);
                (0..n).filter(|&q| m & bit(q) == 0).all(|q| match lift_row(t, s, q) {
                    Some(row) => dot(&row, &self.weights).is_positive(),
                    None => false,
                })
            })
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coefficients of `w_q - Σ λ_i w_{σ_i}` as a dense row over all points.
fn lift_row(t: &Triangulation, simplex: &[usize], q: usize) -> Option<Vec<BigRational>> {
    let lambda = t.polytope().frame.barycentric(simplex, q)?;
    let mut row = vec![BigRational::zero(); t.config.len()];
    row[q] = BigRational::one();
    for (&i, l) in simplex.iter().zip(&lambda) {
        row[i] -= l;
    }
    Some(row)
}

fn solve(t: &Triangulation, rows: Vec<Vec<BigRational>>) -> Option<RegularityCertificate> {
    let b = vec![BigRational::one(); rows.len()];
    let w = feasible_point(&rows, &b)?;
    let cert = RegularityCertificate { weights: w };
    cert.verify(t).then_some(cert)
}

/// Search for lifting weights.
///
/// First only the local conditions are imposed: across each interior wall
/// the opposite vertex lifts above, and every unused point lifts above the
/// simplex containing it. For a genuine triangulation local convexity is
/// global, so a solution passes [`RegularityCertificate::verify`]. If it
/// does not, the full system over all simplex/point pairs is solved.
pub fn regularity_certificate(t: &Triangulation) -> Result<Option<RegularityCertificate>> {
    let n = t.config.len();
    if n > MAX_CERTIFICATE_POINTS {
        return Err(Error::TooLarge(format!("{n} points; certificates are attempted up to {MAX_CERTIFICATE_POINTS}")));
    }
    let masks: Vec<Mask> = t.masks();
    let mut walls: HashMap<Mask, Vec<usize>> = HashMap::new();
    for (k, &s) in masks.iter().enumerate() {
        for v in members(s) {
            walls.entry(s & !bit(v)).or_default().push(k);
        }
    }
    let mut rows = Vec::new();
    let mut keys: Vec<&Mask> = walls.keys().collect();
    keys.sort_unstable();
    for w in keys {
        let sides = &walls[w];
        for pair in sides.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let q = (masks[b] & !w).trailing_zeros() as usize;
            match lift_row(t, &t.simplices[a], q) {
                Some(r) => rows.push(r),
                None => return Ok(None),
            }
        }
    }
    let used = masks.iter().fold(0, |a, &s| a | s);
    for q in (0..n).filter(|&q| used & bit(q) == 0) {
        if let Some(k) = (0..masks.len()).find(|&k| t.polytope().contains(&t.simplices[k], q)) {
            if let Some(r) = lift_row(t, &t.simplices[k], q) {
                rows.push(r);
            }
        }
    }
    if let Some(c) = solve(t, rows) {
        return Ok(Some(c));
    }
    let mut full = Vec::new();
    for s in &t.simplices {
        let m = mask_of(s);
        for q in (0..n).filter(|&q| m & bit(q) == 0) {
            match lift_row(t, s, q) {
                Some(r) => full.push(r),
                None => return Ok(None),
            }
        }
    }
    Ok(solve(t, full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{enumerate_lattice_points, Margins};
    use crate::triangulation::{pulling_triangulation, PullOrder};

    #[test]
    fn birkhoff_pulling_is_regular() {
        let cfg = enumerate_lattice_points(&Margins::birkhoff(3, 1), None).unwrap();
        let t = pulling_triangulation(&cfg, &PullOrder::reverse_lex(6)).unwrap();
        let c = regularity_certificate(&t).unwrap().expect("pulling triangulations are regular");
        assert!(c.verify(&t));
    }

    #[test]
    fn overlapping_simplices_have_no_certificate() {
        let cfg = enumerate_lattice_points(&Margins::birkhoff(3, 1), None).unwrap();
        // Every 5-subset of the circuit: both triangulations at once.
        let all: Vec<Vec<usize>> = (0..6).map(|skip| (0..6).filter(|&i| i != skip).collect()).collect();
        let t = Triangulation::from_simplices(&cfg, all).unwrap();
        assert_eq!(regularity_certificate(&t).unwrap(), None);
    }
}
