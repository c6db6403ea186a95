//! Golden reference data for the four special coarse cells and the class lists.
//!
//! The data is transcribed by hand into `fixtures/reference_cells.json` and
//! compiled in, so checks against it never depend on the code that computes
//! the same objects. Sets use 0-based positions in the v-order of a cell.

use serde::Deserialize;

use crate::error::{internal, Result};

pub const REFERENCE_JSON: &str = include_str!("../fixtures/reference_cells.json");

/// Fixture format version this build understands.
pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
pub struct Reference {
    pub version: u32,
    pub cells: Vec<ReferenceCell>,
    pub incidences: Vec<ReferenceSets>,
    pub triangulations: Vec<ReferenceSets>,
    pub non_faces: Vec<ReferenceSets>,
    pub coarse_classes: Vec<ReferenceClass>,
    pub aliases: Vec<Alias>,
    pub cell_shapes: Vec<CellShape>,
    pub fine_types: Vec<[u64; 3]>,
}

/// Vertices in decreasing v-order as `(v, [a11 a12 a21 a22])`.
#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceCell {
    pub caption: String,
    pub vertices: Vec<(i64, [i64; 4])>,
}

/// A printed list of index sets. `caption` labels the list itself;
/// `cited_for` is the cell whose discussion refers to it.
#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceSets {
    pub caption: String,
    pub cited_for: String,
    pub sets: Vec<Vec<usize>>,
}

impl ReferenceSets {
    /// Sets sorted internally and as a list.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self
            .sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReferenceClass {
    pub group: String,
    pub rows: [u64; 3],
    pub cols: [u64; 3],
}

#[derive(Clone, Debug, Deserialize)]
pub struct Alias {
    pub group: String,
    pub same_as: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CellShape {
    pub shape: String,
    pub points: usize,
    pub cells: Vec<String>,
}

pub fn reference() -> Result<Reference> {
    let r: Reference = serde_json::from_str(REFERENCE_JSON).map_err(|e| internal(format!("reference fixture: {e}")))?;
    if r.version != SUPPORTED_VERSION {
        return Err(internal(format!("reference fixture version {} (expected {SUPPORTED_VERSION})", r.version)));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_parses() {
        let r = reference().unwrap();
        assert_eq!(r.cells.len(), 4);
        assert_eq!(r.coarse_classes.len(), 20);
        assert_eq!(r.cell_shapes.iter().map(|s| s.cells.len()).sum::<usize>(), 20);
    }
}
