//! End-to-end runs: subdivide, pull every cell, glue, and summarize.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::polytope::{Margins, PointConfiguration};
use crate::smoothness::is_multiple_of_b3;
use crate::subdivision::{
    classify_fine_cell, coarse_subdivision_with_config, default_fine_order, fine_subdivision_with_config, normalize_cell,
    normalize_margins, Cell, NormalizedMargins,
};
use crate::toric::{fiber::MAX_FIBER_POINTS, fiber_graph_connected, groebner_from_triangulation, FiberCheck};
use crate::triangulation::regular::MAX_CERTIFICATE_POINTS;
use crate::triangulation::{
    is_flag, is_unimodular, minimal_non_faces, pulling_triangulation, refine_by_pulling, regularity_certificate, v_order,
    PullOrder, RegularityCertificate, Simplex, Triangulation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Fine,
    Coarse,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fine" => Ok(Mode::Fine),
            "coarse" => Ok(Mode::Coarse),
            _ => Err(invalid(format!("unknown mode {s:?}; expected fine or coarse"))),
        }
    }
}

/// How to order points for pulling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderChoice {
    /// Decreasing v functional.
    V,
    /// Last lattice point first.
    Lex,
    Explicit(Vec<usize>),
}

impl OrderChoice {
    pub fn resolve(&self, config: &PointConfiguration) -> Result<PullOrder> {
        match self {
            OrderChoice::V => v_order(config),
            OrderChoice::Lex => Ok(PullOrder::reverse_lex(config.len())),
            OrderChoice::Explicit(p) => {
                if p.len() != config.len() {
                    return Err(invalid(format!("explicit order has {} entries for {} points", p.len(), config.len())));
                }
                PullOrder::explicit(p.clone())
            }
        }
    }
}

/// Subdivision and its refinement.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub mode: Mode,
    pub normalized: NormalizedMargins,
    pub config: PointConfiguration,
    pub cells: Vec<Cell>,
    /// Catalog label (coarse) or fine type (fine) per cell.
    pub cell_classes: Vec<String>,
    pub triangulation: Triangulation,
}

/// Run a pipeline on margins, normalizing first in coarse mode.
pub fn run_pipeline(margins: &Margins, mode: Mode, order: &OrderChoice) -> Result<PipelineRun> {
    if margins.m() != 3 || margins.n() != 3 {
        return Err(invalid("subdivision pipelines are defined for 3x3 margins"));
    }
    let normalized = normalize_margins(margins);
    let (config, cells, cell_classes) = match mode {
        Mode::Coarse => {
            let (config, cells) = coarse_subdivision_with_config(&normalized.margins)?;
            let classes = cells.iter().map(|c| normalize_cell(c).map(|n| n.class.label())).collect::<Result<_>>()?;
            (config, cells, classes)
        }
        Mode::Fine => {
            let (config, cells) = fine_subdivision_with_config(margins)?;
            let classes = cells.iter().map(|c| classify_fine_cell(c).map(|k| k.label)).collect::<Result<_>>()?;
            (config, cells, classes)
        }
    };
    let order = match (mode, order) {
        (Mode::Fine, OrderChoice::Lex) => default_fine_order(&config),
        (_, o) => o.resolve(&config)?,
    };
    let members: Vec<Vec<usize>> = cells.iter().map(|c| c.members.clone()).collect();
    let triangulation = refine_by_pulling(&config, &members, &order)?;
    Ok(PipelineRun { mode, normalized, config, cells, cell_classes, triangulation })
}

/// Combinatorial summary of a triangulation.
#[derive(Clone, Debug, Serialize)]
pub struct TriangulationSummary {
    pub simplex_count: usize,
    pub normalized_volume: String,
    pub unimodular: bool,
    pub flag: bool,
    pub non_face_degrees: BTreeMap<usize, usize>,
    pub max_non_face: usize,
    pub minimal_non_faces: Vec<Vec<usize>>,
    pub simplices: Vec<Simplex>,
    pub pull_order: Option<PullOrder>,
    pub regularity: Regularity,
}

#[derive(Clone, Debug, Serialize)]
pub struct Regularity {
    /// `Some(true)` with a certificate, `Some(false)` if the LP is infeasible,
    /// `None` when the configuration exceeds the certificate cap.
    pub regular: Option<bool>,
    pub certificate: Option<RegularityCertificate>,
    pub note: Option<String>,
}

pub fn regularity(t: &Triangulation) -> Result<Regularity> {
    if t.config.len() > MAX_CERTIFICATE_POINTS {
        return Ok(Regularity {
            regular: None,
            certificate: None,
            note: Some(format!("not attempted above {MAX_CERTIFICATE_POINTS} points; pulling refinements of regular subdivisions are regular")),
        });
    }
    let c = regularity_certificate(t)?;
    Ok(Regularity { regular: Some(c.is_some()), certificate: c, note: None })
}

pub fn summarize(t: &Triangulation, with_certificate: bool) -> Result<TriangulationSummary> {
    let nf = minimal_non_faces(t);
    Ok(TriangulationSummary {
        simplex_count: t.len(),
        normalized_volume: t.normalized_volume().to_string(),
        unimodular: is_unimodular(t),
        flag: is_flag(t),
        non_face_degrees: nf.degrees(),
        max_non_face: nf.max_size(),
        minimal_non_faces: nf.sets.clone(),
        simplices: t.simplices.clone(),
        pull_order: t.order.clone(),
        regularity: if with_certificate {
            regularity(t)?
        } else {
            Regularity { regular: None, certificate: None, note: Some("not requested".into()) }
        },
    })
}

/// Evidence that the coarse v-pulling triangulation is quadratic.
#[derive(Clone, Debug, Serialize)]
pub struct TriangulationRoute {
    pub unimodular: bool,
    pub flag: bool,
    /// Volume of the glued triangulation equals that of a global pulling triangulation.
    pub volume_conserved: bool,
    pub volume: String,
    pub reference_volume: String,
    pub groebner_moves: usize,
    pub groebner_quadratic: bool,
    pub fiber_check: FiberCheck,
}

impl TriangulationRoute {
    pub fn holds(&self) -> bool {
        self.unimodular && self.flag && self.volume_conserved && self.groebner_quadratic && self.fiber_check.holds
    }
}

/// Check a coarse run against an independent pulling order and the fiber oracle.
pub fn triangulation_route(run: &PipelineRun, max_degree: usize) -> Result<TriangulationRoute> {
    let t = &run.triangulation;
    let reference = pulling_triangulation(&run.config, &PullOrder::reverse_lex(run.config.len()))?;
    let (volume, reference_volume) = (t.normalized_volume(), reference.normalized_volume());
    let moves = groebner_from_triangulation(t)?;
    let fiber_check = if run.config.len() <= MAX_FIBER_POINTS && run.config.len() > 1 {
        fiber_graph_connected(&run.config, &moves, max_degree)?
    } else {
        FiberCheck { holds: run.config.len() <= 1, max_degree, fibers_checked: 0, first_failure: None }
    };
    Ok(TriangulationRoute {
        unimodular: is_unimodular(t),
        flag: is_flag(t),
        volume_conserved: volume == reference_volume,
        volume: volume.to_string(),
        reference_volume: reference_volume.to_string(),
        groebner_moves: moves.len(),
        groebner_quadratic: moves.quadratic_only(),
        fiber_check,
    })
}

/// Weakly decreasing positive 3-part compositions of `s`.
pub fn partitions3(s: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a in (1..=s).rev() {
        for b in (1..=a).rev() {
            if a + b < s {
                let c = s - a - b;
                if c <= b {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// All 3x3 margins with rows and columns decreasing and total at most
/// `max_sum`, ordered by total then lexicographically.
pub fn sorted_margin_pairs(max_sum: u64) -> Vec<Margins> {
    let mut out = Vec::new();
    for s in 3..=max_sum {
        let parts = partitions3(s);
        for r in &parts {
            for c in &parts {
                out.push(Margins::new(r.to_vec(), c.to_vec()).expect("valid"));
            }
        }
    }
    out
}

/// Normalized 3x3 margins (rows and columns decreasing, `c1 >= r1`) with
/// total at most `max_sum`, ordered by total then lexicographically.
pub fn corpus(max_sum: u64) -> Vec<Margins> {
    sorted_margin_pairs(max_sum).into_iter().filter(|m| m.cols()[0] >= m.rows()[0]).collect()
}

/// Corpus members that are not multiples of the Birkhoff polytope.
pub fn coarse_corpus(max_sum: u64) -> Vec<Margins> {
    corpus(max_sum).into_iter().filter(|m| is_multiple_of_b3(m).is_none()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (3..=10).map(|s| partitions3(s).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 4, 5, 7, 8]);
    }

    #[test]
    fn relaxed_birkhoff_coarse_run() {
        let m = Margins::new(vec![2, 1, 1], vec![2, 1, 1]).unwrap();
        let run = run_pipeline(&m, Mode::Coarse, &OrderChoice::V).unwrap();
        assert_eq!(run.cells.len(), 1);
        assert_eq!(run.triangulation.len(), 4);
        let route = triangulation_route(&run, 4).unwrap();
        assert!(route.holds(), "{route:?}");
    }

    #[test]
    fn birkhoff_fine_run_is_not_flag() {
        let run = run_pipeline(&Margins::birkhoff(3, 1), Mode::Fine, &OrderChoice::Lex).unwrap();
        let s = summarize(&run.triangulation, true).unwrap();
        assert_eq!(s.simplex_count, 3);
        assert!(!s.flag);
        assert_eq!(s.regularity.regular, Some(true));
    }
}
