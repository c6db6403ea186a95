// Pull the coarse subdivision in v-order and check the result is flag.

use transport_toric::pipeline::{run_pipeline, triangulation_route, Mode, OrderChoice};
use transport_toric::triangulation::minimal_non_faces;
use transport_toric::{Margins, Result};

pub fn run() -> Result<()> {
    let m = Margins::new(vec![3, 2, 2], vec![4, 2, 1])?;
    let run = run_pipeline(&m, Mode::Coarse, &OrderChoice::V)?;
    println!("{}: {} cells, {} simplices", run.normalized.margins, run.cells.len(), run.triangulation.len());
    println!("non-face sizes {:?}", minimal_non_faces(&run.triangulation).degrees());
    let route = triangulation_route(&run, 4)?;
    println!(
        "unimodular {} flag {} volume {} (reference {}), {} quadrics connect fibers to degree 4: {}",
        route.unimodular, route.flag, route.volume, route.reference_volume, route.groebner_moves, route.fiber_check.holds
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
