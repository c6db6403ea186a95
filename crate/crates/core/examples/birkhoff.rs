// The Birkhoff polytope B3: one cubic relation and two triangulations.

use transport_toric::toric::{binomials_up_to_degree, fiber_graph_connected, MoveSet};
use transport_toric::triangulation::{all_pulling_triangulations, hull::members, minimal_non_faces, polytope_of, Triangulation};
use transport_toric::{enumerate_lattice_points, Margins, Result};

pub fn run() -> Result<()> {
    let cfg = enumerate_lattice_points(&Margins::birkhoff(3, 1), None)?;
    println!("{} permutation matrices", cfg.len());
    println!("quadrics: {}", binomials_up_to_degree(&cfg, 2)?.len());
    let cubic = binomials_up_to_degree(&cfg, 3)?;
    println!("binomials to degree 3: {:?}", cubic.moves);
    let none = fiber_graph_connected(&cfg, &MoveSet::new(Vec::new(), false), 3)?;
    println!("without moves, first disconnected fiber: {:?}", none.first_failure);
    for masks in all_pulling_triangulations(&polytope_of(&cfg)?)? {
        let t = Triangulation::from_simplices(&cfg, masks.iter().map(|&m| members(m)).collect())?;
        println!("triangulation {:?}, non-faces {:?}", t.simplices, minimal_non_faces(&t).sets);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
