// Enumerate the lattice points of a transportation polytope and its vertices.

use transport_toric::polytope::{dimension, facet_inequalities, vertices};
use transport_toric::{enumerate_lattice_points, Margins, Result};

pub fn run() -> Result<()> {
    let m = Margins::new(vec![2, 1, 1], vec![2, 1, 1])?;
    let cfg = enumerate_lattice_points(&m, None)?;
    println!("{m}: {} lattice points, dimension {}", cfg.len(), dimension(&m));
    let v = vertices(&cfg);
    for (i, a) in cfg.points().iter().enumerate() {
        let tag = if v.contains(&i) { " vertex" } else { "" };
        println!("  {i}: {a}{tag}");
    }
    let f = facet_inequalities(&m)?;
    println!("{} facets", f.distinct());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
