// Compare the partial-sum margin condition with simplicity.

use transport_toric::smoothness::{block_vertex, smoothness_report};
use transport_toric::{Margins, Result};

pub fn run() -> Result<()> {
    for (r, c) in [([1, 2, 13], [4, 5, 7]), ([2, 1, 1], [2, 1, 1]), ([4, 1, 1], [2, 2, 2])] {
        let m = Margins::new(r.to_vec(), c.to_vec())?;
        let rep = smoothness_report(&m)?;
        println!(
            "{m}: condition {} simple {} nondegenerate {} ({} vertices, {} facets)",
            rep.margin_condition_holds, rep.is_simple, rep.is_nondegenerate, rep.vertex_count, rep.facet_count
        );
        if let Some((i, j)) = &rep.violating_pair {
            let b = block_vertex(&m, i, j)?;
            println!("  rows {i:?} cols {j:?}: vertex {} with {} zeros on {} facets", b.vertex, b.zeros_at_vertex, b.facets_at_vertex);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
