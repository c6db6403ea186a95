// Check generation by quadrics with the fiber oracle.

use transport_toric::toric::quadratic_generation_verdict;
use transport_toric::{Margins, Result};

pub fn run() -> Result<()> {
    for m in [Margins::birkhoff(3, 1), Margins::birkhoff(3, 2), Margins::new(vec![2, 1, 1], vec![2, 1, 1])?] {
        let v = quadratic_generation_verdict(&m, 4)?;
        println!("{m}: {} ({} quadrics, {} fibers)", v.verdict, v.quadratic_moves, v.fiber_oracle.fibers_checked);
        if let Some(t) = &v.witness_target {
            println!("  disconnected fiber over {t}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
