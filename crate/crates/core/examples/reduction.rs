// Reduce the cubic of each B3-type fine cell to two quadratic moves.

use transport_toric::subdivision::{classify_fine_cell, fine_subdivision_with_config, reduction_witness, FineType};
use transport_toric::{Margins, Result};

pub fn run() -> Result<()> {
    let m = Margins::new(vec![2, 2, 1], vec![2, 2, 1])?;
    let (cfg, cells) = fine_subdivision_with_config(&m)?;
    for c in &cells {
        if classify_fine_cell(c)?.fine_type != FineType::B3 {
            continue;
        }
        let w = reduction_witness(&m, &cfg, c)?;
        println!("cell at {} via entry {:?}, slack point {}", w.offset, w.direction, w.slack_point);
        println!("  cubic {:?}", w.cubic);
        println!("  quadrics {:?}", w.quadratics);
        println!("  path {:?}", w.path);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
