// Fine and coarse width-one subdivisions and their cell classes.

use transport_toric::subdivision::{classify_fine_cell, coarse_subdivision, fine_subdivision, normalize_cell, normalize_margins};
use transport_toric::{Margins, Result};

pub fn run() -> Result<()> {
    let m = Margins::new(vec![2, 3, 3], vec![4, 2, 2])?;
    let n = normalize_margins(&m);
    println!("{m} normalizes to {} (transposed: {})", n.margins, n.transposed);
    for c in fine_subdivision(&m)? {
        let k = classify_fine_cell(&c)?;
        println!("fine   K = {} type {} simplex {}", c.offset, k.label, k.fine_type.is_simplex());
    }
    for c in coarse_subdivision(&n.margins)? {
        println!("coarse K = {} class {}", c.offset, normalize_cell(&c)?.class.label());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
