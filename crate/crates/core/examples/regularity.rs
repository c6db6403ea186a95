// Certify a triangulation regular with exact lifting weights.

use transport_toric::triangulation::{pulling_triangulation, regularity_certificate, v_order};
use transport_toric::{enumerate_lattice_points, Margins, Result};

pub fn run() -> Result<()> {
    let cfg = enumerate_lattice_points(&Margins::new(vec![2, 2, 1], vec![3, 1, 1])?, None)?;
    let t = pulling_triangulation(&cfg, &v_order(&cfg)?)?;
    match regularity_certificate(&t)? {
        Some(c) => {
            let w: Vec<String> = c.weights.iter().map(|x| x.to_string()).collect();
            println!("{} simplices, weights [{}], verified {}", t.len(), w.join(", "), c.verify(&t));
        }
        None => println!("no lifting exists"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
