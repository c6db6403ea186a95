// Every example must run to completion.

mod lattice_points {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lattice_points.rs"));
}

#[test]
fn lattice_points_example_runs() {
    lattice_points::run().expect("lattice_points example should run");
}

mod smoothness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/smoothness.rs"));
}

#[test]
fn smoothness_example_runs() {
    smoothness::run().expect("smoothness example should run");
}

mod birkhoff {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/birkhoff.rs"));
}

#[test]
fn birkhoff_example_runs() {
    birkhoff::run().expect("birkhoff example should run");
}

mod subdivision {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subdivision.rs"));
}

#[test]
fn subdivision_example_runs() {
    subdivision::run().expect("subdivision example should run");
}

mod quadratic_triangulation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quadratic_triangulation.rs"));
}

#[test]
fn quadratic_triangulation_example_runs() {
    quadratic_triangulation::run().expect("quadratic_triangulation example should run");
}

mod markov {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/markov.rs"));
}

#[test]
fn markov_example_runs() {
    markov::run().expect("markov example should run");
}

mod reduction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/reduction.rs"));
}

#[test]
fn reduction_example_runs() {
    reduction::run().expect("reduction example should run");
}

mod regularity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/regularity.rs"));
}

#[test]
fn regularity_example_runs() {
    regularity::run().expect("regularity example should run");
}
