// Values printed in the reference tables, checked against fresh computations.

use transport_toric::subdivision::COARSE_CATALOG;
use transport_toric::triangulation::{pulling_triangulation, v_order, v_value};
use transport_toric::verify::{permutation_indices, verify_b3, verify_tables};
use transport_toric::{enumerate_lattice_points, Margins};

#[test]
fn relaxed_birkhoff_v_values() {
    let class = COARSE_CATALOG.iter().find(|c| c.rows == [2, 1, 1] && c.cols == [2, 1, 1]).unwrap();
    let cfg = class.config().unwrap();
    let order = v_order(&cfg).unwrap();
    let rows: Vec<(i64, [i64; 4])> = order
        .perm
        .iter()
        .map(|&p| {
            let a = cfg.point(p).to_i64().unwrap();
            (i64::try_from(&v_value(cfg.point(p))).unwrap(), [a[0], a[1], a[3], a[4]])
        })
        .collect();
    let printed = vec![
        (11, [2, 0, 0, 1]),
        (10, [1, 1, 0, 0]),
        (9, [1, 1, 1, 0]),
        (8, [2, 0, 0, 0]),
        (7, [1, 0, 0, 1]),
        (5, [0, 1, 1, 0]),
        (3, [1, 0, 1, 0]),
    ];
    assert_eq!(rows, printed);
    let t = pulling_triangulation(&cfg, &order).unwrap();
    let mut printed_tri = vec![vec![0, 1, 4, 5, 6], vec![0, 1, 3, 4, 6], vec![0, 1, 2, 5, 6], vec![0, 1, 2, 3, 6]];
    printed_tri.sort();
    assert_eq!(t.relabeled(&order), printed_tri);
}

#[test]
fn birkhoff_cubic_is_even_minus_odd() {
    let cfg = enumerate_lattice_points(&Margins::birkhoff(3, 1), None).unwrap();
    let (even, odd) = permutation_indices(&cfg).unwrap();
    // x123 x231 x312 and x132 x213 x321.
    let perm = |i: usize| -> Vec<usize> {
        let a = cfg.point(i).to_i64().unwrap();
        (0..3).map(|r| (0..3).find(|&c| a[r * 3 + c] == 1).unwrap()).collect()
    };
    let mut e: Vec<Vec<usize>> = even.iter().map(|&i| perm(i)).collect();
    let mut o: Vec<Vec<usize>> = odd.iter().map(|&i| perm(i)).collect();
    e.sort();
    o.sort();
    assert_eq!(e, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
    assert_eq!(o, vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]);
}

#[test]
fn table_and_birkhoff_sections_pass() {
    for r in [verify_tables().unwrap(), verify_b3().unwrap()] {
        let failed: Vec<&str> = r.failures().map(|c| c.anchor.as_str()).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}

#[test]
fn caption_swap_is_reported() {
    let r = verify_tables().unwrap();
    assert!(r.notes.iter().any(|n| n.starts_with("vertex-facet-incidences: list captioned (2,2,2)(2,2,2) and cited for (2,2,1)(3,1,1)")));
}
