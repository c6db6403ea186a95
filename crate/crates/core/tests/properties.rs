// Property tests against brute-force oracles written independently of the library.

use proptest::prelude::*;
use transport_toric::pipeline::{run_pipeline, Mode, OrderChoice};
use transport_toric::polytope::{vertices, vertices_by_forest};
use transport_toric::smoothness::{is_multiple_of_b3, smoothness_report};
use transport_toric::toric::binomials_up_to_degree;
use transport_toric::triangulation::{is_flag, is_unimodular, minimal_non_faces, pulling_triangulation, PullOrder};
use transport_toric::{enumerate_lattice_points, Margins, PointConfiguration};

fn margins_3x3(max_row: u64) -> impl Strategy<Value = Margins> {
    prop::collection::vec(1..=max_row, 3).prop_flat_map(|rows| {
        let s: u64 = rows.iter().sum();
        (Just(rows), 1..=s - 2).prop_flat_map(move |(rows, c1)| {
            (Just(rows), Just(c1), 1..=s - c1 - 1).prop_map(move |(rows, c1, c2)| Margins::new(rows, vec![c1, c2, s - c1 - c2]).unwrap())
        })
    })
}

fn margins_mxn() -> impl Strategy<Value = Margins> {
    (2usize..=3, 2usize..=4, 2u64..=7).prop_flat_map(|(m, n, s)| {
        let part = |k: usize| prop::collection::vec(0.0f64..1.0, k).prop_map(move |w| split(s + 4, &w));
        (part(m), part(n)).prop_map(|(r, c)| Margins::new(r, c).unwrap())
    })
}

/// Positive composition of `t` into `w.len()` parts driven by weights.
fn split(t: u64, w: &[f64]) -> Vec<u64> {
    let k = w.len() as u64;
    let total: f64 = w.iter().sum::<f64>() + 1e-9;
    let mut parts: Vec<u64> = w.iter().map(|x| 1 + ((t - k) as f64 * x / total).floor() as u64).collect();
    let short = t - parts.iter().sum::<u64>();
    parts[0] += short;
    parts
}

/// Every nonnegative integer matrix with the margins, by recursion on entries.
fn brute_points(m: &Margins) -> Vec<Vec<i64>> {
    let (r, c) = (m.rows().to_vec(), m.cols().to_vec());
    let (rows, cols) = (r.len(), c.len());
    let mut out = Vec::new();
    let mut a = vec![0i64; rows * cols];
    fn go(k: usize, a: &mut Vec<i64>, r: &[u64], c: &[u64], out: &mut Vec<Vec<i64>>) {
        let n = c.len();
        if k == a.len() {
            let ok_r = (0..r.len()).all(|i| (0..n).map(|j| a[i * n + j]).sum::<i64>() == r[i] as i64);
            let ok_c = (0..n).all(|j| (0..r.len()).map(|i| a[i * n + j]).sum::<i64>() == c[j] as i64);
            if ok_r && ok_c {
                out.push(a.clone());
            }
            return;
        }
        let (i, j) = (k / n, k % n);
        let used_r: i64 = (0..j).map(|jj| a[i * n + jj]).sum();
        let used_c: i64 = (0..i).map(|ii| a[ii * n + j]).sum();
        let cap = (r[i] as i64 - used_r).min(c[j] as i64 - used_c);
        for x in 0..=cap {
            a[k] = x;
            go(k + 1, a, r, c, out);
        }
        a[k] = 0;
    }
    let _ = (rows, cols);
    go(0, &mut a, &r, &c, &mut out);
    out
}

fn points_i64(cfg: &PointConfiguration) -> Vec<Vec<i64>> {
    cfg.points().iter().map(|p| p.to_i64().unwrap()).collect()
}

/// Some proper nonempty row set and column set have equal sums.
fn brute_violation(m: &Margins) -> bool {
    let (r, c) = (m.rows(), m.cols());
    let sums = |v: &[u64]| -> Vec<u64> {
        (1..(1u32 << v.len()) - 1).map(|mask| (0..v.len()).filter(|&i| mask >> i & 1 == 1).map(|i| v[i]).sum()).collect()
    };
    let (sr, sc) = (sums(r), sums(c));
    sr.iter().any(|x| sc.contains(x))
}

/// Rank over the rationals by fraction-free elimination.
fn rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let (a, b) = (rows[rank][col], rows[i][col]);
                for k in 0..cols {
                    rows[i][k] = rows[i][k] * a - rows[rank][k] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// A point is a vertex iff the constraint columns on its support are independent.
fn brute_is_vertex(a: &[i64], m: usize, n: usize) -> bool {
    let support: Vec<usize> = (0..a.len()).filter(|&k| a[k] != 0).collect();
    let rows: Vec<Vec<i128>> = (0..m + n)
        .map(|e| support.iter().map(|&k| i128::from(if e < m { k / n == e } else { k % n == e - m })).collect())
        .collect();
    rank(rows) == support.len()
}

fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `|det|` of a 3x3 simplex in the free coordinates `a11 a12 a21 a22`.
fn simplex_volume(pts: &[Vec<i64>], s: &[usize]) -> i128 {
    let free = [0usize, 1, 3, 4];
    let base = &pts[s[0]];
    let rows = s[1..].iter().map(|&i| free.iter().map(|&k| i128::from(pts[i][k] - base[k])).collect()).collect();
    det(rows).abs()
}

/// Minimal non-faces of a simplicial complex by exhaustive subset search.
fn brute_non_faces(n: usize, simplices: &[Vec<usize>], max_size: usize) -> Vec<Vec<usize>> {
    let is_face = |s: &[usize]| simplices.iter().any(|t| s.iter().all(|x| t.contains(x)));
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(s) = stack.pop() {
        if !is_face(&s) {
            let minimal = (0..s.len()).all(|k| {
                let mut t = s.clone();
                t.remove(k);
                is_face(&t)
            });
            if minimal {
                out.push(s);
            }
            continue;
        }
        if s.len() < max_size {
            for x in s[s.len() - 1] + 1..n {
                let mut t = s.clone();
                t.push(x);
                stack.push(t);
            }
        }
    }
    out.sort();
    out
}

fn sorted(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn lattice_points_match_brute_force(m in margins_mxn()) {
        let cfg = enumerate_lattice_points(&m, None).unwrap();
        let mut want = brute_points(&m);
        want.sort();
        prop_assert_eq!(points_i64(&cfg), want);
    }

    #[test]
    fn vertices_match_rank_test(m in margins_mxn()) {
        let cfg = enumerate_lattice_points(&m, None).unwrap();
        let pts = points_i64(&cfg);
        let want: Vec<usize> = (0..pts.len()).filter(|&i| brute_is_vertex(&pts[i], m.m(), m.n())).collect();
        prop_assert_eq!(vertices(&cfg), want.clone());
        prop_assert_eq!(vertices_by_forest(&cfg), want);
    }

    #[test]
    fn margin_condition_is_nondegeneracy(m in margins_mxn()) {
        let rep = smoothness_report(&m).unwrap();
        prop_assert_eq!(rep.margin_condition_holds, !brute_violation(&m));
        let cfg = enumerate_lattice_points(&m, None).unwrap();
        let dim = (m.m() - 1) * (m.n() - 1);
        let pts = points_i64(&cfg);
        let nondegenerate = pts
            .iter()
            .filter(|a| brute_is_vertex(a, m.m(), m.n()))
            .all(|a| a.iter().filter(|&&x| x == 0).count() == dim);
        prop_assert_eq!(rep.is_nondegenerate, nondegenerate);
        prop_assert_eq!(rep.margin_condition_holds, nondegenerate);
        // Nondegenerate polytopes are simple; the converse can fail.
        prop_assert!(!nondegenerate || rep.is_simple);
    }

    #[test]
    fn quadrics_are_balanced(m in margins_3x3(3)) {
        let cfg = enumerate_lattice_points(&m, None).unwrap();
        prop_assume!(cfg.len() > 1 && cfg.len() <= 40);
        let pts = points_i64(&cfg);
        let sum = |ix: &[usize]| (0..9).map(|k| ix.iter().map(|&i| pts[i][k]).sum::<i64>()).collect::<Vec<_>>();
        for b in &binomials_up_to_degree(&cfg, 2).unwrap().moves {
            prop_assert_eq!(b.plus.len(), b.minus.len());
            prop_assert_eq!(sum(&b.plus), sum(&b.minus));
            prop_assert!(b.plus.iter().all(|i| !b.minus.contains(i)));
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn coarse_triangulation_is_unimodular_and_flag(m in margins_3x3(3)) {
        prop_assume!(is_multiple_of_b3(&m).is_none());
        let run = run_pipeline(&m, Mode::Coarse, &OrderChoice::V).unwrap();
        let t = &run.triangulation;
        let pts = points_i64(&run.config);
        let vols: Vec<i128> = t.simplices.iter().map(|s| simplex_volume(&pts, s)).collect();
        prop_assert!(vols.iter().all(|&v| v == 1), "{:?}", vols);
        prop_assert!(is_unimodular(t));
        // Covering: same volume as an unrelated pulling triangulation.
        let other = pulling_triangulation(&run.config, &PullOrder::reverse_lex(run.config.len())).unwrap();
        let other_vol: i128 = other.simplices.iter().map(|s| simplex_volume(&pts, s)).sum();
        prop_assert_eq!(vols.iter().sum::<i128>(), other_vol);
        if pts.len() <= 24 {
            let nf = brute_non_faces(pts.len(), &t.simplices, 6);
            prop_assert_eq!(sorted(&minimal_non_faces(t).sets), nf.clone());
            prop_assert!(nf.iter().all(|s| s.len() == 2));
        }
        prop_assert!(is_flag(t));
    }

    #[test]
    fn fine_triangulation_has_small_non_faces(m in margins_3x3(3)) {
        let run = run_pipeline(&m, Mode::Fine, &OrderChoice::Lex).unwrap();
        let t = &run.triangulation;
        let pts = points_i64(&run.config);
        prop_assert!(t.simplices.iter().all(|s| simplex_volume(&pts, s) == 1));
        if pts.len() <= 20 {
            let nf = brute_non_faces(pts.len(), &t.simplices, 6);
            prop_assert!(nf.iter().all(|s| s.len() <= 3));
            prop_assert_eq!(sorted(&minimal_non_faces(t).sets), nf);
        }
    }
}
