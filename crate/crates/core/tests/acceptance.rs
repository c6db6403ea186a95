// Acceptance suite: one line per criterion, with its time limit.
//
// A criterion listed in KNOWN_RED is expected to fail for a mathematical
// reason recorded next to it. The process exits nonzero only when some
// outcome differs from expectation: an unexpected failure, or a known-red
// criterion that starts passing.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use transport_toric::verify::{
    coarse_routes, markov_oracle, oracle_check, pulling_census, reduction_check, reductions, route_check, verify_b3, verify_cells,
    verify_lemma_smooth, verify_tables, Check,
};
use transport_toric::Result;

const KNOWN_RED: &[(u32, &str)] = &[(
    6,
    "a violated margin condition forces extra zeros at a vertex, not extra facets: (4,1,1)(2,2,2) is a product of two \
     triangles, and the block vertex of (3,1,1)(2,2,1) has 5 zeros but lies on 4 facets",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(checks: &[&Check]) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.anchor.as_str()).collect();
    let detail = if failed.is_empty() {
        format!("{} checks", checks.len())
    } else {
        let w: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| clip(&c.witness.to_string())).collect();
        format!("failed {}: {}", failed.join(", "), w.join("; "))
    };
    Outcome { pass: failed.is_empty(), detail }
}

fn clip(s: &str) -> String {
    if s.len() <= 240 {
        s.to_string()
    } else {
        let mut end = 240;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}...", &s[..end])
    }
}

fn pick<'a>(checks: &'a [Check], anchors: &[&str]) -> Vec<&'a Check> {
    anchors.iter().filter_map(|a| checks.iter().find(|c| c.anchor == *a)).collect()
}

fn b3_suite() -> Result<Outcome> {
    let r = verify_b3()?;
    Ok(from_checks(&r.checks.iter().collect::<Vec<_>>()))
}

fn tables() -> Result<Outcome> {
    let r = verify_tables()?;
    let mut o = from_checks(&r.checks.iter().collect::<Vec<_>>());
    let swap = r.notes.iter().any(|n| n.contains("captioned (2,2,2)(2,2,2) and cited for (2,2,1)(3,1,1)"));
    if !swap {
        o.pass = false;
        o.detail.push_str("; caption swap not reported");
    }
    Ok(o)
}

fn cell_catalogs() -> Result<Outcome> {
    let r = verify_cells(10)?;
    let checks = pick(&r.checks, &["fine-cell-types", "coarse-cell-classes", "coarse-catalog-listing", "coarse-classes-realized"]);
    let mut o = from_checks(&checks);
    if checks.len() != 4 {
        o.pass = false;
    }
    Ok(o)
}

fn markov() -> Result<Outcome> {
    let rows = markov_oracle(8, 4)?;
    let mut o = from_checks(&[&oracle_check(&rows, 4)]);
    let fibers: usize = rows.iter().map(|r| r.fibers_checked).sum();
    o.detail = format!("{} margins, {fibers} fibers, degree cap 4; {}", rows.len(), o.detail);
    Ok(o)
}

fn coarse_pipeline() -> Result<Outcome> {
    let rows = coarse_routes(10, 4);
    let mut o = from_checks(&[&route_check(&rows, 4)]);
    o.detail = format!("{} margins; {}", rows.len(), o.detail);
    Ok(o)
}

fn lemma() -> Result<Outcome> {
    let r = verify_lemma_smooth(10)?;
    let checks = pick(&r.checks, &["margin-condition-iff-simple", "block-vertex-on-extra-facets"]);
    let mut o = from_checks(&checks);
    if checks.len() != 2 {
        o.pass = false;
    }
    Ok(o)
}

fn pulling_orders() -> Result<Outcome> {
    let census = pulling_census()?;
    let bad: Vec<&str> = census.iter().filter(|c| !c.all_unimodular).map(|c| c.cell.as_str()).collect();
    let tris: usize = census.iter().map(|c| c.distinct_triangulations).sum();
    Ok(Outcome {
        pass: census.len() == 24 && bad.is_empty(),
        detail: format!("{} cells, {tris} distinct triangulations, non-unimodular: {bad:?}", census.len()),
    })
}

fn reduction() -> Result<Outcome> {
    let rows = reductions(8);
    let mut o = from_checks(&[&reduction_check(&rows)]);
    o.detail = format!("{} margins; {}", rows.len(), o.detail);
    Ok(o)
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 8] = [
        (1, "B3 suite", secs(1), b3_suite),
        (2, "table reproduction", secs(1), tables),
        (3, "cell catalogs, totals <= 10", secs(120), cell_catalogs),
        (4, "quadratic generation oracle, totals <= 8", secs(300), markov),
        (5, "coarse v-pulling pipeline, totals <= 10", secs(300), coarse_pipeline),
        (6, "margin condition iff simple, totals <= 10", secs(120), lemma),
        (7, "pulling orders of the 24 cells", secs(120), pulling_orders),
        (8, "cubic reduction, totals <= 8", secs(60), reduction),
    ];
    let mut unexpected = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass && elapsed < limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let timing = format!("{:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs());
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {id}. {name} ({timing}): {detail}");
        match (pass, known) {
            (false, Some(why)) => println!("     known red: {why}"),
            (true, Some(_)) => {
                println!("     expected to fail but passed");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
            (true, None) => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
