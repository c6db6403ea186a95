//! Per-instance reports behind the command-line tool.
//!
//! Every report has the same top-level keys; sections a command does not
//! compute are `null`. Serialization goes through `serde_json::Value`, whose
//! maps are ordered, so the JSON is key-sorted and byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pipeline::{run_pipeline, summarize, triangulation_route, Mode, OrderChoice, PipelineRun};
use crate::polytope::{dimension, enumerate_lattice_points, Margins};
use crate::smoothness::{block_vertex, is_multiple_of_b3, smoothness_report, SmoothnessReport};
use crate::subdivision::normalize_margins;
use crate::toric::{fine_pipeline_degree_bound, quadratic_generation_verdict, QuadraticVerdict};
use crate::verify::{reduction_composes, Check, SectionReport};

#[derive(Clone, Debug, Serialize)]
pub struct CheckGroup {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl CheckGroup {
    pub fn new(name: &str, checks: Vec<Check>, notes: Vec<String>) -> Self {
        CheckGroup { name: name.to_string(), pass: checks.iter().all(|c| c.pass), checks, notes }
    }
}

impl From<SectionReport> for CheckGroup {
    fn from(s: SectionReport) -> Self {
        let name = serde_json::to_value(s.section).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        CheckGroup { name, pass: s.pass, checks: s.checks, notes: s.notes }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub input: Value,
    pub normalized_input: Value,
    pub smoothness: Value,
    pub subdivision: Value,
    pub triangulation: Value,
    pub ideal: Value,
    pub paper_checks: Vec<CheckGroup>,
    pub lattice_points: Value,
}

impl Report {
    fn for_margins(margins: &Margins) -> Self {
        let mut r = Report { input: json!({"rows": margins.rows(), "cols": margins.cols()}), ..Default::default() };
        if margins.m() == 3 && margins.n() == 3 {
            let n = normalize_margins(margins);
            r.normalized_input = json!({
                "rows": n.margins.rows(),
                "cols": n.margins.cols(),
                "row_perm": n.row_perm,
                "col_perm": n.col_perm,
                "transposed": n.transposed,
                "changed": n.changed(),
            });
        }
        r
    }

    /// Every check passed.
    pub fn pass(&self) -> bool {
        self.paper_checks.iter().all(|g| g.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.paper_checks.iter().flat_map(|g| g.checks.iter()).filter(|c| !c.pass)
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report values serialize")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = self.to_value() {
            for (k, v) in &map {
                if !v.is_null() && v.as_array().is_none_or(|a| !a.is_empty()) {
                    render(&mut out, k, v, 0);
                }
            }
        }
        out
    }
}

fn check(anchor: &str, claim: &str, pass: bool, witness: Value) -> Check {
    Check { anchor: anchor.to_string(), claim: claim.to_string(), pass, witness }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report values serialize")
}

fn is_3x3(m: &Margins) -> bool {
    m.m() == 3 && m.n() == 3
}

/// Both 3x3 pipelines need this; other shapes have no subdivision.
fn require_3x3(m: &Margins) -> Result<()> {
    if is_3x3(m) {
        Ok(())
    } else {
        Err(Error::InvalidInput("subdivisions and triangulations are defined for 3x3 margins".into()))
    }
}

fn smoothness_checks(margins: &Margins, rep: &SmoothnessReport) -> Result<Vec<Check>> {
    let mut checks = vec![
        check(
            "margin-condition-iff-simple",
            "the margin condition holds exactly when T_rc is simple",
            rep.equivalence_holds,
            json!({"margin_condition": rep.margin_condition_holds, "simple": rep.is_simple}),
        ),
        check(
            "margin-condition-iff-nondegenerate",
            "the margin condition holds exactly when every vertex has (m-1)(n-1) zero entries",
            rep.margin_condition_holds == rep.is_nondegenerate,
            json!({"margin_condition": rep.margin_condition_holds, "nondegenerate": rep.is_nondegenerate}),
        ),
    ];
    if let Some((i, j)) = &rep.violating_pair {
        let b = block_vertex(margins, i, j)?;
        checks.push(check(
            "block-vertex-degenerate",
            "the block construction gives a vertex with more than dim zero entries",
            b.zeros_at_vertex > dimension(margins),
            to_value(&b),
        ));
    }
    Ok(checks)
}

fn smoothness_section(margins: &Margins) -> Result<(Value, Vec<Check>)> {
    let rep = smoothness_report(margins)?;
    let checks = smoothness_checks(margins, &rep)?;
    Ok((to_value(&rep), checks))
}

fn lattice_points_value(margins: &Margins) -> Result<Value> {
    let cfg = enumerate_lattice_points(margins, None)?;
    Ok(json!({"count": cfg.len(), "points": cfg.points()}))
}

fn subdivision_value(run: &PipelineRun) -> Value {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &run.cell_classes {
        *counts.entry(c.as_str()).or_default() += 1;
    }
    let cells: Vec<Value> = run
        .cells
        .iter()
        .zip(&run.cell_classes)
        .map(|(c, class)| {
            let mut v = to_value(c);
            v["class"] = json!(class);
            v
        })
        .collect();
    json!({
        "mode": run.mode,
        "margins": run.normalized.margins.to_string(),
        "cell_count": run.cells.len(),
        "class_counts": counts,
        "cells": cells,
    })
}

fn triangulation_value(run: &PipelineRun, with_certificate: bool) -> Result<Value> {
    let mut v = to_value(&summarize(&run.triangulation, with_certificate)?);
    v["mode"] = to_value(&run.mode);
    v["points"] = to_value(&run.config.points());
    if let Some(order) = &run.triangulation.order {
        // Same simplices, points renamed by their position in the pull order.
        v["simplices_by_pull_rank"] = to_value(&run.triangulation.relabeled(order));
    }
    Ok(v)
}

fn pipeline_checks(run: &PipelineRun, max_degree: usize) -> Result<(Vec<Check>, Value)> {
    let t = &run.triangulation;
    let mut checks = Vec::new();
    let summary = summarize(t, false)?;
    let route = match run.mode {
        Mode::Coarse => {
            let route = triangulation_route(run, max_degree)?;
            checks.push(check(
                "flag-triangulation",
                "the coarse v-pulling triangulation is unimodular, flag and covers T_rc",
                route.unimodular && route.flag && route.volume_conserved,
                json!({
                    "unimodular": route.unimodular,
                    "flag": route.flag,
                    "volume": route.volume,
                    "reference_volume": route.reference_volume,
                }),
            ));
            checks.push(check(
                "quadratic-groebner-basis",
                "the quadrics read off the triangulation connect every fiber",
                route.groebner_quadratic && route.fiber_check.holds,
                json!({"moves": route.groebner_moves, "fiber_check": route.fiber_check}),
            ));
            to_value(&route)
        }
        Mode::Fine => {
            checks.push(check(
                "pulling-orders-unimodular",
                "pulling the fine subdivision gives a unimodular triangulation",
                summary.unimodular,
                json!({"simplices": summary.simplex_count, "volume": summary.normalized_volume}),
            ));
            let bound = fine_pipeline_degree_bound(&run.normalized.raw)?;
            checks.push(check(
                "fine-degree-bound",
                "the fine pipeline has minimal non-faces of size at most 3",
                bound.degree <= 3,
                to_value(&bound),
            ));
            Value::Null
        }
    };
    Ok((checks, route))
}

fn verdict_checks(margins: &Margins, v: &QuadraticVerdict) -> Vec<Check> {
    let mut checks = Vec::new();
    if !is_3x3(margins) {
        return checks;
    }
    let b3 = is_multiple_of_b3(margins) == Some(1);
    let claim = if b3 {
        "B3 is not quadratically generated: the degree-3 circuit fiber is disconnected"
    } else {
        "fibers are connected by quadratic moves up to the stated degree"
    };
    checks.push(check(
        "quadratic-generation",
        claim,
        v.quadratic != b3,
        json!({"verdict": v.verdict, "max_degree": v.max_degree, "witness": v.fiber_oracle.first_failure}),
    ));
    if let Some(ws) = &v.reductions {
        let n = enumerate_lattice_points(margins, None).map(|c| c.len()).unwrap_or(0);
        let bad: Vec<usize> = ws.iter().enumerate().filter(|(_, w)| !reduction_composes(w, n)).map(|(i, _)| i).collect();
        checks.push(check(
            "cubic-reduction",
            "each B3-type fine cell reduces its cubic to two quadrics",
            bad.is_empty(),
            json!({"b3_cells": ws.len(), "failures": bad}),
        ));
    }
    checks
}

/// Options for `analyze` and `triangulate`.
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// `None` picks fine mode for multiples of B3 and coarse mode otherwise.
    pub mode: Option<Mode>,
    pub order: OrderChoice,
    pub max_degree: usize,
    pub certificate: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { mode: None, order: OrderChoice::V, max_degree: 4, certificate: true }
    }
}

fn resolve_mode(margins: &Margins, opts: &PipelineOptions) -> Mode {
    opts.mode.unwrap_or(if is_multiple_of_b3(margins).is_some() { Mode::Fine } else { Mode::Coarse })
}

fn resolve_order(mode: Mode, opts: &PipelineOptions) -> OrderChoice {
    match (mode, &opts.order) {
        (Mode::Fine, OrderChoice::V) if opts.mode.is_none() => OrderChoice::Lex,
        (_, o) => o.clone(),
    }
}

/// Everything: smoothness, subdivision, triangulation and both kinds of
/// evidence for the ideal.
pub fn analyze(margins: &Margins, opts: &PipelineOptions) -> Result<Report> {
    let mut r = Report::for_margins(margins);
    let (smooth, mut checks) = smoothness_section(margins)?;
    r.smoothness = smooth;
    r.lattice_points = lattice_points_value(margins)?;
    let verdict = quadratic_generation_verdict(margins, opts.max_degree)?;
    checks.extend(verdict_checks(margins, &verdict));
    let mut route = Value::Null;
    if is_3x3(margins) {
        let mode = resolve_mode(margins, opts);
        let run = run_pipeline(margins, mode, &resolve_order(mode, opts))?;
        r.subdivision = subdivision_value(&run);
        r.triangulation = triangulation_value(&run, opts.certificate)?;
        let (c, rt) = pipeline_checks(&run, opts.max_degree)?;
        checks.extend(c);
        route = rt;
    }
    r.ideal = json!({
        "verdict": verdict.verdict,
        "quadratic": verdict.quadratic,
        "fiber_oracle": verdict,
        "triangulation_route": route,
    });
    r.paper_checks.push(CheckGroup::new("instance", checks, Vec::new()));
    Ok(r)
}

pub fn lattice_points_report(margins: &Margins) -> Result<Report> {
    let mut r = Report::for_margins(margins);
    r.lattice_points = lattice_points_value(margins)?;
    Ok(r)
}

pub fn subdivide_report(margins: &Margins, mode: Option<Mode>) -> Result<Report> {
    require_3x3(margins)?;
    let mut r = Report::for_margins(margins);
    let opts = PipelineOptions { mode, ..Default::default() };
    let mode = resolve_mode(margins, &opts);
    let run = run_pipeline(margins, mode, &resolve_order(mode, &opts))?;
    r.subdivision = subdivision_value(&run);
    Ok(r)
}

/// Refuses coarse mode on multiples of B3.
pub fn triangulate_report(margins: &Margins, opts: &PipelineOptions) -> Result<Report> {
    require_3x3(margins)?;
    let mut r = Report::for_margins(margins);
    let mode = resolve_mode(margins, opts);
    let run = run_pipeline(margins, mode, &resolve_order(mode, opts))?;
    r.subdivision = subdivision_value(&run);
    r.triangulation = triangulation_value(&run, opts.certificate)?;
    let (checks, route) = pipeline_checks(&run, opts.max_degree)?;
    if !route.is_null() {
        r.ideal = json!({"triangulation_route": route});
    }
    r.paper_checks.push(CheckGroup::new("instance", checks, Vec::new()));
    Ok(r)
}

pub fn markov_report(margins: &Margins, max_degree: usize) -> Result<Report> {
    let mut r = Report::for_margins(margins);
    let verdict = quadratic_generation_verdict(margins, max_degree)?;
    r.paper_checks.push(CheckGroup::new("instance", verdict_checks(margins, &verdict), Vec::new()));
    r.ideal = json!({"verdict": verdict.verdict, "quadratic": verdict.quadratic, "fiber_oracle": verdict});
    Ok(r)
}

pub fn verify_report(sections: Vec<SectionReport>) -> Report {
    Report { paper_checks: sections.into_iter().map(CheckGroup::from).collect(), ..Default::default() }
}

// ---------------------------------------------------------------- text

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

/// Indented `key: value` lines; arrays of flat items go on one line.
fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in map {
                render(out, k, x, depth + 1);
            }
        }
        Value::Array(items) if items.iter().all(|x| is_scalar(x) || x.as_array().is_some_and(|a| a.iter().all(is_scalar))) => {
            let _ = writeln!(out, "{pad}{key}: {v}");
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{key}: ({} items)", items.len());
            for (i, x) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), x, depth + 1);
            }
        }
        v => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mg(r: &[u64], c: &[u64]) -> Margins {
        Margins::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn birkhoff_analysis() {
        let r = analyze(&Margins::birkhoff(3, 1), &PipelineOptions::default()).unwrap();
        let v = r.to_value();
        assert_eq!(v["smoothness"]["is_simple"], json!(false));
        assert_eq!(v["smoothness"]["multiple_k"], json!(1));
        assert_eq!(v["ideal"]["verdict"], json!("not quadratic"));
        assert_eq!(v["triangulation"]["simplex_count"], json!(3));
        assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn json_is_key_sorted_and_stable() {
        let m = mg(&[2, 1, 1], &[2, 1, 1]);
        let a = analyze(&m, &PipelineOptions::default()).unwrap().to_json();
        let b = analyze(&m, &PipelineOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
        let keys: Vec<String> = serde_json::from_str::<Value>(&a).unwrap().as_object().unwrap().keys().cloned().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(a.find("\"ideal\"").unwrap() < a.find("\"input\"").unwrap());
    }

    #[test]
    fn coarse_on_multiple_is_refused() {
        let opts = PipelineOptions { mode: Some(Mode::Coarse), ..Default::default() };
        let e = triangulate_report(&Margins::birkhoff(3, 2), &opts).unwrap_err();
        assert!(matches!(e, Error::Refused(_)));
        assert!(e.to_string().contains("multiple of B3"));
    }

    #[test]
    fn text_mentions_every_section() {
        let t = analyze(&mg(&[2, 1, 1], &[2, 1, 1]), &PipelineOptions::default()).unwrap().to_text();
        for k in ["input:", "normalized_input:", "smoothness:", "subdivision:", "triangulation:", "ideal:", "paper_checks:"] {
            assert!(t.contains(k), "{k} missing");
        }
    }
}
