//! JSON and CSV encodings of core values.
//!
//! Big integers are written as decimal strings. Covers use the witness
//! format `{"m": k, "sigma": {"<edge index>": [images]}}`, where edges whose
//! matching is the identity are left out.

use dpchroma_core::dpfunction::{ConeReport, GapReport};
use dpchroma_core::{Check, DPCover, Graph, IntPolynomial, Perm, Report, Status};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub fn big(n: &impl ToString) -> Value {
    Value::String(n.to_string())
}

fn opt_big<T: ToString>(n: Option<&T>) -> Value {
    n.map_or(Value::Null, big)
}

pub fn poly_json(p: &IntPolynomial) -> Value {
    json!({ "coeffs": p.coeffs().iter().map(big).collect::<Vec<_>>() })
}

pub fn graph_json(g: &Graph) -> Value {
    json!({ "n": g.n(), "edges": g.edges() })
}

pub fn cover_json(cover: &DPCover<'_>) -> Value {
    let sigma: Map<String, Value> = cover
        .sigmas()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_identity())
        .map(|(e, p)| (e.to_string(), json!(p.images().collect::<Vec<_>>())))
        .collect();
    json!({ "m": cover.m(), "sigma": sigma })
}

/// Inverse of [`cover_json`] against the graph the cover was built on.
pub fn cover_from_json<'g>(value: &Value, graph: &'g Graph) -> Result<DPCover<'g>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("malformed cover: {why}"));
    let m = value
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing m"))? as usize;
    let mut sigma = vec![Perm::identity(m); graph.edge_count()];
    let entries = value
        .get("sigma")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing sigma"))?;
    for (edge, images) in entries {
        let e: usize = edge.parse().map_err(|_| bad("edge key is not an index"))?;
        let images: Vec<usize> = serde_json::from_value(images.clone())?;
        let slot = sigma.get_mut(e).ok_or_else(|| bad("edge index out of range"))?;
        *slot = Perm::from_images(images)?;
    }
    Ok(DPCover::new(graph, m, sigma)?)
}

pub fn status_name(status: Status) -> &'static str {
    match status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skipped => "skipped",
    }
}

pub fn check_json(check: &Check) -> Value {
    json!({
        "statement": check.statement,
        "bound_value": opt_big(check.bound_value.as_ref()),
        "actual_value": opt_big(check.actual_value.as_ref()),
        "pass": check.passed(),
        "status": status_name(check.status),
    })
}

pub fn report_json(report: &Report) -> Value {
    json!({
        "title": report.title,
        "passed": report.passed(),
        "counts": {
            "pass": report.count(Status::Pass),
            "fail": report.count(Status::Fail),
            "skipped": report.count(Status::Skipped),
        },
        "checks": report.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

pub fn gap_json(report: &GapReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "m": r.m,
                "P": big(&r.p),
                "P_DP": opt_big(r.p_dp.as_ref()),
                "gap": opt_big(r.gap().as_ref()),
                "skipped": r.skipped,
            })
        })
        .collect();
    json!({
        "n": report.n,
        "girth": report.girth,
        "rows": rows,
        "fitted_exponent": report.fitted_exponent,
    })
}

pub fn cone_json(report: &ConeReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "m": r.m,
                "P": big(&r.p),
                "P_DP": opt_big(r.p_dp.as_ref()),
                "equal": r.equal(),
                "skipped": r.skipped,
            })
        })
        .collect();
    json!({ "rows": rows, "first_equal_onset": report.first_equal_onset })
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn cell<T: ToString>(v: Option<&T>) -> String {
    v.map(ToString::to_string).unwrap_or_default()
}

/// Columns `m,P,P_DP,gap`; skipped rows leave the last two empty.
pub fn gap_table(report: &GapReport) -> Table {
    let mut t = Table::new(&["m", "P", "P_DP", "gap"]);
    for r in &report.rows {
        t.push(vec![r.m.to_string(), r.p.to_string(), cell(r.p_dp.as_ref()), cell(r.gap().as_ref())]);
    }
    t
}

/// Columns `m,P,P_DP,equal`.
pub fn cone_table(report: &ConeReport) -> Table {
    let mut t = Table::new(&["m", "P", "P_DP", "equal"]);
    for r in &report.rows {
        t.push(vec![r.m.to_string(), r.p.to_string(), cell(r.p_dp.as_ref()), cell(r.equal().as_ref())]);
    }
    t
}

pub fn report_rows(t: &mut Table, prefix: &[String], report: &Report) {
    for c in &report.checks {
        let mut row = prefix.to_vec();
        row.extend([
            c.statement.clone(),
            cell(c.bound_value.as_ref()),
            cell(c.actual_value.as_ref()),
            c.passed().to_string(),
            status_name(c.status).to_string(),
        ]);
        t.push(row);
    }
}
