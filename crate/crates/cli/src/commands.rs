//! Subcommand drivers and output assembly.

use std::time::{SystemTime, UNIX_EPOCH};

use dpchroma_core::chrompoly::coefficient_report_for;
use dpchroma_core::cover::{normalize_at, random_cover};
use dpchroma_core::dpfunction::{cone_scan_with, gap_table_with, verify_lemma_lower, Minimizer};
use dpchroma_core::{
    brute_force_count, canonical_cover, classify_spanning_subgraphs, count_colorings, deletion_contraction,
    inclusion_exclusion_count, verify_lemma_formulas2, verify_lemma_three, whitney_expansion, Check, DPCover, Error,
    Graph, Report, Status,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::{Command, Format, MRange, RunConfig, Suite};
use crate::corpus;
use crate::error::CliError;
use crate::format::{
    big, cone_json, cone_table, cover_from_json, cover_json, gap_json, gap_table, graph_json, poly_json,
    report_json, report_rows, Table,
};
use crate::parallel::Parallel;

/// Largest edge count sent through inclusion-exclusion by the oracle suite.
const ORACLE_IE_EDGES: usize = 16;

/// A finished command: the `"result"` block, its CSV rendering and whether
/// every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    pub table: Table,
    pub passed: bool,
}

/// Runs the command, writes its output and returns the exit code:
/// 0 on success, 1 when a check fails, 2 on parse or capacity errors.
pub fn run(config: &RunConfig) -> i32 {
    let done = execute(config).and_then(|outcome| {
        let text = render(config, &outcome)?;
        emit(config, &text)?;
        Ok(outcome.passed)
    });
    match done {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("dpchroma: {e}");
            2
        }
    }
}

pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Chrompoly => chrompoly(config),
        Command::Dpmin => dpmin(config),
        Command::Gap => gap(config),
        Command::Cone => cone(config),
        Command::Verify(suite) => verify(config, suite),
    }
}

pub fn render(config: &RunConfig, outcome: &Outcome) -> Result<String, CliError> {
    match config.format {
        Format::Json => {
            let doc = json!({ "meta": meta(config), "result": outcome.result });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => outcome.table.to_csv(),
    }
}

fn emit(config: &RunConfig, text: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn meta(config: &RunConfig) -> Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "tool": "dpchroma",
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command.name(),
        "suite": match config.command {
            Command::Verify(s) => Some(s.name()),
            _ => None,
        },
        "graph": config.graph.as_ref().map(|g| g.label()),
        "m": config.m.map(|m| m.to_string()),
        "budget": config.budget,
        "jobs": config.jobs,
        "covers": config.covers,
        "seed": config.seed,
        "cache": config.cache.as_ref().map(|p| p.display().to_string()),
        "timestamp": timestamp,
    })
}

fn solver(config: &RunConfig) -> Result<Parallel, CliError> {
    let cache = config.cache.as_ref().map(Cache::open).transpose()?;
    Parallel::new(config.budget, config.jobs, cache)
}

fn chrompoly(config: &RunConfig) -> Result<Outcome, CliError> {
    let g = config.load_graph()?;
    let whitney = whitney_expansion(&g)?;
    let dc = deletion_contraction(&g);
    let agree = whitney == dc;
    let report = if g.is_connected() {
        Some(coefficient_report_for(&g, &dc)?)
    } else {
        None
    };
    let mut table = Table::new(&["power", "whitney", "deletion_contraction"]);
    for i in 0..=g.n() {
        table.push(vec![i.to_string(), whitney.coeff(i).to_string(), dc.coeff(i).to_string()]);
    }
    Ok(Outcome {
        result: json!({
            "graph": graph_json(&g),
            "whitney": poly_json(&whitney),
            "deletion_contraction": poly_json(&dc),
            "agree": agree,
            "coefficient_report": report.as_ref().map(report_json),
        }),
        table,
        passed: agree && report.as_ref().is_none_or(Report::passed),
    })
}

/// Re-reads the witness from its serialized form and recounts it.
fn witness_round_trip(witness: &DPCover<'_>) -> Result<BigInt, CliError> {
    let text = serde_json::to_string(&cover_json(witness))?;
    let back = cover_from_json(&serde_json::from_str(&text)?, witness.graph())?;
    Ok(BigInt::from(count_colorings(&back)))
}

fn dpmin(config: &RunConfig) -> Result<Outcome, CliError> {
    let g = config.load_graph()?;
    let ms = config.require_m()?;
    let solver = solver(config)?;
    let poly = deletion_contraction(&g);
    let mut rows = Vec::new();
    let mut table = Table::new(&["m", "P", "P_DP", "witness_rank"]);
    let mut passed = true;
    for m in ms.iter() {
        let v = solver.minimize(&g, m)?;
        let p = poly.eval_i64(m as i64);
        let value = BigInt::from(v.value.clone());
        let verified = witness_round_trip(&v.witness)? == value;
        passed &= verified && value <= p;
        table.push(vec![m.to_string(), p.to_string(), v.value.to_string(), v.witness_rank.to_string()]);
        rows.push(json!({
            "m": m,
            "P": big(&p),
            "P_DP": big(&v.value),
            "witness": cover_json(&v.witness),
            "witness_rank": v.witness_rank,
            "witness_verified": verified,
            "covers_examined": v.covers_examined,
            "reduced": v.reduced,
        }));
    }
    Ok(Outcome {
        result: json!({ "graph": graph_json(&g), "rows": rows }),
        table,
        passed,
    })
}

fn gap(config: &RunConfig) -> Result<Outcome, CliError> {
    let g = config.load_graph()?;
    let ms = config.require_m()?;
    let report = gap_table_with(&g, ms.lo, ms.hi, &solver(config)?)?;
    let passed = report.rows.iter().all(|r| r.gap().is_none_or(|x| x >= BigInt::from(0)));
    let mut result = gap_json(&report);
    result["graph"] = graph_json(&g);
    Ok(Outcome {
        result,
        table: gap_table(&report),
        passed,
    })
}

fn cone(config: &RunConfig) -> Result<Outcome, CliError> {
    let g = config.load_graph()?;
    let ms = config.require_m()?;
    let report = cone_scan_with(&g, ms.lo, ms.hi, &solver(config)?)?;
    let passed = report
        .rows
        .iter()
        .all(|r| r.p_dp.as_ref().is_none_or(|d| BigInt::from(d.clone()) <= r.p));
    let mut result = cone_json(&report);
    result["graph"] = graph_json(&g);
    result["cone"] = graph_json(&g.cone());
    Ok(Outcome {
        result,
        table: cone_table(&report),
        passed,
    })
}

struct SuiteRun<'a> {
    config: &'a RunConfig,
    suite: Suite,
    rng: ChaCha8Rng,
    in_corpus: bool,
}

fn verify(config: &RunConfig, suite: Suite) -> Result<Outcome, CliError> {
    let graphs = match (config.corpus, &config.graph) {
        (Some(_), _) if suite == Suite::LemmaLower => corpus::small_cone_bases(),
        (Some(_), _) => corpus::small(),
        (None, Some(source)) => vec![(source.label(), source.load()?)],
        (None, None) => return Err(CliError::Usage("verify needs --graph or --corpus".into())),
    };
    let mut run = SuiteRun {
        config,
        suite,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        in_corpus: config.corpus.is_some(),
    };
    let mut entries = Vec::new();
    let mut table = Table::new(&["graph", "m", "statement", "bound_value", "actual_value", "pass", "status"]);
    let mut passed = true;
    for (name, g) in &graphs {
        for (m, report) in run.graph(g)? {
            passed &= report.passed();
            let m_cell = m.map(|m| m.to_string()).unwrap_or_default();
            report_rows(&mut table, &[name.clone(), m_cell], &report);
            entries.push(json!({ "graph": name, "m": m, "report": report_json(&report) }));
        }
    }
    Ok(Outcome {
        result: json!({ "suite": suite.name(), "passed": passed, "reports": entries }),
        table,
        passed,
    })
}

impl SuiteRun<'_> {
    fn folds(&self, default: MRange) -> MRange {
        self.config.m.unwrap_or(default)
    }

    /// Per-graph errors that make a check inapplicable become a skipped
    /// entry; capacity errors do too inside a corpus run.
    fn guard(&self, title: &str, outcome: Result<Report, Error>) -> Result<Report, CliError> {
        match outcome {
            Ok(report) => Ok(report),
            Err(e) if e.is_capacity() && !self.in_corpus => Err(e.into()),
            Err(e) => {
                let mut report = Report::new(title);
                report.push(Check::skipped(format!("not applicable: {e}")));
                Ok(report)
            }
        }
    }

    fn graph(&mut self, g: &Graph) -> Result<Vec<(Option<usize>, Report)>, CliError> {
        let mut out = Vec::new();
        match self.suite {
            Suite::Coefficients => {
                let r = coefficients(g);
                out.push((None, self.guard("coefficients", r)?));
            }
            Suite::Oracle => {
                for m in self.folds(MRange { lo: 2, hi: 3 }).iter() {
                    let r = oracle(g, m, self.config.covers, &mut self.rng);
                    out.push((Some(m), self.guard("oracle", r)?));
                }
            }
            Suite::LemmaFormulas2 => {
                for m in self.folds(MRange::single(3)).iter() {
                    let r = formulas2(g, m, self.config.covers, &mut self.rng);
                    out.push((Some(m), self.guard("lemma-formulas2", r)?));
                }
            }
            Suite::LemmaThree => {
                let Some(apex) = cone_apex(g) else {
                    if self.in_corpus {
                        return Ok(out);
                    }
                    return Err(CliError::Usage(
                        "lemma-three needs a cone: a graph on at least 4 vertices with a universal vertex".into(),
                    ));
                };
                for m in self.folds(MRange { lo: 3, hi: 4 }).iter() {
                    let r = lemma_three(g, apex, m, self.config.covers, &mut self.rng);
                    out.push((Some(m), self.guard("lemma-three", r)?));
                }
            }
            Suite::LemmaLower => {
                let folds = match self.config.m {
                    Some(ms) => ms,
                    None => MRange::single(lower_threshold(g)?),
                };
                for m in folds.iter() {
                    let r = verify_lemma_lower(g, m, self.config.covers, &mut self.rng);
                    out.push((Some(m), self.guard("lemma-lower", r)?));
                }
            }
        }
        Ok(out)
    }
}

/// Largest universal vertex of a graph on at least four vertices.
pub fn cone_apex(g: &Graph) -> Option<usize> {
    let apex = g.gauge_root();
    (g.n() >= 4 && g.degree(apex) + 1 == g.n()).then_some(apex)
}

/// Smallest fold meeting `m >= 2(|P4| + |P6|)` on the cone over `g` (and at least 2).
pub fn lower_threshold(g: &Graph) -> Result<usize, CliError> {
    let class = classify_spanning_subgraphs(&g.cone())?;
    Ok((2 * (class.p4 + class.p6)).max(2) as usize)
}

fn pass_fail(statement: impl Into<String>, ok: bool) -> Check {
    Check {
        statement: statement.into(),
        bound_value: None,
        actual_value: None,
        status: if ok { Status::Pass } else { Status::Fail },
    }
}

fn coefficients(g: &Graph) -> Result<Report, Error> {
    let dc = deletion_contraction(g);
    let mut report = Report::new("coefficients");
    report.push(pass_fail(
        "subset expansion equals deletion-contraction",
        whitney_expansion(g)? == dc,
    ));
    if g.is_connected() {
        report.extend(coefficient_report_for(g, &dc)?);
    } else {
        report.push(Check::skipped("coefficient structure: graph is disconnected"));
    }
    Ok(report)
}

fn sample_covers<'g>(g: &'g Graph, m: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<DPCover<'g>> {
    std::iter::once(canonical_cover(g, m))
        .chain((0..count).map(|_| random_cover(g, m, rng)))
        .collect()
}

fn oracle(g: &Graph, m: usize, covers: usize, rng: &mut ChaCha8Rng) -> Result<Report, Error> {
    let mut report = Report::new("oracle");
    for (i, cover) in sample_covers(g, m, covers, rng).iter().enumerate() {
        let count = BigInt::from(count_colorings(cover));
        let brute = brute_force_count(cover)?;
        report.push(Check::eq(format!("cover {i}: count = brute force"), brute.into(), count.clone()));
        if g.edge_count() <= ORACLE_IE_EDGES {
            let ie = inclusion_exclusion_count(cover)?;
            report.push(Check::eq(format!("cover {i}: count = inclusion-exclusion"), ie.into(), count));
        }
    }
    Ok(report)
}

fn formulas2(g: &Graph, m: usize, covers: usize, rng: &mut ChaCha8Rng) -> Result<Report, Error> {
    let mut report = Report::new("lemma-formulas2");
    for cover in sample_covers(g, m, covers, rng) {
        report.extend(verify_lemma_formulas2(&cover)?);
    }
    Ok(report)
}

fn lemma_three(g: &Graph, apex: usize, m: usize, covers: usize, rng: &mut ChaCha8Rng) -> Result<Report, Error> {
    let mut report = Report::new("lemma-three");
    for cover in sample_covers(g, m, covers, rng) {
        report.extend(verify_lemma_three(&normalize_at(&cover, apex)?, apex)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(config: RunConfig) -> Outcome {
        execute(&config).unwrap()
    }

    #[test]
    fn chrompoly_c4() {
        let o = outcome(RunConfig::new(Command::Chrompoly).with_graph("C4"));
        assert!(o.passed);
        assert_eq!(o.result["whitney"], json!({"coeffs": ["0", "-3", "6", "-4", "1"]}));
        assert_eq!(o.result["whitney"], o.result["deletion_contraction"]);
    }

    #[test]
    fn chrompoly_capacity() {
        // K8 minus three edges: 25 edges
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let edges: Vec<String> = (0..8)
            .flat_map(|u| (u + 1..8).map(move |v| (u, v)))
            .skip(3)
            .map(|(u, v)| format!("{u} {v}"))
            .collect();
        std::fs::write(&path, edges.join("\n")).unwrap();
        let config = RunConfig::new(Command::Chrompoly).with_graph(path.to_str().unwrap());
        assert!(matches!(execute(&config), Err(CliError::Core(e)) if e.is_capacity()));
        assert_eq!(run(&RunConfig { out: Some(dir.path().join("o")), ..config }), 2);
    }

    #[test]
    fn dpmin_values() {
        let o = outcome(RunConfig::new(Command::Dpmin).with_graph("C4").with_m(2, 5));
        let values: Vec<&str> = o.result["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["P_DP"].as_str().unwrap())
            .collect();
        assert_eq!(values, ["0", "15", "80", "255"]);
        assert!(o.passed);
        let o = outcome(RunConfig::new(Command::Dpmin).with_graph("C5").with_m(3, 3));
        assert_eq!(o.result["rows"][0]["P_DP"], "30");
    }

    #[test]
    fn disconnected_dpmin_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "0 1\n2 3\n").unwrap();
        let config = RunConfig::new(Command::Dpmin).with_graph(path.to_str().unwrap()).with_m(2, 2);
        let err = execute(&config).unwrap_err().to_string();
        assert!(err.contains("multiply"), "{err}");
    }

    #[test]
    fn gap_and_cone() {
        let o = outcome(RunConfig::new(Command::Gap).with_graph("C5").with_m(2, 5));
        assert!(o.result["rows"].as_array().unwrap().iter().all(|r| r["gap"] == "0"));
        assert!(o.result["fitted_exponent"].is_null());
        let o = outcome(RunConfig::new(Command::Cone).with_graph("K3").with_m(2, 5));
        assert!(o.result["rows"].as_array().unwrap().iter().all(|r| r["equal"] == true));
        assert_eq!(o.result["first_equal_onset"], 2);
        assert_eq!(o.table.header, ["m", "P", "P_DP", "equal"]);
    }

    #[test]
    fn suites_on_single_graphs() {
        let cfg = RunConfig::new(Command::Verify(Suite::LemmaFormulas2)).with_graph("C5").with_m(3, 3);
        assert!(outcome(RunConfig { covers: 5, ..cfg }).passed);
        let cfg = RunConfig::new(Command::Verify(Suite::LemmaThree)).with_graph("W4").with_m(4, 4);
        assert!(outcome(RunConfig { covers: 5, ..cfg }).passed);
        let cfg = RunConfig::new(Command::Verify(Suite::LemmaThree)).with_graph("C5").with_m(3, 3);
        assert!(matches!(execute(&cfg), Err(CliError::Usage(_))));
        // acyclic: formulas need a cycle, reported as skipped
        let cfg = RunConfig::new(Command::Verify(Suite::LemmaFormulas2)).with_graph("P4").with_m(3, 3);
        let o = outcome(RunConfig { covers: 2, ..cfg });
        assert!(o.passed);
        assert_eq!(o.result["reports"][0]["report"]["counts"]["skipped"], 1);
    }

    #[test]
    fn lower_threshold_for_w4() {
        let t = lower_threshold(&dpchroma_core::generators::cycle(4)).unwrap();
        let class = classify_spanning_subgraphs(&dpchroma_core::generators::wheel(4)).unwrap();
        assert_eq!(t as u64, 2 * (class.p4 + class.p6));
    }

    #[test]
    fn csv_for_verify() {
        let cfg = RunConfig::new(Command::Verify(Suite::Oracle)).with_graph("K3").with_m(2, 2);
        let o = outcome(RunConfig { covers: 1, ..cfg });
        let csv = o.table.to_csv().unwrap();
        assert!(csv.starts_with("graph,m,statement,bound_value,actual_value,pass,status\nK3,2,"));
    }
}
