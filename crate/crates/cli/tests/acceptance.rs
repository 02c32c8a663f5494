//! Acceptance criteria, one line per criterion.
//!
//! Expected values come from closed forms or from oracles written here,
//! independently of the library code they check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use dpchroma::corpus;
use dpchroma::parallel::Parallel;
use dpchroma_core::chrompoly::binomial;
use dpchroma_core::cover::{normalize_at, random_cover};
use dpchroma_core::dpfunction::{cone_scan_with, gap_table, verify_lemma_lower, ConeReport, Sequential};
use dpchroma_core::generators::{complete, connected_graphs, cycle, glue_cycles, path, random_tree, wheel};
use dpchroma_core::{
    brute_force_count, canonical_cover, classify_spanning_subgraphs, coefficient_report, count_colorings,
    deletion_contraction, dp_color_function, inclusion_exclusion_count, twist_stats, verify_lemma_formulas2,
    verify_lemma_three, whitney_expansion, DPCover, Graph, IntPolynomial, Status,
};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: impl Into<BigInt>) -> BigInt {
    v.into()
}

fn both_expansions(g: &Graph) -> Result<IntPolynomial, String> {
    let w = whitney_expansion(g).map_err(|e| e.to_string())?;
    let d = deletion_contraction(g);
    ensure(w == d, || format!("expansions disagree on {g}"))?;
    Ok(d)
}

fn closed_forms() -> Outcome {
    let mut checked = 0;
    for n in 1..=5usize {
        let p = both_expansions(&complete(n))?;
        for m in 0..=10i64 {
            let expected: i64 = (0..n as i64).map(|i| m - i).product();
            ensure(p.eval_i64(m) == int(expected), || format!("K{n} at m={m}"))?;
            checked += 1;
        }
    }
    for n in 3..=8u32 {
        let p = both_expansions(&cycle(n as usize))?;
        for m in 0..=10i64 {
            let expected = (m - 1).pow(n) + (-1i64).pow(n) * (m - 1);
            ensure(p.eval_i64(m) == int(expected), || format!("C{n} at m={m}"))?;
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let n = rng.gen_range(2..=12usize);
        let t = random_tree(n, &mut rng);
        let p = both_expansions(&t)?;
        for m in 0..=10i64 {
            let expected = int(m) * int(m - 1).pow(n as u32 - 1);
            ensure(p.eval_i64(m) == expected, || format!("tree on {n} vertices at m={m}"))?;
            checked += 1;
        }
    }
    for (name, g) in corpus::small() {
        let base = both_expansions(&g)?;
        let cone = both_expansions(&g.cone())?;
        for m in 0..=10i64 {
            ensure(cone.eval_i64(m) == int(m) * base.eval_i64(m - 1), || format!("cone over {name} at m={m}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} exact evaluations"))
}

/// Girth and number of shortest cycles, from the edge subsets that are cycles.
fn girth_oracle(g: &Graph) -> Option<(usize, u64)> {
    let s = g.edge_count();
    let mut best: Option<(usize, u64)> = None;
    for mask in 1u32..1 << s {
        let k = mask.count_ones() as usize;
        if best.is_some_and(|(b, _)| k > b) {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..s).filter(|e| mask >> e & 1 == 1).map(|e| g.edge(e)).collect();
        let mut degree = vec![0; g.n()];
        for &(u, v) in &chosen {
            degree[u] += 1;
            degree[v] += 1;
        }
        if degree.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        // a 2-regular edge set is one cycle iff it is connected
        let mut reach = vec![chosen[0].0];
        let mut seen = vec![false; g.n()];
        seen[chosen[0].0] = true;
        while let Some(x) = reach.pop() {
            for &(u, v) in &chosen {
                for (a, b) in [(u, v), (v, u)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        reach.push(b);
                    }
                }
            }
        }
        if seen.iter().filter(|&&x| x).count() != k {
            continue;
        }
        best = match best {
            Some((b, t)) if b == k => Some((b, t + 1)),
            _ => Some((k, 1)),
        };
    }
    best
}

fn coefficient_structure() -> Outcome {
    let mut graphs = 0;
    for n in 1..=6 {
        for g in connected_graphs(n) {
            let p = both_expansions(&g)?;
            let s = g.edge_count();
            let a = |i: usize| {
                let c = p.coeff(n - i);
                if i.is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            };
            for i in 0..n {
                ensure(a(i) > int(0), || format!("{g}: a_{i} = {} is not positive", a(i)))?;
            }
            ensure(p.coeff(0) == int(0), || format!("{g}: nonzero constant term"))?;
            if let Some((girth, t)) = girth_oracle(&g) {
                for i in 0..=girth - 2 {
                    ensure(a(i) == binomial(s, i), || format!("{g}: a_{i} != C({s},{i})"))?;
                }
                let i = girth - 1;
                ensure(a(i) == binomial(s, i) - int(t), || format!("{g}: a_{i} != C({s},{i}) - {t}"))?;
            } else {
                for i in 0..n {
                    ensure(a(i) == binomial(s, i), || format!("forest {g}: a_{i} != C({s},{i})"))?;
                }
            }
            let report = coefficient_report(&g).map_err(|e| e.to_string())?;
            ensure(report.passed(), || format!("{g}: coefficient report failed"))?;
            graphs += 1;
        }
    }
    Ok(format!("{graphs} connected graphs on at most 6 vertices"))
}

fn a3_identity() -> Outcome {
    let mut seen = Vec::new();
    for (name, m) in [("K4", complete(4)), ("cone(C4)", wheel(4)), ("cone(C5)", wheel(5))] {
        let class = classify_spanning_subgraphs(&m).map_err(|e| e.to_string())?;
        let p = both_expansions(&m)?;
        let coeff = p.from_top(3);
        ensure(coeff == int(-class.a3), || {
            format!("{name}: a3 = {} but m^(n-3) coefficient is {coeff}", class.a3)
        })?;
        seen.push(format!(
            "{name} a3={} (p3..p6 = {},{},{},{})",
            class.a3, class.p3, class.p4, class.p5, class.p6
        ));
    }
    Ok(seen.join("; "))
}

/// Transversal count straight from the definition.
fn naive_count(cover: &DPCover<'_>) -> u64 {
    let g = cover.graph();
    let m = cover.m() as u64;
    (0..m.pow(g.n() as u32))
        .filter(|&code| {
            let color = |v: usize| (code / m.pow(v as u32) % m) as usize;
            g.edges()
                .iter()
                .enumerate()
                .all(|(e, &(u, v))| cover.sigma(e).apply(color(u)) != color(v))
        })
        .count() as u64
}

fn counting_oracles() -> Outcome {
    let graphs: Vec<Graph> = (2..=6).flat_map(connected_graphs).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut brute, mut ie) = (0, 0);
    for i in 0..600 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let m = rng.gen_range(1..=4);
        let cover = random_cover(g, m, &mut rng);
        let count = count_colorings(&cover);
        let by_definition = BigUint::from(naive_count(&cover));
        let by_enumeration = brute_force_count(&cover).map_err(|e| e.to_string())?;
        ensure(count == by_definition && count == by_enumeration, || {
            format!("cover {i} on {g}: {count} vs {by_enumeration} vs {by_definition}")
        })?;
        brute += 1;
        if i % 4 == 0 {
            let via_ie = inclusion_exclusion_count(&cover).map_err(|e| e.to_string())?;
            ensure(via_ie == count, || format!("cover {i}: inclusion-exclusion {via_ie} vs {count}"))?;
            ie += 1;
        }
    }
    Ok(format!("{brute} covers against brute force, {ie} against inclusion-exclusion"))
}

fn formulas2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0;
    let mut vacuous = Vec::new();
    for (name, g) in [("C4", cycle(4)), ("C5", cycle(5)), ("glue(3)", glue_cycles(3))] {
        // (iii) speaks about subsets larger than the girth; a bare cycle has none
        let tags: &[&str] = if g.edge_count() > g.girth().unwrap() {
            &["(i)", "(ii)", "(iii)"]
        } else {
            vacuous.push(name);
            &["(i)", "(ii)"]
        };
        let covers: Vec<DPCover<'_>> = std::iter::once(canonical_cover(&g, 3))
            .chain((0..20).map(|_| random_cover(&g, 3, &mut rng)))
            .collect();
        for (i, cover) in covers.iter().enumerate() {
            let report = verify_lemma_formulas2(cover).map_err(|e| e.to_string())?;
            for tag in tags {
                ensure(report.checks.iter().any(|c| c.statement.starts_with(tag)), || {
                    format!("{name} cover {i}: statement {tag} missing")
                })?;
            }
            ensure(report.checks.iter().all(|c| c.status == Status::Pass), || {
                let bad = report.checks.iter().find(|c| c.status != Status::Pass).unwrap();
                format!("{name} cover {i}: {} ({:?} vs {:?})", bad.statement, bad.actual_value, bad.bound_value)
            })?;
            checks += report.checks.len();
        }
    }
    Ok(format!(
        "{checks} grouped checks over 63 covers; (iii) vacuous on {}",
        vacuous.join(", ")
    ))
}

fn chordal_equality() -> Outcome {
    let mut graphs: Vec<(String, Graph)> = (2..=6)
        .flat_map(connected_graphs)
        .filter(|g| g.edge_count() + 1 == g.n())
        .map(|g| (format!("tree {g}").replace('\n', " "), g))
        .collect();
    let trees = graphs.len();
    graphs.extend((2..=4).map(|k| (format!("K{k}"), complete(k))));
    graphs.extend([("C5".into(), cycle(5)), ("C7".into(), cycle(7))]);
    let mut rows = 0;
    for (name, g) in &graphs {
        let p = deletion_contraction(g);
        for m in 2..=4 {
            let v = dp_color_function(g, m, 10_000_000).map_err(|e| format!("{name}: {e}"))?;
            ensure(BigInt::from(v.value.clone()) == p.eval_i64(m as i64), || {
                format!("{name} m={m}: P_DP={} P={}", v.value, p.eval_i64(m as i64))
            })?;
            rows += 1;
        }
    }
    Ok(format!("{rows} rows ({trees} trees, K2..K4, C5, C7)"))
}

fn even_girth() -> Outcome {
    let report = gap_table(&cycle(4), 2, 6, 10_000_000).map_err(|e| e.to_string())?;
    for row in &report.rows {
        let gap = row.gap().ok_or_else(|| format!("m={} skipped", row.m))?;
        ensure(gap == int(row.m as i64), || format!("m={}: gap {gap}", row.m))?;
    }
    let e = report.fitted_exponent.ok_or("no exponent fitted")?;
    ensure((0.9..=1.1).contains(&e), || format!("exponent {e:.4}"))?;
    Ok(format!("gap(m) = m for m in 2..6, exponent {e:.4}"))
}

fn glued_cycles() -> Outcome {
    let report = gap_table(&glue_cycles(3), 3, 6, 10_000_000).map_err(|e| e.to_string())?;
    let mut ratios = Vec::new();
    let mut shown = Vec::new();
    for row in &report.rows {
        let gap = row.gap().ok_or_else(|| format!("m={} skipped", row.m))?;
        ensure(gap > int(0), || format!("m={}: gap {gap}", row.m))?;
        let ratio = gap.to_string().parse::<f64>().unwrap() / (row.m as f64).powi(3);
        ratios.push(ratio);
        shown.push(format!("m={} gap={gap} ({ratio:.3} m^3)", row.m));
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0f64), |(a, b), &r| (a.min(r), b.max(r)));
    ensure(hi / lo <= 3.0, || format!("band ratio {:.3}: {}", hi / lo, shown.join(", ")))?;
    Ok(format!("{}; band ratio {:.3}", shown.join(", "), hi / lo))
}

fn lemma_three() -> Outcome {
    let w4 = wheel(4);
    let apex = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut summary = Vec::new();
    for m in [3, 4] {
        let (mut zero, mut twisted) = (0, 0);
        let covers: Vec<DPCover<'_>> = std::iter::once(canonical_cover(&w4, m))
            .chain((0..60).map(|_| random_cover(&w4, m, &mut rng)))
            .collect();
        for (i, cover) in covers.iter().enumerate() {
            let cover = normalize_at(cover, apex).map_err(|e| e.to_string())?;
            let x = twist_stats(&cover, apex).map_err(|e| e.to_string())?.total;
            if x == 0 {
                zero += 1;
            } else {
                twisted += 1;
            }
            let report = verify_lemma_three(&cover, apex).map_err(|e| e.to_string())?;
            ensure(report.checks.len() >= 5, || format!("m={m} cover {i}: only {} checks", report.checks.len()))?;
            ensure(report.checks.iter().all(|c| c.status == Status::Pass), || {
                let bad = report.checks.iter().find(|c| c.status != Status::Pass).unwrap();
                format!("m={m} cover {i} (x_H={x}): {} ({:?} vs {:?})", bad.statement, bad.actual_value, bad.bound_value)
            })?;
        }
        ensure(zero >= 1 && twisted >= 50, || format!("m={m}: {zero} untwisted, {twisted} twisted"))?;
        summary.push(format!("m={m}: {} covers ({zero} with x_H=0)", zero + twisted));
    }
    Ok(summary.join("; "))
}

fn lemma_lower() -> Outcome {
    let class = classify_spanning_subgraphs(&wheel(4)).map_err(|e| e.to_string())?;
    let m = (2 * (class.p4 + class.p6)) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let report = verify_lemma_lower(&cycle(4), m, 50, &mut rng).map_err(|e| e.to_string())?;
    ensure(report.checks[0].status == Status::Pass, || "hypothesis not met".into())?;
    let samples = &report.checks[1..];
    let checked = samples.iter().filter(|c| c.status != Status::Skipped).count();
    ensure(checked >= 10, || format!("only {checked} covers checked"))?;
    ensure(samples.iter().all(|c| c.status == Status::Pass), || {
        let bad = samples.iter().find(|c| c.status != Status::Pass).unwrap();
        format!("{}: {:?} < {:?}", bad.statement, bad.actual_value, bad.bound_value)
    })?;
    let min = samples.iter().filter_map(|c| c.actual_value.clone()).min().unwrap();
    Ok(format!(
        "m = 2(|P4|+|P6|) = {m}; {checked} twisted covers; bound {}, smallest count {min}",
        samples[0].bound_value.as_ref().unwrap()
    ))
}

fn cone_scans() -> Outcome {
    let cases = [("K3", complete(3), true), ("P4", path(4), true), ("C4", cycle(4), false)];
    let mut summary = Vec::new();
    for (name, g, chordal) in cases {
        let first = cone_scan_with(&g, 2, 5, &Sequential { budget: 10_000_000 }).map_err(|e| e.to_string())?;
        let bigger = Parallel::new(100_000_000, 4, None).map_err(|e| e.to_string())?;
        let second = cone_scan_with(&g, 2, 5, &bigger).map_err(|e| e.to_string())?;
        let done = |r: &ConeReport| r.rows.iter().filter(|row| row.p_dp.is_some()).count();
        ensure(done(&first) >= 3, || format!("{name}: only {} rows completed", done(&first)))?;
        for (a, b) in first.rows.iter().zip(&second.rows) {
            if let (Some(x), Some(y)) = (&a.p_dp, &b.p_dp) {
                ensure(x == y, || format!("{name} m={}: {x} vs {y} under a larger budget", a.m))?;
            }
            if let Some(x) = &a.p_dp {
                ensure(BigInt::from(x.clone()) <= a.p, || format!("{name} m={}: P_DP > P", a.m))?;
            }
            if chordal {
                ensure(a.equal() != Some(false), || format!("chordal cone over {name} unequal at m={}", a.m))?;
            }
        }
        let flags: Vec<String> = first
            .rows
            .iter()
            .map(|r| match (&r.p_dp, r.equal()) {
                (Some(v), Some(eq)) => format!("{}:{v}{}", r.m, if eq { "=" } else { "<" }),
                _ => format!("{}:skipped", r.m),
            })
            .collect();
        summary.push(format!("{name} [{}] onset {:?}", flags.join(" "), first.first_equal_onset));
    }
    Ok(summary.join("; "))
}

fn result_block(stdout: &[u8]) -> Result<String, String> {
    let text = String::from_utf8(stdout.to_vec()).map_err(|e| e.to_string())?;
    let at = text.find("\"result\":").ok_or("no result block")?;
    Ok(text[at..].to_string())
}

fn determinism() -> Outcome {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_dpchroma"))
            .args(["dpmin", "--graph", "C4", "--m", "2..5", "--jobs", jobs])
            .env_remove("DPCHROMA_CACHE")
            .output()
            .map_err(|e| e.to_string())
    };
    let (one, eight) = (run("1")?, run("8")?);
    ensure(one.status.success() && eight.status.success(), || "dpmin failed".into())?;
    let (a, b) = (result_block(&one.stdout)?, result_block(&eight.stdout)?);
    ensure(a == b, || "result blocks differ".into())?;
    let doc: serde_json::Value = serde_json::from_slice(&one.stdout).map_err(|e| e.to_string())?;
    let values: Vec<&str> = doc["result"]["rows"]
        .as_array()
        .ok_or("no rows")?
        .iter()
        .filter_map(|r| r["P_DP"].as_str())
        .collect();
    ensure(values == ["0", "15", "80", "255"], || format!("values {values:?}"))?;
    Ok(format!("{} identical bytes, values {values:?}", a.len()))
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        (1, "closed-form agreement", secs(10), closed_forms),
        (2, "coefficient structure", secs(60), coefficient_structure),
        (3, "a3 identity", secs(60), a3_identity),
        (4, "counting oracle equivalence", secs(120), counting_oracles),
        (5, "bad-set formulas", secs(120), formulas2),
        (6, "chordal and odd-cycle equality", secs(300), chordal_equality),
        (7, "even-girth strictness at C4", secs(30), even_girth),
        (8, "glued-cycles tightness", secs(900), glued_cycles),
        (9, "cone subset-sum bounds", secs(300), lemma_three),
        (10, "cone lower bound", secs(600), lemma_lower),
        (11, "cone scan", secs(900), cone_scans),
        (12, "determinism across worker counts", secs(120), determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if took <= limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name}: {detail} [{:.2}s]", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL {name}: {why} [{:.2}s]", took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
