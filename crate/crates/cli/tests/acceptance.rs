//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use schreier_cli::{run, run_suite, EXIT_OK, EXIT_VIOLATION};
use schreier_core::estimates::{domination_constant, Mode};
use schreier_core::num::q;
use schreier_core::suite::SuiteConfig;
use schreier_core::{Capacity, NormEngine, Ordinal, RatVec, SpaceSpec};
use serde_json::Value;

struct Line {
    id: u32,
    name: &'static str,
    ok: bool,
    note: String,
}

fn invoke(args: &[&str]) -> (i32, Vec<u8>) {
    let mut argv = vec!["schreier-lab".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, out)
}

fn rational(v: &Value) -> Option<(i64, i64)> {
    let a = v.as_array()?;
    Some((a.first()?.as_i64()?, a.get(1)?.as_i64()?))
}

fn suite<'a>(reports: &'a [Value], id: &str) -> &'a Value {
    reports
        .iter()
        .find(|r| r["suite"] == id)
        .unwrap_or_else(|| panic!("suite {id} missing from report"))
}

// pass, zero violations, and at least `min` samples
fn clean(r: &Value, min: u64) -> (bool, String) {
    let samples = r["samples"].as_u64().unwrap_or(0);
    let violations = r["violations"].as_u64().unwrap_or(u64::MAX);
    let ok = r["pass"] == true && violations == 0 && samples >= min;
    (ok, format!("samples={samples} violations={violations}"))
}

fn per_alpha_clean(r: &Value, alphas: &[&str]) -> bool {
    alphas.iter().all(|a| r["details"]["per_alpha"][a]["violations"] == 0)
}

fn main() {
    let mut lines: Vec<Line> = Vec::new();
    let mut push = |id, name, ok, note: String| lines.push(Line { id, name, ok, note });

    let cfg = SuiteConfig::default();
    let t = Instant::now();
    let membership = run_suite("SCHREIER", &cfg).expect("membership suite");
    let took = t.elapsed();
    let expected = (1u64 << 30) + (1u64 << 15);
    push(
        1,
        "schreier membership",
        membership.pass && membership.violations == 0 && membership.samples as u64 == expected && took < Duration::from_secs(60),
        format!("checks={} elapsed={:.1}s", membership.samples, took.as_secs_f64()),
    );

    let t = Instant::now();
    let (code_a, first) = invoke(&["verify", "all", "--seed", "1", "--format", "json"]);
    let full_run = t.elapsed();
    let (code_b, second) = invoke(&["verify", "all", "--seed", "1", "--format", "json"]);
    let doc: Value = serde_json::from_slice(&first).expect("verify all emits JSON");
    let reports: Vec<Value> = doc["result"]["suites"].as_array().cloned().unwrap_or_default();

    let r = suite(&reports, "REGULARITY");
    let (ok, note) = clean(r, 1);
    push(2, "regularity on [1..10]", ok && r["config"]["window"] == 10, note);

    let (ok, note) = clean(suite(&reports, "NORMS"), 500);
    push(3, "norm oracle equivalence", ok, note);

    let r = suite(&reports, "P31");
    let (ok, note) = clean(r, 3000);
    let engine = NormEngine::new(Capacity::default());
    let x1 = SpaceSpec::schreier(Ordinal::from_nat(1));
    let witness = domination_constant(
        &engine,
        &[RatVec::unit(2), RatVec::unit(3)],
        &x1,
        &[1, 2],
        &x1,
        Mode::ExactVertex,
    )
    .expect("exact witness pair");
    let sharp = witness.exact && witness.lower_bound == q(2, 1) && witness.upper_bound == Some(q(2, 1));
    let bounded = rational(&r["max_ratio"]).is_some_and(|(n, d)| n <= 2 * d);
    push(
        4,
        "upper block estimate constant 2",
        ok && bounded && sharp && per_alpha_clean(r, &["1", "2", "w"]),
        format!("{note} witness_constant={}", witness.lower_bound),
    );

    let (ok, note) = clean(suite(&reports, "RDOM"), 3000);
    push(5, "1-right dominance", ok, note);

    let r = suite(&reports, "R212");
    let (ok, note) = clean(r, 1);
    let per_n = r["details"]["per_n"].as_array().cloned().unwrap_or_default();
    let exact = per_n.len() == 8
        && per_n.iter().all(|p| rational(&p["norm"]) == Some((1, 1)) && rational(&p["late_start_max"]) == Some((1, 2)));
    push(6, "factor two in the renorming", ok && exact, note);

    let (ok, note) = clean(suite(&reports, "L211"), 1500);
    push(7, "lower block estimates in Z^V", ok, note);

    let (ok, note) = clean(suite(&reports, "L213"), 1500);
    push(8, "interleaved FDD bound", ok, note);

    let (ok, note) = clean(suite(&reports, "P24"), 500);
    push(9, "arbitrary index choices", ok, note);

    let r = suite(&reports, "DERIV");
    let (ok, note) = clean(r, 1);
    let d = &r["details"];
    let stages = d["empty_set_s1_stage_50"]["verdict"] == "true" && r["config"]["stages"].as_u64() >= Some(50);
    push(10, "derivative stages", ok && d["s0_rank"] == 2 && r["config"]["window"] == 60 && stages, note);

    let (ok, note) = clean(suite(&reports, "P46"), 200);
    push(11, "isometric l1 on admissible sets", ok, note);

    let (ok, note) = clean(suite(&reports, "HRHO"), 200);
    push(12, "H_rho LP against grid", ok, note);

    let tensor = clean(suite(&reports, "TENSOR"), 200);
    let p61 = suite(&reports, "P61");
    let l66 = suite(&reports, "L66");
    let ok = tensor.0
        && clean(p61, 400).0
        && clean(l66, 400).0
        && per_alpha_clean(p61, &["1", "2"])
        && per_alpha_clean(l66, &["1", "2"]);
    push(13, "tensor blocking and estimates", ok, tensor.1);

    let reproducible = first == second && !first.is_empty();
    let (injected, _) = invoke(&["verify", "P31", "--alpha", "1", "--samples", "200", "--bound", "1"]);
    push(
        14,
        "full run and reproducibility",
        code_a == EXIT_OK && code_b == EXIT_OK && reproducible && full_run < Duration::from_secs(600) && injected == EXIT_VIOLATION,
        format!("elapsed={:.1}s identical={reproducible}", full_run.as_secs_f64()),
    );

    let mut failed = 0;
    for l in &lines {
        println!("criterion {:>2} {}: {} ({})", l.id, l.name, if l.ok { "PASS" } else { "FAIL" }, l.note);
        failed += usize::from(!l.ok);
    }
    println!("acceptance: {}/{} passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
