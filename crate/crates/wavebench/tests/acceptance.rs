//! Acceptance gate: one test per criterion, each printing a pass/fail
//! line. Trial counts and time bounds are pinned here; a red criterion
//! means the workbench no longer reproduces the finite theory.

use std::time::{Duration, Instant};

use wavebench::report::Report;
use wavebench::suites::{run_suite, SuiteSpec};

fn criterion(index: u32, name: &str, bound: Duration, spec: &SuiteSpec) -> Report {
    let start = Instant::now();
    let report = run_suite(spec).expect("suite runs");
    let elapsed = start.elapsed();
    let status = if report.passed() && elapsed <= bound { "PASS" } else { "FAIL" };
    println!(
        "criterion {index} ({name}): {status} — {} instances, {} failed, {:.2}s (bound {}s)",
        report.instances,
        report.failures,
        elapsed.as_secs_f64(),
        bound.as_secs()
    );
    if !report.passed() {
        println!("{}", report.to_text());
    }
    assert!(report.passed(), "criterion {index} ({name}) failed:\n{}", report.to_text());
    assert!(
        elapsed <= bound,
        "criterion {index} ({name}) exceeded its time bound: {elapsed:?} > {bound:?}"
    );
    report
}

fn spec(suite: &str) -> SuiteSpec {
    SuiteSpec::new(suite)
}

#[test]
fn criterion_1_five_values() {
    // cited arenas reproduce values 1..5 exactly; every catalog pair on
    // <= 4 elements classifies into exactly one of the 5 values
    let report = criterion(1, "5sets", Duration::from_secs(60), &spec("5sets"));
    for k in 1..=5 {
        assert!(
            report.tallies.get(&format!("value-{k}")).copied().unwrap_or(0) > 0,
            "value {k} never observed"
        );
    }
}

#[test]
fn criterion_2_promise_order() {
    criterion(2, "leq", Duration::from_secs(60), &spec("leq"));
}

#[test]
fn criterion_3_blockstr() {
    let report = criterion(3, "blockstr", Duration::from_secs(1), &spec("blockstr"));
    assert_eq!(report.tallies.get("subsets-swept"), Some(&4096));
}

#[test]
fn criterion_4_finite_packing_covering() {
    // full catalog on <= 4 elements plus >= 10^4 seeded pairs on 5-6
    let mut s = spec("packing-covering");
    s.n = 6;
    s.trials = 10_000;
    let report = criterion(4, "packing-covering", Duration::from_secs(300), &s);
    // full catalog of pairs on <= 4 elements: 2² + 5² + 16² + 68² = 4909
    assert!(report.instances >= 10_000 + 4909);
    assert_eq!(report.passes, report.instances);
}

#[test]
fn criterion_5_lemma_trichotomies() {
    // >= 10^3 instances each with |E| <= 6 and all G/H/J choices up to
    // size 2 on the seeded exhaustive pairs; zero theorem violations
    let bound = Duration::from_secs(600);
    let mut s27 = spec("lemma27");
    s27.n = 6;
    s27.trials = 1000;
    let r27 = criterion(5, "lemma27", bound, &s27);
    assert!(r27.instances >= 1000);
    let mut s17 = spec("lemma17");
    s17.n = 6;
    s17.trials = 1000;
    let r17 = criterion(5, "lemma17", bound, &s17);
    assert!(r17.instances >= 1000);
}

#[test]
fn criterion_6_bridging_lemmas() {
    let bound = Duration::from_secs(60);
    let r5 = criterion(6, "lem5minus", bound, &spec("lem5minus"));
    assert!(r5.tallies.get("blocking-triples").copied().unwrap_or(0) > 0);
    let r4 = criterion(6, "lem4minus", bound, &spec("lem4minus"));
    assert_eq!(
        r4.tallies.get("blocking-triples"),
        r5.tallies.get("blocking-triples"),
        "both lemmas quantify over the same triples"
    );
}

#[test]
fn criterion_7_game_wave_equivalence() {
    // template family plus >= 500 random pair-trees with <= 4 nodes and
    // node grounds <= 4; all 6 promises, both games, zero exceptions
    let mut s = spec("game-equivalence");
    s.nodes = 4;
    s.n = 4;
    s.trials = 500;
    let report = criterion(7, "game-equivalence", Duration::from_secs(900), &s);
    assert!(report.instances >= 600);
}

#[test]
fn criterion_8_roundtrip() {
    // wave_to_strategy then strategy_to_wave preserves fulfilment on every
    // criterion-7 instance where Packer wins
    let mut s = spec("roundtrip");
    s.nodes = 4;
    s.n = 4;
    s.trials = 500;
    let report = criterion(8, "roundtrip", Duration::from_secs(900), &s);
    let roundtrips: u64 = report
        .tallies
        .iter()
        .filter(|(k, _)| k.starts_with("roundtrip-"))
        .map(|(_, v)| *v)
        .sum();
    assert!(roundtrips >= report.instances, "every instance roundtrips at least ⊥");
}

#[test]
fn criterion_9_tree_minors() {
    let mut s = spec("tomminor");
    s.trials = 200;
    let report = criterion(9, "tomminor", Duration::from_secs(120), &s);
    assert!(report.instances >= 200);
}

#[test]
fn criterion_10_runchains() {
    let report = criterion(10, "runchains", Duration::from_secs(120), &spec("runchains"));
    assert!(report.tallies.get("chains-augmented").copied().unwrap_or(0) > 100_000);
}
