use std::time::{Duration, Instant};

use helixlab::suite::{self, Criterion};
use helixlab::{cmd_suite, Command, RunConfig};
use helixlab_core::check::Check;
use helixlab_core::numerics::DEFAULT_SEED;

type Runner = fn(u64) -> helixlab_core::Result<Vec<Check>>;

fn sol(_: u64) -> helixlab_core::Result<Vec<Check>> {
    suite::sol_exactness()
}

fn report(id: &str, title: &str, records: &[Check], elapsed: Duration, budget: Option<Duration>) -> bool {
    let failed: Vec<&str> = records.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let in_time = budget.is_none_or(|b| elapsed < b);
    let pass = failed.is_empty() && !records.is_empty() && in_time;
    let worst = records.iter().map(|c| c.residual).fold(0.0_f64, f64::max);
    println!(
        "{id} {} {title}: {}/{} checks, worst residual {worst:.2e}, {:.0} ms{}{}",
        if pass { "PASS" } else { "FAIL" },
        records.len() - failed.len(),
        records.len(),
        elapsed.as_secs_f64() * 1e3,
        budget.map_or(String::new(), |b| format!(" (budget {} ms)", b.as_millis())),
        if failed.is_empty() { String::new() } else { format!(" failing: {failed:?}") },
    );
    pass
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, &str, Runner, Option<u64>); 8] = [
        ("AC1", "Sol geometry values", sol, Some(1)),
        ("AC2", "offset metric and trace vs offset chart", suite::offset_equivalence, Some(30)),
        ("AC3", "trace lemma property suite", suite::lemma_property, Some(10)),
        ("AC4", "graph minimality criterion", suite::formulae_biconditional, None),
        ("AC5", "metric comparison relations", suite::comparison_suite, None),
        ("AC6", "structure equation and height Laplacian on cones", suite::cone_identities, None),
        ("AC7", "minimal ruled helix falsification harness", suite::main_theorem, None),
        ("AC8", "minimal offsets and flat foliations", suite::offsets_corollary, None),
    ];
    println!();
    let mut all = true;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let records = run(DEFAULT_SEED).unwrap_or_else(|e| panic!("{id}: {e}"));
        all &= report(id, title, &records, start.elapsed(), budget.map(Duration::from_secs));
    }

    let cfg = RunConfig::defaults(Command::Suite);
    let start = Instant::now();
    let a = cmd_suite(&cfg).expect("suite runs");
    let b = cmd_suite(&cfg).expect("suite runs");
    let identical = a.canonical_json() == b.canonical_json();
    let ac9 = a
        .records
        .iter()
        .find(|c| c.name == "AC9.identical_reruns")
        .expect("suite records the rerun comparison");
    let records = vec![
        Check::flag("reports_identical", "artifact", identical, true),
        ac9.clone(),
    ];
    all &= report("AC9", "deterministic suite reports", &records, start.elapsed(), None);
    assert!(all, "at least one acceptance criterion failed");
}

#[test]
fn criteria_cover_one_to_eight() {
    let ids: Vec<&str> = suite::run_criteria(7)
        .unwrap()
        .iter()
        .map(|c: &Criterion| c.id)
        .collect();
    assert_eq!(ids, ["AC1", "AC2", "AC3", "AC4", "AC5", "AC6", "AC7", "AC8"]);
}

#[test]
fn suite_passes_for_another_seed() {
    let criteria = suite::run_criteria(20_261_015).unwrap();
    for c in &criteria {
        let bad: Vec<_> = c.records.iter().filter(|r| !r.pass).map(|r| &r.name).collect();
        assert!(bad.is_empty(), "{}: {bad:?}", c.id);
    }
}
