//! Acceptance table: one PASS/FAIL line per criterion.

use twosub::cli::report::CriterionResult;
use twosub::cli::selftest::run_criteria;
use twosub::cli::Options;
use twosub::seqclassify::Rule;

fn line(c: &CriterionResult) -> String {
    let mark = if c.passed { "PASS" } else { "FAIL" };
    format!("{mark} {:<5} {}: {}", c.id, c.name, c.detail)
}

#[test]
fn acceptance_criteria() {
    let opts = Options::default();
    let first = run_criteria(&opts);
    let second = run_criteria(&opts);
    let mut failed = Vec::new();
    for c in &first {
        println!("{}", line(c));
        if !c.passed {
            failed.push(c.id.clone());
        }
    }
    let a = serde_json::to_string(&first).unwrap();
    let b = serde_json::to_string(&second).unwrap();
    let same = a == b;
    println!("{} 8     determinism: two runs serialize identically", if same { "PASS" } else { "FAIL" });
    if !same {
        failed.push("8".into());
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn starved_counting_budget_fails_counting_cases() {
    let mut opts = Options::default();
    opts.budgets.k_max = 2;
    let results = run_criteria(&opts);
    for id in ["1h", "1i"] {
        let c = results.iter().find(|c| c.id == id).unwrap();
        assert!(!c.passed, "{id} passed with k_max = 2");
    }
}

#[test]
fn disabling_ratio_rule_changes_verdicts() {
    let mut opts = Options::default();
    opts.disabled.insert(Rule::RatioComparison);
    let results = run_criteria(&opts);
    let c = results.iter().find(|c| c.id == "1c").unwrap();
    assert!(!c.passed);
}
