//! One pass/fail line per acceptance criterion. Each criterion runs the
//! `verify` checks tagged with it and must finish inside its pinned
//! wall-clock budget.

use std::time::Instant;

use swcalc::verify::{checks, Context, Suite};
use swcalc::Globals;

/// (criterion, what it covers, budget in seconds).
const CRITERIA: [(u32, &str, f64); 7] = [
    (1, "presentations of BSpin(n)", 60.0),
    (2, "lambda^2 classes", 600.0),
    (3, "exterior Chern classes of SU(5), SU(6), SU(7)", 1800.0),
    (4, "spin representation classes and solver", 600.0),
    (5, "kernel bases in degree 32", 120.0),
    (6, "adjoint class of E8 on Spin(15)", 600.0),
    (7, "property suites", 300.0),
];

fn main() {
    let all = checks(Suite::All);
    let mut ctx = Context::new(&Globals::default());
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (criterion, what, budget) in CRITERIA {
        let start = Instant::now();
        let results: Vec<_> = all
            .iter()
            .filter(|c| c.criterion == criterion)
            .map(|c| c.run(&mut ctx))
            .collect();
        let seconds = start.elapsed().as_secs_f64();
        assert!(!results.is_empty(), "criterion {criterion} has no checks");
        let bad: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        let in_budget = seconds <= budget;
        let pass = bad.is_empty() && in_budget;
        let line = format!(
            "criterion {criterion} {}: {what}; {} checks, {seconds:.1}s of {budget:.0}s",
            if pass { "PASS" } else { "FAIL" },
            results.len()
        );
        println!("{line}");
        for r in &bad {
            println!("    {} [{}]: {}", r.id, r.anchor, r.detail.replace('\n', "\n        "));
        }
        if !in_budget {
            println!("    over budget");
        }
        lines.push(line);
        if !pass {
            failed.push(criterion);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", lines.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
