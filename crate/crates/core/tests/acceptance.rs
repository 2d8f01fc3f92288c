//! One PASS/FAIL line per acceptance criterion. Tolerances live in
//! `he4film::suite`; this target only reports and asserts.

use he4film::suite::{run_suite, Bound, SuiteOptions};

#[test]
fn acceptance() {
    let report = run_suite(&SuiteOptions::default());
    for c in &report.checks {
        println!(
            "{} {} ({})",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.title
        );
        for m in &c.metrics {
            let bound = match m.bound {
                Bound::AtMost(t) => format!("<= {t:e}"),
                Bound::AtLeast(t) => format!(">= {t:e}"),
                Bound::Within { target, tol } => format!("= {target} ± {tol}"),
                Bound::None => "reported".into(),
            };
            let flag = if m.passed { "" } else { "  <-- out of bound" };
            println!("    {:<36} {:>14.6e}  {bound}{flag}", m.name, m.value);
        }
        for n in &c.notes {
            println!("    note: {n}");
        }
    }
    assert_eq!(report.checks.len(), 12);
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.id.as_str())
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
