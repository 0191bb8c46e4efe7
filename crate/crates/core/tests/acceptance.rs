use bgcrys::verify::run_suite;

#[test]
fn acceptance_criteria() {
    let report = run_suite("all").unwrap();
    for a in &report.assertions {
        println!(
            "criterion {:>2}: {} [{}] {} -- {}",
            a.id,
            if a.pass { "PASS" } else { "FAIL" },
            a.module,
            a.statement,
            a.detail
        );
    }
    println!("{}/{} criteria pass", report.passed, report.total);
    assert_eq!(report.total, 13);
    let failed: Vec<u32> = report.assertions.iter().filter(|a| !a.pass).map(|a| a.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
