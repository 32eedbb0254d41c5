use grass::verify::{families, run_suite, FAMILIES, SUITES};

#[test]
fn every_suite_passes_on_a_few_cases() {
    let report = run_suite("all", 7, 5).unwrap();
    for f in &report.failures {
        eprintln!("{} seed {}: {}", f.construction, f.seed, f.detail);
    }
    assert!(report.passed());
    assert_eq!(report.families.len(), FAMILIES.len());
}

#[test]
fn suites_partition_the_families() {
    let total: usize = SUITES.iter().map(|s| families(s).unwrap().len()).sum();
    assert_eq!(total, FAMILIES.len());
    assert!(families("nonsense").is_err());
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite("fredholm", 3, 4).unwrap();
    let b = run_suite("fredholm", 3, 4).unwrap();
    assert_eq!(a.families, b.families);
    assert_eq!(a.failures, b.failures);
}
