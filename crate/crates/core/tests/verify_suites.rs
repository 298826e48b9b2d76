use symrd::verify::{run_suite, Suite, VerifyScope};

#[test]
fn every_suite_passes_at_default_scope() {
    let scope = VerifyScope::default();
    for suite in Suite::ALL {
        let report = run_suite(suite, &scope).unwrap();
        println!(
            "{suite}: {} cases, max residual {:e} (worst: {})",
            report.cases, report.max_residual, report.worst
        );
        assert!(report.passed(), "{report:?}");
    }
}
