use super::*;

fn small(seed: u64, cases: usize) -> SuiteConfig {
    SuiteConfig {
        cases: Some(cases),
        ..SuiteConfig::with_seed(seed)
    }
}

#[test]
fn names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert!("a5".parse::<Suite>().is_err());
}

#[test]
fn every_suite_passes_a_few_cases() {
    for s in Suite::ALL {
        let r = run_suite(s, &small(11, 4));
        assert!(r.pass(), "{}: {:#?}", s.name(), r.failures);
        assert_eq!(r.cases_run, 4);
        assert_eq!(r.passed + r.skipped.len(), 4);
    }
}

#[test]
fn results_independent_of_parallelism() {
    let mut a = run_suite(Suite::I6, &small(2, 6));
    let mut b = run_suite(
        Suite::I6,
        &SuiteConfig {
            parallelism: Parallelism::Sequential,
            ..small(2, 6)
        },
    );
    a.wall_time_ms = None;
    b.wall_time_ms = None;
    assert_eq!(a, b);
}

#[test]
fn case_is_reproducible_alone() {
    let all = run_suite(Suite::A1, &small(4, 3));
    let (record, _) = run_case(Suite::A1, &small(4, 3), 2);
    assert_eq!(record.stream, "suite/a1/case2");
    let json = serde_json::to_string(&all).unwrap();
    assert!(json.contains("suite/a1/case") || all.failures.is_empty());
    assert!(record.input.get("rho").is_some());
}

#[test]
fn preconditions_become_skips() {
    let v: Verdict = CheckError::Precondition("x".into()).into();
    assert_eq!(v, Verdict::Skip(SkipKind::Precondition, "x".into()));
    let v: Verdict = CheckError::Internal("x".into()).into();
    assert_eq!(v, Verdict::Fail("x".into()));
}
