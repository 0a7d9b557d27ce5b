use koszul_core::ring::IdealSpec;
use koszul_core::FieldKind;
use koszul_lab::corpus::Hypothesis;
use koszul_lab::{replay, run_suite, CaseInput, LabError, RunConfig, Suite, Verdict};

fn small(seed: u64, size: usize) -> RunConfig {
    RunConfig {
        size: Some(size),
        ..RunConfig::with_seed(seed)
    }
}

#[test]
fn every_suite_passes_on_a_small_corpus() {
    for suite in Suite::ALL {
        let report = run_suite(suite, &small(3, 12)).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "{suite}: {}", report.render_table());
        assert!(!report.cases.is_empty());
        assert_eq!(report.summary.pass, report.cases.len());
    }
}

#[test]
fn embedded_cases_replay_in_isolation() {
    for suite in [
        Suite::Regb,
        Suite::Greeny,
        Suite::Sato,
        Suite::Maincyc,
        Suite::Multi2,
        Suite::Maps,
    ] {
        let report = run_suite(suite, &small(11, 6)).unwrap();
        for case in &report.cases {
            let again = replay(suite, &case.input, FieldKind::Rationals, report.cap).unwrap();
            assert_eq!(again.verdict, case.verdict);
            assert_eq!(again.observed, case.observed, "{suite} case {}", case.index);
        }
    }
}

#[test]
fn json_reports_are_deterministic() {
    for suite in [Suite::Regb, Suite::Maps, Suite::Piper] {
        let a = run_suite(suite, &small(5, 10)).unwrap().to_json();
        let b = run_suite(suite, &small(5, 10)).unwrap().to_json();
        assert_eq!(a, b);
        let c = run_suite(suite, &small(6, 10)).unwrap().to_json();
        assert_ne!(a, c, "{suite}: a new seed should change the corpus");
    }
}

#[test]
fn prime_fields_agree_with_the_rationals() {
    let cfg = RunConfig {
        field: FieldKind::Prime(32003),
        ..small(2, 8)
    };
    for suite in [Suite::Regb, Suite::Thm1, Suite::Gen2, Suite::Check] {
        let p = run_suite(suite, &cfg).unwrap();
        let q = run_suite(suite, &small(2, 8)).unwrap();
        assert_eq!(p.verdict, Verdict::Pass);
        assert_eq!(p.field, "p=32003");
        for (a, b) in p.cases.iter().zip(&q.cases) {
            assert_eq!(a.observed, b.observed);
        }
    }
}

#[test]
fn characteristic_floors_are_enforced() {
    for (suite, p) in [
        (Suite::Thm1, 3),
        (Suite::Gen2, 2),
        (Suite::Maincyc, 3),
        (Suite::Multi2, 3),
        (Suite::Check, 3),
    ] {
        let cfg = RunConfig {
            field: FieldKind::Prime(p),
            ..small(0, 4)
        };
        match run_suite(suite, &cfg) {
            Err(e @ LabError::Usage(_)) => assert_eq!(e.exit_code(), 2),
            other => panic!("{suite} over GF({p}) should be refused, got {other:?}"),
        }
    }
    assert!(run_suite(
        Suite::Thm1,
        &RunConfig {
            field: FieldKind::Prime(5),
            ..small(0, 4)
        }
    )
    .is_ok());
}

#[test]
fn hypotheses_outside_a_theorem_are_not_passes() {
    // (x^2, xy) is not artinian
    let input = CaseInput::Ideal {
        ideal: IdealSpec {
            blocks: vec![2],
            generators: Some(vec![vec![2, 0], vec![1, 1]]),
            power: None,
        },
        t: 1,
        quotient: None,
    };
    for suite in [Suite::Regb, Suite::Greeny, Suite::RemarkB] {
        let rec = replay(suite, &input, FieldKind::Rationals, 2).unwrap();
        assert_eq!(rec.verdict, Verdict::Infeasible, "{suite}");
        assert!(rec.message.unwrap().contains("artinian"));
    }
    // but it is a legitimate probe case, with reg Z_1 = reg I + 1
    let rec = replay(Suite::ProbeQ1, &input, FieldKind::Rationals, 2).unwrap();
    assert_eq!(rec.verdict, Verdict::Pass);
    assert_eq!(rec.observed["gap"], 0);
}

#[test]
fn known_regularities_in_reports() {
    // 𝔪 = (x, y): Z_1 is generated by the Koszul relation of degree 2
    let input = CaseInput::Ideal {
        ideal: IdealSpec {
            blocks: vec![2],
            generators: None,
            power: Some(vec![1]),
        },
        t: 1,
        quotient: None,
    };
    let rec = replay(Suite::ProbeQ1, &input, FieldKind::Rationals, 2).unwrap();
    assert_eq!(rec.observed["Z"]["reg"], 2);
    assert_eq!(rec.observed["bound"], 2);
    // 𝔪^2 in two variables: Z_1 has two linear syzygies in degree 3
    let input = CaseInput::Ideal {
        ideal: IdealSpec {
            blocks: vec![2],
            generators: None,
            power: Some(vec![2]),
        },
        t: 1,
        quotient: None,
    };
    let rec = replay(Suite::Regb, &input, FieldKind::Rationals, 2).unwrap();
    assert_eq!(rec.observed["Z"]["reg"], 3);
    assert_eq!(rec.observed["Z"]["witnesses"][0]["dim"], 2);
}

#[test]
fn probe_replays_the_square_example() {
    let cfg = RunConfig {
        probe_class: Hypothesis::StronglyStable,
        ..small(1, 10)
    };
    let report = run_suite(Suite::ProbeQ1, &cfg).unwrap();
    assert_eq!(report.verdict, Verdict::Pass);
    let square = report.cases.last().unwrap();
    assert!(matches!(square.input, CaseInput::Square { .. }));
    assert_eq!(square.observed["reg_I"], 3);
    assert_eq!(square.observed["reg_I_squared"], 7);
    assert_eq!(square.observed["mechanism_exhibited"], true);
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert_eq!("remark-b".parse::<Suite>().unwrap(), Suite::RemarkB);
    assert!("nope".parse::<Suite>().is_err());
}
