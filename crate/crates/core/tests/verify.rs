use plgroups::verify::{run_suite, Report, Suite, VerifyConfig};

fn run(suite: Suite) -> Report {
    let report = run_suite(suite, &VerifyConfig::default()).unwrap();
    for c in report.failures() {
        eprintln!("FAILED {} {}", c.name, c.detail);
    }
    report
}

#[test]
fn thompson_suite_passes() {
    assert!(run(Suite::Thompson).passed);
}

#[test]
fn labelling_suite_passes() {
    assert!(run(Suite::Labelling).passed);
}

#[test]
fn line_suite_passes() {
    assert!(run(Suite::Line).passed);
}

#[test]
fn extension_suite_passes() {
    assert!(run(Suite::Extension).passed);
}

#[test]
fn reports_are_sorted_and_round_trip() {
    let report = run(Suite::Thompson);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let json = serde_json::to_string_pretty(&report).unwrap();
    let back: Report = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
}

#[test]
fn reports_are_deterministic() {
    let cfg = VerifyConfig { rng_seed: 11, ..VerifyConfig::default() };
    assert_eq!(run_suite(Suite::Labelling, &cfg).unwrap(), run_suite(Suite::Labelling, &cfg).unwrap());
}

#[test]
fn suite_names_parse() {
    for name in Suite::NAMES {
        let s: Suite = name.parse().unwrap();
        assert_eq!(s.to_string(), name);
    }
    assert!("everything".parse::<Suite>().is_err());
    let bad = VerifyConfig { window: (3, 3), ..VerifyConfig::default() };
    assert!(run_suite(Suite::Thompson, &bad).is_err());
}

#[test]
fn tau_contrast_runs() {
    let cfg = VerifyConfig { seed: "tau".into(), ..VerifyConfig::default() };
    let report = run_suite(Suite::Labelling, &cfg).unwrap();
    assert!(report.checks.iter().any(|c| c.name == "labelling/tau-contrast" && c.passed));
}
