//! Pins the report layout. Set `MIQ_UPDATE_GOLDEN=1` to rewrite the golden
//! file after an intentional schema change (and bump `SCHEMA_VERSION`).

use std::path::PathBuf;

use miq_core::inequalities::Statement;
use miq_core::suite::{run_suite, DimRange, Report, SuiteConfig, SCHEMA_VERSION};
use serde_json::{Map, Value};

/// Replaces every leaf by its JSON type and keeps one element per array.
fn shape(v: &Value) -> Value {
    match v {
        Value::Null => Value::String("null".into()),
        Value::Bool(_) => Value::String("bool".into()),
        Value::Number(_) => Value::String("number".into()),
        Value::String(_) => Value::String("string".into()),
        Value::Array(xs) => Value::Array(xs.first().map(shape).into_iter().collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), shape(v))).collect::<Map<_, _>>()),
    }
}

fn sample_report() -> Report {
    run_suite(&SuiteConfig {
        statements: vec![Statement::MainTheorem, Statement::CxSearch],
        dims: DimRange { lo: 2, hi: 2 },
        trials_per_cell: 1,
        master_seed: 3,
        search_budget: 20,
        function_filters: Some(vec!["brick:s=1".into(), "min1".into()]),
        ..SuiteConfig::default()
    })
    .unwrap()
}

#[test]
fn report_schema_matches_golden() {
    let report = sample_report();
    let actual = shape(&serde_json::to_value(&report).unwrap());
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/report_schema.json");
    if std::env::var_os("MIQ_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
    }
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(actual, golden, "report schema drifted from tests/golden/report_schema.json");
    assert_eq!(report.schema_version, SCHEMA_VERSION);
}

#[test]
fn summary_counts_match_records() {
    let report = sample_report();
    for s in &report.summary {
        let rs: Vec<_> = report.records.iter().filter(|r| r.statement == s.statement).collect();
        assert_eq!(s.trials, rs.len());
        assert_eq!(s.passes, rs.iter().filter(|r| r.holds).count());
    }
    let back = Report::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back.records, report.records);
}
