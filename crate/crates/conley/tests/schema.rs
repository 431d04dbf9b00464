//! The shipped JSON schema (`schema/conley-report.schema.json`) accepts
//! every report the tool produces, for success and failure paths alike.

use conley::config::RunConfig;
use conley::homology::FieldSpec;
use conley::report::{build_report, ingest};
use std::path::PathBuf;

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn compiled_schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(repo_root().join("schema/conley-report.schema.json"))
        .expect("schema file present");
    let doc: serde_json::Value = serde_json::from_str(&text).expect("schema parses");
    jsonschema::validator_for(&doc).expect("schema compiles")
}

fn validate_fixture(validator: &jsonschema::Validator, name: &str) {
    let config = RunConfig::load(&repo_root().join("fixtures").join(name)).unwrap();
    let (grid, samples, map) = ingest(&config).unwrap();
    let report = build_report(&config, &grid, &samples, &map, FieldSpec::Rational);
    let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn fixture_reports_validate() {
    let validator = compiled_schema();
    validate_fixture(&validator, "doubling.json");
    validate_fixture(&validator, "contracting.json");
}

#[test]
fn failure_reports_validate() {
    // a neighbourhood that cannot isolate still yields a schema-valid
    // report carrying an error object
    let validator = compiled_schema();
    let mut config = RunConfig::load(&repo_root().join("fixtures/doubling.json")).unwrap();
    config
        .neighbourhoods
        .insert("whole".into(), "[0, 1]".into());
    let (grid, samples, map) = ingest(&config).unwrap();
    let report = build_report(&config, &grid, &samples, &map, FieldSpec::Rational);
    assert!(report.first_error().is_some());
    let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}
