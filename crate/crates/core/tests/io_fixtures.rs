use std::path::PathBuf;

use hypervar_core::io::{
    emit_support, load_module, module_to_json, parse_module, support_from_json, support_to_value, Format, IoError,
};
use hypervar_core::module_rep::Violation;
use hypervar_core::varieties::{support_enumerate, Method, SupportReport};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const CANONICAL: [&str; 5] = ["residue_field.json", "regular_f2.json", "quotient_t1.json", "monomial_f3.json", "f4_sum.json"];

#[test]
fn residue_field_fixture_has_dimension_one() {
    let m = load_module(fixture("residue_field.json")).unwrap();
    assert_eq!(m.dim(), 1);
    assert!(m.operators().iter().all(|t| t.is_zero()));
}

#[test]
fn canonical_fixtures_round_trip_byte_for_byte() {
    for name in CANONICAL {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let module = parse_module(&text).unwrap();
        assert_eq!(module_to_json(&module), text, "{name}");
    }
}

#[test]
fn noncommuting_fixture_names_the_pair() {
    match load_module(fixture("noncommuting.json")) {
        Err(IoError::Invalid(Violation::NotCommuting(1, 2))) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn failing_relation_is_reported() {
    match load_module(fixture("relation_fails.json")) {
        Err(IoError::Invalid(Violation::RelationFails { index: 1, exponent: 2 })) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn malformed_and_missing_files() {
    assert!(matches!(load_module(fixture("malformed.json")), Err(IoError::Parse(_))));
    assert!(matches!(load_module(fixture("absent.json")), Err(IoError::Io { .. })));
}

#[test]
fn support_report_json_round_trip() {
    let m = load_module(fixture("quotient_t1.json")).unwrap();
    let report = support_enumerate(&m, 4, Method::Both, 1000).unwrap();
    let text = serde_json::to_string(&support_to_value(&report)).unwrap();
    assert_eq!(support_from_json(&text).unwrap(), report);
}

#[test]
fn csv_shapes() {
    let m = load_module(fixture("quotient_t1.json")).unwrap();
    let empty = SupportReport { field_order: 2, num_relations: 2, stable_rank: 2, points: vec![] };
    assert_eq!(emit_support(&empty, m.field(), Format::Csv), "point,member,beta_d,beta_d1,rankC,r\n");
    let report = support_enumerate(&m, 2, Method::Both, 1000).unwrap();
    let csv = emit_support(&report, m.field(), Format::Csv);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("\"0,0\",true,"));
}

#[test]
fn reports_are_deterministic() {
    let m = load_module(fixture("monomial_f3.json")).unwrap();
    let a = emit_support(&support_enumerate(&m, 9, Method::Both, 1000).unwrap(), &hypervar_core::varieties::module_over_order(&m, 9).unwrap().field().clone(), Format::Json);
    let b = emit_support(&support_enumerate(&m, 9, Method::Both, 1000).unwrap(), &hypervar_core::varieties::module_over_order(&m, 9).unwrap().field().clone(), Format::Json);
    assert_eq!(a, b);
}
