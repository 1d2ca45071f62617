//! Module files and report serialization.
//!
//! Module files are JSON objects
//! `{"field", "num_vars", "num_relations", "exponents", "dim", "operators"}`
//! with operators as arrays of matrix rows. [`module_to_json`] writes a
//! canonical layout (one matrix row per line) so that saving a loaded
//! canonical file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fields::{Field, FieldError, FieldSpec};
use crate::linalg::Matrix;
use crate::module_rep::{validate_module, ModuleError, ModuleRep, RingSpec, Violation};
use crate::resolutions::BettiTable;
use crate::varieties::{PointRecord, RankReport, SupportReport, DEFAULT_MAX_POINTS};

/// Version tag carried by every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable overriding the enumeration bound.
pub const MAX_POINTS_ENV: &str = "HYPERVAR_MAX_POINTS";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dim is {declared} but operator {index} has {rows} rows")]
    DimMismatch { declared: usize, index: usize, rows: usize },
    #[error("operator {index} row {row} has {found} entries, expected {expected}")]
    RaggedRow { index: usize, row: usize, found: usize, expected: usize },
    #[error("num_relations is {declared} but {found} exponents are listed")]
    ExponentCount { declared: usize, found: usize },
    #[error("invalid module: {0}")]
    Invalid(Violation),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleFile {
    field: FieldSpec,
    num_vars: usize,
    num_relations: usize,
    exponents: Vec<u32>,
    dim: usize,
    operators: Vec<Vec<Vec<i64>>>,
}

fn entry(field: &Field, x: i64) -> Result<u32, IoError> {
    if field.is_prime_field() {
        Ok(field.from_int(x))
    } else if x < 0 {
        Err(IoError::Field(FieldError::OutOfRange(x.unsigned_abs())))
    } else {
        Ok(field.check(u32::try_from(x).map_err(|_| FieldError::OutOfRange(x as u64))?)?)
    }
}

/// Parses a module without checking the algebraic invariants.
pub fn parse_module_unchecked(text: &str) -> Result<ModuleRep, IoError> {
    let file: ModuleFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if file.exponents.len() != file.num_relations {
        return Err(IoError::ExponentCount { declared: file.num_relations, found: file.exponents.len() });
    }
    let field = Field::new(file.field)?;
    let ring = RingSpec::new(&field, file.num_vars, file.exponents)?;
    let mut ops = Vec::with_capacity(file.operators.len());
    for (i, rows) in file.operators.iter().enumerate() {
        if rows.len() != file.dim {
            return Err(IoError::DimMismatch { declared: file.dim, index: i + 1, rows: rows.len() });
        }
        let mut data = Vec::with_capacity(file.dim * file.dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != file.dim {
                return Err(IoError::RaggedRow { index: i + 1, row: r + 1, found: row.len(), expected: file.dim });
            }
            for &x in row {
                data.push(entry(&field, x)?);
            }
        }
        ops.push(Matrix::from_vec(&field, file.dim, file.dim, data).map_err(ModuleError::from)?);
    }
    Ok(ModuleRep::new(ring, file.dim, ops)?)
}

/// Parses and validates a module.
pub fn parse_module(text: &str) -> Result<ModuleRep, IoError> {
    let module = parse_module_unchecked(text)?;
    validate_module(&module).map_err(IoError::Invalid)?;
    Ok(module)
}

pub fn load_module(path: impl AsRef<Path>) -> Result<ModuleRep, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io { path: path.display().to_string(), source })?;
    parse_module(&text)
}

fn matrix_rows(m: &Matrix) -> Vec<String> {
    (0..m.rows()).map(|r| format!("[{}]", m.row(r).iter().map(u32::to_string).collect::<Vec<_>>().join(", "))).collect()
}

/// Canonical JSON for a module: fixed key order, one matrix row per line.
pub fn module_to_json(module: &ModuleRep) -> String {
    let ring = module.ring();
    let field = serde_json::to_string(module.field().spec()).expect("field spec serializes");
    let exps = ring.exponents().iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"field\": {field},");
    let _ = writeln!(out, "  \"num_vars\": {},", ring.num_vars());
    let _ = writeln!(out, "  \"num_relations\": {},", ring.num_relations());
    let _ = writeln!(out, "  \"exponents\": [{exps}],");
    let _ = writeln!(out, "  \"dim\": {},", module.dim());
    let ops: Vec<String> = module
        .operators()
        .iter()
        .map(|m| {
            let rows = matrix_rows(m);
            if rows.is_empty() {
                "    []".to_string()
            } else {
                format!("    [\n      {}\n    ]", rows.join(",\n      "))
            }
        })
        .collect();
    let _ = writeln!(out, "  \"operators\": [\n{}\n  ]", ops.join(",\n"));
    out.push_str("}\n");
    out
}

pub fn save_module(module: &ModuleRep, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    std::fs::write(path, module_to_json(module)).map_err(|source| IoError::Io { path: path.display().to_string(), source })
}

/// Enumeration bound: `HYPERVAR_MAX_POINTS` when set and numeric, else the default.
pub fn max_points() -> u64 {
    std::env::var(MAX_POINTS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_POINTS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format {other:?} (json, csv or table)")),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Points as comma-separated formatted field elements.
pub fn format_point(field: &Field, point: &[u32]) -> String {
    point.iter().map(|&a| field.format(a)).collect::<Vec<_>>().join(",")
}

/// Right-pads every column to its widest cell.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

const SUPPORT_HEADER: [&str; 6] = ["point", "member", "beta_d", "beta_d1", "rankC", "r"];

fn support_cells(field: &Field, p: &PointRecord) -> Vec<String> {
    vec![
        format_point(field, &p.point),
        p.member.to_string(),
        opt(p.betti.map(|b| b.0)),
        opt(p.betti.map(|b| b.1)),
        opt(p.rank.map(|r| r.0)),
        opt(p.rank.map(|r| r.1)),
    ]
}

pub fn support_to_value(report: &SupportReport) -> Value {
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| {
            json!({
                "point": p.point,
                "member": p.member,
                "beta_d": p.betti.map(|b| b.0),
                "beta_d1": p.betti.map(|b| b.1),
                "rankC": p.rank.map(|r| r.0),
                "r": p.rank.map(|r| r.1),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "kind": "support",
        "field_order": report.field_order,
        "num_relations": report.num_relations,
        "stable_rank": report.stable_rank,
        "member_count": report.member_count(),
        "points": points,
    })
}

#[derive(Deserialize)]
struct PointJson {
    point: Vec<u32>,
    member: bool,
    beta_d: Option<usize>,
    beta_d1: Option<usize>,
    #[serde(rename = "rankC")]
    rank_c: Option<usize>,
    r: Option<usize>,
}

#[derive(Deserialize)]
struct SupportJson {
    schema: u32,
    field_order: u32,
    num_relations: usize,
    stable_rank: usize,
    points: Vec<PointJson>,
}

/// Inverse of the JSON support report.
pub fn support_from_json(text: &str) -> Result<SupportReport, IoError> {
    let raw: SupportJson = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if raw.schema != SCHEMA_VERSION {
        return Err(IoError::Parse(format!("unsupported schema {}", raw.schema)));
    }
    let points = raw
        .points
        .into_iter()
        .map(|p| PointRecord {
            point: p.point,
            member: p.member,
            betti: p.beta_d.zip(p.beta_d1),
            rank: p.rank_c.zip(p.r),
        })
        .collect();
    Ok(SupportReport { field_order: raw.field_order, num_relations: raw.num_relations, stable_rank: raw.stable_rank, points })
}

pub fn emit_support(report: &SupportReport, field: &Field, format: Format) -> String {
    let rows: Vec<Vec<String>> = report.points.iter().map(|p| support_cells(field, p)).collect();
    match format {
        Format::Json => serde_json::to_string_pretty(&support_to_value(report)).expect("json") + "\n",
        Format::Csv => {
            let mut out = SUPPORT_HEADER.join(",") + "\n";
            for row in rows {
                out.push_str(&row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        Format::Table => render_table(&SUPPORT_HEADER, &rows),
    }
}

pub fn emit_rank(report: &RankReport, field: &Field, format: Format) -> String {
    let rows: Vec<Vec<String>> = report.points.iter().map(|(p, free)| vec![format_point(field, p), free.to_string()]).collect();
    match format {
        Format::Json => {
            let points: Vec<Value> = report.points.iter().map(|(p, free)| json!({"point": p, "free": free})).collect();
            let v = json!({
                "schema": SCHEMA_VERSION,
                "kind": "rank_variety",
                "field_order": report.field_order,
                "non_free_count": report.non_free_count(),
                "points": points,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Csv => {
            let mut out = "point,free\n".to_string();
            for row in rows {
                out.push_str(&format!("{},{}\n", csv_field(&row[0]), row[1]));
            }
            out
        }
        Format::Table => render_table(&["point", "free"], &rows),
    }
}

pub fn betti_to_value(table: &BettiTable) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "betti": table.betti,
        "stable_pair": table.stable_pair.map(|(e, o)| vec![e, o]),
    })
}

pub fn emit_betti(table: &BettiTable, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&betti_to_value(table)).expect("json") + "\n",
        Format::Csv => {
            let mut out = "degree,betti\n".to_string();
            for (i, b) in table.betti.iter().enumerate() {
                out.push_str(&format!("{i},{b}\n"));
            }
            out
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = table.betti.iter().enumerate().map(|(i, b)| vec![i.to_string(), b.to_string()]).collect();
            let mut out = render_table(&["degree", "betti"], &rows);
            match table.stable_pair {
                Some((e, o)) => out.push_str(&format!("stable pair (even, odd): ({e}, {o})\n")),
                None => out.push_str("stable pair: not detected\n"),
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module_rep::{random_module, regular_module};
    use crate::varieties::{support_enumerate, Method};

    fn f2_ring() -> RingSpec {
        RingSpec::elementary_abelian(&Field::prime(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn canonical_round_trip() {
        let m = random_module(&f2_ring(), 2, 2, 5).unwrap();
        let text = module_to_json(&m);
        let back = parse_module(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(module_to_json(&back), text);
        let f4 = Field::galois(2, 2).unwrap();
        let big = regular_module(&f2_ring()).unwrap().extend_scalars(&f4).unwrap();
        assert_eq!(parse_module(&module_to_json(&big)).unwrap(), big);
    }

    #[test]
    fn residue_field_layout() {
        let k = ModuleRep::residue_field(&f2_ring());
        let expected = "{\n  \"field\": {\"p\":2,\"ext_degree\":1},\n  \"num_vars\": 2,\n  \"num_relations\": 2,\n  \"exponents\": [2, 2],\n  \"dim\": 1,\n  \"operators\": [\n    [\n      [0]\n    ],\n    [\n      [0]\n    ]\n  ]\n}\n";
        assert_eq!(module_to_json(&k), expected);
    }

    #[test]
    fn rejects_bad_files() {
        let bad = r#"{"field":{"p":2},"num_vars":2,"num_relations":2,"exponents":[2,2],"dim":2,
            "operators":[[[0,1],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(matches!(parse_module(bad), Err(IoError::Invalid(Violation::NotCommuting(1, 2)))));
        assert!(parse_module_unchecked(bad).is_ok());
        let ragged = r#"{"field":{"p":2},"num_vars":1,"num_relations":1,"exponents":[2],"dim":2,"operators":[[[0,1],[0]]]}"#;
        assert!(matches!(parse_module(ragged), Err(IoError::RaggedRow { .. })));
        assert!(matches!(parse_module("{"), Err(IoError::Parse(_))));
        let negative = r#"{"field":{"p":3},"num_vars":1,"num_relations":1,"exponents":[3],"dim":1,"operators":[[[-3]]]}"#;
        assert_eq!(parse_module(negative).unwrap().operator(0).get(0, 0), 0);
    }

    #[test]
    fn support_reports() {
        let k = ModuleRep::residue_field(&f2_ring());
        let rep = support_enumerate(&k, 2, Method::Both, 100).unwrap();
        let field = k.field();
        let csv = emit_support(&rep, field, Format::Csv);
        assert_eq!(csv.lines().next().unwrap(), "point,member,beta_d,beta_d1,rankC,r");
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.contains("\"1,0\",true,"));
        let json = emit_support(&rep, field, Format::Json);
        assert_eq!(support_from_json(&json).unwrap(), rep);
        let empty = SupportReport { field_order: 2, num_relations: 2, stable_rank: 2, points: vec![] };
        assert_eq!(emit_support(&empty, field, Format::Csv), "point,member,beta_d,beta_d1,rankC,r\n");
        let table = emit_support(&rep, field, Format::Table);
        let widths: Vec<usize> = table.lines().map(|l| l.find("member").or_else(|| l.find("true")).unwrap()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>(), Ok(Format::Csv));
        assert!("xml".parse::<Format>().is_err());
    }
}
