//! Serialization of record tables and mappings, plus parsing of the
//! CLI's composite flag values. Kept in the library so output stays
//! byte-stable and testable; the binary only does I/O and dispatch.

use thiserror::Error;

use crate::ingest::IndentUnit;
use crate::model::{Mapping, TaxonRecord, Taxonomy, TaxonomyError, WeightError, WeightProfile};

/// Header row for the tab-separated record table.
pub const TABLE_HEADER: &str = "depth\tchildren\tbrothers\tbrothersLeft\tsameLevel\tname";

/// Render the record table as TSV: one row per record, LF line endings,
/// no trailing tab. The header row is included only when asked for.
pub fn render_records_tsv(taxonomy: &Taxonomy, header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(TABLE_HEADER);
        out.push('\n');
    }
    for r in taxonomy.records() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.depth, r.children, r.brothers, r.brothers_left, r.same_level, r.name
        ));
    }
    out
}

/// Render the record table as a JSON array of objects keyed by the six
/// table column names.
pub fn render_records_json(taxonomy: &Taxonomy) -> String {
    let mut out = serde_json::to_string_pretty(taxonomy.records())
        .expect("record serialization cannot fail");
    out.push('\n');
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: expected six tab-separated fields")]
    FieldCount { line: usize },
    #[error("line {line}: '{value}' is not a non-negative integer")]
    BadCount { line: usize, value: String },
    #[error(transparent)]
    Structure(#[from] TaxonomyError),
}

/// Parse a TSV record table back into a taxonomy (unannotated; the
/// counters are carried along verbatim). An initial header row is
/// skipped. Inverse of [`render_records_tsv`].
pub fn parse_records_tsv(text: &str) -> Result<Taxonomy, TableError> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() || (idx == 0 && line == TABLE_HEADER) {
            continue;
        }
        let line_no = idx + 1;
        // The name is the last column and may itself contain tabs.
        let fields: Vec<&str> = line.splitn(6, '\t').collect();
        if fields.len() != 6 {
            return Err(TableError::FieldCount { line: line_no });
        }
        let mut counts = [0usize; 5];
        for (slot, field) in counts.iter_mut().zip(&fields[..5]) {
            *slot = field.parse().map_err(|_| TableError::BadCount {
                line: line_no,
                value: field.to_string(),
            })?;
        }
        records.push(TaxonRecord {
            depth: counts[0],
            children: counts[1],
            brothers: counts[2],
            brothers_left: counts[3],
            same_level: counts[4],
            name: fields[5].to_string(),
        });
    }
    Ok(Taxonomy::from_records(records)?)
}

/// Render mappings as TSV rows `source<TAB>target<TAB>confidence<TAB>=`,
/// confidence to four decimal places.
pub fn render_mappings_tsv(mappings: &[Mapping]) -> String {
    let mut out = String::new();
    for m in mappings {
        out.push_str(&format!(
            "{}\t{}\t{:.4}\t{}\n",
            m.source, m.target, m.confidence, m.relation
        ));
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlagError {
    #[error("invalid weights: expected six comma-separated values, found {0}")]
    WeightCount(usize),
    #[error("invalid weights: '{0}' is not a number")]
    WeightNumber(String),
    #[error("invalid weights: {0}")]
    Weight(#[from] WeightError),
    #[error("invalid indent spec '{0}': use 'tab' or a positive number of spaces")]
    Indent(String),
}

/// Parse the `--weights` flag: six comma-separated non-negative reals in
/// table order (depth, children, brothers, brothersLeft, sameLevel, name).
pub fn parse_weights(spec: &str) -> Result<WeightProfile, FlagError> {
    let fields: Vec<&str> = spec.split(',').collect();
    if fields.len() != 6 {
        return Err(FlagError::WeightCount(fields.len()));
    }
    let mut weights = [0.0f64; 6];
    for (slot, field) in weights.iter_mut().zip(&fields) {
        *slot = field
            .trim()
            .parse()
            .map_err(|_| FlagError::WeightNumber(field.trim().to_string()))?;
    }
    Ok(WeightProfile::new(weights)?)
}

/// Parse the `--indent` flag: `tab` or a positive decimal space count.
pub fn parse_indent_spec(spec: &str) -> Result<IndentUnit, FlagError> {
    if spec.eq_ignore_ascii_case("tab") {
        return Ok(IndentUnit::Tab);
    }
    match spec.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(IndentUnit::Spaces(n)),
        _ => Err(FlagError::Indent(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::annotate;

    fn t1_annotated() -> Taxonomy {
        let records = [(0, "A"), (1, "B"), (2, "D"), (2, "E"), (1, "C"), (2, "F")]
            .iter()
            .map(|&(depth, name)| TaxonRecord::new(depth, name))
            .collect();
        annotate(&Taxonomy::from_records(records).unwrap())
    }

    #[test]
    fn tsv_rows_match_annotated_counters() {
        let tsv = render_records_tsv(&t1_annotated(), false);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[3], "2\t0\t1\t1\t2\tE");
        assert!(tsv.ends_with('\n'));
        assert!(!tsv.contains("\t\n"));
    }

    #[test]
    fn tsv_header_is_opt_in() {
        let with = render_records_tsv(&t1_annotated(), true);
        assert!(with.starts_with(TABLE_HEADER));
        let without = render_records_tsv(&t1_annotated(), false);
        assert!(!without.contains("depth"));
    }

    #[test]
    fn empty_taxonomy_renders_empty_table() {
        let empty = Taxonomy::from_records(Vec::new()).unwrap();
        assert_eq!(render_records_tsv(&empty, false), "");
    }

    #[test]
    fn tsv_round_trips() {
        let t = t1_annotated();
        let tsv = render_records_tsv(&t, false);
        let back = parse_records_tsv(&tsv).unwrap();
        assert_eq!(back.records(), t.records());
        assert_eq!(render_records_tsv(&back, false), tsv);
        // With a header too.
        let back = parse_records_tsv(&render_records_tsv(&t, true)).unwrap();
        assert_eq!(back.records(), t.records());
    }

    #[test]
    fn tsv_round_trips_names_with_tabs() {
        let t = Taxonomy::from_records(vec![TaxonRecord::new(0, "odd\tname")]).unwrap();
        let back = parse_records_tsv(&render_records_tsv(&t, false)).unwrap();
        assert_eq!(back.records()[0].name, "odd\tname");
    }

    #[test]
    fn table_parse_errors() {
        assert_eq!(
            parse_records_tsv("1\t2\t3").unwrap_err(),
            TableError::FieldCount { line: 1 }
        );
        assert_eq!(
            parse_records_tsv("0\tx\t0\t0\t0\tA").unwrap_err(),
            TableError::BadCount { line: 1, value: "x".into() }
        );
        assert!(matches!(
            parse_records_tsv("1\t0\t0\t0\t0\tA").unwrap_err(),
            TableError::Structure(_)
        ));
    }

    #[test]
    fn json_uses_table_field_names() {
        let json = render_records_json(&t1_annotated());
        for key in ["\"depth\"", "\"brothersLeft\"", "\"sameLevel\"", "\"name\""] {
            assert!(json.contains(key), "missing {key}");
        }
        assert!(!json.contains("brothers_left"));
    }

    #[test]
    fn mapping_rows_use_four_decimals() {
        let rows = render_mappings_tsv(&[
            Mapping::new("A", "A", 1.0),
            Mapping::new("B", "C", 2.0 / 3.0),
        ]);
        assert_eq!(rows, "A\tA\t1.0000\t=\nB\tC\t0.6667\t=\n");
    }

    #[test]
    fn weights_flag_parsing() {
        let w = parse_weights("1,1,1,1,1,1").unwrap();
        assert_eq!(w, WeightProfile::uniform());
        assert_eq!(
            parse_weights("1,2,3").unwrap_err(),
            FlagError::WeightCount(3)
        );
        assert_eq!(
            parse_weights("1,2,3,4,5,x").unwrap_err(),
            FlagError::WeightNumber("x".into())
        );
        assert_eq!(
            parse_weights("0,0,0,0,0,0").unwrap_err(),
            FlagError::Weight(WeightError::AllZero)
        );
        assert_eq!(
            parse_weights("1,1,1,1,1,-1").unwrap_err(),
            FlagError::Weight(WeightError::Negative("name"))
        );
    }

    #[test]
    fn indent_flag_parsing() {
        assert_eq!(parse_indent_spec("tab").unwrap(), IndentUnit::Tab);
        assert_eq!(parse_indent_spec("4").unwrap(), IndentUnit::Spaces(4));
        assert!(parse_indent_spec("0").is_err());
        assert!(parse_indent_spec("two").is_err());
    }
}
