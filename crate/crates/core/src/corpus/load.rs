use std::fs;
use std::path::Path;

use serde_json::Value;

use super::sources::{FileFormat, SourceRegistry, SourceSpec};
use super::RawRecord;
use crate::error::{Error, Result};

/// Fraction of malformed rows tolerated before a load aborts.
pub const DEFAULT_MALFORMED_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub records: Vec<RawRecord>,
    pub total_rows: usize,
    pub skipped_empty: usize,
    pub malformed: usize,
}

/// Loads a source file with the default registry and tolerance.
pub fn load_source(path: impl AsRef<Path>, source_kind: &str) -> Result<LoadReport> {
    load_source_with(
        &SourceRegistry::default(),
        path,
        source_kind,
        DEFAULT_MALFORMED_TOLERANCE,
    )
}

pub fn load_source_with(
    registry: &SourceRegistry,
    path: impl AsRef<Path>,
    source_kind: &str,
    malformed_tolerance: f64,
) -> Result<LoadReport> {
    let spec = registry.get(source_kind)?;
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = match spec.format {
        FileFormat::Csv => csv_rows(&text, spec)?,
        FileFormat::Ndjson => ndjson_rows(&text, spec),
    };

    let mut report = LoadReport {
        total_rows: rows.len(),
        ..LoadReport::default()
    };
    for row in rows {
        match row {
            None => report.malformed += 1,
            Some((text, _)) if text.trim().is_empty() => report.skipped_empty += 1,
            Some((text, label)) => report.records.push(RawRecord {
                source_id: source_kind.to_string(),
                text,
                original_label: label,
            }),
        }
    }
    if report.total_rows > 0
        && report.malformed as f64 / report.total_rows as f64 > malformed_tolerance
    {
        return Err(Error::TooManyMalformed {
            path: path.to_path_buf(),
            malformed: report.malformed,
            total: report.total_rows,
            tolerance: malformed_tolerance,
        });
    }
    Ok(report)
}

fn join_text<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    parts
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

type Row = Option<(String, String)>;

fn csv_rows(text: &str, spec: &SourceSpec) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("unreadable CSV header: {e}")))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Config(format!("CSV header lacks column `{name}`")))
    };
    let text_cols = spec
        .text_fields
        .iter()
        .map(|f| column(f))
        .collect::<Result<Vec<_>>>()?;
    let label_col = spec.label_field.as_deref().map(column).transpose()?;

    Ok(reader
        .records()
        .map(|rec| {
            let rec = rec.ok()?;
            let text = join_text(text_cols.iter().map(|&c| rec.get(c).unwrap_or("")));
            let label = match (label_col, &spec.fixed_label) {
                (Some(c), _) => rec.get(c)?.to_string(),
                (None, Some(fixed)) => fixed.clone(),
                (None, None) => return None,
            };
            Some((text, label))
        })
        .collect())
}

fn json_scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn ndjson_rows(text: &str, spec: &SourceSpec) -> Vec<Row> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let obj: Value = serde_json::from_str(line).ok()?;
            let obj = obj.as_object()?;
            let mut parts = Vec::with_capacity(spec.text_fields.len());
            for f in &spec.text_fields {
                match obj.get(f) {
                    Some(Value::String(s)) => parts.push(s.as_str()),
                    Some(Value::Null) | None => {}
                    Some(_) => return None,
                }
            }
            let label = match (&spec.label_field, &spec.fixed_label) {
                (Some(f), _) => json_scalar(obj.get(f)?)?,
                (None, Some(fixed)) => fixed.clone(),
                (None, None) => return None,
            };
            Some((join_text(parts.into_iter()), label))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn skips_empty_text_rows() {
        let f = write_tmp(
            "id,label,statement\n1,true,a claim\n2,false,\"another, quoted\"\n3,false,   \n4,true,last\n",
            ".csv",
        );
        let r = load_source(f.path(), "liar").unwrap();
        assert_eq!(r.records.len(), 3);
        assert_eq!(r.skipped_empty, 1);
        assert_eq!(r.records[1].text, "another, quoted");
    }

    #[test]
    fn unknown_kind() {
        let f = write_tmp("a\n", ".csv");
        assert!(matches!(load_source(f.path(), "foo"), Err(Error::UnknownSource(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_source("/nonexistent/liar.csv", "liar"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn malformed_beyond_tolerance() {
        let f = write_tmp("id,label,statement\n1,true,ok\n2,true\n3,false,fine\n", ".csv");
        assert!(matches!(
            load_source(f.path(), "liar"),
            Err(Error::TooManyMalformed { malformed: 1, total: 3, .. })
        ));
        let r = load_source_with(&SourceRegistry::default(), f.path(), "liar", 0.5).unwrap();
        assert_eq!((r.records.len(), r.malformed), (2, 1));
    }

    #[test]
    fn ndjson_fixed_label_and_scalars() {
        let f = write_tmp(
            "{\"text\":\"troll post\",\"user_key\":\"u\"}\n\n{\"text\":\"\"}\n",
            ".ndjson",
        );
        let r = load_source(f.path(), "nbc_troll").unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].original_label, "troll");
        assert_eq!(r.skipped_empty, 1);

        let g = write_tmp("{\"text\":\"viral\",\"is_fake_news\":true}\n", ".ndjson");
        let r = load_source(g.path(), "viral_2016").unwrap();
        assert_eq!(r.records[0].original_label, "true");
    }

    #[test]
    fn missing_column_is_schema_error() {
        let f = write_tmp("id,verdict,statement\n1,true,x\n", ".csv");
        assert!(matches!(load_source(f.path(), "liar"), Err(Error::Config(_))));
    }
}
