//! Matrix and vector files: JSON (`{"matrix": [...]}` or `{"vectors": [...]}`,
//! entries either numbers or `{"re": .., "im": ..}`) or headerless CSV with
//! `re, im` interleaved. The format is sniffed from the first character.

use std::fs;
use std::path::Path;

use conegap::{Complex, ComplexMatrix, ComplexVector};
use serde_json::Value;

use crate::CliError;

type Rows = Vec<Vec<Complex>>;

fn at(path: &Path, row: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::At {
        path: path.display().to_string(),
        row,
        col,
        msg: msg.into(),
    }
}

fn shape(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Shape {
        path: path.display().to_string(),
        msg: msg.into(),
    }
}

pub fn read_rows(path: &Path) -> Result<Rows, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let rows = match text.trim_start().chars().next() {
        Some('{') | Some('[') => parse_json(path, &text)?,
        Some(_) => parse_csv(path, &text)?,
        None => return Err(shape(path, "file is empty")),
    };
    if rows.is_empty() {
        return Err(shape(path, "no rows"));
    }
    Ok(rows)
}

fn parse_json(path: &Path, text: &str) -> Result<Rows, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.display().to_string(),
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    let rows = match &doc {
        Value::Array(rows) => rows,
        Value::Object(map) => match map.get("matrix").or_else(|| map.get("vectors")) {
            Some(Value::Array(rows)) => rows,
            Some(_) => return Err(shape(path, "\"matrix\" must be an array of rows")),
            None => return Err(shape(path, "expected a \"matrix\" or \"vectors\" key")),
        },
        _ => return Err(shape(path, "expected an object or an array")),
    };
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let Value::Array(entries) = row else {
                return Err(at(path, i + 1, 1, "row is not an array"));
            };
            entries
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    json_entry(v).ok_or_else(|| {
                        at(
                            path,
                            i + 1,
                            j + 1,
                            format!("expected a number or {{\"re\", \"im\"}}, found {v}"),
                        )
                    })
                })
                .collect()
        })
        .collect()
}

fn json_entry(v: &Value) -> Option<Complex> {
    match v {
        Value::Number(x) => Some(Complex::new(x.as_f64()?, 0.0)),
        Value::Object(m) => {
            let part = |k: &str| match m.get(k) {
                None => Some(0.0),
                Some(x) => x.as_f64(),
            };
            if m.keys().any(|k| k != "re" && k != "im") {
                return None;
            }
            Some(Complex::new(part("re")?, part("im")?))
        }
        _ => None,
    }
}

fn parse_csv(path: &Path, text: &str) -> Result<Rows, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(i + 1, |p| p.line() as usize);
            at(path, line, 1, e.to_string())
        })?;
        if record.len() % 2 != 0 {
            return Err(at(
                path,
                i + 1,
                record.len(),
                "expected an even number of columns (re, im pairs)",
            ));
        }
        let mut row = Vec::with_capacity(record.len() / 2);
        for j in (0..record.len()).step_by(2) {
            let num = |c: usize| {
                record[c].parse::<f64>().map_err(|_| {
                    at(
                        path,
                        i + 1,
                        c + 1,
                        format!("invalid number '{}'", &record[c]),
                    )
                })
            };
            row.push(Complex::new(num(j)?, num(j + 1)?));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let rows = read_rows(path)?;
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(shape(
            path,
            format!(
                "matrix is not square: {n} rows, row {} has {} entries",
                i + 1,
                row.len()
            ),
        ));
    }
    Ok(ComplexMatrix::from_rows(rows)?)
}

/// At least `min` vectors of one common dimension.
pub fn read_vectors(path: &Path, min: usize) -> Result<Vec<ComplexVector>, CliError> {
    let rows = read_rows(path)?;
    if rows.len() < min {
        return Err(shape(
            path,
            format!("need at least {min} vectors, found {}", rows.len()),
        ));
    }
    let n = rows[0].len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(shape(
            path,
            format!("vector {} has {} entries, expected {n}", i + 1, row.len()),
        ));
    }
    rows.into_iter()
        .map(|r| Ok(ComplexVector::new(r)?))
        .collect()
}

/// Comma-separated entries such as `1,0` or `1+2i,0.5-i`.
pub fn parse_vector(text: &str) -> Result<ComplexVector, CliError> {
    let entries = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<Complex>()
                .map_err(|_| CliError::Usage(format!("invalid vector entry '{}'", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComplexVector::new(entries)?)
}
