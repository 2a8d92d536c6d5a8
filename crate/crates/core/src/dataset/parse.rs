//! Delimited-text parsing against the fixed schema.

use std::io::Read;

use super::schema::{self, ColumnKind, COLUMNS, GRADE_MAX};
use super::{DatasetError, Result};

/// One raw cell, typed by its schema column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawField {
    Text(String),
    Integer(i64),
}

impl RawField {
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            RawField::Integer(v) => Some(*v),
            RawField::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            RawField::Text(s) => Some(s),
            RawField::Integer(_) => None,
        }
    }
}

/// One data row: 30 attributes plus G1, G2, G3, in schema order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawStudentRecord {
    fields: Vec<RawField>,
}

impl RawStudentRecord {
    /// Builds a record from fields in schema order, validating each one.
    pub fn new(fields: Vec<RawField>) -> Result<Self> {
        if fields.len() != COLUMNS.len() {
            return Err(DatasetError::MalformedRow {
                line: 0,
                reason: format!("expected {} fields, got {}", COLUMNS.len(), fields.len()),
            });
        }
        for (spec, field) in COLUMNS.iter().zip(&fields) {
            check_field(0, spec.name, spec.kind, field)?;
        }
        Ok(Self { fields })
    }

    pub fn fields(&self) -> &[RawField] {
        &self.fields
    }

    pub fn get(&self, column: &str) -> Option<&RawField> {
        schema::column_index(column).map(|i| &self.fields[i])
    }

    /// G1, G2 and G3.
    pub fn grades(&self) -> [i64; 3] {
        let g = |i: usize| {
            self.fields[schema::ATTRIBUTE_COUNT + i]
                .as_integer()
                .unwrap_or(0)
        };
        [g(0), g(1), g(2)]
    }

    pub fn final_grade(&self) -> i64 {
        self.grades()[2]
    }

    pub fn attributes(&self) -> AttributeRow {
        AttributeRow {
            fields: self.fields[..schema::ATTRIBUTE_COUNT].to_vec(),
        }
    }
}

/// The 30 attribute fields of a row whose grades are unknown (prediction input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributeRow {
    fields: Vec<RawField>,
}

impl AttributeRow {
    pub fn fields(&self) -> &[RawField] {
        &self.fields
    }
}

/// Picks `;` or `,` by counting occurrences in the header line.
pub fn detect_delimiter(header: &str) -> u8 {
    let semis = header.matches(';').count();
    let commas = header.matches(',').count();
    if semis > commas {
        b';'
    } else {
        b','
    }
}

/// Parses a header-bearing table with all 33 schema columns.
pub fn parse_csv<R: Read>(source: R, delimiter: u8) -> Result<Vec<RawStudentRecord>> {
    let text = read_all(source)?;
    let rows = parse_rows(&text, delimiter, true)?;
    Ok(rows
        .into_iter()
        .map(|fields| RawStudentRecord { fields })
        .collect())
}

/// [`parse_csv`] with the delimiter detected from the header line.
pub fn parse_csv_auto<R: Read>(source: R) -> Result<Vec<RawStudentRecord>> {
    let text = read_all(source)?;
    let delimiter = detect_delimiter(text.lines().next().unwrap_or(""));
    let rows = parse_rows(&text, delimiter, true)?;
    Ok(rows
        .into_iter()
        .map(|fields| RawStudentRecord { fields })
        .collect())
}

/// Parses rows that carry the 30 attributes; grade columns may be present and
/// are ignored. Delimiter is auto-detected.
pub fn parse_attribute_rows<R: Read>(source: R) -> Result<Vec<AttributeRow>> {
    let text = read_all(source)?;
    let delimiter = detect_delimiter(text.lines().next().unwrap_or(""));
    let rows = parse_rows(&text, delimiter, false)?;
    Ok(rows
        .into_iter()
        .map(|mut fields| {
            fields.truncate(schema::ATTRIBUTE_COUNT);
            AttributeRow { fields }
        })
        .collect())
}

fn read_all<R: Read>(mut source: R) -> Result<String> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|e| DatasetError::MalformedRow {
        line: 0,
        reason: format!("input is not UTF-8: {e}"),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text).to_owned();
    if text.trim().is_empty() {
        return Err(DatasetError::EmptyInput);
    }
    Ok(text)
}

/// Returns fields in schema order. With `require_grades = false` the grade
/// slots of rows lacking grade columns are filled with zero.
fn parse_rows(text: &str, delimiter: u8, require_grades: bool) -> Result<Vec<Vec<RawField>>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers()?.clone();
    let mut positions: Vec<Option<usize>> = vec![None; COLUMNS.len()];
    for (pos, name) in header.iter().enumerate() {
        let idx = schema::column_index(name)
            .ok_or_else(|| DatasetError::BadHeader(format!("unknown column {name:?}")))?;
        if positions[idx].replace(pos).is_some() {
            return Err(DatasetError::BadHeader(format!(
                "duplicate column {name:?}"
            )));
        }
    }
    for (spec, pos) in COLUMNS.iter().zip(&positions) {
        let needed = require_grades || spec.kind != ColumnKind::Grade;
        if needed && pos.is_none() {
            return Err(DatasetError::BadHeader(format!(
                "missing column {:?}",
                spec.name
            )));
        }
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: format!("expected {} fields, got {}", header.len(), record.len()),
            });
        }
        let mut fields = Vec::with_capacity(COLUMNS.len());
        for (spec, pos) in COLUMNS.iter().zip(&positions) {
            let Some(pos) = pos else {
                fields.push(RawField::Integer(0));
                continue;
            };
            let cell = &record[*pos];
            if cell.is_empty() {
                return Err(DatasetError::MalformedRow {
                    line,
                    reason: format!("missing value for {}", spec.name),
                });
            }
            let field = match spec.kind {
                ColumnKind::Categorical(_) => RawField::Text(cell.to_owned()),
                ColumnKind::Integer | ColumnKind::Grade => {
                    RawField::Integer(cell.parse().map_err(|_| DatasetError::MalformedRow {
                        line,
                        reason: format!("{} is not an integer: {cell:?}", spec.name),
                    })?)
                }
            };
            check_field(line, spec.name, spec.kind, &field)?;
            fields.push(field);
        }
        rows.push(fields);
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyInput);
    }
    Ok(rows)
}

fn check_field(line: u64, column: &str, kind: ColumnKind, field: &RawField) -> Result<()> {
    match (kind, field) {
        (ColumnKind::Categorical(allowed), RawField::Text(v)) => {
            if allowed.contains(&v.as_str()) {
                Ok(())
            } else {
                Err(DatasetError::UnknownCategory {
                    line,
                    column: column.to_owned(),
                    value: v.clone(),
                })
            }
        }
        (ColumnKind::Integer, RawField::Integer(v)) if *v >= 0 => Ok(()),
        (ColumnKind::Grade, RawField::Integer(v)) => {
            if (0..=GRADE_MAX).contains(v) {
                Ok(())
            } else {
                Err(DatasetError::GradeOutOfRange {
                    line,
                    column: column.to_owned(),
                    value: *v,
                })
            }
        }
        _ => Err(DatasetError::MalformedRow {
            line,
            reason: format!("bad value for {column}: {field:?}"),
        }),
    }
}
