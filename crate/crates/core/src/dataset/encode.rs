use serde::{Deserialize, Serialize};

use super::parse::{AttributeRow, RawField, RawStudentRecord};
use super::schema::{ColumnKind, ATTRIBUTE_COUNT, COLUMNS};
use super::{DataMatrix, DatasetError, Result};

/// Ordered categories of one categorical column; a value's code is its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryTable {
    pub column: String,
    pub categories: Vec<String>,
}

/// Category → integer tables for every categorical column, tagged with a version.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingScheme {
    pub version: String,
    pub tables: Vec<CategoryTable>,
}

impl EncodingScheme {
    pub const ALPHABETICAL_V1: &'static str = "alphabetical-v1";

    /// Codes assigned in byte-wise ascending order of the category strings.
    pub fn alphabetical() -> Self {
        let tables = COLUMNS
            .iter()
            .filter_map(|spec| match spec.kind {
                ColumnKind::Categorical(values) => {
                    let mut categories: Vec<String> =
                        values.iter().map(|v| (*v).to_owned()).collect();
                    categories.sort();
                    Some(CategoryTable {
                        column: spec.name.to_owned(),
                        categories,
                    })
                }
                _ => None,
            })
            .collect();
        Self {
            version: Self::ALPHABETICAL_V1.to_owned(),
            tables,
        }
    }

    pub fn for_version(version: &str) -> Result<Self> {
        match version {
            Self::ALPHABETICAL_V1 => Ok(Self::alphabetical()),
            other => Err(DatasetError::UnknownScheme(other.to_owned())),
        }
    }

    pub fn table(&self, column: &str) -> Option<&CategoryTable> {
        self.tables.iter().find(|t| t.column == column)
    }

    pub fn code(&self, column: &str, value: &str) -> Option<usize> {
        self.table(column)?
            .categories
            .iter()
            .position(|c| c == value)
    }

    pub fn category(&self, column: &str, code: usize) -> Option<&str> {
        self.table(column)?.categories.get(code).map(String::as_str)
    }
}

/// Encodes records into a 33-column matrix: integers copied, categories
/// replaced by their ordinal code.
///
/// Errors report `line` as the row's line in a file with one header line.
pub fn encode(records: &[RawStudentRecord], scheme: &EncodingScheme) -> Result<DataMatrix> {
    encode_fields(
        records.iter().map(RawStudentRecord::fields),
        COLUMNS.len(),
        scheme,
    )
}

/// Encodes prediction rows into the 30 attribute columns.
pub fn encode_attributes(rows: &[AttributeRow], scheme: &EncodingScheme) -> Result<DataMatrix> {
    encode_fields(
        rows.iter().map(AttributeRow::fields),
        ATTRIBUTE_COUNT,
        scheme,
    )
}

fn encode_fields<'a>(
    rows: impl Iterator<Item = &'a [RawField]>,
    width: usize,
    scheme: &EncodingScheme,
) -> Result<DataMatrix> {
    let mut values = Vec::new();
    for (i, fields) in rows.enumerate() {
        for (spec, field) in COLUMNS[..width].iter().zip(fields) {
            let v = match field {
                RawField::Integer(v) => *v as f64,
                RawField::Text(s) => {
                    scheme
                        .code(spec.name, s)
                        .ok_or_else(|| DatasetError::UnknownCategory {
                            line: i as u64 + 2,
                            column: spec.name.to_owned(),
                            value: s.clone(),
                        })? as f64
                }
            };
            values.push(v);
        }
    }
    DataMatrix::new(
        COLUMNS[..width].iter().map(|c| c.name.to_owned()).collect(),
        values,
    )
}

/// Inverse of [`encode`]: restores the raw records from an encoded matrix.
pub fn decode(matrix: &DataMatrix, scheme: &EncodingScheme) -> Result<Vec<RawStudentRecord>> {
    let positions = COLUMNS
        .iter()
        .map(|spec| {
            matrix
                .column_index(spec.name)
                .ok_or_else(|| DatasetError::UnknownColumn(spec.name.to_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    (0..matrix.rows())
        .map(|r| {
            let fields = COLUMNS
                .iter()
                .zip(&positions)
                .map(|(spec, &c)| {
                    let v = matrix.value(r, c);
                    if v.fract() != 0.0 || v < 0.0 {
                        return Err(DatasetError::MalformedRow {
                            line: r as u64 + 2,
                            reason: format!("{} holds non-code value {v}", spec.name),
                        });
                    }
                    Ok(match spec.kind {
                        ColumnKind::Categorical(_) => RawField::Text(
                            scheme
                                .category(spec.name, v as usize)
                                .ok_or_else(|| DatasetError::UnknownCategory {
                                    line: r as u64 + 2,
                                    column: spec.name.to_owned(),
                                    value: v.to_string(),
                                })?
                                .to_owned(),
                        ),
                        _ => RawField::Integer(v as i64),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            RawStudentRecord::new(fields)
        })
        .collect()
}
