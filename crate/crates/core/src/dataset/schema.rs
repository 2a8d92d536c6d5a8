//! Fixed column schema of the student-performance table (33 columns).

/// What a column holds in the raw file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    /// Nominal or binary string column with its allowed values.
    Categorical(&'static [&'static str]),
    /// Non-negative integer attribute (ordinal scale or count).
    Integer,
    /// Period grade in score points, 0..=20.
    Grade,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: &'static str,
    pub kind: ColumnKind,
}

const YES_NO: &[&str] = &["no", "yes"];
const JOBS: &[&str] = &["at_home", "health", "other", "services", "teacher"];

const fn cat(name: &'static str, values: &'static [&'static str]) -> ColumnSpec {
    ColumnSpec {
        name,
        kind: ColumnKind::Categorical(values),
    }
}

const fn int(name: &'static str) -> ColumnSpec {
    ColumnSpec {
        name,
        kind: ColumnKind::Integer,
    }
}

const fn grade(name: &'static str) -> ColumnSpec {
    ColumnSpec {
        name,
        kind: ColumnKind::Grade,
    }
}

/// All columns in file order.
pub const COLUMNS: [ColumnSpec; 33] = [
    cat("school", &["GP", "MS"]),
    cat("sex", &["F", "M"]),
    int("age"),
    cat("address", &["R", "U"]),
    cat("famsize", &["GT3", "LE3"]),
    cat("Pstatus", &["A", "T"]),
    int("Medu"),
    int("Fedu"),
    cat("Mjob", JOBS),
    cat("Fjob", JOBS),
    cat("reason", &["course", "home", "other", "reputation"]),
    cat("guardian", &["father", "mother", "other"]),
    int("traveltime"),
    int("studytime"),
    int("failures"),
    cat("schoolsup", YES_NO),
    cat("famsup", YES_NO),
    cat("paid", YES_NO),
    cat("activities", YES_NO),
    cat("nursery", YES_NO),
    cat("higher", YES_NO),
    cat("internet", YES_NO),
    cat("romantic", YES_NO),
    int("famrel"),
    int("freetime"),
    int("goout"),
    int("Dalc"),
    int("Walc"),
    int("health"),
    int("absences"),
    grade("G1"),
    grade("G2"),
    grade("G3"),
];

pub const GRADE_COLUMNS: [&str; 3] = ["G1", "G2", "G3"];
pub const ATTRIBUTE_COUNT: usize = 30;
pub const GRADE_MAX: i64 = 20;

pub fn column_index(name: &str) -> Option<usize> {
    COLUMNS.iter().position(|c| c.name == name)
}

pub fn spec(name: &str) -> Option<&'static ColumnSpec> {
    COLUMNS.iter().find(|c| c.name == name)
}

pub fn is_grade(name: &str) -> bool {
    GRADE_COLUMNS.contains(&name)
}

/// The 30 non-grade attribute names, in file order.
pub fn attribute_names() -> impl Iterator<Item = &'static str> {
    COLUMNS[..ATTRIBUTE_COUNT].iter().map(|c| c.name)
}

/// Attributes stored as integers in the raw file (no encoding needed).
pub fn integer_attribute_names() -> impl Iterator<Item = &'static str> {
    COLUMNS
        .iter()
        .filter(|c| c.kind == ColumnKind::Integer)
        .map(|c| c.name)
}
