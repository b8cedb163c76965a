//! File formats: rational literals, matrix CSV, instance and explanation JSON.

use std::fs;
use std::path::Path;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::CliError;
use crate::model::{Hierarchy, Matrix, Rational, Rectangle, TreeSpec, WeightedRectangle};

/// Parses `"p"` or `"p/q"` with `q > 0`.
pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let text = text.trim();
    let bad = || CliError::Input(format!("bad rational literal {text:?}"));
    let int = |s: &str| -> Result<BigInt, CliError> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(int(text)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if !q.is_positive() {
                return Err(CliError::Input(format!(
                    "denominator must be positive in {text:?}"
                )));
            }
            Ok(Rational::new(int(p)?, q))
        }
    }
}

/// Reduced form: `"p"` for integers, else `"p/q"` with `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A rational that serializes as a JSON integer when it is one and fits in
/// 64 bits, and as a `"p/q"` string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal(pub Rational);

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.is_integer().then(|| self.0.numer().to_i64()).flatten() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&format_rational(&self.0)),
        }
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = Value::deserialize(d)?;
        let parsed = match &value {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
            other => Err(CliError::Input(format!(
                "expected an integer or \"p/q\" string, found {other}"
            ))),
        };
        parsed.map(Literal).map_err(D::Error::custom)
    }
}

fn literals(values: &[Rational]) -> Vec<Literal> {
    values.iter().cloned().map(Literal).collect()
}

fn unwrap_literals(values: Vec<Literal>) -> Vec<Rational> {
    values.into_iter().map(|l| l.0).collect()
}

/// Headerless CSV of rational literals. With `labels`, the first row and
/// first column are skipped.
pub fn parse_matrix_csv(text: &str, labels: bool) -> Result<Matrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("csv: {e}")))?;
        if labels && idx == 0 {
            continue;
        }
        if record.iter().all(str::is_empty) {
            continue;
        }
        let skip = usize::from(labels);
        let row = record
            .iter()
            .skip(skip)
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input("csv contains no rows".into()));
    }
    Ok(Matrix::from_rows(rows)?)
}

pub fn read_matrix_csv(path: &Path, labels: bool) -> Result<Matrix, CliError> {
    parse_matrix_csv(&read_text(path)?, labels)
}

pub fn write_matrix_csv(a: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Literal>>>,
    /// CSV path, relative to the instance file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_tree: Option<TreeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_tree: Option<TreeSpec>,
}

/// A loaded input: a matrix (vectors become a single row) plus any trees.
#[derive(Debug, Clone)]
pub struct Input {
    pub matrix: Matrix,
    pub row_tree: Option<Hierarchy>,
    pub col_tree: Option<Hierarchy>,
}

impl Input {
    /// The matrix as a vector, if it has a single row or column.
    pub fn vector(&self) -> Result<Vec<Rational>, CliError> {
        let a = &self.matrix;
        if a.rows() == 1 {
            Ok(a.row(0).to_vec())
        } else if a.cols() == 1 {
            Ok(a.column(0))
        } else {
            Err(CliError::Input(format!(
                "expected a vector, found a {}x{} matrix",
                a.rows(),
                a.cols()
            )))
        }
    }

    /// Missing trees default to stars.
    pub fn trees(&self) -> (Hierarchy, Hierarchy) {
        let rows = self
            .row_tree
            .clone()
            .unwrap_or_else(|| Hierarchy::star(self.matrix.rows()));
        let cols = self
            .col_tree
            .clone()
            .unwrap_or_else(|| Hierarchy::star(self.matrix.cols()));
        (rows, cols)
    }
}

/// `.csv` files are matrices; anything else is an instance JSON.
pub fn read_input(path: &Path, labels: bool) -> Result<Input, CliError> {
    if is_csv(path) {
        return Ok(Input {
            matrix: read_matrix_csv(path, labels)?,
            row_tree: None,
            col_tree: None,
        });
    }
    let file: InstanceFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let sources = [
        file.matrix.is_some(),
        file.matrix_csv.is_some(),
        file.vector.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::Input(
            "instance needs exactly one of matrix, matrix_csv, vector".into(),
        ));
    }
    let matrix = if let Some(rows) = file.matrix {
        Matrix::from_rows(rows.into_iter().map(unwrap_literals).collect())?
    } else if let Some(csv_path) = file.matrix_csv {
        read_matrix_csv(&base.join(csv_path), labels)?
    } else {
        Matrix::row_vector(&unwrap_literals(file.vector.unwrap_or_default()))?
    };
    let tree = |spec: Option<TreeSpec>| spec.map(|s| Hierarchy::from_spec(&s)).transpose();
    Ok(Input {
        matrix,
        row_tree: tree(file.row_tree)?,
        col_tree: tree(file.col_tree)?,
    })
}

/// Reads a bare matrix: CSV, or the matrix part of an instance JSON.
pub fn read_matrix(path: &Path, labels: bool) -> Result<Matrix, CliError> {
    Ok(read_input(path, labels)?.matrix)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn instance_json(a: &Matrix, row_tree: Option<&Hierarchy>, col_tree: Option<&Hierarchy>) -> String {
    let file = InstanceFile {
        matrix: Some((0..a.rows()).map(|i| literals(a.row(i))).collect()),
        row_tree: row_tree.map(Hierarchy::to_spec),
        col_tree: col_tree.map(Hierarchy::to_spec),
        ..InstanceFile::default()
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub i1: usize,
    pub i2: usize,
    pub j1: usize,
    pub j2: usize,
    pub w: Literal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationFile {
    #[serde(default)]
    pub problem: String,
    #[serde(default)]
    pub strategy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(default)]
    pub cost: usize,
    #[serde(default)]
    pub bounds: Bounds,
    pub terms: Vec<TermRecord>,
}

impl ExplanationFile {
    pub fn new(problem: &str, strategy: &str, terms: &[WeightedRectangle]) -> Self {
        Self {
            problem: problem.into(),
            strategy: strategy.into(),
            seed: None,
            rows: None,
            cols: None,
            cost: terms.len(),
            bounds: Bounds::default(),
            terms: terms
                .iter()
                .map(|t| TermRecord {
                    i1: t.rect.i1,
                    i2: t.rect.i2,
                    j1: t.rect.j1,
                    j2: t.rect.j2,
                    w: Literal(t.weight.clone()),
                })
                .collect(),
        }
    }

    /// Terms as weighted rectangles; rejects bad bounds and zero weights.
    pub fn weighted_terms(&self) -> Result<Vec<WeightedRectangle>, CliError> {
        self.terms
            .iter()
            .map(|t| {
                if t.w.0.is_zero() {
                    return Err(CliError::Input(format!(
                        "zero weight on Rect({},{},{},{})",
                        t.i1, t.i2, t.j1, t.j2
                    )));
                }
                Ok(WeightedRectangle::new(
                    Rectangle::new(t.i1, t.i2, t.j1, t.j2)?,
                    t.w.0.clone(),
                ))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("explanation serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("explanation: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read_text(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}
