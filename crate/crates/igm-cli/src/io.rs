//! Matrix file input and output.
//!
//! Both formats accept decimal literals and rational tokens of the form
//! `p/q`, so entries like `1/3` survive exactly as the quotient of the two
//! parsed numbers. A matrix may be given in full, or upper-triangle-only
//! (cells below the diagonal left empty, diagonal optionally empty too); the
//! missing cells are reconstructed by reciprocity. A full matrix is never
//! repaired — it must validate as given.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use igm_core::{Matrix64, Prm64};

/// Matrix input format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MatrixFormat {
    /// Comma-separated rows; empty cells mark omitted entries.
    Csv,
    /// Array of arrays; numbers, `"p/q"` strings, or `null` for omitted.
    Json,
}

impl MatrixFormat {
    /// Picks the format from the file extension, defaulting to CSV.
    pub fn infer(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        }
    }
}

/// A parsed matrix together with where it came from.
#[derive(Debug, Clone)]
pub struct MatrixDocument {
    pub source: PathBuf,
    pub format: MatrixFormat,
    pub prm: Prm64,
}

/// Parse failure with a 1-based cell location when one is known.
#[derive(Debug)]
pub struct ParseError {
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.row, self.col) {
            (Some(r), Some(c)) => write!(f, "at row {r}, column {c}: {}", self.message),
            (Some(r), None) => write!(f, "at row {r}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl ParseError {
    fn at(row: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            row: Some(row),
            col: Some(col),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            row: None,
            col: None,
            message: message.into(),
        }
    }
}

/// Everything that can go wrong while loading a matrix file.
#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Parse(ParseError),
    Validation(igm_core::Error),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "cannot read matrix file: {e}"),
            LoadError::Parse(e) => write!(f, "cannot parse matrix: {e}"),
            LoadError::Validation(e) => write!(f, "matrix is not a valid PRM: {e}"),
        }
    }
}

/// A decimal literal or a `p/q` rational token.
fn parse_token(token: &str) -> Result<f64, String> {
    let token = token.trim();
    if let Some((num, den)) = token.split_once('/') {
        let p: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {token:?}"))?;
        let q: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {token:?}"))?;
        if q == 0.0 {
            return Err(format!("zero denominator in {token:?}"));
        }
        Ok(p / q)
    } else {
        token
            .parse()
            .map_err(|_| format!("not a number or p/q ratio: {token:?}"))
    }
}

type CellGrid = Vec<Vec<Option<f64>>>;

fn parse_csv_cells(text: &str) -> Result<CellGrid, ParseError> {
    let mut grid = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (j, cell) in line.split(',').enumerate() {
            if cell.trim().is_empty() {
                row.push(None);
            } else {
                let value = parse_token(cell).map_err(|msg| ParseError::at(i + 1, j + 1, msg))?;
                row.push(Some(value));
            }
        }
        grid.push(row);
    }
    Ok(grid)
}

fn parse_json_cells(text: &str) -> Result<CellGrid, ParseError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ParseError::general(format!("bad JSON: {e}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| ParseError::general("top level must be an array of rows"))?;
    let mut grid = Vec::new();
    for (i, row_value) in rows.iter().enumerate() {
        let cells = row_value
            .as_array()
            .ok_or_else(|| ParseError::general(format!("row {} must be an array", i + 1)))?;
        let mut row = Vec::new();
        for (j, cell) in cells.iter().enumerate() {
            let parsed = match cell {
                serde_json::Value::Null => None,
                serde_json::Value::Number(x) => Some(x.as_f64().ok_or_else(|| {
                    ParseError::at(i + 1, j + 1, "number does not fit in a double")
                })?),
                serde_json::Value::String(s) => {
                    Some(parse_token(s).map_err(|msg| ParseError::at(i + 1, j + 1, msg))?)
                }
                other => {
                    return Err(ParseError::at(
                        i + 1,
                        j + 1,
                        format!("unsupported cell value {other}"),
                    ))
                }
            };
            row.push(parsed);
        }
        grid.push(row);
    }
    Ok(grid)
}

/// Turns the cell grid into a full square matrix, reconstructing the lower
/// triangle by reciprocity when and only when it was left entirely blank.
fn assemble(grid: CellGrid) -> Result<Matrix64, ParseError> {
    let n = grid.len();
    if n < 2 {
        return Err(ParseError::general(format!(
            "need at least 2 rows, found {n}"
        )));
    }
    for (i, row) in grid.iter().enumerate() {
        if row.len() > n {
            return Err(ParseError::at(
                i + 1,
                n + 1,
                format!("row has {} cells, expected at most {n}", row.len()),
            ));
        }
    }
    let cell = |i: usize, j: usize| grid[i].get(j).copied().flatten();

    let lower_given = (0..n).any(|i| (0..i).any(|j| cell(i, j).is_some()));

    let mut m = Matrix64::zeros(n, n);
    if lower_given {
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = cell(i, j)
                    .ok_or_else(|| ParseError::at(i + 1, j + 1, "missing entry in full matrix"))?;
            }
        }
    } else {
        for i in 0..n {
            m[(i, i)] = cell(i, i).unwrap_or(1.0);
            for j in (i + 1)..n {
                let upper = cell(i, j)
                    .ok_or_else(|| ParseError::at(i + 1, j + 1, "missing upper-triangle entry"))?;
                if upper == 0.0 {
                    return Err(ParseError::at(i + 1, j + 1, "entry must be nonzero"));
                }
                m[(i, j)] = upper;
                m[(j, i)] = 1.0 / upper;
            }
        }
    }
    Ok(m)
}

/// Reads, parses, reconstructs, and validates a matrix file.
pub fn parse_matrix(
    path: &Path,
    format: Option<MatrixFormat>,
) -> Result<MatrixDocument, LoadError> {
    let format = format.unwrap_or_else(|| MatrixFormat::infer(path));
    let text = fs::read_to_string(path).map_err(LoadError::Io)?;
    let grid = match format {
        MatrixFormat::Csv => parse_csv_cells(&text),
        MatrixFormat::Json => parse_json_cells(&text),
    }
    .map_err(LoadError::Parse)?;
    let matrix = assemble(grid).map_err(LoadError::Parse)?;
    let prm = Prm64::validate(matrix).map_err(LoadError::Validation)?;
    Ok(MatrixDocument {
        source: path.to_path_buf(),
        format,
        prm,
    })
}

/// CSV rendering of a matrix; entries use the shortest decimal form that
/// parses back to the identical double.
pub fn matrix_to_csv(prm: &Prm64) -> String {
    let n = prm.order();
    let mut out = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", prm.get(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// JSON rendering of a matrix (array of arrays of numbers).
pub fn matrix_to_json(prm: &Prm64) -> serde_json::Value {
    let n = prm.order();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| prm.get(i, j)).collect())
        .collect();
    serde_json::json!(rows)
}
