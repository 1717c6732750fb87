//! Plain CSV matrices and vectors: no header, comma separated, decimal point.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::reciprocal::{PositiveVector, ReciprocalMatrix, ReciprocityMode};

/// Parses CSV text into rows of numbers; locations in errors are 1-based.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (r, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, cell)| {
                cell.trim().parse::<f64>().map_err(|e| Error::Parse {
                    row: r + 1,
                    col: c + 1,
                    msg: format!("{:?}: {e}", cell.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_matrix(text: &str, mode: ReciprocityMode) -> Result<ReciprocalMatrix> {
    let rows = parse_rows(text)?;
    let n = rows.len();
    if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
        return Err(Error::Parse {
            row: r + 1,
            col: row.len().min(n) + 1,
            msg: format!("expected {n} columns, found {}", row.len()),
        });
    }
    ReciprocalMatrix::from_rows(&rows, mode)
}

pub fn load_matrix(path: impl AsRef<Path>, mode: ReciprocityMode) -> Result<ReciprocalMatrix> {
    parse_matrix(&fs::read_to_string(path)?, mode)
}

/// A vector given as one row or one column.
pub fn parse_vector(text: &str) -> Result<PositiveVector> {
    let rows = parse_rows(text)?;
    let values = if rows.len() == 1 {
        rows.into_iter().next().unwrap()
    } else {
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != 1) {
            return Err(Error::Parse {
                row: r + 1,
                col: 2,
                msg: format!(
                    "a column vector needs one value per row, found {}",
                    row.len()
                ),
            });
        }
        rows.into_iter().map(|r| r[0]).collect()
    };
    PositiveVector::new(values)
}

pub fn load_vector(path: impl AsRef<Path>) -> Result<PositiveVector> {
    parse_vector(&fs::read_to_string(path)?)
}

/// 17 significant digits, which round-trips every `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_matrix(a: &ReciprocalMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.order() {
        let cells: Vec<String> = a.row(i).iter().map(|&v| format_number(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn save_matrix(a: &ReciprocalMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_matrix(a))?;
    Ok(())
}

pub fn save_vector(v: &PositiveVector, path: impl AsRef<Path>) -> Result<()> {
    let cells: Vec<String> = v.as_slice().iter().map(|&x| format_number(x)).collect();
    fs::write(path, cells.join(",") + "\n")?;
    Ok(())
}

/// Pretty-printed JSON followed by a newline.
pub fn save_report(report: &serde_json::Value, path: impl AsRef<Path>) -> Result<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, report)?;
    writeln!(file)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reciprocal::random_reciprocal;

    #[test]
    fn ones_csv_loads() {
        let a = parse_matrix("1,1,1\n1,1,1\n1,1,1\n", ReciprocityMode::validate()).unwrap();
        assert_eq!(a, ReciprocalMatrix::ones(3).unwrap());
    }

    #[test]
    fn ragged_row_reports_location() {
        let err = parse_matrix("1,2,1\n0.5,1\n1,1,1\n", ReciprocityMode::Symmetrize).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, col: 3, .. }), "{err}");
    }

    #[test]
    fn bad_number_reports_location() {
        let err = parse_matrix("1,2\n0.5,x\n", ReciprocityMode::Symmetrize).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, col: 2, .. }), "{err}");
    }

    #[test]
    fn format_round_trips_exactly() {
        let a = random_reciprocal(6, 42, 2.0).unwrap();
        let back = parse_matrix(&format_matrix(&a), ReciprocityMode::validate()).unwrap();
        assert_eq!(back, a);
        assert_eq!(format_number(0.1).len(), "1.0000000000000001e-1".len());
    }

    #[test]
    fn vectors_as_row_or_column() {
        assert_eq!(
            parse_vector("1,2,3\n").unwrap().as_slice(),
            &[1.0, 2.0, 3.0]
        );
        assert_eq!(
            parse_vector("1\n2\n3\n").unwrap().as_slice(),
            &[1.0, 2.0, 3.0]
        );
        assert!(parse_vector("1,2\n3,4\n").is_err());
        assert!(parse_vector("1,-2\n").is_err());
    }
}
