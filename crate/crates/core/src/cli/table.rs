use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Writes equal-length columns as CSV. NaN cells are left empty.
pub fn write_table(file: impl AsRef<Path>, headers: &[String], columns: &[Vec<f64>]) -> Result<()> {
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = BufWriter::new(fs::File::create(file)?);
    writeln!(out, "{}", headers.join(","))?;
    for r in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                out.write_all(b",")?;
            }
            match col.get(r) {
                Some(v) if !v.is_nan() => write!(out, "{v}")?,
                _ => {}
            }
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_table`]; empty cells come back as NaN.
pub fn read_table(file: impl AsRef<Path>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let file = file.as_ref();
    let text = fs::read_to_string(file)?;
    let mut lines = text.lines();
    let headers: Vec<String> = lines.next().unwrap_or("").split(',').map(|h| h.trim().to_string()).collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != headers.len() {
            return Err(Error::Format(format!("{}:{}: expected {} columns", file.display(), n + 2, headers.len())));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            let cell = cell.trim();
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse().map_err(|e| Error::Format(format!("{}:{}: {e}", file.display(), n + 2)))?
            };
            col.push(v);
        }
    }
    Ok((headers, columns))
}
