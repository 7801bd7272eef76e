use super::{GridSpec, LineSample};
use crate::error::{Error, Result};
use crate::json::fmt_f64;
use num_complex::Complex64;
use std::io::{BufRead, Write};

/// Writes `x,re,im` rows with 17 significant digits.
pub fn write_csv<W: Write>(line: &LineSample, mut w: W) -> Result<()> {
    writeln!(w, "x,re,im")?;
    for (k, v) in line.values.iter().enumerate() {
        writeln!(w, "{},{},{}", fmt_f64(line.grid.x(k)), fmt_f64(v.re), fmt_f64(v.im))?;
    }
    Ok(())
}

/// Reads a CSV written by [`write_csv`]. The grid is recovered from the `x`
/// column, so it must be uniform with a power-of-two length.
pub fn read_csv<R: BufRead>(r: R, offset_y: f64) -> Result<LineSample> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "x,re,im" => {}
        _ => return Err(Error::Io("missing x,re,im header".into())),
    }
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for (i, row) in lines.enumerate() {
        let row = row?;
        if row.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = row.split(',').collect();
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Io(format!("row {}: {e}", i + 2)))
        };
        if cols.len() != 3 {
            return Err(Error::Io(format!("row {}: expected 3 columns", i + 2)));
        }
        xs.push(parse(cols[0])?);
        vals.push(Complex64::new(parse(cols[1])?, parse(cols[2])?));
    }
    if xs.len() < 2 {
        return Err(Error::Io("need at least two rows".into()));
    }
    let spacing = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let grid = GridSpec::new(xs.len(), spacing, xs[0])?;
    LineSample::new(grid, offset_y, vals)
}
