//! Text exports of spacetime diagrams: digit grids and plain graymaps.

use std::fmt::Write as _;

use crate::engine::Diagram;
use crate::error::{Error, Result};
use crate::field::FieldElem;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    /// Inclusive column range.
    pub window: (i64, i64),
    /// Zero cells of this column are drawn with `highlight`.
    pub highlight_column: Option<i64>,
    pub background: u16,
    pub foreground: u16,
    pub highlight: u16,
}

impl RenderOptions {
    pub fn new(window: (i64, i64)) -> Self {
        RenderOptions { window, highlight_column: Some(-2), background: 255, foreground: 0, highlight: 192 }
    }

    /// `[c - n, c + n]` around the highlighted column.
    pub fn centered(column: i64, n: usize) -> Self {
        let n = n as i64;
        Self::new((column - n, column + n))
    }

    fn validate(&self) -> Result<()> {
        if self.window.0 > self.window.1 {
            return Err(Error::Engine(format!("empty window {}:{}", self.window.0, self.window.1)));
        }
        Ok(())
    }
}

/// One line per row; digits `0-9a-z` for `q <= 36`, otherwise
/// space-separated element indices.
pub fn digit_grid(diag: &Diagram, window: (i64, i64)) -> Result<String> {
    if window.0 > window.1 {
        return Err(Error::Engine(format!("empty window {}:{}", window.0, window.1)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# rows {} .. {} columns {} .. {}", diag.first_label, diag.last_label(), window.0, window.1);
    let q = diag.rows.first().map_or(2, |r| r.ctx().q());
    for row in &diag.rows {
        let vals = row.window(window.0, window.1 + 1);
        if q <= DIGITS.len() as u32 {
            out.extend(vals.iter().map(|v| DIGITS[v.index() as usize] as char));
        } else {
            out.push_str(&vals.iter().map(|v| v.index().to_string()).collect::<Vec<_>>().join(" "));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Plain `P2` graymap, one pixel per cell, rows top to bottom.
pub fn pgm(diag: &Diagram, opts: &RenderOptions) -> Result<String> {
    opts.validate()?;
    let q = diag.rows.first().map_or(2, |r| r.ctx().q());
    let (lo, hi) = opts.window;
    let width = (hi - lo + 1) as usize;
    let span = opts.background.min(opts.highlight).saturating_sub(opts.foreground + 1);
    if q > 2 && (q - 2) > span as u32 {
        return Err(Error::Engine(format!("F_{q} has more nonzero elements than free gray levels")));
    }
    let level = |v: FieldElem| -> u16 {
        if q <= 2 {
            opts.foreground
        } else {
            opts.foreground + ((v.index() - 1) * span as u32 / (q - 2)) as u16
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "P2");
    let _ = writeln!(
        out,
        "# rows {} .. {} columns {} .. {}",
        diag.first_label,
        diag.last_label(),
        lo,
        hi
    );
    if let Some(c) = opts.highlight_column {
        let _ = writeln!(out, "# highlighted column {c}: zero drawn as {}", opts.highlight);
    }
    if q > 2 {
        let _ = writeln!(out, "# nonzero element index v drawn as {} + (v - 1) * {span} / {}", opts.foreground, q - 2);
    }
    let _ = writeln!(out, "{width} {}", diag.len());
    let _ = writeln!(out, "{}", opts.background.max(opts.highlight));
    for row in &diag.rows {
        let vals = row.window(lo, hi + 1);
        let line: Vec<String> = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let g = if !v.is_zero() {
                    level(v)
                } else if opts.highlight_column == Some(lo + i as i64) {
                    opts.highlight
                } else {
                    opts.background
                };
                g.to_string()
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Row;
    use crate::field::FieldCtx;

    #[test]
    fn zero_row_is_background() {
        let f = FieldCtx::prime(2).unwrap();
        let diag = Diagram { first_label: 0, rows: vec![Row::zero(&f)] };
        let mut opts = RenderOptions::new((0, 3));
        opts.highlight_column = None;
        let img = pgm(&diag, &opts).unwrap();
        assert!(img.ends_with("4 1\n255\n255 255 255 255\n"));
    }

    #[test]
    fn highlight_and_digits() {
        let f = FieldCtx::prime(2).unwrap();
        let diag = Diagram { first_label: -1, rows: vec![Row::from_cells(&f, &[(0, f.one())]), Row::zero(&f)] };
        let img = pgm(&diag, &RenderOptions::new((-2, 0))).unwrap();
        assert!(img.ends_with("3 2\n255\n192 255 0\n192 255 255\n"));
        let grid = digit_grid(&diag, (-2, 0)).unwrap();
        assert!(grid.ends_with("001\n000\n"));
    }
}
