use std::fmt::Write;

use super::grid::GridDomain;
use super::Spectrum;

/// `index,eigenvalue_pi2_d2`, one line per mode, 1-based.
pub fn spectrum_csv(spectrum: &Spectrum) -> String {
    let mut out = String::from("index,eigenvalue_pi2_d2\n");
    for (i, e) in spectrum.eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "{},{:.10}", i + 1, e);
    }
    out
}

/// Node values on the bounding grid, `None` outside; first row is the top.
fn raster(grid: &GridDomain, v: &[f64]) -> Vec<Vec<Option<f64>>> {
    let (lo, hi) = grid.bounds();
    (lo[1]..=hi[1])
        .rev()
        .map(|y| {
            (lo[0]..=hi[0])
                .map(|x| grid.node_at([x, y]).map(|k| v[k]))
                .collect()
        })
        .collect()
}

/// Grid function as CSV: one row per `y` from the top, `nan` outside.
pub fn field_csv(grid: &GridDomain, v: &[f64]) -> String {
    let mut out = String::new();
    for row in raster(grid, v) {
        let cells: Vec<String> = row
            .iter()
            .map(|c| c.map_or_else(|| "nan".to_string(), |x| format!("{x:.8e}")))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Plain PGM: zero maps to 128, the extremes to 1 and 255, outside to 0.
pub fn field_pgm(grid: &GridDomain, v: &[f64]) -> String {
    let rows = raster(grid, v);
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut out = format!("P2\n{} {}\n255\n", rows.first().map_or(0, Vec::len), rows.len());
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                None => "0".to_string(),
                Some(x) => ((128.0 + 127.0 * x / max).round() as i64).clamp(1, 255).to_string(),
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Reads the eigenvalue column of a spectrum CSV.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<f64>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "index,eigenvalue_pi2_d2" => {}
        _ => return Err("missing header index,eigenvalue_pi2_d2".into()),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let (idx, val) = line
                .split_once(',')
                .ok_or_else(|| format!("line {}: expected two fields", i + 2))?;
            if idx.trim().parse::<usize>().ok() != Some(i + 1) {
                return Err(format!("line {}: index out of sequence", i + 2));
            }
            val.trim()
                .parse::<f64>()
                .map_err(|e| format!("line {}: {e}", i + 2))
        })
        .collect()
}

/// Reads a field CSV back into rows, `None` for `nan`.
pub fn parse_field_csv(text: &str) -> Result<Vec<Vec<Option<f64>>>, String> {
    text.lines()
        .map(|line| {
            line.split(',')
                .map(|c| match c.trim() {
                    "nan" => Ok(None),
                    s => s.parse::<f64>().map(Some).map_err(|e| format!("{s:?}: {e}")),
                })
                .collect()
        })
        .collect()
}

/// Reads a plain PGM into rows of gray levels.
pub fn parse_pgm(text: &str) -> Result<Vec<Vec<u8>>, String> {
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("P2") {
        return Err("not a plain PGM".into());
    }
    let mut num = || -> Result<usize, String> {
        tokens
            .next()
            .ok_or("truncated PGM")?
            .parse::<usize>()
            .map_err(|e| e.to_string())
    };
    let (w, h, max) = (num()?, num()?, num()?);
    if max != 255 {
        return Err(format!("unsupported maxval {max}"));
    }
    (0..h)
        .map(|_| (0..w).map(|_| num().map(|v| v as u8)).collect())
        .collect()
}
