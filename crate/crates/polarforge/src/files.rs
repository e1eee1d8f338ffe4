//! On-disk exchange formats: precoding matrices, scaling-coefficient
//! schedules, result tables, and bit/LLR grids.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use polarforge_core::channel::CerPoint;
use polarforge_core::grid::{BitGrid, LlrGrid};
use polarforge_core::mcde::DensityStats;
use polarforge_core::polar::PolarCodeSpec;
use polarforge_core::product::AlphaSchedule;

/// Load a component code from a precoding-matrix file.
pub fn load_code(path: &Path) -> Result<PolarCodeSpec> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading precoding matrix {}", path.display()))?;
    PolarCodeSpec::from_text(&text)
        .with_context(|| format!("parsing precoding matrix {}", path.display()))
}

/// Write a schedule as CSV with a `half_iteration,alpha` header.
pub fn save_alpha_csv(path: &Path, schedule: &AlphaSchedule) -> Result<()> {
    let mut out = String::from("half_iteration,alpha\n");
    for (i, a) in schedule.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, a));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Load a schedule from `half_iteration,alpha` CSV; rows must be the
/// consecutive half iterations starting at one.
pub fn load_alpha_csv(path: &Path) -> Result<AlphaSchedule> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            if line != "half_iteration,alpha" {
                bail!("{}: expected header \"half_iteration,alpha\"", path.display());
            }
            continue;
        }
        let (l_str, a_str) = line
            .split_once(',')
            .with_context(|| format!("{}: malformed row {:?}", path.display(), line))?;
        let l: usize = l_str.trim().parse()?;
        if l != values.len() + 1 {
            bail!("{}: half iterations must be consecutive from 1", path.display());
        }
        values.push(a_str.trim().parse::<f64>()?);
    }
    Ok(AlphaSchedule::new(values)?)
}

/// Result table header used by the campaign command.
pub const CER_CSV_HEADER: &str = "ebn0_db,frames,errors,cer,ci_lo,ci_hi";

/// Render campaign results as CSV (full precision).
pub fn cer_csv(points: &[CerPoint]) -> String {
    let mut out = String::from(CER_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.ebn0_db, p.frames, p.frame_errors, p.cer, p.ci_lo, p.ci_hi
        ));
    }
    out
}

/// Render a density-evolution trace as CSV.
pub fn density_csv(stats: &[DensityStats]) -> String {
    let mut out = String::from("half_iteration,p_neg,mean,var\n");
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.half_iteration, s.p_neg, s.mean, s.var
        ));
    }
    out
}

/// Parse a bit grid: one line per row, `cols` characters from `{0,1}`.
pub fn parse_bit_grid(text: &str, rows: usize, cols: usize) -> Result<BitGrid> {
    let mut g = BitGrid::zeros(rows, cols);
    let mut filled = 0;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if filled >= rows {
            bail!("line {}: more than {rows} rows", idx + 1);
        }
        if line.len() != cols {
            bail!("line {}: expected {cols} bits, got {}", idx + 1, line.len());
        }
        for (c, ch) in line.chars().enumerate() {
            match ch {
                '0' => g.set(filled, c, 0),
                '1' => g.set(filled, c, 1),
                other => bail!("line {}: unexpected character {:?}", idx + 1, other),
            }
        }
        filled += 1;
    }
    if filled != rows {
        bail!("expected {rows} rows, got {filled}");
    }
    Ok(g)
}

/// Render a bit grid, one row per line.
pub fn format_bit_grid(grid: &BitGrid) -> String {
    let mut out = String::with_capacity(grid.rows() * (grid.cols() + 1));
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            out.push(if grid.get(r, c) == 0 { '0' } else { '1' });
        }
        out.push('\n');
    }
    out
}

/// Parse an LLR grid: one line per row, whitespace-separated reals.
pub fn parse_llr_grid(text: &str, rows: usize, cols: usize) -> Result<LlrGrid> {
    let mut g = LlrGrid::zeros(rows, cols);
    let mut filled = 0;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if filled >= rows {
            bail!("line {}: more than {rows} rows", idx + 1);
        }
        let vals: Vec<&str> = line.split([' ', '\t', ',']).filter(|t| !t.is_empty()).collect();
        if vals.len() != cols {
            bail!("line {}: expected {cols} values, got {}", idx + 1, vals.len());
        }
        for (c, tok) in vals.iter().enumerate() {
            let v: f64 = tok
                .parse()
                .with_context(|| format!("line {}: bad value {:?}", idx + 1, tok))?;
            g.set(filled, c, v);
        }
        filled += 1;
    }
    if filled != rows {
        bail!("expected {rows} rows, got {filled}");
    }
    Ok(g)
}

/// Write text to a file or stdout when no path is given.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn alpha_csv_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("a.csv");
        let sched = AlphaSchedule::new(vec![0.96, 0.92, 0.47]).unwrap();
        save_alpha_csv(&path, &sched).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("half_iteration,alpha\n1,0.96\n"));
        let loaded = load_alpha_csv(&path).unwrap();
        assert_eq!(loaded, sched);
    }

    #[test]
    fn alpha_csv_rejects_gaps() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "half_iteration,alpha\n1,0.9\n3,0.5\n").unwrap();
        assert!(load_alpha_csv(&path).is_err());
    }

    #[test]
    fn bit_grid_round_trip() {
        let text = "0101\n1100\n";
        let g = parse_bit_grid(text, 2, 4).unwrap();
        assert_eq!(format_bit_grid(&g), text);
        assert!(parse_bit_grid("01\n", 1, 4).is_err());
        assert!(parse_bit_grid("01x1\n", 1, 4).is_err());
    }

    #[test]
    fn llr_grid_accepts_spaces_and_commas() {
        let g = parse_llr_grid("1.5 -2 0.25\n-0.5,3,1e-3\n", 2, 3).unwrap();
        assert_eq!(g.get(0, 1), -2.0);
        assert_eq!(g.get(1, 2), 1e-3);
    }

    #[test]
    fn cer_csv_has_contract_header() {
        let p = CerPoint::from_counts(2.0, 1000, 17, 345);
        let text = cer_csv(&[p]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "ebn0_db,frames,errors,cer,ci_lo,ci_hi");
        assert!(lines.next().unwrap().starts_with("2,1000,17,0.017,"));
    }
}
