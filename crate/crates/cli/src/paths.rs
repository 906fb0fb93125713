//! Plot-ready CSV for traced special Lagrangians.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use stabforge_core::{SLagProblem, TracedPath};

use crate::error::CliResult;

pub const COLUMNS: [&str; 6] = ["t", "re_z", "im_z", "re_rho_zdot", "im_rho_zdot", "cumulative_mass"];

/// Write `path` as CSV: a `#` line with `a`, `c`, `φ`, the column header, then
/// one row per sample.
pub fn write_path(path: &TracedPath, out: impl Write) -> CliResult<()> {
    let mut out = BufWriter::new(out);
    writeln!(
        out,
        "# a = {},{}; c = {},{}; phi = {}",
        path.a.re, path.a.im, path.c.re, path.c.im, path.phi
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    let t0 = path.samples.first().map_or(0.0, |s| s.t);
    for s in &path.samples {
        let prob = SLagProblem::new(path.a, path.c, path.phi, s.z);
        let density = prob.rho(s.z) * s.zdot;
        w.write_record([
            s.t.to_string(),
            s.z.re.to_string(),
            s.z.im.to_string(),
            density.re.to_string(),
            density.im.to_string(),
            (s.t - t0).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One file `<stem>_<i>.csv` per path in `dir`.
pub fn emit_paths(paths: &[TracedPath], dir: &Path, stem: &str) -> CliResult<Vec<PathBuf>> {
    if paths.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir)?;
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let file = dir.join(format!("{stem}_{i:03}.csv"));
            write_path(p, File::create(&file)?)?;
            Ok(file)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabforge_core::slag::trace_slag;
    use stabforge_core::Complex64;

    fn rows(text: &str) -> Vec<Vec<f64>> {
        text.lines()
            .skip(2)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn one_path_one_file_monotone_t() {
        let p = SLagProblem::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            0.25,
            Complex64::new(0.5, 0.8),
        );
        let path = trace_slag(&p).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_paths(std::slice::from_ref(&path), dir.path(), "path").unwrap();
        assert_eq!(files.len(), 1);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with("# a = 0,0; c = 0,0; phi = 0.25\n"));
        assert_eq!(text.lines().nth(1).unwrap(), COLUMNS.join(","));
        let r = rows(&text);
        assert_eq!(r.len(), path.samples.len());
        assert!(r.windows(2).all(|w| w[1][0] > w[0][0]));
        assert!((r.last().unwrap()[5] - path.mass).abs() < 1e-12 * path.mass);

        // Bit-stable on rewrite.
        let again = emit_paths(&[path], dir.path(), "path").unwrap();
        assert_eq!(std::fs::read_to_string(&again[0]).unwrap(), text);
    }

    #[test]
    fn closed_orbit_ends_where_it_starts() {
        let p = SLagProblem::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            0.5,
            Complex64::new(1.0, 0.0),
        );
        let path = trace_slag(&p).unwrap();
        assert!(path.is_closed());
        let mut buf = Vec::new();
        write_path(&path, &mut buf).unwrap();
        let r = rows(std::str::from_utf8(&buf).unwrap());
        let (first, last) = (&r[0], r.last().unwrap());
        let gap = ((first[1] - last[1]).powi(2) + (first[2] - last[2]).powi(2)).sqrt();
        assert!(gap <= p.closed_delta, "gap {gap}");
    }

    #[test]
    fn empty_input_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("never");
        assert!(emit_paths(&[], &target, "path").unwrap().is_empty());
        assert!(!target.exists());
    }
}
