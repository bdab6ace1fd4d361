//! CSV and JSON writers with stable formatting: floats go out with 17
//! significant digits, so files round-trip exactly and reruns are
//! byte-identical.

use crate::bergman::BergmanField;
use crate::measure::DiscreteMeasure;
use crate::search::SearchMethod;
use crate::{Configuration, Point, Result};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::Path;

/// Fixed-width scientific formatting used in every CSV cell.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn coord_record(p: &Point) -> Vec<String> {
    match p {
        Point::Plane(z) => vec![fmt_f64(z.re), fmt_f64(z.im)],
        Point::Sphere(v) => vec![fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2])],
    }
}

fn coord_header(p: &Point) -> &'static [&'static str] {
    match p {
        Point::Plane(_) => &["x_re", "x_im"],
        Point::Sphere(_) => &["x", "y", "z"],
    }
}

fn write_point_table(
    path: &Path,
    points: &[Point],
    value_name: &str,
    values: &[f64],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["index"];
    header.extend_from_slice(coord_header(&points[0]));
    header.push(value_name);
    w.write_record(&header)?;
    for (i, (p, v)) in points.iter().zip(values.iter()).enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(coord_record(p));
        rec.push(fmt_f64(*v));
        w.write_record(&rec)?;
    }
    w.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// Configuration as CSV with uniform masses `1/N`.
pub fn write_config_csv(path: &Path, config: &Configuration) -> Result<()> {
    let mass = 1.0 / config.len() as f64;
    let masses = vec![mass; config.len()];
    write_point_table(path, &config.points, "mass", &masses)
}

/// Discrete measure as CSV, one atom per row.
pub fn write_measure_csv(path: &Path, mu: &DiscreteMeasure) -> Result<()> {
    write_point_table(path, &mu.atoms, "mass", &mu.masses)
}

/// Distortion-function values over a grid as CSV.
pub fn write_rho_csv(path: &Path, field: &BergmanField) -> Result<()> {
    write_point_table(path, &field.grid, "rho", &field.rho_values)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = File::create(path)?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Sidecar metadata written next to each searched configuration.
#[derive(Debug, Clone, Serialize)]
pub struct SearchSidecar {
    pub method: SearchMethod,
    pub k: usize,
    pub n: usize,
    pub log_abs_det_weighted: f64,
    /// Absent for degenerate configurations.
    pub k_diameter: Option<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Sidecar metadata for an optimal-measure run.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalSidecar {
    pub k: usize,
    pub n: usize,
    pub sup_rho: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// One degree of the summary report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub k: usize,
    pub n: usize,
    /// Normalized volume functional of the configuration's averaging measure.
    pub l_functional: f64,
    pub k_diameter: f64,
    /// Degree-compensated equilibrium proxy of the k-diameter.
    pub equilibrium_proxy: f64,
    pub sup_rho: f64,
    /// Distance of the configuration's averaging measure to the reference law.
    pub ks_config: f64,
    /// Distance of the induced density measure to the reference law.
    pub ks_bergman: f64,
}

/// Aggregate over a report run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    /// Which discrepancy fills the ks_* columns ("ks" on 1-D supports,
    /// "harmonic_discrepancy_l4" on the sphere).
    pub metric: String,
    pub rows: Vec<ReportRow>,
    /// Largest |l_functional - equilibrium_proxy| across degrees; both
    /// estimate the same energy constant, so the gap should shrink with k.
    pub max_functional_gap: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for &v in &[0.1, -3.25e-17, 1.0 / 3.0, 2.0_f64.sqrt(), 1e300] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn config_csv_layout() {
        let dir = std::env::temp_dir().join("fekete-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.csv");
        let config = Configuration::new(vec![Point::real(-1.0), Point::real(1.0)]);
        write_config_csv(&path, &config).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        let mut lines = body.lines();
        assert_eq!(lines.next().unwrap(), "index,x_re,x_im,mass");
        assert!(lines.next().unwrap().starts_with("0,-1.0000000000000000e0"));
        std::fs::remove_file(&path).ok();
    }
}
