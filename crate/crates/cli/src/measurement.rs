//! Ingestion and reduction of measured precession times.
//!
//! Input schema (times in ms, `#` starts a comment line):
//!
//! ```text
//! e_over_v0,tau_y_ms,tau_y_err_ms,tau_z_ms,tau_z_err_ms[,cov_yz_ms2]
//! ```

use std::path::Path;

use larmor::Extended;

use crate::error::{PipelineError, Result};
use crate::table::{Cell, Table};

pub const REQUIRED_COLUMNS: [&str; 5] = ["e_over_v0", "tau_y_ms", "tau_y_err_ms", "tau_z_ms", "tau_z_err_ms"];
pub const COVARIANCE_COLUMN: &str = "cov_yz_ms2";

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRow {
    pub e_over_v0: f64,
    pub tau_y: f64,
    pub sigma_y: f64,
    pub tau_z: f64,
    pub sigma_z: f64,
    /// Absent means uncorrelated.
    pub cov_yz: Option<f64>,
}

impl MeasurementRow {
    pub fn new(e_over_v0: f64, tau_y: f64, sigma_y: f64, tau_z: f64, sigma_z: f64) -> Self {
        Self {
            e_over_v0,
            tau_y,
            sigma_y,
            tau_z,
            sigma_z,
            cov_yz: None,
        }
    }

    pub fn with_cov(mut self, cov: f64) -> Self {
        self.cov_yz = Some(cov);
        self
    }

    fn cov(&self) -> f64 {
        self.cov_yz.unwrap_or(0.0)
    }

    fn validate(&self, line: u64) -> Result<()> {
        if self.sigma_y < 0.0 || self.sigma_z < 0.0 {
            return Err(PipelineError::parse(line, "uncertainties must be non-negative"));
        }
        if let Some(c) = self.cov_yz {
            if c.abs() > self.sigma_y * self.sigma_z * (1.0 + 1e-12) {
                return Err(PipelineError::parse(
                    line,
                    format!("covariance {c} exceeds sigma_y·sigma_z"),
                ));
            }
        }
        Ok(())
    }
}

/// Reads a measurement file. See [`parse_measurements_str`].
pub fn parse_measurements(path: &Path) -> Result<Vec<MeasurementRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_measurements_str(&text)
}

/// Parses measurement CSV text with strict header and cell validation.
/// Errors carry the 1-based line number of the offending record.
pub fn parse_measurements_str(text: &str) -> Result<Vec<MeasurementRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header_line = reader.position().line().max(1);
    let headers = reader
        .headers()
        .map_err(|e| PipelineError::parse(csv_line(&e).unwrap_or(header_line), e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let with_cov = match names.as_slice() {
        n if n == REQUIRED_COLUMNS => false,
        [head @ .., last] if head == REQUIRED_COLUMNS && *last == COVARIANCE_COLUMN => true,
        _ => {
            let missing: Vec<&str> = REQUIRED_COLUMNS
                .iter()
                .copied()
                .filter(|c| !names.contains(c))
                .collect();
            let detail = if missing.is_empty() {
                format!("unexpected header '{}'", names.join(","))
            } else {
                format!("missing column(s) {}", missing.join(", "))
            };
            let line = headers.position().map_or(1, |p| p.line());
            return Err(PipelineError::parse(line, detail));
        }
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| PipelineError::parse(csv_line(&e).unwrap_or(0), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| PipelineError::parse(line, format!("column '{}': non-numeric value '{raw}'", names[i])))
        };
        let cov = if with_cov {
            match record.get(5) {
                Some("") | None => None,
                Some(_) => Some(cell(5)?),
            }
        } else {
            None
        };
        let row = MeasurementRow {
            e_over_v0: cell(0)?,
            tau_y: cell(1)?,
            sigma_y: cell(2)?,
            tau_z: cell(3)?,
            sigma_z: cell(4)?,
            cov_yz: cov,
        };
        row.validate(line)?;
        rows.push(row);
    }
    Ok(rows)
}

fn csv_line(e: &csv::Error) -> Option<u64> {
    e.position().map(|p| p.line())
}

/// Measurement rows as a table in the input schema; the covariance column
/// appears only when some row carries one.
pub fn measurements_table(rows: &[MeasurementRow]) -> Table {
    let with_cov = rows.iter().any(|r| r.cov_yz.is_some());
    let mut columns: Vec<&str> = REQUIRED_COLUMNS.to_vec();
    if with_cov {
        columns.push(COVARIANCE_COLUMN);
    }
    let mut table = Table::new(columns);
    for r in rows {
        let mut cells = vec![
            Cell::from(r.e_over_v0),
            Cell::from(r.tau_y),
            Cell::from(r.sigma_y),
            Cell::from(r.tau_z),
            Cell::from(r.sigma_z),
        ];
        if with_cov {
            cells.push(Cell::from(r.cov_yz));
        }
        table.push(cells);
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFlag {
    /// `τ_y ≤ 0`: the flux-weighted time diverges.
    DivergentRegime,
    /// `τ_y = τ_z = 0`: the quadrature error is undefined.
    DegenerateQuadrature,
}

impl RowFlag {
    pub fn name(&self) -> &'static str {
        match self {
            RowFlag::DivergentRegime => "divergent-regime",
            RowFlag::DegenerateQuadrature => "degenerate-quadrature",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttRow {
    pub e_over_v0: f64,
    pub att_f: Extended,
    pub sigma_f: Option<f64>,
    pub att_b: f64,
    pub sigma_b: Option<f64>,
    pub att_s: f64,
    pub sigma_s: f64,
    pub flags: Vec<RowFlag>,
}

/// First-order propagation of the measured `(τ_y, τ_z)` uncertainties into
/// the three tunneling-time candidates.
pub fn reduce_measurements(rows: &[MeasurementRow]) -> Vec<AttRow> {
    rows.iter().map(reduce_row).collect()
}

fn reduce_row(r: &MeasurementRow) -> AttRow {
    let (y, z, sy, sz, cov) = (r.tau_y, r.tau_z, r.sigma_y, r.sigma_z, r.cov());
    let mut flags = Vec::new();

    let (att_f, sigma_f) = if y > 0.0 {
        let ratio = z / y;
        let dy = 1.0 - ratio * ratio;
        let dz = 2.0 * ratio;
        let var = dy * dy * sy * sy + dz * dz * sz * sz + 2.0 * dy * dz * cov;
        (Extended::Finite(y + z * ratio), Some(var.max(0.0).sqrt()))
    } else {
        flags.push(RowFlag::DivergentRegime);
        (Extended::Infinite, None)
    };

    let att_b = y.hypot(z);
    let sigma_b = if att_b > 0.0 {
        let var = y * y * sy * sy + z * z * sz * sz + 2.0 * y * z * cov;
        Some(var.max(0.0).sqrt() / att_b)
    } else {
        flags.push(RowFlag::DegenerateQuadrature);
        None
    };

    AttRow {
        e_over_v0: r.e_over_v0,
        att_f,
        sigma_f,
        att_b,
        sigma_b,
        att_s: y,
        sigma_s: sy,
        flags,
    }
}

pub fn att_rows_table(rows: &[AttRow]) -> Table {
    let mut table = Table::new([
        "e_over_v0",
        "att_f_ms",
        "att_f_err_ms",
        "att_b_ms",
        "att_b_err_ms",
        "att_s_ms",
        "att_s_err_ms",
        "flags",
    ]);
    for r in rows {
        let flags: Vec<&str> = r.flags.iter().map(RowFlag::name).collect();
        table.push(vec![
            Cell::from(r.e_over_v0),
            Cell::from(r.att_f),
            Cell::from(r.sigma_f),
            Cell::from(r.att_b),
            Cell::from(r.sigma_b),
            Cell::from(r.att_s),
            Cell::from(r.sigma_s),
            Cell::Text(flags.join(";")),
        ]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "e_over_v0,tau_y_ms,tau_y_err_ms,tau_z_ms,tau_z_err_ms\n";

    fn one(y: f64, sy: f64, z: f64, sz: f64) -> AttRow {
        reduce_row(&MeasurementRow::new(0.5, y, sy, z, sz))
    }

    #[test]
    fn zero_tau_z_reduces_to_tau_y() {
        let r = one(1.0, 0.0, 0.0, 0.0);
        assert_eq!(r.att_f, Extended::Finite(1.0));
        assert_eq!(r.sigma_f, Some(0.0));
        assert!(r.flags.is_empty());
    }

    #[test]
    fn reference_point() {
        let r = one(0.9640, 0.0, 1.9281, 0.0);
        assert!((r.att_f.value() - 4.8204).abs() < 5e-5);
    }

    #[test]
    fn equal_times_kill_the_tau_y_derivative() {
        let r = one(1.0, 0.01, 1.0, 0.01);
        assert!((r.sigma_f.unwrap() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn quadrature_and_square_errors() {
        let r = reduce_row(&MeasurementRow::new(0.5, 3.0, 0.1, 4.0, 0.2));
        assert!((r.att_b - 5.0).abs() < 1e-15);
        let expect = ((3.0f64 * 0.1).powi(2) + (4.0f64 * 0.2).powi(2)).sqrt() / 5.0;
        assert!((r.sigma_b.unwrap() - expect).abs() < 1e-15);
        assert_eq!((r.att_s, r.sigma_s), (3.0, 0.1));
    }

    #[test]
    fn covariance_enters_linearly() {
        let base = reduce_row(&MeasurementRow::new(0.5, 2.0, 0.1, 1.0, 0.1));
        let corr = reduce_row(&MeasurementRow::new(0.5, 2.0, 0.1, 1.0, 0.1).with_cov(0.005));
        let (dy, dz) = (1.0 - 0.25, 1.0);
        let expect = base.sigma_f.unwrap().powi(2) + 2.0 * dy * dz * 0.005;
        assert!((corr.sigma_f.unwrap().powi(2) - expect).abs() < 1e-15);
    }

    #[test]
    fn non_positive_tau_y_is_flagged() {
        let r = one(0.0, 0.01, 0.5, 0.01);
        assert_eq!(r.att_f, Extended::Infinite);
        assert_eq!(r.sigma_f, None);
        assert_eq!(r.flags, vec![RowFlag::DivergentRegime]);
        let d = one(0.0, 0.0, 0.0, 0.0);
        assert_eq!(d.flags, vec![RowFlag::DivergentRegime, RowFlag::DegenerateQuadrature]);
    }

    #[test]
    fn parses_minimal_schema() {
        let rows = parse_measurements_str(&format!("{HEADER}0.5,1,0.01,2,0.02\n0.2,0,0.01,1,0.01\n")).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], MeasurementRow::new(0.5, 1.0, 0.01, 2.0, 0.02));
        assert_eq!(rows[1].tau_y, 0.0);
    }

    #[test]
    fn parses_covariance_and_comments() {
        let text = "# SYNTHETIC\ne_over_v0,tau_y_ms,tau_y_err_ms,tau_z_ms,tau_z_err_ms,cov_yz_ms2\n0.5,1,0.1,2,0.1,0.001\n0.6,1,0.1,2,0.1,\n";
        let rows = parse_measurements_str(text).unwrap();
        assert_eq!(rows[0].cov_yz, Some(0.001));
        assert_eq!(rows[1].cov_yz, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = |text: &str| match parse_measurements_str(text) {
            Err(PipelineError::Parse { line, message }) => (line, message),
            other => panic!("expected parse error, got {other:?}"),
        };
        let (line, msg) = bad(&format!("{HEADER}0.5,1,0.01,2,0.02\n0.5,abc,0.01,2,0.02\n"));
        assert_eq!(line, 3);
        assert!(msg.contains("tau_y_ms"));
        let (line, _) = bad(&format!("{HEADER}0.5,1,-0.01,2,0.02\n"));
        assert_eq!(line, 2);
        let (line, msg) = bad("e_over_v0,tau_y_ms,tau_z_ms,tau_z_err_ms\n0.5,1,2,0.1\n");
        assert_eq!(line, 1);
        assert!(msg.contains("tau_y_err_ms"));
        let (line, _) = bad(&format!("# note\n{HEADER}0.5,1,0.01,2\n"));
        assert_eq!(line, 3);
    }
}
