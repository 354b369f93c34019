//! Deterministic CSV output for sweep tables.
//!
//! Layout: `# key: value` metadata lines, the header
//! `axis,S11,S12,...,S44`, then one row per grid point. Every number is written
//! with `{:.16e}` (17 significant digits), so values round-trip exactly.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use plaquette_core::sweep::SweepTable;

use crate::{Error, Result};

/// Upper bound accepted for a scattering probability.
pub const PROB_MAX: f64 = 1.0 + 1e-9;
/// Allowed deviation of a column sum from 1 in lossless rows.
pub const COLUMN_SUM_TOL: f64 = 1e-9;

pub const HEADER: &str = "axis,S11,S12,S13,S14,S21,S22,S23,S24,S31,S32,S33,S34,S41,S42,S43,S44";

/// Ordered `# key: value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn new() -> Self {
        Metadata::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.0.push((key.into(), value.into()));
        self
    }

    /// Version, axis and basis lines shared by every table.
    pub fn standard(table: &SweepTable) -> Self {
        let mut m = Metadata::new();
        m.push("tool", format!("plaquette {}", env!("CARGO_PKG_VERSION")))
            .push("axis", table.axis.name())
            .push("basis", table.basis.name());
        m
    }
}

/// Checks every probability lies in `[0, 1 + 1e-9]`; returns warnings for
/// lossless rows whose columns do not sum to 1.
pub fn check_table(table: &SweepTable, lossless: &[bool]) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    for (k, row) in table.s.iter().enumerate() {
        for (idx, &v) in row.iter().enumerate() {
            if !(0.0..=PROB_MAX).contains(&v) {
                return Err(Error::Check(format!(
                    "S{}{} = {v:e} at row {k} is outside [0, 1]",
                    idx / 4 + 1,
                    idx % 4 + 1
                )));
            }
        }
        if lossless.get(k).copied().unwrap_or(false) {
            for j in 0..4 {
                let sum: f64 = (0..4).map(|i| row[4 * i + j]).sum();
                if (sum - 1.0).abs() > COLUMN_SUM_TOL {
                    warnings.push(format!(
                        "row {k}: column {} sums to {sum:.17} in a lossless configuration",
                        j + 1
                    ));
                }
            }
        }
    }
    Ok(warnings)
}

pub fn render(table: &SweepTable, meta: &Metadata) -> String {
    let mut out = String::new();
    for (key, value) in &meta.0 {
        // Metadata values stay on one line.
        let value = value.replace(['\n', '\r'], " ");
        writeln!(out, "# {key}: {value}").unwrap();
    }
    out.push_str(HEADER);
    out.push('\n');
    for (x, row) in table.axis_values.iter().zip(&table.s) {
        write!(out, "{x:.16e}").unwrap();
        for v in row {
            write!(out, ",{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_table(path: &Path, table: &SweepTable, meta: &Metadata) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(render(table, meta).as_bytes())
        .map_err(|e| Error::io(path, e))
}
