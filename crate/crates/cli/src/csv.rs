use std::fmt::Write as _;
use std::path::Path;

use qkin::limits::ConvergenceTable;

use crate::error::{CliError, Result};

pub const HEADER: &str = "N,delta,metric,value,aux";

/// 17 significant digits; round-trips every `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(table: &ConvergenceTable) -> String {
    let mut out = String::with_capacity(64 * (table.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for row in table.rows() {
        let aux = row.aux.map(format_float).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.n,
            format_float(row.delta),
            row.metric,
            format_float(row.value),
            aux
        );
    }
    out
}

pub fn emit_csv(table: &ConvergenceTable, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(table)).map_err(|e| CliError::io(path, e))
}
