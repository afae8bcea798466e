//! CSV assembly with fixed formatting: 12 significant digits, '.' decimal
//! separator, LF line endings, '#'-prefixed provenance header. Identical
//! configs produce byte-identical files.

use std::fmt::Write as _;

/// One float cell; -0.0 is normalised so the sign of a rounded zero cannot
/// depend on the evaluation path.
pub fn fmt(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub struct Table {
    provenance: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            provenance: vec![format!("isochrone {}", env!("CARGO_PKG_VERSION"))],
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, line: impl Into<String>) {
        self.provenance.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for line in &self.provenance {
            let _ = writeln!(s, "# {line}");
        }
        let _ = writeln!(s, "# {}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

/// Provenance fragment "name1=v1 name2=v2" for a parameter list.
pub fn params_line(params: &[(&'static str, f64)]) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt(*v)))
        .collect::<Vec<_>>()
        .join(" ")
}
