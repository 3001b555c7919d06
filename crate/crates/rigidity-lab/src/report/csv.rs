//! CSV emission and parsing for the report tables. Comma-separated, UTF-8,
//! LF line endings, header row first. Values never contain commas, so no
//! quoting is needed; floats use the shortest round-trip representation,
//! which makes emit ∘ parse ∘ emit the identity on bytes.

use crate::error::{Error, Result};
use crate::experiments::{CountingReport, DblReport, RigidityReport, VarianceReport};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header_line = lines
            .next()
            .ok_or(Error::Format { what: "csv", detail: "empty table".into() })?;
        let header: Vec<String> = header_line.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let row: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
            if row.len() != header.len() {
                return Err(Error::Format {
                    what: "csv",
                    detail: format!("row width {} != header width {}", row.len(), header.len()),
                });
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header.iter().position(|h| h == name).ok_or_else(|| Error::Format {
            what: "csv",
            detail: format!("missing column {name}"),
        })
    }

    pub fn f64_column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self.column(name)?;
        self.rows
            .iter()
            .map(|r| {
                r[idx].parse::<f64>().map_err(|e| Error::Format {
                    what: "csv",
                    detail: format!("bad float in {name}: {e}"),
                })
            })
            .collect()
    }
}

fn f(x: f64) -> String {
    format!("{x}")
}

pub fn counting_csv(report: &CountingReport) -> CsvTable {
    let mut t = CsvTable::new(&["region", "t", "emp_tail", "emp_se", "exact_tail", "bound"]);
    for row in &report.rows {
        let label = row.region.label();
        for tail in &row.tails {
            t.push_row(vec![
                label.clone(),
                f(tail.t),
                f(tail.emp_tail),
                f(tail.emp_se),
                f(tail.exact_tail),
                f(tail.bound),
            ]);
        }
    }
    t
}

/// Per-region summary columns of a counting run (means and both variance
/// routes); the same schema serves the `exact` command with the empirical
/// columns absent.
pub fn counting_summary_csv(report: &CountingReport) -> CsvTable {
    let mut t = CsvTable::new(&[
        "region",
        "mu_alpha_mass",
        "exact_mean",
        "exact_var_spectral",
        "exact_var_decomposed",
        "emp_mean",
        "emp_var",
    ]);
    for row in &report.rows {
        t.push_row(vec![
            row.region.label(),
            f(row.mu_mass),
            f(row.exact_mean),
            f(row.exact_var_spectral),
            f(row.exact_var_second_route),
            f(row.emp_mean),
            f(row.emp_var),
        ]);
    }
    t
}

pub fn rigidity_csv(report: &RigidityReport) -> CsvTable {
    let mut t =
        CsvTable::new(&["p", "s", "emp_freq", "emp_se", "bound_small_s", "bound_large_s"]);
    for row in &report.rows {
        for g in &row.grid {
            t.push_row(vec![
                row.p.to_string(),
                f(g.s),
                f(g.emp_freq),
                f(g.emp_se),
                f(g.bound_small_s),
                f(g.bound_large_s),
            ]);
        }
    }
    t
}

pub fn variance_csv(report: &VarianceReport) -> CsvTable {
    let mut t = CsvTable::new(&["p", "emp_var", "jackknife_se", "scaling_column"]);
    for row in &report.rows {
        t.push_row(vec![
            row.p.to_string(),
            f(row.emp_var),
            f(row.jackknife_se),
            f(row.scaling),
        ]);
    }
    t
}

pub fn dbl_csv(report: &DblReport) -> CsvTable {
    let mut t = CsvTable::new(&["m", "median_proxy", "q90_proxy", "paper_bound_at_median"]);
    for row in &report.rows {
        t.push_row(vec![
            row.m.to_string(),
            f(row.median_proxy),
            f(row.q90_proxy),
            f(row.paper_bound_at_median),
        ]);
    }
    t
}
