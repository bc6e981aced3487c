use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticKind {
    /// Fraction of trials whose embedding lower bound meets the threshold.
    SuccessProbability,
    MeanRelativeError,
    Snr,
}

impl StatisticKind {
    pub fn column(self) -> &'static str {
        match self {
            StatisticKind::SuccessProbability => "f_m",
            StatisticKind::MeanRelativeError => "mean_relative_error",
            StatisticKind::Snr => "snr_db",
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    /// Kernel coefficients separated by spaces, constant term first.
    pub kernel: String,
    pub distribution: String,
    pub m: usize,
    pub value: f64,
    pub trials: usize,
    pub std_error: f64,
    /// Trials that ended in a solver error.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub kind: StatisticKind,
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn new(kind: StatisticKind) -> Self {
        Self { kind, rows: Vec::new() }
    }

    /// Rows of one (kernel, distribution) series in grid order.
    pub fn series<'a>(&'a self, kernel: &'a str, distribution: &'a str) -> impl Iterator<Item = &'a CurveRow> + 'a {
        self.rows.iter().filter(move |r| r.kernel == kernel && r.distribution == distribution)
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "kernel,distribution,m,{},trials,std_error,failures", self.kind.column())?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.kernel, r.distribution, r.m, r.value, r.trials, r.std_error, r.failures
            )?;
        }
        Ok(())
    }
}

pub fn write_curve_csv(table: &CurveTable, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    table.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = CurveTable::new(StatisticKind::SuccessProbability);
        t.rows.push(CurveRow {
            kernel: "1 1".into(),
            distribution: "optimal".into(),
            m: 10,
            value: 0.5,
            trials: 4,
            std_error: 0.25,
            failures: 0,
        });
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "kernel,distribution,m,f_m,trials,std_error,failures\n1 1,optimal,10,0.5,4,0.25,0\n"
        );
    }
}
