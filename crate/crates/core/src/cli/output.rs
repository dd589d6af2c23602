use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{CliError, ExitKind};

/// Significant digits for every float written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`: fixed notation for exponents in `[-5, 12)`, scientific otherwise,
/// trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (p as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub(crate) fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::new(ExitKind::Io, format!("{}: {e}", path.display()))
}

/// CSV file with a fixed header; floats go through [`format_float`].
pub struct CsvTable {
    path: PathBuf,
    writer: csv::Writer<File>,
}

pub enum Cell<'a> {
    Float(f64),
    Int(usize),
    Text(&'a str),
}

impl CsvTable {
    pub fn create(path: PathBuf, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_path(&path).map_err(|e| io_error(&path, e))?;
        writer.write_record(header).map_err(|e| io_error(&path, e))?;
        Ok(Self { path, writer })
    }

    pub fn row(&mut self, cells: &[Cell<'_>]) -> Result<(), CliError> {
        let record: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Float(x) => format_float(*x),
                Cell::Int(n) => n.to_string(),
                Cell::Text(s) => (*s).to_string(),
            })
            .collect();
        self.writer.write_record(&record).map_err(|e| io_error(&self.path, e))
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush().map_err(|e| io_error(&self.path, e))?;
        Ok(self.path)
    }
}

pub fn write_json(path: PathBuf, value: &impl Serialize) -> Result<PathBuf, CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(ExitKind::Computation, format!("serializing report: {e}")))?;
    std::fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-0.25), "-0.25");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.5e-7), "1.5e-07");
        assert_eq!(format_float(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_float(0.000123), "0.000123");
        assert_eq!(format_float(180.0), "180");
    }
}
