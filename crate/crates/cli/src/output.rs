//! Output plumbing. Floats are written in shortest round-trip form, so
//! re-reading any table recovers the exact `f64`s.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

impl Format {
    /// Rejects formats a command has no use for.
    pub fn require(self, allowed: &[Format]) -> Result<Self, Failure> {
        if allowed.contains(&self) {
            Ok(self)
        } else {
            Err(Failure::Usage(format!("format {self:?} is not available here").to_lowercase()))
        }
    }
}

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn triple(v: &[f64; 3]) -> String {
    v.map(float).join(";")
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes a header and rows as RFC 4180 CSV.
pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, clap::Args)]
pub struct Target {
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 2.0, -1e-20, 1.0 / 3.0, 6.0e22, f64::MIN_POSITIVE] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(2.0), "2.0");
    }

    #[test]
    fn csv_quotes_fields() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &["a", "b"], &[vec!["x,y".into(), "1.0".into()]]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n\"x,y\",1.0\n");
    }
}
