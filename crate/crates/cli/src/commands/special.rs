use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use sg_core::special::{big_psi, upsilon, ConvergenceConfig, Estimate};
use sg_core::SgError;

use crate::output::{self, float, Format, Target};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    Psi,
    Upsilon,
}

/// `a:b:n`, `n` equally spaced points from `a` to `b` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    a: f64,
    b: f64,
    n: usize,
}

impl Range {
    fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.a];
        }
        let span = (self.n - 1) as f64;
        (0..self.n)
            .map(|k| self.a + (self.b - self.a) * (k as f64) / span)
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let [a, b, n] = s.split(':').collect::<Vec<_>>()[..] else {
            return Err(format!("range {s:?} is not a:b:n"));
        };
        let end = |x: &str| x.parse::<f64>().ok().filter(|v| v.is_finite());
        let (Some(a), Some(b)) = (end(a), end(b)) else {
            return Err(format!("range ends in {s:?} must be finite numbers"));
        };
        let n: usize = n.parse().map_err(|_| format!("point count {n:?} is not an integer"))?;
        if n == 0 {
            return Err("a range needs at least one point".into());
        }
        Ok(Range { a, b, n })
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long = "fn", value_enum)]
    function: Function,
    #[arg(long, allow_hyphen_values = true)]
    range: Range,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    target: Target,
}

#[derive(Serialize)]
struct Row {
    z: f64,
    value: Option<f64>,
    error: Option<f64>,
    /// `|Ψ(z)(5 − Ψ(z)) − Ψ(5z)|`, for Ψ where `5z` is in range.
    audit: Option<f64>,
    status: String,
}

fn evaluate(f: Function, z: f64, cfg: &ConvergenceConfig) -> Row {
    let result: Result<(Estimate, Option<f64>), SgError> = match f {
        Function::Psi => big_psi(z, cfg).map(|e| {
            let audit = big_psi(5.0 * z, cfg).ok().map(|p5| (e.value * (5.0 - e.value) - p5.value).abs());
            (e, audit)
        }),
        Function::Upsilon => upsilon(z, cfg).map(|e| (e, None)),
    };
    match result {
        Ok((e, audit)) => Row {
            z,
            value: Some(e.value),
            error: Some(e.error),
            audit,
            status: "ok".into(),
        },
        Err(e) => Row {
            z,
            value: None,
            error: None,
            audit: None,
            status: e.to_string(),
        },
    }
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let format = args.format.require(&[Format::Csv, Format::Json])?;
    if !(args.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol {} must be positive", args.tol)));
    }
    let cfg = ConvergenceConfig::with_tol(args.tol);
    let rows: Vec<Row> = args
        .range
        .points()
        .into_iter()
        .map(|z| evaluate(args.function, z, &cfg))
        .collect();

    let mut out = output::open(args.target.output.as_deref())?;
    if format == Format::Json {
        output::write_json(&mut out, &rows)?;
    } else {
        let opt = |x: Option<f64>| x.map(float).unwrap_or_default();
        let records: Vec<Vec<String>> = rows
            .iter()
            .map(|r| vec![float(r.z), opt(r.value), opt(r.error), opt(r.audit), r.status.clone()])
            .collect();
        output::write_csv(&mut out, &["z", "value", "error", "audit", "status"], &records)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: Range = "-1:1:5".parse().unwrap();
        assert_eq!(r.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!("3:9:1".parse::<Range>().unwrap().points(), vec![3.0]);
        for bad in ["1:2", "1:2:0", "a:2:3", "1:inf:3", "1:2:3:4"] {
            assert!(bad.parse::<Range>().is_err(), "{bad}");
        }
    }

    #[test]
    fn poles_become_rows() {
        let cfg = ConvergenceConfig::default();
        let row = evaluate(Function::Psi, 1e6, &cfg);
        assert!(row.value.is_none() && row.status != "ok");
        let row = evaluate(Function::Upsilon, 0.0, &cfg);
        assert_eq!(row.value, Some(0.5));
    }
}
