use serde::Serialize;

use sg_core::address::Letter;
use sg_core::oracle::normal_derivative_limit;
use sg_core::tangent::normal_derivative;

use crate::output::{self, float, Format, Target};
use crate::seed::SeedSpec;
use crate::Failure;

/// Accepted deviation from the difference-quotient limit, relative to
/// `max(1, |∂_n u|)`.
const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    seed: SeedSpec,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Compare with the renormalised difference quotient at `--depth`.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    #[command(flatten)]
    target: Target,
}

#[derive(Serialize)]
struct Record {
    vertex: usize,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let format = args.format.require(&[Format::Csv, Format::Json])?;
    let u = args.seed.build()?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for i in Letter::ALL {
        let value = normal_derivative(&u, i)?;
        let mut rec = Record {
            vertex: i.index(),
            value,
            limit: None,
            limit_error: None,
            deviation: None,
        };
        if args.verify {
            let est = normal_derivative_limit(&u, i, args.depth)?;
            let dev = (value - est.value).abs();
            if !(dev < VERIFY_TOL * value.abs().max(1.0)) {
                failures.push(format!("q{i}: deviation {dev:e}"));
            }
            rec.limit = Some(est.value);
            rec.limit_error = Some(est.error);
            rec.deviation = Some(dev);
        }
        records.push(rec);
    }

    let mut out = output::open(args.target.output.as_deref())?;
    if format == Format::Json {
        output::write_json(&mut out, &records)?;
    } else {
        let mut header = vec!["vertex", "value"];
        if args.verify {
            header.extend(["limit", "limit_error", "deviation"]);
        }
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                let mut row = vec![r.vertex.to_string(), float(r.value)];
                for x in [r.limit, r.limit_error, r.deviation].into_iter().flatten() {
                    row.push(float(x));
                }
                row
            })
            .collect();
        output::write_csv(&mut out, &header, &rows)?;
    }

    if !failures.is_empty() {
        return Err(Failure::Verify(failures.join(", ")));
    }
    Ok(())
}
