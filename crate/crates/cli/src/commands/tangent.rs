use clap::ValueEnum;
use serde::Serialize;

use sg_core::address::EventuallyConstantWord;
use sg_core::linalg::{max_abs, max_abs_diff};
use sg_core::oracle::direct_tangent_limit;
use sg_core::tangent::{assemble_dirichlet_tangent, tangent_at};

use crate::output::{self, float, triple, Format, Target};
use crate::seed::SeedSpec;
use crate::Failure;

/// Accepted deviation from the oracle, relative to `max(1, ‖T‖_∞)`.
const VERIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// The closed form through `M_0(λ, k)`.
    Closed,
    /// Assembly from the 2-, 5- and 6-piece tangents (Dirichlet seeds only).
    Pieces,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    seed: SeedSpec,
    /// Address `prefix:tail`, e.g. `012:1`; repeat for several.
    #[arg(long = "word", required = true)]
    words: Vec<EventuallyConstantWord>,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Compare with the brute-force matrix-product limit.
    #[arg(long)]
    verify: bool,
    /// Truncation level of the oracle.
    #[arg(long, default_value_t = 25)]
    oracle_level: usize,
    #[command(flatten)]
    target: Target,
}

#[derive(Serialize)]
struct Record {
    word: String,
    triple: [f64; 3],
    gradient: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

#[derive(Serialize)]
struct Report {
    seed: String,
    lambda: f64,
    method: String,
    tangents: Vec<Record>,
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let format = args.format.require(&[Format::Csv, Format::Json])?;
    let u = args.seed.build()?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for w in &args.words {
        let t = match args.method {
            Method::Closed => tangent_at(&u, w)?,
            Method::Pieces => assemble_dirichlet_tangent(&u, w)?,
        };
        let mut rec = Record {
            word: w.to_string(),
            triple: t.0,
            gradient: t.gradient(),
            oracle: None,
            oracle_error: None,
            deviation: None,
        };
        if args.verify {
            let d = direct_tangent_limit(&u, w, args.oracle_level)?;
            let dev = max_abs_diff(&t.0, &d.triple.0);
            if !(dev < VERIFY_TOL * max_abs(&t.0).max(1.0)) {
                failures.push(format!("{w}: deviation {dev:e}"));
            }
            rec.oracle = Some(d.triple.0);
            rec.oracle_error = Some(d.error);
            rec.deviation = Some(dev);
        }
        records.push(rec);
    }

    let mut out = output::open(args.target.output.as_deref())?;
    if format == Format::Json {
        let report = Report {
            seed: args.seed.to_string(),
            lambda: u.lambda(),
            method: format!("{:?}", args.method).to_lowercase(),
            tangents: records,
        };
        output::write_json(&mut out, &report)?;
    } else {
        let mut header = vec!["word", "t0", "t1", "t2", "g0", "g1", "g2"];
        if args.verify {
            header.extend(["oracle", "oracle_error", "deviation"]);
        }
        let rows: Vec<Vec<String>> = records
            .iter()
            .map(|r| {
                let mut row = vec![r.word.clone()];
                row.extend(r.triple.map(float));
                row.extend(r.gradient.map(float));
                if let (Some(o), Some(e), Some(d)) = (r.oracle, r.oracle_error, r.deviation) {
                    row.extend([triple(&o), float(e), float(d)]);
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
