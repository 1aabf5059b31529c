use clap::ValueEnum;
use serde::Serialize;

use sg_core::address::level_cap;
use sg_core::decimation::{
    dirichlet_basis, dirichlet_eigenvalues, enumerate_dirichlet, DirichletSeed, Series, SpectrumEntry,
};
use sg_core::oracle::{multiset_gap, shared_dense_spectrum, DENSE_LEVEL_CAP};
use sg_core::SgError;

use crate::output::{self, float, Format, Target};
use crate::Failure;

/// Largest residual or gap `--verify` accepts.
const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFilter {
    Two,
    Five,
    Six,
    All,
}

impl SeriesFilter {
    fn admits(self, s: Series) -> bool {
        match self {
            SeriesFilter::All => true,
            SeriesFilter::Two => s == Series::Two,
            SeriesFilter::Five => s == Series::Five,
            SeriesFilter::Six => s == Series::Six,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    level: usize,
    #[arg(long, value_enum, default_value_t = SeriesFilter::All)]
    series: SeriesFilter,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Check every basis function against the dense eigensolver (level <= 6).
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    target: Target,
}

#[derive(Serialize)]
struct Row {
    series: String,
    m0: usize,
    branches: String,
    lambda_m: f64,
    limit: f64,
    multiplicity: usize,
    /// `λ_{m0}, …, λ_m`.
    sequence: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
}

#[derive(Serialize)]
struct Table {
    level: usize,
    rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense_gap: Option<f64>,
}

/// Largest dense-matrix residual `‖(-Δ_m − λ_m) v‖_∞ / ‖v‖_∞` over the basis
/// functions of `entry`.
fn residual(entry: &SpectrumEntry, level: usize) -> Result<f64, Failure> {
    let dense = shared_dense_spectrum(level)?;
    let mut worst = 0.0f64;
    for index in 1..=entry.multiplicity {
        let seed = DirichletSeed::new(entry.series, entry.m0, index)?;
        let u = dirichlet_basis(seed, &entry.branches)?;
        let v = dense.restrict(&u.on_level(level)?)?;
        let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        worst = worst.max(dense.residual(&v, entry.lambda_m) / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

fn sequence(entry: &SpectrumEntry, level: usize) -> Result<Vec<f64>, Failure> {
    let seed = DirichletSeed::new(entry.series, entry.m0, 1)?;
    let seq = seed.sequence(&entry.branches)?;
    Ok((entry.m0..=level).map(|m| seq.lambda(m)).collect())
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let format = args.format.require(&[Format::Csv, Format::Json])?;
    let m = args.level;
    if args.verify && m > DENSE_LEVEL_CAP {
        return Err(Failure::Usage(format!(
            "--verify needs --level <= {DENSE_LEVEL_CAP}, the dense solver cap"
        )));
    }
    if m > level_cap() {
        return Err(SgError::LevelCap {
            requested: m,
            cap: level_cap(),
            what: "spectrum enumeration (SG_MAX_LEVEL)",
        }
        .into());
    }

    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for entry in enumerate_dirichlet(m)? {
        if !args.series.admits(entry.series) {
            continue;
        }
        let res = if args.verify { Some(residual(&entry, m)?) } else { None };
        worst = worst.max(res.unwrap_or(0.0));
        rows.push(Row {
            series: entry.series.to_string(),
            m0: entry.m0,
            branches: entry.branch_string(),
            lambda_m: entry.lambda_m,
            limit: entry.limit,
            multiplicity: entry.multiplicity,
            sequence: sequence(&entry, m)?,
            residual: res,
        });
    }
    let dense_gap = if args.verify && args.series == SeriesFilter::All && m > 0 {
        let dense = shared_dense_spectrum(m)?;
        Some(multiset_gap(&dense.eigenvalues, &dirichlet_eigenvalues(m)?).unwrap_or(f64::INFINITY))
    } else {
        None
    };

    let mut out = output::open(args.target.output.as_deref())?;
    match format {
        Format::Json => output::write_json(&mut out, &Table { level: m, rows, dense_gap })?,
        _ => {
            let mut header = vec!["series", "m0", "branches", "lambda_m", "limit", "multiplicity", "sequence"];
            if args.verify {
                header.push("residual");
            }
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut rec = vec![
                        r.series.clone(),
                        r.m0.to_string(),
                        r.branches.clone(),
                        float(r.lambda_m),
                        float(r.limit),
                        r.multiplicity.to_string(),
                        r.sequence.iter().map(|x| float(*x)).collect::<Vec<_>>().join(";"),
                    ];
                    rec.extend(r.residual.map(float));
                    rec
                })
                .collect();
            output::write_csv(&mut out, &header, &records)?;
        }
    }

    if args.verify {
        if let Some(gap) = dense_gap {
            eprintln!("dense spectrum gap: {gap:e}");
        }
        eprintln!("max residual: {worst:e}");
        if !(worst < VERIFY_TOL) || dense_gap.is_some_and(|g| !(g < VERIFY_TOL)) {
            return Err(Failure::Verify(format!(
                "residual {worst:e}, dense gap {:e} (tolerance {VERIFY_TOL:e})",
                dense_gap.unwrap_or(0.0)
            )));
        }
    }
    Ok(())
}
