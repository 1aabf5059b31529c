//! `sg`: Dirichlet spectra, eigenfunction meshes, harmonic tangents, normal
//! derivatives and special-function tables on the Sierpinski gasket.
//!
//! Exit status: 0 ok, 1 I/O, 2 usage, 3 domain error, 4 failed `--verify`.

mod commands;
mod output;
mod seed;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sg_core::SgError;

#[derive(Parser)]
#[command(name = "sg", version, about = "Spectral decimation on the Sierpinski gasket")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dirichlet eigenvalues of the level-m graph Laplacian by family.
    Spectrum(commands::spectrum::Args),
    /// Values of one eigenfunction on V_m.
    Eval(commands::eval::Args),
    /// Harmonic tangents at eventually constant addresses.
    Tangent(commands::tangent::Args),
    /// Normal derivatives at the three boundary vertices.
    Normal(commands::normal::Args),
    /// Tables of Ψ or Υ.
    Special(commands::special::Args),
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(SgError),
    Verify(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Verify(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Verify(m) => write!(f, "verification failed: {m}"),
            Failure::Io(m) => write!(f, "i/o: {m}"),
        }
    }
}

impl From<SgError> for Failure {
    fn from(e: SgError) -> Self {
        match e {
            SgError::Invalid(_) | SgError::LevelMismatch { .. } => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed flags
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => commands::spectrum::run(a),
        Command::Eval(a) => commands::eval::run(a),
        Command::Tangent(a) => commands::tangent::run(a),
        Command::Normal(a) => commands::normal::run(a),
        Command::Special(a) => commands::special::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sg: {f}");
            ExitCode::from(f.code())
        }
    }
}
