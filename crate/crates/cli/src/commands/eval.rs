use std::io::Write;

use serde::Serialize;

use sg_core::address::{LevelGraph, Triangle};
use sg_core::harmonic::{eigen_residual, LevelValues};

use crate::output::{self, float, Format, Target};
use crate::seed::SeedSpec;
use crate::Failure;

const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long)]
    seed: SeedSpec,
    #[arg(long)]
    level: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Re-read the written values and check the level-m eigen-equation.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    target: Target,
}

#[derive(Serialize)]
struct Vertex {
    vertex: String,
    birth_level: usize,
    x: f64,
    y: f64,
    value: f64,
}

#[derive(Serialize)]
struct Mesh {
    seed: String,
    lambda: f64,
    level: usize,
    lambda_m: f64,
    vertices: Vec<Vertex>,
    /// Vertex indices (0-based) of the level-m cells.
    faces: Vec<[usize; 3]>,
}

fn write_obj(out: &mut dyn Write, mesh: &Mesh) -> Result<(), Failure> {
    writeln!(out, "# sg eval seed={} level={} lambda={}", mesh.seed, mesh.level, float(mesh.lambda))?;
    writeln!(out, "# height field: z = u(x, y)")?;
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", float(v.x), float(v.y), float(v.value))?;
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    out.flush()?;
    Ok(())
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let u = args.seed.build()?;
    let m = args.level;
    let values = u.on_level(m)?;
    let graph = LevelGraph::shared(m)?;
    let tri = Triangle::default();
    let vertices: Vec<Vertex> = graph
        .vertices()
        .iter()
        .zip(&values.values)
        .map(|(v, &value)| {
            let [x, y] = tri.vertex_position(v);
            Vertex {
                vertex: v.to_string(),
                birth_level: v.level(),
                x,
                y,
                value,
            }
        })
        .collect();
    let mesh = Mesh {
        seed: args.seed.to_string(),
        lambda: u.lambda(),
        level: m,
        lambda_m: u.seq().lambda(m),
        vertices,
        faces: graph.cells().to_vec(),
    };

    let mut out = output::open(args.target.output.as_deref())?;
    match args.format {
        Format::Json => output::write_json(&mut out, &mesh)?,
        Format::Obj => write_obj(&mut out, &mesh)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = mesh
                .vertices
                .iter()
                .map(|v| vec![v.vertex.clone(), v.birth_level.to_string(), float(v.x), float(v.y), float(v.value)])
                .collect();
            output::write_csv(&mut out, &["vertex", "level", "x", "y", "value"], &rows)?;
        }
    }

    if args.verify {
        // round trip through the printed form
        let reread = mesh
            .vertices
            .iter()
            .map(|v| float(v.value).parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Failure::Verify(e.to_string()))?;
        let scale = reread.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let residual = eigen_residual(&graph, &LevelValues::new(m, reread), mesh.lambda_m)?;
        eprintln!("eigen-equation residual: {residual:e}");
        if !(residual < VERIFY_TOL * scale) {
            return Err(Failure::Verify(format!("residual {residual:e} exceeds {VERIFY_TOL:e}")));
        }
    }
    Ok(())
}
