use std::path::PathBuf;

use clap::{Args, Subcommand};
use meshfree_transfer::dataset::BenchmarkField;
use meshfree_transfer::geometry::*;

use super::{load_mesh, parse_list};
use crate::error::CliError;
use crate::output::Context;

#[derive(Subcommand, Debug)]
pub enum MeshCommand {
    /// Uniform lattice (1D or 2D) or a graded mesh following a field.
    Gen(GenArgs),
    /// Mesh through the element centroids plus the source boundary nodes.
    Derive(DeriveArgs),
    /// Print node and element counts and the element size range.
    Info(InfoArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Cells along x, or along the interval for 1D bounds.
    #[arg(long)]
    nx: Option<usize>,
    /// Cells along y (defaults to nx).
    #[arg(long)]
    ny: Option<usize>,
    /// `x0,x1,y0,y1`, or `a,b` for a 1D mesh.
    #[arg(long, allow_hyphen_values = true, default_value = "-1,1,-1,1")]
    bounds: String,
    /// Grade the mesh with density `floor + |field|` instead of a lattice.
    #[arg(long)]
    density: Option<BenchmarkField>,
    #[arg(long, default_value_t = 0.05)]
    floor: f64,
    /// Node count for graded meshes.
    #[arg(long, default_value_t = 1000)]
    target: usize,
    #[arg(long, short, default_value = "mesh.mesh")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct DeriveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, short, default_value = "derived.mesh")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

pub fn run(cmd: MeshCommand, ctx: &Context) -> Result<(), CliError> {
    let (mesh, output) = match cmd {
        MeshCommand::Gen(a) => (generate(&a, ctx)?, a.output),
        MeshCommand::Derive(a) => (derive_midpoint_mesh(&load_mesh(&a.input)?)?, a.output),
        MeshCommand::Info(a) => {
            let mesh = load_mesh(&a.input)?;
            println!("{}", summary(&mesh));
            ctx.write_echo(&ctx.output("mesh-info".as_ref()))?;
            return Ok(());
        }
    };
    let path = ctx.output(&output);
    ctx.write_atomic(&path, |w| Ok(mesh.write_to(w)?))?;
    ctx.write_echo(&path)?;
    println!("{}: {}", path.display(), summary(&mesh));
    Ok(())
}

fn generate(a: &GenArgs, ctx: &Context) -> Result<Mesh, CliError> {
    let b: Vec<f64> = parse_list(&a.bounds, "--bounds")?;
    match (b.as_slice(), a.density) {
        (&[lo, hi], None) => {
            let n = a.nx.ok_or_else(|| CliError::Usage("--nx is required".into()))?;
            Ok(generate_uniform_1d(n, Interval::new(lo, hi))?)
        }
        (&[x0, x1, y0, y1], None) => {
            let nx = a.nx.ok_or_else(|| CliError::Usage("--nx is required".into()))?;
            Ok(generate_uniform_triangular(nx, a.ny.unwrap_or(nx), Rect::new(x0, x1, y0, y1))?)
        }
        (&[x0, x1, y0, y1], Some(field)) => {
            if field.dim() != 2 {
                return Err(CliError::Usage(format!("graded meshes need a 2D field, got {field}")));
            }
            let floor = a.floor;
            let density = move |p: &Point| floor + field.eval(p).map_or(0.0, f64::abs);
            Ok(generate_graded_mesh(density, a.target, Rect::new(x0, x1, y0, y1), ctx.seed)?)
        }
        _ => Err(CliError::Usage(format!(
            "--bounds needs 2 values (1D) or 4 values (2D) and graded meshes are 2D only; got `{}`",
            a.bounds
        ))),
    }
}

fn summary(mesh: &Mesh) -> String {
    let m = mesh.element_measures();
    let min = m.iter().copied().fold(f64::INFINITY, f64::min);
    let max = m.iter().copied().fold(0.0, f64::max);
    format!(
        "{} nodes, {} elements, element size {min:.6e}..{max:.6e}",
        mesh.num_nodes(),
        mesh.num_elements()
    )
}
