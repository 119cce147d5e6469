use std::path::PathBuf;

use clap::{Args, Subcommand};
use meshfree_transfer::baseline::NodalField;
use meshfree_transfer::dataset::*;

use super::{load_dataset, load_mesh};
use crate::error::CliError;
use crate::output::Context;

#[derive(Subcommand, Debug)]
pub enum DatasetCommand {
    /// Exact field values at the mesh nodes.
    Sample(SampleArgs),
    /// Add quadrature points of large elements to a nodal dataset.
    Enrich(EnrichArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    field: BenchmarkField,
    #[arg(long, short, default_value = "dataset.csv")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct EnrichArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Nodal dataset of the mesh, in node order.
    #[arg(long)]
    data: PathBuf,
    /// Take new values from this field; without it the piecewise-linear
    /// interpolant of the nodal data is used.
    #[arg(long)]
    field: Option<BenchmarkField>,
    /// Only elements with a larger area are enriched.
    #[arg(long, default_value_t = 0.007)]
    threshold: f64,
    /// Quadrature points per element (1, 3 or 16).
    #[arg(long, default_value_t = 16)]
    points: usize,
    #[arg(long, short, default_value = "enriched.csv")]
    output: PathBuf,
}

pub fn run(cmd: DatasetCommand, ctx: &Context) -> Result<(), CliError> {
    let (data, output) = match cmd {
        DatasetCommand::Sample(a) => (sample_at_nodes(&load_mesh(&a.mesh)?, &a.field)?, a.output),
        DatasetCommand::Enrich(a) => (enrich(&a)?, a.output),
    };
    let path = ctx.output(&output);
    ctx.write_atomic(&path, |w| Ok(data.write_csv(w)?))?;
    ctx.write_echo(&path)?;
    println!("{}: {} samples", path.display(), data.len());
    Ok(())
}

fn enrich(a: &EnrichArgs) -> Result<ScatteredDataset, CliError> {
    let mesh = load_mesh(&a.mesh)?;
    let base = load_dataset(&a.data)?;
    match &a.field {
        Some(f) => Ok(enrich_with_quadrature(&mesh, &base, EnrichmentSource::Analytic(f), a.threshold, a.points)?),
        None => {
            let n = mesh.num_nodes();
            if base.len() < n || base.points()[..n] != *mesh.nodes() {
                return Err(CliError::Usage(format!(
                    "{}: without --field the dataset must start with the {n} mesh nodes in order",
                    a.data.display()
                )));
            }
            let nodal = NodalField::new(&mesh, base.values()[..n].to_vec())?;
            Ok(enrich_with_quadrature(&mesh, &base, EnrichmentSource::Nodal(&nodal), a.threshold, a.points)?)
        }
    }
}
