use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use meshfree_transfer::baseline::{FieldFile, NodalField};
use meshfree_transfer::dataset::BenchmarkField;
use meshfree_transfer::geometry::Point;
use meshfree_transfer::surrogate::SurrogateModel;
use meshfree_transfer::textio::fmt_real;
use meshfree_transfer::transfer::{mae, rl2};

use super::{load_mesh, load_targets};
use crate::error::CliError;
use crate::output::Context;

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// Mesh file (its nodes) or CSV of points.
    #[arg(long)]
    targets: PathBuf,
    /// Report MAE and RL2 against this field.
    #[arg(long)]
    truth: Option<BenchmarkField>,
    #[arg(long, short, default_value = "predictions.csv")]
    output: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum BaselineCommand {
    /// Write a nodal field file with exact values at the mesh nodes.
    Sample(BaselineSampleArgs),
    /// Interpolate a nodal field file at target points.
    Eval(BaselineEvalArgs),
}

#[derive(Args, Debug)]
pub struct BaselineSampleArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    field: BenchmarkField,
    #[arg(long, short, default_value = "values.field")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct BaselineEvalArgs {
    /// Nodal field file; its mesh path resolves against the file's directory.
    #[arg(long)]
    values: PathBuf,
    #[arg(long)]
    targets: PathBuf,
    #[arg(long)]
    truth: Option<BenchmarkField>,
    #[arg(long, short, default_value = "predictions.csv")]
    output: PathBuf,
}

pub fn run_eval(a: EvalArgs, ctx: &Context) -> Result<(), CliError> {
    let model = SurrogateModel::load(&a.model).map_err(|e| CliError::input(&a.model, e))?;
    let targets = load_targets(&a.targets)?;
    let pred = model.predict(&targets)?;
    finish(ctx, &a.output, &targets, &pred, a.truth)
}

pub fn run_baseline(cmd: BaselineCommand, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        BaselineCommand::Sample(a) => {
            let mesh = load_mesh(&a.mesh)?;
            let values = mesh.nodes().iter().map(|p| a.field.eval(p)).collect::<Result<_, _>>()?;
            let mesh_path = a.mesh.canonicalize()?;
            let file = FieldFile { mesh_path, values };
            let path = ctx.output(&a.output);
            ctx.write_atomic(&path, |w| Ok(file.write_to(w)?))?;
            ctx.write_echo(&path)?;
            println!("{}: {} nodal values", path.display(), file.values.len());
            Ok(())
        }
        BaselineCommand::Eval(a) => {
            let file = FieldFile::load(&a.values).map_err(|e| CliError::input(&a.values, e))?;
            let mesh = load_mesh(&file.resolve_mesh_path(&a.values))?;
            let field = NodalField::new(&mesh, file.values)?;
            let targets = load_targets(&a.targets)?;
            let pred = field.interpolate_batch(&targets)?;
            finish(ctx, &a.output, &targets, &pred, a.truth)
        }
    }
}

fn finish(
    ctx: &Context,
    output: &Path,
    targets: &[Point],
    pred: &[f64],
    truth: Option<BenchmarkField>,
) -> Result<(), CliError> {
    let path = ctx.output(output);
    let dim = targets.first().map_or(2, Point::dim);
    ctx.write_atomic(&path, |w| {
        writeln!(w, "{}", if dim == 1 { "x,value" } else { "x,y,value" })?;
        for (p, v) in targets.iter().zip(pred) {
            let mut row: Vec<String> = p.coords().iter().map(|&c| fmt_real(c)).collect();
            row.push(fmt_real(*v));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })?;
    ctx.write_echo(&path)?;
    print!("{}: {} predictions", path.display(), pred.len());
    if let (Some(f), false) = (truth, targets.is_empty()) {
        let exact = targets.iter().map(|p| f.eval(p)).collect::<Result<Vec<_>, _>>()?;
        print!(", mae {:.6e}, rl2 {:.6e}", mae(pred, &exact)?, rl2(pred, &exact)?);
    }
    println!();
    Ok(())
}
