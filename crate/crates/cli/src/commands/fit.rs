use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use meshfree_transfer::dataset::ScatteredDataset;
use meshfree_transfer::surrogate::*;
use meshfree_transfer::textio::fmt_real;

use super::{load_dataset, parse_list};
use crate::error::CliError;
use crate::output::Context;

#[derive(Subcommand, Debug)]
pub enum FitCommand {
    /// Tanh multilayer perceptron trained with full-batch Adam.
    Mlp(MlpArgs),
    /// Two-hidden-layer sine ELM with a least-squares output layer.
    Elm(ElmArgs),
    /// Gaussian RBF features with a least-squares output layer.
    RbfElm(RbfArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Solver {
    /// Cholesky on the ridge-regularized normal equations.
    Normal,
    /// Truncated SVD pseudoinverse.
    Svd,
}

#[derive(Args, Debug, Clone)]
pub struct LstsqArgs {
    /// Ridge strength, relative to the mean diagonal of HᵀH unless --ridge-absolute.
    #[arg(long, default_value_t = 1e-10)]
    pub ridge: f64,
    #[arg(long)]
    pub ridge_absolute: bool,
    #[arg(long, value_enum, default_value_t = Solver::Normal)]
    pub solver: Solver,
    /// Relative singular-value cutoff for --solver svd.
    #[arg(long, default_value_t = 1e-12)]
    pub svd_cutoff: f64,
}

impl LstsqArgs {
    pub fn options(&self) -> LeastSquaresOptions {
        LeastSquaresOptions {
            ridge: if self.ridge_absolute {
                Ridge::Absolute(self.ridge)
            } else {
                Ridge::Relative(self.ridge)
            },
            method: match self.solver {
                Solver::Normal => SolveMethod::NormalEquations,
                Solver::Svd => SolveMethod::SvdPinv,
            },
            svd_cutoff: self.svd_cutoff,
        }
    }
}

#[derive(Args, Debug)]
pub struct MlpArgs {
    #[arg(long)]
    data: PathBuf,
    /// Layer widths; defaults to `<dim>,64,64,1`.
    #[arg(long)]
    arch: Option<String>,
    /// Continue training this model (its Adam state included).
    #[arg(long)]
    init: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 10_000)]
    iters: usize,
    /// Extra iterations at lr × --refine-factor.
    #[arg(long, default_value_t = 0)]
    refine_iters: usize,
    #[arg(long, default_value_t = 0.1)]
    refine_factor: f64,
    /// Stop once the MSE drops below this.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Also write the per-iteration loss as CSV.
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(long, short, default_value = "model.surrogate")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ElmArgs {
    #[arg(long)]
    data: PathBuf,
    /// `d0,d1,d2,1`; defaults to `<dim>,256,2500,1`.
    #[arg(long)]
    arch: Option<String>,
    /// Hidden parameters are drawn from [-range, range].
    #[arg(long, default_value_t = 0.4)]
    range: f64,
    #[command(flatten)]
    lstsq: LstsqArgs,
    #[arg(long, short, default_value = "model.surrogate")]
    output: PathBuf,
}

#[derive(Args, Debug)]
pub struct RbfArgs {
    #[arg(long)]
    data: PathBuf,
    /// Number of centers.
    #[arg(long, default_value_t = 100)]
    nc: usize,
    /// Shape parameter.
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// `inverse_width`: exp(-eps²r²); `width`: exp(-r²/eps²).
    #[arg(long, default_value_t = Convention::InverseWidth)]
    convention: Convention,
    /// `random`, `uniform_grid` or `kmeans`.
    #[arg(long, default_value_t = CenterStrategy::Random)]
    strategy: CenterStrategy,
    #[command(flatten)]
    lstsq: LstsqArgs,
    #[arg(long, short, default_value = "model.surrogate")]
    output: PathBuf,
}

pub fn arch_or(arch: &Option<String>, default: &[usize], data_dim: usize) -> Result<Vec<usize>, CliError> {
    match arch {
        Some(s) => parse_list(s, "--arch"),
        None => Ok(std::iter::once(data_dim).chain(default.iter().copied()).collect()),
    }
}

pub fn run(cmd: FitCommand, ctx: &Context) -> Result<(), CliError> {
    let start = Instant::now();
    let (model, output, report) = match cmd {
        FitCommand::Mlp(a) => {
            let data = load_dataset(&a.data)?;
            let (model, history) = fit_mlp(&a, &data, ctx)?;
            if let Some(h) = &a.history {
                let path = ctx.output(h);
                ctx.write_atomic(&path, |w| {
                    writeln!(w, "iteration,loss")?;
                    for (i, l) in history.iter().enumerate() {
                        writeln!(w, "{i},{}", fmt_real(*l))?;
                    }
                    Ok(())
                })?;
            }
            let loss = model.loss_and_gradient(&data)?.0;
            let residual = (loss * data.len() as f64).sqrt();
            let report = format!("final loss {loss:.6e}, residual {residual:.6e}, {} iterations", history.len());
            (SurrogateModel::from(model), a.output, report)
        }
        FitCommand::Elm(a) => {
            let data = load_dataset(&a.data)?;
            let arch = arch_or(&a.arch, &[256, 2500, 1], data.dim())?;
            let model = elm_fit(&elm_init(&arch, a.range, ctx.seed)?, &data, &a.lstsq.options())?;
            let report = fit_report(model.fit_info());
            (SurrogateModel::from(model), a.output, report)
        }
        FitCommand::RbfElm(a) => {
            let data = load_dataset(&a.data)?;
            let config = RbfElmConfig {
                num_centers: a.nc,
                epsilon: a.eps,
                convention: a.convention,
                strategy: a.strategy,
                seed: ctx.seed,
                lstsq: a.lstsq.options(),
            };
            let model = rbf_elm_fit(&data, &config)?;
            let report = fit_report(model.fit_info());
            (SurrogateModel::from(model), a.output, report)
        }
    };
    let path = ctx.output(&output);
    ctx.write_atomic(&path, |w| Ok(model.write_to(w)?))?;
    ctx.write_echo(&path)?;
    println!(
        "{}: {} model, {report}, wall time {:.3} s",
        path.display(),
        model.kind(),
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn fit_report(info: Option<&FitInfo>) -> String {
    match info {
        Some(i) => format!("residual {:.6e}, ridge {:.3e}", i.residual_norm, i.lambda),
        None => "no fit".into(),
    }
}

fn fit_mlp(a: &MlpArgs, data: &ScatteredDataset, ctx: &Context) -> Result<(MlpModel, Vec<f64>), CliError> {
    let start = match &a.init {
        Some(p) => match SurrogateModel::load(p).map_err(|e| CliError::input(p, e))? {
            SurrogateModel::Mlp(m) => m,
            other => {
                return Err(CliError::Usage(format!(
                    "{}: expected an mlp model, found {}",
                    p.display(),
                    other.kind()
                )))
            }
        },
        None => mlp_init(&arch_or(&a.arch, &[64, 64, 1], data.dim())?, ctx.seed)?,
    };
    let config = TrainConfig {
        learning_rate: a.lr,
        max_iterations: a.iters,
        loss_tolerance: a.tol,
        refine_iterations: a.refine_iters,
        refine_lr_factor: a.refine_factor,
        ..Default::default()
    };
    Ok(mlp_train(&start, data, &config)?)
}
