use std::path::PathBuf;

use clap::Args;
use meshfree_transfer::dataset::BenchmarkField;
use meshfree_transfer::geometry::*;
use meshfree_transfer::surrogate::{CenterStrategy, Convention, RbfElmConfig, TrainConfig};
use meshfree_transfer::transfer::*;

use super::fit::{arch_or, LstsqArgs};
use super::{load_mesh, parse_list};
use crate::error::CliError;
use crate::output::Context;

#[derive(Args, Debug)]
pub struct TransferArgs {
    /// Source mesh; defaults to a 99-cell lattice of the field's domain.
    #[arg(long)]
    mesh_a: Option<PathBuf>,
    /// Target mesh; defaults to the midpoint mesh of mesh A.
    #[arg(long)]
    mesh_b: Option<PathBuf>,
    #[arg(long)]
    field: BenchmarkField,
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Comma-separated: pl, rbf-elm, elm, mlp.
    #[arg(long, default_value = "pl,rbf-elm")]
    methods: String,
    #[arg(long, default_value_t = 100)]
    nc: usize,
    #[arg(long, default_value_t = 100.0)]
    eps: f64,
    #[arg(long, default_value_t = Convention::InverseWidth)]
    convention: Convention,
    #[arg(long, default_value_t = CenterStrategy::Random)]
    strategy: CenterStrategy,
    /// ELM widths; defaults to `<dim>,128,1024,1`.
    #[arg(long)]
    elm_arch: Option<String>,
    #[arg(long, default_value_t = 0.7)]
    elm_range: f64,
    /// MLP widths; defaults to `<dim>,64,64,1`.
    #[arg(long)]
    mlp_arch: Option<String>,
    #[arg(long, default_value_t = 2000)]
    mlp_iters: usize,
    #[arg(long, default_value_t = 1e-3)]
    mlp_lr: f64,
    #[command(flatten)]
    lstsq: LstsqArgs,
    #[arg(long, short, default_value = "report.csv")]
    output: PathBuf,
}

pub fn run(a: TransferArgs, ctx: &Context) -> Result<(), CliError> {
    let mesh_a = match &a.mesh_a {
        Some(p) => load_mesh(p)?,
        None if a.field.dim() == 1 => generate_uniform_1d(99, Interval::new(0.0, 1.0))?,
        None => generate_uniform_triangular(99, 99, Rect::symmetric_unit())?,
    };
    let mesh_b = match &a.mesh_b {
        Some(p) => load_mesh(p)?,
        None => derive_midpoint_mesh(&mesh_a)?,
    };
    let dim = a.field.dim();
    let mut methods: Vec<Box<dyn Interpolator>> = Vec::new();
    for name in a.methods.split(',').map(str::trim) {
        methods.push(match name {
            "pl" | "piecewise_linear" => Box::new(PiecewiseLinear),
            "rbf-elm" | "rbf_elm" => Box::new(RbfElmTransfer {
                config: RbfElmConfig {
                    num_centers: a.nc,
                    epsilon: a.eps,
                    convention: a.convention,
                    strategy: a.strategy,
                    seed: ctx.seed,
                    lstsq: a.lstsq.options(),
                },
            }),
            "elm" => {
                let arch = arch_or(&a.elm_arch, &[128, 1024, 1], dim)?;
                let arch: [usize; 4] = arch
                    .try_into()
                    .map_err(|_| CliError::Usage("--elm-arch needs four widths".into()))?;
                Box::new(ElmTransfer {
                    arch,
                    init_range: a.elm_range,
                    seed: ctx.seed,
                    lstsq: a.lstsq.options(),
                })
            }
            "mlp" => Box::new(MlpTransfer {
                arch: match &a.mlp_arch {
                    Some(s) => parse_list(s, "--mlp-arch")?,
                    None => vec![dim, 64, 64, 1],
                },
                seed: ctx.seed,
                train: TrainConfig {
                    learning_rate: a.mlp_lr,
                    max_iterations: a.mlp_iters,
                    ..Default::default()
                },
            }),
            other => return Err(CliError::Usage(format!("unknown method `{other}`"))),
        });
    }
    let cfg = CompareConfig {
        mesh_a: &mesh_a,
        mesh_b: &mesh_b,
        field: a.field,
        iterations: a.iters,
        methods,
    };
    let cmp = compare_methods(&cfg);
    let path = ctx.output(&a.output);
    let csv = cmp.to_csv();
    ctx.write_atomic(&path, |w| Ok(w.write_all(csv.as_bytes())?))?;
    ctx.write_echo(&path)?;
    let mut meta = path.as_os_str().to_owned();
    meta.push(".run");
    let echo = cmp.config_echo(&cfg);
    ctx.write_atomic(&PathBuf::from(meta), |w| Ok(w.write_all(echo.as_bytes())?))?;

    println!("{}: {} nodes -> {} nodes, {} iterations", path.display(), mesh_a.num_nodes(), mesh_b.num_nodes(), a.iters);
    for r in &cmp.reports {
        let last = |d| r.last(d).map_or(f64::NAN, |s| s.mae);
        println!(
            "  {}: final mae A->B {:.6e}, B->A {:.6e}",
            r.method,
            last(Direction::AToB),
            last(Direction::BToA)
        );
    }
    if let Some((name, e)) = cmp.failures.first() {
        for (n, e) in &cmp.failures {
            eprintln!("  {n}: {e}");
        }
        return Err(CliError::Runtime(format!("method {name} failed: {e}")));
    }
    Ok(())
}
