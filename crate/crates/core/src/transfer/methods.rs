use crate::baseline::NodalField;
use crate::dataset::ScatteredDataset;
use crate::error::Result;
use crate::geometry::{Mesh, Point};
use crate::surrogate::{
    elm_fit, elm_init, mlp_init, mlp_train, rbf_elm_fit, ElmModel, LeastSquaresOptions, MlpModel, RbfElmConfig,
    RbfElmModel, TrainConfig,
};

/// A fitted field that can be evaluated at arbitrary points.
pub trait Evaluator {
    fn evaluate(&self, targets: &[Point]) -> Result<Vec<f64>>;
}

/// A recipe turning nodal values on a source mesh into an [`Evaluator`].
pub trait Interpolator {
    /// Identifier used in report rows.
    fn name(&self) -> String;

    /// Hyperparameters echoed into report sidecars.
    fn config(&self) -> Vec<(String, String)>;

    /// `fit_index` distinguishes successive refits so randomized methods can
    /// derive fresh, reproducible seeds.
    fn fit<'m>(&self, mesh: &'m Mesh, values: &[f64], fit_index: u64) -> Result<Box<dyn Evaluator + 'm>>;
}

fn nodal_dataset(mesh: &Mesh, values: &[f64]) -> Result<ScatteredDataset> {
    ScatteredDataset::new(mesh.dim(), mesh.nodes().to_vec(), values.to_vec())
}

/// Classical finite-element interpolation on the source mesh.
#[derive(Clone, Copy, Debug, Default)]
pub struct PiecewiseLinear;

impl<'m> Evaluator for NodalField<'m> {
    fn evaluate(&self, targets: &[Point]) -> Result<Vec<f64>> {
        self.interpolate_batch(targets)
    }
}

impl Interpolator for PiecewiseLinear {
    fn name(&self) -> String {
        "piecewise_linear".into()
    }

    fn config(&self) -> Vec<(String, String)> {
        Vec::new()
    }

    fn fit<'m>(&self, mesh: &'m Mesh, values: &[f64], _: u64) -> Result<Box<dyn Evaluator + 'm>> {
        Ok(Box::new(NodalField::new(mesh, values.to_vec())?))
    }
}

impl Evaluator for RbfElmModel {
    fn evaluate(&self, targets: &[Point]) -> Result<Vec<f64>> {
        self.predict(targets)
    }
}

impl Evaluator for ElmModel {
    fn evaluate(&self, targets: &[Point]) -> Result<Vec<f64>> {
        self.predict(targets)
    }
}

impl Evaluator for MlpModel {
    fn evaluate(&self, targets: &[Point]) -> Result<Vec<f64>> {
        self.forward_batch(targets)
    }
}

/// RBF-ELM refit on the current nodal values; fit `k` uses seed `seed + k`.
#[derive(Clone, Copy, Debug)]
pub struct RbfElmTransfer {
    pub config: RbfElmConfig,
}

impl Interpolator for RbfElmTransfer {
    fn name(&self) -> String {
        "rbf_elm".into()
    }

    fn config(&self) -> Vec<(String, String)> {
        let c = &self.config;
        vec![
            ("num_centers".into(), c.num_centers.to_string()),
            ("epsilon".into(), c.epsilon.to_string()),
            ("convention".into(), c.convention.to_string()),
            ("strategy".into(), c.strategy.to_string()),
            ("seed".into(), c.seed.to_string()),
        ]
    }

    fn fit<'m>(&self, mesh: &'m Mesh, values: &[f64], fit_index: u64) -> Result<Box<dyn Evaluator + 'm>> {
        let cfg = RbfElmConfig {
            seed: self.config.seed.wrapping_add(fit_index),
            ..self.config
        };
        Ok(Box::new(rbf_elm_fit(&nodal_dataset(mesh, values)?, &cfg)?))
    }
}

/// Plain ELM; hidden layers are redrawn per fit from `seed + k`.
#[derive(Clone, Debug)]
pub struct ElmTransfer {
    pub arch: [usize; 4],
    pub init_range: f64,
    pub seed: u64,
    pub lstsq: LeastSquaresOptions,
}

impl Interpolator for ElmTransfer {
    fn name(&self) -> String {
        "elm".into()
    }

    fn config(&self) -> Vec<(String, String)> {
        vec![
            ("arch".into(), format!("{:?}", self.arch)),
            ("init_range".into(), self.init_range.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }

    fn fit<'m>(&self, mesh: &'m Mesh, values: &[f64], fit_index: u64) -> Result<Box<dyn Evaluator + 'm>> {
        let model = elm_init(&self.arch, self.init_range, self.seed.wrapping_add(fit_index))?;
        Ok(Box::new(elm_fit(&model, &nodal_dataset(mesh, values)?, &self.lstsq)?))
    }
}

/// MLP trained from scratch at every fit. Slow; intended for small runs.
#[derive(Clone, Debug)]
pub struct MlpTransfer {
    pub arch: Vec<usize>,
    pub seed: u64,
    pub train: TrainConfig,
}

impl Interpolator for MlpTransfer {
    fn name(&self) -> String {
        "mlp".into()
    }

    fn config(&self) -> Vec<(String, String)> {
        vec![
            ("arch".into(), format!("{:?}", self.arch)),
            ("seed".into(), self.seed.to_string()),
            ("learning_rate".into(), self.train.learning_rate.to_string()),
            ("max_iterations".into(), self.train.max_iterations.to_string()),
            ("refine_iterations".into(), self.train.refine_iterations.to_string()),
        ]
    }

    fn fit<'m>(&self, mesh: &'m Mesh, values: &[f64], fit_index: u64) -> Result<Box<dyn Evaluator + 'm>> {
        let model = mlp_init(&self.arch, self.seed.wrapping_add(fit_index))?;
        let (trained, _) = mlp_train(&model, &nodal_dataset(mesh, values)?, &self.train)?;
        Ok(Box::new(trained))
    }
}
