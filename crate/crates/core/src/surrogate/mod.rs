//! Mesh-free surrogate models: MLP, ELM and RBF-ELM.
//!
//! Each family maps scattered `(point, value)` samples to a function that can
//! be evaluated anywhere. [`SurrogateModel`] wraps all three behind a single
//! `predict` call and a common file format.

mod centers;
mod elm;
mod io;
mod lstsq;
mod mlp;
mod rbf;

use std::path::Path;

pub use centers::{select_centers, CenterStrategy, KMEANS_ITERATIONS};
pub use elm::{elm_fit, elm_init, ElmModel};
pub use io::SURROGATE_MAGIC;
pub use lstsq::{fit_output_weights, LeastSquaresFit, LeastSquaresOptions, Ridge, SolveMethod};
pub use mlp::{mlp_init, mlp_train, AdamState, Layer, MlpModel, TrainConfig};
pub use rbf::{rbf_elm_fit, rbf_features, Convention, RbfElmConfig, RbfElmModel};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Rows of the feature matrix materialized at once during prediction.
const PREDICT_CHUNK: usize = 2048;

/// Outcome of an output-weight solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitInfo {
    /// `‖Hβ − U‖₂` on the training data.
    pub residual_norm: f64,
    pub lambda: f64,
}

fn check_targets(points: &[Point], dim: usize) -> Result<()> {
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurrogateModel {
    Mlp(MlpModel),
    Elm(ElmModel),
    RbfElm(RbfElmModel),
}

impl SurrogateModel {
    pub fn kind(&self) -> &'static str {
        match self {
            SurrogateModel::Mlp(_) => "mlp",
            SurrogateModel::Elm(_) => "elm",
            SurrogateModel::RbfElm(_) => "rbf_elm",
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            SurrogateModel::Mlp(m) => m.input_dim(),
            SurrogateModel::Elm(m) => m.input_dim(),
            SurrogateModel::RbfElm(m) => m.input_dim(),
        }
    }

    /// Evaluates the model at every target, preserving order.
    pub fn predict(&self, targets: &[Point]) -> Result<Vec<f64>> {
        match self {
            SurrogateModel::Mlp(m) => m.forward_batch(targets),
            SurrogateModel::Elm(m) => m.predict(targets),
            SurrogateModel::RbfElm(m) => m.predict(targets),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SurrogateModel> {
        Self::read_from(std::fs::File::open(path)?)
    }
}

impl From<MlpModel> for SurrogateModel {
    fn from(m: MlpModel) -> Self {
        SurrogateModel::Mlp(m)
    }
}

impl From<ElmModel> for SurrogateModel {
    fn from(m: ElmModel) -> Self {
        SurrogateModel::Elm(m)
    }
}

impl From<RbfElmModel> for SurrogateModel {
    fn from(m: RbfElmModel) -> Self {
        SurrogateModel::RbfElm(m)
    }
}
