use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::centers::{select_centers, CenterStrategy};
use super::lstsq::{fit_output_weights, LeastSquaresOptions};
use super::{check_targets, FitInfo, PREDICT_CHUNK};
use crate::dataset::ScatteredDataset;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// How the shape parameter enters the Gaussian kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// `exp(−r²/ε²)`: ε is a length scale.
    Width,
    /// `exp(−ε²r²)`: ε is an inverse length scale.
    #[default]
    InverseWidth,
}

impl Convention {
    /// Coefficient `f` in `exp(−f r²)`.
    fn factor(self, epsilon: f64) -> f64 {
        match self {
            Convention::Width => 1.0 / (epsilon * epsilon),
            Convention::InverseWidth => epsilon * epsilon,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Width => "width",
            Convention::InverseWidth => "inverse_width",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "width" => Ok(Convention::Width),
            "inverse_width" | "inverse-width" => Ok(Convention::InverseWidth),
            _ => Err(Error::invalid(format!("unknown epsilon convention `{s}`"))),
        }
    }
}

/// Gaussian features of `x` against every center.
pub fn rbf_features(centers: &[Point], epsilon: f64, convention: Convention, x: &Point) -> Vec<f64> {
    let f = convention.factor(epsilon);
    centers.iter().map(|c| (-f * x.dist2(c)).exp()).collect()
}

/// Hyperparameters of an RBF-ELM fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RbfElmConfig {
    pub num_centers: usize,
    pub epsilon: f64,
    pub convention: Convention,
    pub strategy: CenterStrategy,
    pub seed: u64,
    pub lstsq: LeastSquaresOptions,
}

impl RbfElmConfig {
    pub fn new(num_centers: usize, epsilon: f64) -> Self {
        RbfElmConfig {
            num_centers,
            epsilon,
            convention: Convention::default(),
            strategy: CenterStrategy::Random,
            seed: 0,
            lstsq: LeastSquaresOptions::default(),
        }
    }
}

/// Single-hidden-layer network of Gaussian radial basis functions.
#[derive(Clone, Debug, PartialEq)]
pub struct RbfElmModel {
    pub(crate) centers: Vec<Point>,
    pub(crate) epsilon: f64,
    pub(crate) convention: Convention,
    pub(crate) strategy: CenterStrategy,
    pub(crate) seed: u64,
    pub(crate) beta: Option<Vec<f64>>,
    pub(crate) fit_info: Option<FitInfo>,
}

impl RbfElmModel {
    /// Unfitted model on explicit centers.
    pub fn with_centers(centers: Vec<Point>, epsilon: f64, convention: Convention) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::invalid("need at least one center"));
        }
        check_targets(&centers, centers[0].dim())?;
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(RbfElmModel {
            centers,
            epsilon,
            convention,
            strategy: CenterStrategy::Random,
            seed: 0,
            beta: None,
            fit_info: None,
        })
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn strategy(&self) -> CenterStrategy {
        self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn input_dim(&self) -> usize {
        self.centers[0].dim()
    }

    pub fn beta(&self) -> Option<&[f64]> {
        self.beta.as_deref()
    }

    pub fn fit_info(&self) -> Option<&FitInfo> {
        self.fit_info.as_ref()
    }

    pub fn with_beta(&self, beta: Vec<f64>) -> Result<Self> {
        if beta.len() != self.centers.len() {
            return Err(Error::DimensionMismatch {
                expected: self.centers.len(),
                found: beta.len(),
            });
        }
        Ok(RbfElmModel {
            beta: Some(beta),
            fit_info: None,
            ..self.clone()
        })
    }

    pub fn features(&self, x: &Point) -> Result<Vec<f64>> {
        check_targets(std::slice::from_ref(x), self.input_dim())?;
        Ok(rbf_features(&self.centers, self.epsilon, self.convention, x))
    }

    /// `N × Nc` kernel matrix, one row per point.
    pub fn feature_matrix(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        check_targets(points, self.input_dim())?;
        let f = self.convention.factor(self.epsilon);
        Ok(DMatrix::from_fn(points.len(), self.centers.len(), |i, j| {
            (-f * points[i].dist2(&self.centers[j])).exp()
        }))
    }

    /// Fits output weights on the current centers.
    pub fn fit(&self, data: &ScatteredDataset, opts: &LeastSquaresOptions) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::invalid("training data is empty"));
        }
        let h = self.feature_matrix(data.points())?;
        let fit = fit_output_weights(&h, data.values(), opts)?;
        Ok(RbfElmModel {
            beta: Some(fit.beta),
            fit_info: Some(FitInfo {
                residual_norm: fit.residual_norm,
                lambda: fit.lambda,
            }),
            ..self.clone()
        })
    }

    pub fn predict(&self, targets: &[Point]) -> Result<Vec<f64>> {
        let beta = DVector::from_column_slice(self.beta.as_deref().ok_or(Error::NotFitted)?);
        check_targets(targets, self.input_dim())?;
        let mut out = Vec::with_capacity(targets.len());
        for chunk in targets.chunks(PREDICT_CHUNK) {
            out.extend((self.feature_matrix(chunk)? * &beta).iter());
        }
        Ok(out)
    }
}

/// Selects centers from the data, then fits the output weights.
pub fn rbf_elm_fit(data: &ScatteredDataset, config: &RbfElmConfig) -> Result<RbfElmModel> {
    let centers = select_centers(data.points(), config.num_centers, config.strategy, config.seed)?;
    let mut model = RbfElmModel::with_centers(centers, config.epsilon, config.convention)?;
    model.strategy = config.strategy;
    model.seed = config.seed;
    model.fit(data, &config.lstsq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::Ridge;

    #[test]
    fn kernel_values() {
        let c = [Point::new2(0.2, 0.3)];
        for conv in [Convention::Width, Convention::InverseWidth] {
            assert_eq!(rbf_features(&c, 7.0, conv, &c[0]), vec![1.0]);
        }
        let x = Point::new2(0.2 + 0.5, 0.3);
        let v = rbf_features(&c, 0.5, Convention::Width, &x)[0];
        assert!((v - (-1f64).exp()).abs() < 1e-15);
        let x = Point::new2(0.3, 0.3);
        let v = rbf_features(&c, 60.0, Convention::InverseWidth, &x)[0];
        let want = (-36f64).exp();
        assert!((v - want).abs() < 1e-12 * want);
    }

    #[test]
    fn all_points_as_centers_interpolate() {
        let pts: Vec<Point> = (0..40).map(|i| Point::new1(i as f64 / 39.0)).collect();
        let vals: Vec<f64> = pts.iter().map(|p| (3.0 * p.x()).cos()).collect();
        let data = ScatteredDataset::new(1, pts, vals).unwrap();
        let mut cfg = RbfElmConfig::new(40, 100.0);
        cfg.lstsq.ridge = Ridge::Absolute(0.0);
        let m = rbf_elm_fit(&data, &cfg).unwrap();
        assert!(m.fit_info().unwrap().residual_norm < 1e-8);
        assert!(rbf_elm_fit(&data, &RbfElmConfig::new(0, 1.0)).is_err());
        assert!(rbf_elm_fit(&data, &RbfElmConfig::new(41, 1.0)).is_err());
    }

    #[test]
    fn parse_convention() {
        for c in [Convention::Width, Convention::InverseWidth] {
            assert_eq!(c.to_string().parse::<Convention>().unwrap(), c);
        }
        assert!("gauss".parse::<Convention>().is_err());
    }
}
