use nalgebra::{DMatrix, DVector};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lstsq::{fit_output_weights, LeastSquaresOptions};
use super::{check_targets, FitInfo, PREDICT_CHUNK};
use crate::dataset::ScatteredDataset;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Extreme learning machine with two frozen sine layers.
///
/// Features are `Φ(x) = sin(W2 · sin(W1 x + b1) + b2)`; only the output
/// weights `β` are fitted.
#[derive(Clone, Debug, PartialEq)]
pub struct ElmModel {
    pub(crate) init_range: f64,
    pub(crate) seed: u64,
    pub(crate) w1: DMatrix<f64>,
    pub(crate) b1: DVector<f64>,
    pub(crate) w2: DMatrix<f64>,
    pub(crate) b2: DVector<f64>,
    pub(crate) beta: Option<Vec<f64>>,
    pub(crate) fit_info: Option<FitInfo>,
}

/// Draws hidden parameters uniformly from `[-r, r]`.
///
/// `arch` is `[d0, d1, d2, 1]`.
pub fn elm_init(arch: &[usize], init_range: f64, seed: u64) -> Result<ElmModel> {
    let &[d0, d1, d2, out] = arch else {
        return Err(Error::invalid(format!(
            "ELM architecture must have four entries, got {arch:?}"
        )));
    };
    if !(d0 == 1 || d0 == 2) || d1 == 0 || d2 == 0 || out != 1 {
        return Err(Error::invalid(format!("invalid ELM architecture {arch:?}")));
    }
    if !(init_range > 0.0 && init_range.is_finite()) {
        return Err(Error::invalid(format!(
            "init range must be positive, got {init_range}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-init_range, init_range);
    let mut draw = |r: usize, c: usize| {
        let mut m = DMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m[(i, j)] = dist.sample(&mut rng);
            }
        }
        m
    };
    let w1 = draw(d1, d0);
    let b1 = draw(d1, 1).column(0).into_owned();
    let w2 = draw(d2, d1);
    let b2 = draw(d2, 1).column(0).into_owned();
    Ok(ElmModel {
        init_range,
        seed,
        w1,
        b1,
        w2,
        b2,
        beta: None,
        fit_info: None,
    })
}

impl ElmModel {
    /// Builds a model from explicit hidden parameters.
    pub fn from_hidden(
        w1: DMatrix<f64>,
        b1: DVector<f64>,
        w2: DMatrix<f64>,
        b2: DVector<f64>,
    ) -> Result<ElmModel> {
        let d0 = w1.ncols();
        let (d1, d2) = (w1.nrows(), w2.nrows());
        if !(d0 == 1 || d0 == 2) || d1 == 0 || d2 == 0 || b1.len() != d1 || w2.ncols() != d1 || b2.len() != d2 {
            return Err(Error::invalid("inconsistent ELM hidden-layer shapes"));
        }
        if w1.iter().chain(b1.iter()).chain(w2.iter()).chain(b2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite ELM parameter"));
        }
        let init_range = w1
            .iter()
            .chain(b1.iter())
            .chain(w2.iter())
            .chain(b2.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(ElmModel {
            init_range,
            seed: 0,
            w1,
            b1,
            w2,
            b2,
            beta: None,
            fit_info: None,
        })
    }

    /// `[d0, d1, d2, 1]`.
    pub fn arch(&self) -> [usize; 4] {
        [self.w1.ncols(), self.w1.nrows(), self.w2.nrows(), 1]
    }

    pub fn input_dim(&self) -> usize {
        self.w1.ncols()
    }

    pub fn num_features(&self) -> usize {
        self.w2.nrows()
    }

    pub fn init_range(&self) -> f64 {
        self.init_range
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn hidden(&self) -> (&DMatrix<f64>, &DVector<f64>, &DMatrix<f64>, &DVector<f64>) {
        (&self.w1, &self.b1, &self.w2, &self.b2)
    }

    pub fn beta(&self) -> Option<&[f64]> {
        self.beta.as_deref()
    }

    /// Replaces the output weights, keeping the hidden layers.
    pub fn with_beta(&self, beta: Vec<f64>) -> Result<ElmModel> {
        if beta.len() != self.num_features() {
            return Err(Error::DimensionMismatch {
                expected: self.num_features(),
                found: beta.len(),
            });
        }
        Ok(ElmModel {
            beta: Some(beta),
            fit_info: None,
            ..self.clone()
        })
    }

    pub fn fit_info(&self) -> Option<&FitInfo> {
        self.fit_info.as_ref()
    }

    pub fn features(&self, x: &Point) -> Result<Vec<f64>> {
        check_targets(std::slice::from_ref(x), self.input_dim())?;
        let x = DVector::from_column_slice(x.coords());
        let mut a1 = &self.w1 * x + &self.b1;
        a1.apply(|v| *v = v.sin());
        let mut a2 = &self.w2 * a1 + &self.b2;
        a2.apply(|v| *v = v.sin());
        Ok(a2.as_slice().to_vec())
    }

    /// Hidden-layer output matrix, one row per point.
    pub fn feature_matrix(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        check_targets(points, self.input_dim())?;
        let d0 = self.input_dim();
        let x = DMatrix::from_fn(points.len(), d0, |i, j| points[i].coords()[j]);
        let mut a1 = x * self.w1.transpose();
        add_row_bias_and_sin(&mut a1, &self.b1);
        let mut h = a1 * self.w2.transpose();
        add_row_bias_and_sin(&mut h, &self.b2);
        Ok(h)
    }

    pub fn predict(&self, targets: &[Point]) -> Result<Vec<f64>> {
        let beta = DVector::from_column_slice(self.beta.as_deref().ok_or(Error::NotFitted)?);
        check_targets(targets, self.input_dim())?;
        let mut out = Vec::with_capacity(targets.len());
        for chunk in targets.chunks(PREDICT_CHUNK) {
            let h = self.feature_matrix(chunk)?;
            out.extend((h * &beta).iter());
        }
        Ok(out)
    }
}

fn add_row_bias_and_sin(m: &mut DMatrix<f64>, bias: &DVector<f64>) {
    for (j, mut col) in m.column_iter_mut().enumerate() {
        let b = bias[j];
        col.apply(|v| *v = (*v + b).sin());
    }
}

/// Fits the output weights of `model` to `data` by regularized least squares.
pub fn elm_fit(model: &ElmModel, data: &ScatteredDataset, opts: &LeastSquaresOptions) -> Result<ElmModel> {
    if data.is_empty() {
        return Err(Error::invalid("training data is empty"));
    }
    let h = model.feature_matrix(data.points())?;
    let fit = fit_output_weights(&h, data.values(), opts)?;
    Ok(ElmModel {
        beta: Some(fit.beta),
        fit_info: Some(FitInfo {
            residual_norm: fit.residual_norm,
            lambda: fit.lambda,
        }),
        ..model.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_support_and_determinism() {
        let m = elm_init(&[2, 16, 40, 1], 0.4, 11).unwrap();
        assert_eq!(m.arch(), [2, 16, 40, 1]);
        let (w1, b1, w2, b2) = m.hidden();
        assert!(w1.iter().chain(b1.iter()).chain(w2.iter()).chain(b2.iter()).all(|v| v.abs() <= 0.4));
        assert_eq!(m, elm_init(&[2, 16, 40, 1], 0.4, 11).unwrap());
        assert!(m.beta().is_none());
        assert!(elm_init(&[2, 16, 40, 1], 0.0, 0).is_err());
        assert!(elm_init(&[2, 16, 1], 0.4, 0).is_err());
    }

    #[test]
    fn zero_hidden_layers_give_zero_features() {
        let m = ElmModel::from_hidden(DMatrix::zeros(3, 2), DVector::zeros(3), DMatrix::zeros(4, 3), DVector::zeros(4)).unwrap();
        assert_eq!(m.features(&Point::new2(0.3, -0.7)).unwrap(), vec![0.0; 4]);
        let m = ElmModel::from_hidden(DMatrix::zeros(1, 1), DVector::zeros(1), DMatrix::from_element(1, 1, 1.0), DVector::zeros(1)).unwrap();
        assert_eq!(m.features(&Point::new1(0.9)).unwrap(), vec![0.0]);
    }

    #[test]
    fn hand_built_two_by_two() {
        let w1 = DMatrix::from_row_slice(2, 2, &[0.3, -0.2, 0.1, 0.4]);
        let b1 = DVector::from_column_slice(&[0.05, -0.1]);
        let w2 = DMatrix::from_row_slice(2, 2, &[0.7, 0.2, -0.3, 0.6]);
        let b2 = DVector::from_column_slice(&[0.0, 0.25]);
        let m = ElmModel::from_hidden(w1, b1, w2, b2).unwrap();
        let (x, y) = (0.5f64, -1.0f64);
        let h1 = (0.3 * x - 0.2 * y + 0.05).sin();
        let h2 = (0.1 * x + 0.4 * y - 0.1).sin();
        let want = [(0.7 * h1 + 0.2 * h2).sin(), (-0.3 * h1 + 0.6 * h2 + 0.25).sin()];
        let got = m.features(&Point::new2(x, y)).unwrap();
        let row = m.feature_matrix(&[Point::new2(x, y)]).unwrap();
        for k in 0..2 {
            assert!((got[k] - want[k]).abs() < 1e-15);
            assert!((row[(0, k)] - want[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn single_sample_is_fitted_exactly() {
        let m = elm_init(&[2, 8, 20, 1], 0.4, 2).unwrap();
        let data = ScatteredDataset::new(2, vec![Point::new2(0.1, 0.2)], vec![0.75]).unwrap();
        let fitted = elm_fit(&m, &data, &LeastSquaresOptions::default()).unwrap();
        assert!(fitted.fit_info().unwrap().residual_norm < 1e-10);
        assert!((fitted.predict(data.points()).unwrap()[0] - 0.75).abs() < 1e-10);
        assert!(matches!(m.predict(data.points()), Err(Error::NotFitted)));
    }
}
