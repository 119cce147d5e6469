use nalgebra::{DMatrix, DVector};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::ScatteredDataset;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// One affine layer, `z = W a + b` with `W` of shape `out × in`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
}

/// Adam moment estimates, laid out like [`MlpModel::parameters`].
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub step: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

/// Fully connected network: tanh on hidden layers, identity on the output.
///
/// Optimizer state travels with the model so an interrupted run can be
/// saved and resumed without changing the loss trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct MlpModel {
    layer_sizes: Vec<usize>,
    layers: Vec<Layer>,
    adam: Option<AdamState>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Iterations at the base learning rate.
    pub max_iterations: usize,
    /// Training stops as soon as the loss falls below this value.
    pub loss_tolerance: f64,
    /// Follow-up iterations at `learning_rate * refine_lr_factor`.
    pub refine_iterations: usize,
    pub refine_lr_factor: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iterations: 10_000,
            loss_tolerance: 1e-12,
            refine_iterations: 0,
            refine_lr_factor: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("learning rate", self.learning_rate),
            ("Adam epsilon", self.epsilon),
            ("loss tolerance", self.loss_tolerance),
            ("refinement factor", self.refine_lr_factor),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1), got {b}")));
            }
        }
        Ok(())
    }
}

/// Xavier-uniform weights and zero biases.
///
/// ```
/// use meshfree_transfer::surrogate::mlp_init;
///
/// let net = mlp_init(&[2, 128, 128, 128, 1], 0).unwrap();
/// assert_eq!(net.num_parameters(), 33_537);
/// ```
pub fn mlp_init(arch: &[usize], seed: u64) -> Result<MlpModel> {
    validate_arch(arch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layers = arch
        .windows(2)
        .map(|w| {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let dist = Uniform::new_inclusive(-bound, bound);
            let mut weights = DMatrix::zeros(fan_out, fan_in);
            for i in 0..fan_out {
                for j in 0..fan_in {
                    weights[(i, j)] = dist.sample(&mut rng);
                }
            }
            Layer {
                weights,
                bias: DVector::zeros(fan_out),
            }
        })
        .collect();
    Ok(MlpModel {
        layer_sizes: arch.to_vec(),
        layers,
        adam: None,
    })
}

fn validate_arch(arch: &[usize]) -> Result<()> {
    if arch.len() < 2 {
        return Err(Error::invalid("architecture needs at least two layers"));
    }
    if !(arch[0] == 1 || arch[0] == 2) {
        return Err(Error::invalid(format!("input width must be 1 or 2, got {}", arch[0])));
    }
    if arch[arch.len() - 1] != 1 {
        return Err(Error::invalid("output width must be 1"));
    }
    if arch.contains(&0) {
        return Err(Error::invalid("layer widths must be positive"));
    }
    Ok(())
}

impl MlpModel {
    /// Assembles a model from explicit layers.
    pub fn from_layers(layers: Vec<Layer>) -> Result<MlpModel> {
        let first = layers
            .first()
            .ok_or_else(|| Error::invalid("network has no layers"))?;
        let mut sizes = vec![first.weights.ncols()];
        for l in &layers {
            if l.weights.ncols() != *sizes.last().unwrap() || l.bias.len() != l.weights.nrows() {
                return Err(Error::invalid("inconsistent layer shapes"));
            }
            sizes.push(l.weights.nrows());
        }
        validate_arch(&sizes)?;
        if layers
            .iter()
            .any(|l| l.weights.iter().chain(l.bias.iter()).any(|v| !v.is_finite()))
        {
            return Err(Error::invalid("non-finite network parameter"));
        }
        Ok(MlpModel {
            layer_sizes: sizes,
            layers,
            adam: None,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn adam_state(&self) -> Option<&AdamState> {
        self.adam.as_ref()
    }

    pub(crate) fn set_adam_state(&mut self, state: Option<AdamState>) -> Result<()> {
        if let Some(s) = &state {
            let p = self.num_parameters();
            if s.m.len() != p || s.v.len() != p {
                return Err(Error::invalid("optimizer state does not match parameter count"));
            }
        }
        self.adam = state;
        Ok(())
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Flattened parameters: per layer, weights row-major then bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_parameters());
        for l in &self.layers {
            flatten_into(&l.weights, &l.bias, &mut out);
        }
        out
    }

    pub fn set_parameters(&mut self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.num_parameters() {
            return Err(Error::DimensionMismatch {
                expected: self.num_parameters(),
                found: theta.len(),
            });
        }
        let mut k = 0;
        for l in &mut self.layers {
            for i in 0..l.weights.nrows() {
                for j in 0..l.weights.ncols() {
                    l.weights[(i, j)] = theta[k];
                    k += 1;
                }
            }
            for b in l.bias.iter_mut() {
                *b = theta[k];
                k += 1;
            }
        }
        Ok(())
    }

    pub fn forward(&self, x: &Point) -> Result<f64> {
        self.check_dim(x)?;
        let mut a = DVector::from_column_slice(x.coords());
        let last = self.layers.len() - 1;
        for (k, l) in self.layers.iter().enumerate() {
            a = &l.weights * a + &l.bias;
            if k < last {
                a.apply(|v| *v = v.tanh());
            }
        }
        Ok(a[0])
    }

    pub fn forward_batch(&self, xs: &[Point]) -> Result<Vec<f64>> {
        for x in xs {
            self.check_dim(x)?;
        }
        if xs.is_empty() {
            return Ok(Vec::new());
        }
        let acts = self.activations(&self.input_matrix(xs));
        Ok(acts.last().unwrap().row(0).iter().copied().collect())
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// Inputs as columns.
    fn input_matrix(&self, xs: &[Point]) -> DMatrix<f64> {
        DMatrix::from_fn(self.input_dim(), xs.len(), |i, j| xs[j].coords()[i])
    }

    /// Layer outputs `[a₀ = X, a₁, …, a_L]`, one column per sample.
    fn activations(&self, x: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let last = self.layers.len() - 1;
        let mut acts = vec![x.clone()];
        for (k, l) in self.layers.iter().enumerate() {
            let mut z = &l.weights * acts.last().unwrap();
            for mut col in z.column_iter_mut() {
                col += &l.bias;
            }
            if k < last {
                z.apply(|v| *v = v.tanh());
            }
            acts.push(z);
        }
        acts
    }

    /// Mean squared error over the dataset and its gradient, flattened like
    /// [`MlpModel::parameters`].
    pub fn loss_and_gradient(&self, data: &ScatteredDataset) -> Result<(f64, Vec<f64>)> {
        self.check_data(data)?;
        let x = self.input_matrix(data.points());
        let t = DVector::from_column_slice(data.values());
        Ok(self.loss_and_gradient_raw(&x, &t))
    }

    fn check_data(&self, data: &ScatteredDataset) -> Result<()> {
        if data.is_empty() {
            return Err(Error::invalid("training data is empty"));
        }
        if data.dim() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: data.dim(),
            });
        }
        Ok(())
    }

    fn loss_and_gradient_raw(&self, x: &DMatrix<f64>, t: &DVector<f64>) -> (f64, Vec<f64>) {
        let n = x.ncols() as f64;
        let acts = self.activations(x);
        let out = acts.last().unwrap();
        let resid = DVector::from_iterator(out.ncols(), out.row(0).iter().zip(t.iter()).map(|(y, t)| y - t));
        let loss = resid.norm_squared() / n;

        // δ for the output layer: dL/dz = 2 (y − t) / N.
        let mut delta = DMatrix::from_row_slice(1, resid.len(), resid.as_slice()) * (2.0 / n);
        let mut grads = Vec::with_capacity(self.layers.len());
        for k in (0..self.layers.len()).rev() {
            let a_prev = &acts[k];
            let gw = &delta * a_prev.transpose();
            let gb = DVector::from_iterator(delta.nrows(), delta.row_iter().map(|r| r.sum()));
            if k > 0 {
                let mut back = self.layers[k].weights.transpose() * &delta;
                back.zip_apply(a_prev, |d, a| *d *= 1.0 - a * a);
                delta = back;
            }
            grads.push((gw, gb));
        }
        let mut flat = Vec::with_capacity(self.num_parameters());
        for (gw, gb) in grads.iter().rev() {
            flatten_into(gw, gb, &mut flat);
        }
        (loss, flat)
    }
}

fn flatten_into(w: &DMatrix<f64>, b: &DVector<f64>, out: &mut Vec<f64>) {
    for i in 0..w.nrows() {
        out.extend(w.row(i).iter());
    }
    out.extend(b.iter());
}

/// Full-batch Adam on the mean squared error.
///
/// Returns the trained model and the loss recorded before every update.
/// Adam moments carried by `model` are continued, not reset.
pub fn mlp_train(
    model: &MlpModel,
    data: &ScatteredDataset,
    config: &TrainConfig,
) -> Result<(MlpModel, Vec<f64>)> {
    config.validate()?;
    model.check_data(data)?;
    let mut model = model.clone();
    let x = model.input_matrix(data.points());
    let t = DVector::from_column_slice(data.values());
    let mut theta = model.parameters();
    let p = theta.len();
    let mut adam = model.adam.take().unwrap_or(AdamState {
        step: 0,
        m: vec![0.0; p],
        v: vec![0.0; p],
    });

    let total = config.max_iterations + config.refine_iterations;
    let mut history = Vec::with_capacity(total);
    for it in 0..total {
        let (loss, grad) = model.loss_and_gradient_raw(&x, &t);
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::TrainingDiverged { iteration: it, loss });
        }
        history.push(loss);
        if loss < config.loss_tolerance {
            break;
        }
        let lr = if it < config.max_iterations {
            config.learning_rate
        } else {
            config.learning_rate * config.refine_lr_factor
        };
        adam.step += 1;
        let c1 = 1.0 - config.beta1.powf(adam.step as f64);
        let c2 = 1.0 - config.beta2.powf(adam.step as f64);
        for i in 0..p {
            let g = grad[i];
            adam.m[i] = config.beta1 * adam.m[i] + (1.0 - config.beta1) * g;
            adam.v[i] = config.beta2 * adam.v[i] + (1.0 - config.beta2) * g * g;
            let m_hat = adam.m[i] / c1;
            let v_hat = adam.v[i] / c2;
            theta[i] -= lr * m_hat / (v_hat.sqrt() + config.epsilon);
        }
        model.set_parameters(&theta)?;
    }
    model.adam = Some(adam);
    Ok((model, history))
}
