//! Regularized least squares for output-layer weights.
//!
//! Minimizes `‖Hβ − U‖² + λ‖β‖²` either through the Cholesky-factored normal
//! equations `(HᵀH + λI)β = HᵀU` or through a truncated SVD pseudoinverse.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Ridge strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ridge {
    /// `λ = scale · trace(HᵀH) / d`.
    Relative(f64),
    Absolute(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    NormalEquations,
    SvdPinv,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeastSquaresOptions {
    pub ridge: Ridge,
    pub method: SolveMethod,
    /// Singular values below `svd_cutoff · σ_max` are discarded.
    pub svd_cutoff: f64,
}

impl Default for LeastSquaresOptions {
    fn default() -> Self {
        LeastSquaresOptions {
            ridge: Ridge::Relative(1e-10),
            method: SolveMethod::NormalEquations,
            svd_cutoff: 1e-12,
        }
    }
}

impl LeastSquaresOptions {
    pub fn validate(&self) -> Result<()> {
        let lam = match self.ridge {
            Ridge::Relative(s) | Ridge::Absolute(s) => s,
        };
        if !(lam >= 0.0 && lam.is_finite()) {
            return Err(Error::invalid(format!("ridge strength must be non-negative, got {lam}")));
        }
        if !(self.svd_cutoff > 0.0 && self.svd_cutoff < 1.0) {
            return Err(Error::invalid(format!(
                "svd cutoff must lie in (0, 1), got {}",
                self.svd_cutoff
            )));
        }
        Ok(())
    }
}

/// Output weights with the achieved residual `‖Hβ − U‖₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquaresFit {
    pub beta: Vec<f64>,
    pub residual_norm: f64,
    /// Ridge strength actually used (after any retry); zero for the SVD route.
    pub lambda: f64,
}

/// Default relative ridge scale, also the floor of the singular-system retry.
const DEFAULT_RELATIVE_RIDGE: f64 = 1e-10;

/// Solves for the output weights of a feature matrix `h` (one row per sample).
///
/// ```
/// use meshfree_transfer::surrogate::{fit_output_weights, LeastSquaresOptions, Ridge};
/// use nalgebra::DMatrix;
///
/// let h = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
/// let opts = LeastSquaresOptions { ridge: Ridge::Absolute(0.0), ..Default::default() };
/// let fit = fit_output_weights(&h, &[1.0, 3.0], &opts).unwrap();
/// assert!((fit.beta[0] - 2.0).abs() < 1e-12);
/// ```
pub fn fit_output_weights(
    h: &DMatrix<f64>,
    u: &[f64],
    opts: &LeastSquaresOptions,
) -> Result<LeastSquaresFit> {
    opts.validate()?;
    let (n, d) = h.shape();
    if n == 0 || d == 0 {
        return Err(Error::invalid(format!("feature matrix is {n}x{d}")));
    }
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.len(),
        });
    }
    if h.iter().chain(u).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite entry in least-squares system"));
    }
    let u = DVector::from_column_slice(u);

    let (beta, lambda) = match opts.method {
        SolveMethod::NormalEquations => solve_normal(h, &u, opts.ridge)?,
        SolveMethod::SvdPinv => (solve_pinv(h, &u, opts.svd_cutoff)?, 0.0),
    };
    let residual_norm = (h * &beta - &u).norm();
    Ok(LeastSquaresFit {
        beta: beta.as_slice().to_vec(),
        residual_norm,
        lambda,
    })
}

fn solve_normal(h: &DMatrix<f64>, u: &DVector<f64>, ridge: Ridge) -> Result<(DVector<f64>, f64)> {
    let d = h.ncols();
    let gram = h.transpose() * h;
    let rhs = h.tr_mul(u);
    let mean_diag = gram.trace() / d as f64;
    let lambda = match ridge {
        Ridge::Relative(s) => s * mean_diag,
        Ridge::Absolute(l) => l,
    };
    // A zero ridge would make the retry a no-op; fall back to the default scale.
    let retry = (100.0 * lambda).max(100.0 * DEFAULT_RELATIVE_RIDGE * mean_diag);
    for lam in [lambda, retry] {
        let mut a = gram.clone();
        for i in 0..d {
            a[(i, i)] += lam;
        }
        if let Some(chol) = a.cholesky() {
            let beta = chol.solve(&rhs);
            if beta.iter().all(|v| v.is_finite()) {
                return Ok((beta, lam));
            }
        }
    }
    Err(Error::SingularSystem(format!(
        "Cholesky factorization failed with lambda {lambda:e} and {retry:e}"
    )))
}

fn solve_pinv(h: &DMatrix<f64>, u: &DVector<f64>, cutoff: f64) -> Result<DVector<f64>> {
    let svd = h.clone().svd(true, true);
    let (Some(left), Some(right_t)) = (&svd.u, &svd.v_t) else {
        return Err(Error::SingularSystem("SVD did not produce singular vectors".into()));
    };
    let sigma_max = svd.singular_values.max();
    if !(sigma_max > 0.0) {
        return Err(Error::SingularSystem("feature matrix is zero".into()));
    }
    let tol = cutoff * sigma_max;
    let mut coeff = left.tr_mul(u);
    for (c, &s) in coeff.iter_mut().zip(svd.singular_values.iter()) {
        *c = if s > tol { *c / s } else { 0.0 };
    }
    Ok(right_t.tr_mul(&coeff))
}
