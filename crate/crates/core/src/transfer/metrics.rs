use crate::error::{Error, Result};

fn check(pred: &[f64], truth: &[f64]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            found: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::UndefinedMetric("empty input".into()));
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check(pred, truth)?;
    let s: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum();
    Ok(s / truth.len() as f64)
}

/// Relative L2 error `‖pred − truth‖ / ‖truth‖`.
///
/// ```
/// use meshfree_transfer::transfer::rl2;
///
/// assert_eq!(rl2(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 1.0);
/// assert!(rl2(&[1.0], &[0.0]).is_err());
/// ```
pub fn rl2(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check(pred, truth)?;
    let num: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    let den: f64 = truth.iter().map(|t| t * t).sum();
    if den == 0.0 {
        return Err(Error::UndefinedMetric("reference has zero norm".into()));
    }
    Ok((num / den).sqrt())
}
