use super::{Matrix, NetError, Result};

fn same_shape(pred: &Matrix, target: &Matrix) -> Result<()> {
    if pred.shape() == target.shape() {
        Ok(())
    } else {
        Err(NetError::ShapeMismatch(format!(
            "prediction {:?} vs target {:?}",
            pred.shape(),
            target.shape()
        )))
    }
}

/// Mean of squared differences over all entries.
pub fn mse(pred: &Matrix, target: &Matrix) -> Result<f64> {
    same_shape(pred, target)?;
    let n = pred.data().len() as f64;
    Ok(pred
        .data()
        .iter()
        .zip(target.data())
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n)
}

/// Mean of absolute differences over all entries.
pub fn mae(pred: &Matrix, target: &Matrix) -> Result<f64> {
    same_shape(pred, target)?;
    let n = pred.data().len() as f64;
    Ok(pred
        .data()
        .iter()
        .zip(target.data())
        .map(|(p, t)| (p - t).abs())
        .sum::<f64>()
        / n)
}

/// ∂mse/∂pred = 2 (pred − target) / entries. Shapes are checked by the caller.
pub(crate) fn mse_gradient(pred: &Matrix, target: &Matrix) -> Matrix {
    let scale = 2.0 / pred.data().len() as f64;
    let mut g = pred.clone();
    for (v, t) in g.data_mut().iter_mut().zip(target.data()) {
        *v = scale * (*v - t);
    }
    g
}
