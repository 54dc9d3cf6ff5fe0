use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::model::ChartModel;
use crate::tensor::{TensorAtPoint, Variance};

/// `(L_X T)` at a point:
/// `X^c∂_cT − Σ_upper T^{..c..}∂_cX^a + Σ_lower T_{..c..}∂_bX^c`.
pub fn lie_derivative(point: &[f64], x: &TensorField, t: &TensorField) -> Result<TensorAtPoint> {
    if x.variance() != [Variance::Upper] {
        return Err(Error::VarianceMismatch { first: Variance::Upper, second: x.variance().first().copied().unwrap_or(Variance::Lower) });
    }
    if x.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), actual: t.dim() });
    }
    let d = t.dim();
    let xj = x.eval_jets(point, 1)?;
    let tj = t.eval_jets(point, 1)?;
    let rank = t.rank();
    let values = TensorAtPoint::new(d, t.variance().to_vec(), tj.iter().map(|j| j.value()).collect())?;
    let mut src = vec![0; rank];
    Ok(TensorAtPoint::from_fn(d, t.variance().to_vec(), |idx| {
        let k = idx.iter().fold(0, |acc, &i| acc * d + i);
        let mut acc: f64 = (0..d).map(|c| xj[c].value() * tj[k].grad(c)).sum();
        for (pos, v) in t.variance().iter().enumerate() {
            src.copy_from_slice(idx);
            for c in 0..d {
                src[pos] = c;
                let tv = values.get(&src);
                if tv == 0.0 {
                    continue;
                }
                acc += match v {
                    Variance::Upper => -tv * xj[idx[pos]].grad(c),
                    Variance::Lower => tv * xj[c].grad(idx[pos]),
                };
            }
        }
        acc
    }))
}

/// `[X,Y]^a = X^b∂_bY^a − Y^b∂_bX^a`.
pub fn lie_bracket(point: &[f64], x: &TensorField, y: &TensorField) -> Result<TensorAtPoint> {
    if y.variance() != [Variance::Upper] {
        return Err(Error::VarianceMismatch { first: Variance::Upper, second: Variance::Lower });
    }
    lie_derivative(point, x, y)
}

/// What to differentiate along `X` in [`lie_ops`].
#[derive(Clone, Copy, Debug)]
pub enum LieTarget<'a> {
    Metric,
    Phi,
    Eta(usize),
    Field(&'a TensorField),
}

pub fn lie_ops(model: &ChartModel, point: &[f64], x: &TensorField, target: LieTarget<'_>) -> Result<TensorAtPoint> {
    let t = match target {
        LieTarget::Metric => model.metric(),
        LieTarget::Phi => model.phi(),
        LieTarget::Eta(i) => model.eta().get(i).ok_or(Error::SlotOutOfRange { slot: i, rank: model.s() })?,
        LieTarget::Field(f) => f,
    };
    lie_derivative(point, x, t)
}
