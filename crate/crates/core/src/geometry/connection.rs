use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::model::{check_metric, ChartModel};
use crate::tensor::{TensorAtPoint, Variance};

use Variance::{Lower, Upper};

/// Condition number above which the metric is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e13;

/// Inverts an evaluated metric, rejecting indefinite or near-singular input.
/// The result is exactly symmetric.
pub fn inverse_metric(g: &TensorAtPoint) -> Result<TensorAtPoint> {
    check_metric(g)?;
    let d = g.dim();
    let m = DMatrix::from_row_slice(d, d, g.components());
    let eig = m.clone().symmetric_eigenvalues();
    let condition = eig.max() / eig.min();
    if !(condition.is_finite() && condition < SINGULAR_CONDITION) {
        return Err(Error::SingularMetric { condition });
    }
    let inv = m.cholesky().ok_or(Error::SingularMetric { condition })?.inverse();
    Ok(TensorAtPoint::from_fn(d, vec![Upper, Upper], |i| {
        let (a, b) = (i[0].min(i[1]), i[0].max(i[1]));
        inv[(a, b)]
    }))
}

/// The Levi-Civita connection at one point: metric, inverse and `Γ^a_{bc}`.
#[derive(Clone, Debug)]
pub struct LeviCivita {
    point: Vec<f64>,
    g: TensorAtPoint,
    ginv: TensorAtPoint,
    gamma: TensorAtPoint,
}

impl LeviCivita {
    pub fn at(model: &ChartModel, point: &[f64]) -> Result<Self> {
        Self::from_metric(model.metric(), point)
    }

    pub fn from_metric(metric: &TensorField, point: &[f64]) -> Result<Self> {
        let d = metric.dim();
        let jets = metric.eval_jets(point, 1)?;
        let g = TensorAtPoint::from_fn(d, vec![Lower, Lower], |i| jets[i[0] * d + i[1]].value());
        let ginv = inverse_metric(&g)?;
        let dg = |a: usize, b: usize, c: usize| jets[a * d + b].grad(c);
        // Γ_{e,bc} = ½(∂_b g_ec + ∂_c g_be − ∂_e g_bc)
        let mut first = vec![0.0; d * d * d];
        for e in 0..d {
            for b in 0..d {
                for c in b..d {
                    let v = 0.5 * (dg(e, c, b) + dg(b, e, c) - dg(b, c, e));
                    first[(e * d + b) * d + c] = v;
                    first[(e * d + c) * d + b] = v;
                }
            }
        }
        let mut gamma = TensorAtPoint::zeros(d, vec![Upper, Lower, Lower]);
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    let v: f64 = (0..d).map(|e| ginv.get(&[a, e]) * first[(e * d + b) * d + c]).sum();
                    gamma.set(&[a, b, c], v);
                    gamma.set(&[a, c, b], v);
                }
            }
        }
        Ok(Self { point: point.to_vec(), g, ginv, gamma })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn metric(&self) -> &TensorAtPoint {
        &self.g
    }

    pub fn inverse_metric(&self) -> &TensorAtPoint {
        &self.ginv
    }

    pub fn christoffel(&self) -> &TensorAtPoint {
        &self.gamma
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for a in 0..d {
            for b in 0..d {
                acc += self.g.get(&[a, b]) * x[a] * y[b];
            }
        }
        acc
    }

    /// `∇T` with the derivative slot appended last.
    pub fn covariant_derivative(&self, field: &TensorField) -> Result<TensorAtPoint> {
        let d = self.dim();
        let jets = field.eval_jets(&self.point, 1)?;
        let values = TensorAtPoint::new(d, field.variance().to_vec(), jets.iter().map(|j| j.value()).collect())?;
        let partials: Vec<f64> = jets.iter().flat_map(|j| (0..d).map(move |e| j.grad(e))).collect();
        Ok(covariant_from_parts(&values, &partials, &self.gamma))
    }

    /// `∇_X Y` for a vector field `Y` and a tangent vector `X` at the point.
    pub fn nabla_along(&self, x: &[f64], field: &TensorField) -> Result<TensorAtPoint> {
        let nabla = self.covariant_derivative(field)?;
        nabla.feed(nabla.rank() - 1, x)
    }
}

/// Assembles `∇T` from component values and coordinate partials
/// (`partials[k * d + e] = ∂_e T[k]`): upper slots gain `+Γ^i_{ef}T^{..f..}`,
/// lower slots gain `−Γ^f_{ei}T_{..f..}`.
pub(crate) fn covariant_from_parts(values: &TensorAtPoint, partials: &[f64], gamma: &TensorAtPoint) -> TensorAtPoint {
    let d = values.dim();
    let rank = values.rank();
    let mut variance = values.variance().to_vec();
    variance.push(Lower);
    let mut src = vec![0; rank];
    TensorAtPoint::from_fn(d, variance, |idx| {
        let (slots, e) = (&idx[..rank], idx[rank]);
        let k = slots.iter().fold(0, |acc, &x| acc * d + x);
        let mut acc = partials[k * d + e];
        for (pos, v) in values.variance().iter().enumerate() {
            src.copy_from_slice(slots);
            for f in 0..d {
                src[pos] = f;
                let t = values.get(&src);
                if t == 0.0 {
                    continue;
                }
                acc += match v {
                    Upper => gamma.get(&[slots[pos], e, f]) * t,
                    Lower => -gamma.get(&[f, e, slots[pos]]) * t,
                };
            }
        }
        acc
    })
}

/// `Γ^a_{bc}` of the model at a point.
pub fn christoffel(model: &ChartModel, point: &[f64]) -> Result<TensorAtPoint> {
    Ok(LeviCivita::at(model, point)?.gamma)
}

/// `∇T` of a model field at a point, derivative slot last.
pub fn covariant_derivative(model: &ChartModel, point: &[f64], field: &TensorField) -> Result<TensorAtPoint> {
    LeviCivita::at(model, point)?.covariant_derivative(field)
}
