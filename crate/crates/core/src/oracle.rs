//! Finite-difference reference values, independent of the jet machinery.
//!
//! Only plain `f64` evaluation of the expression trees is used here, plus an
//! LU inverse, so agreement with the jet pipeline cross-checks both the
//! differentiation rules and the index bookkeeping.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::ChartModel;
use crate::tensor::{TensorAtPoint, Variance};

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

fn metric_matrix(model: &ChartModel, point: &[f64]) -> Result<DMatrix<f64>> {
    let d = model.dim();
    let comps = model.metric().components();
    let mut m = DMatrix::zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            m[(a, b)] = comps[a * d + b].eval(point)?;
        }
    }
    Ok(m)
}

/// `∂_c g_ab` by central differences, stored as `out[c]`.
pub fn metric_partials(model: &ChartModel, point: &[f64], h: f64) -> Result<Vec<DMatrix<f64>>> {
    (0..model.dim())
        .map(|c| {
            let mut plus = point.to_vec();
            let mut minus = point.to_vec();
            plus[c] += h;
            minus[c] -= h;
            Ok((metric_matrix(model, &plus)? - metric_matrix(model, &minus)?) / (2.0 * h))
        })
        .collect()
}

/// Christoffel symbols from the Koszul formula with differenced metric
/// derivatives and an LU inverse.
pub fn fd_christoffel(model: &ChartModel, point: &[f64], h: f64) -> Result<TensorAtPoint> {
    let d = model.dim();
    let g = metric_matrix(model, point)?;
    let inv = g.clone().lu().try_inverse().ok_or(Error::SingularMetric { condition: f64::INFINITY })?;
    let dg = metric_partials(model, point, h)?;
    Ok(TensorAtPoint::from_fn(d, vec![Variance::Upper, Variance::Lower, Variance::Lower], |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        (0..d).map(|e| 0.5 * inv[(a, e)] * (dg[b][(e, c)] + dg[c][(b, e)] - dg[e][(b, c)])).sum()
    }))
}

/// Gradient of one metric component by central differences.
pub fn fd_metric_gradient(model: &ChartModel, point: &[f64], a: usize, b: usize, h: f64) -> Result<Vec<f64>> {
    Ok(metric_partials(model, point, h)?.iter().map(|m| m[(a, b)]).collect())
}

/// Riemann tensor from differenced Christoffel symbols, for tests at looser
/// tolerance.
pub fn fd_riemann(model: &ChartModel, point: &[f64], h: f64) -> Result<TensorAtPoint> {
    let d = model.dim();
    let gamma = fd_christoffel(model, point, h)?;
    // Inner step for Γ and outer step for ∂Γ.
    let outer = (100.0 * h).max(1e-4);
    let dgamma: Vec<TensorAtPoint> = (0..d)
        .map(|c| {
            let mut plus = point.to_vec();
            let mut minus = point.to_vec();
            plus[c] += outer;
            minus[c] -= outer;
            Ok((&fd_christoffel(model, &plus, h)? - &fd_christoffel(model, &minus, h)?).scale(1.0 / (2.0 * outer)))
        })
        .collect::<Result<_>>()?;
    Ok(TensorAtPoint::from_fn(d, vec![Variance::Upper, Variance::Lower, Variance::Lower, Variance::Lower], |i| {
        let (a, b, c, e) = (i[0], i[1], i[2], i[3]);
        let mut v = dgamma[c].get(&[a, e, b]) - dgamma[e].get(&[a, c, b]);
        for f in 0..d {
            v += gamma.get(&[a, c, f]) * gamma.get(&[f, e, b]) - gamma.get(&[a, e, f]) * gamma.get(&[f, c, b]);
        }
        v
    }))
}
