//! Riemann, Ricci and `∇R` from metric jets.
//!
//! Metric components are evaluated as jets of order `k` (2 for curvature, 3
//! when `∇R` is wanted). The inverse metric jet comes from
//! `∂_a H = −H G_a H` and
//! `∂_a∂_b H = −H G_ab H + H G_a H G_b H + H G_b H G_a H`,
//! so `Γ` is a jet of order `k − 1` and `R` one of order `k − 2`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::connection::{covariant_from_parts, inverse_metric};
use crate::jet::Jet3;
use crate::model::ChartModel;
use crate::tensor::{TensorAtPoint, Variance};

use Variance::{Lower, Upper};

/// Gram determinant below which a plane is rejected.
pub const DEGENERATE_PLANE: f64 = 1e-12;

/// Connection and curvature at one point. `nabla_riemann` has layout
/// `(a, b, c, d, e)` with the derivative slot last; `nabla_ricci` is `(b, d, e)`.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub metric: TensorAtPoint,
    pub inverse_metric: TensorAtPoint,
    pub gamma: TensorAtPoint,
    pub riemann: TensorAtPoint,
    pub ricci: TensorAtPoint,
    pub scalar: f64,
    pub nabla_riemann: Option<TensorAtPoint>,
    pub nabla_ricci: Option<TensorAtPoint>,
}

impl CurvatureBundle {
    /// Γ, R, S and scalar curvature.
    pub fn compute(model: &ChartModel, point: &[f64]) -> Result<Self> {
        Self::build(model, point, false)
    }

    /// As [`compute`](Self::compute), plus `∇R` and `∇S`.
    pub fn compute_with_derivatives(model: &ChartModel, point: &[f64]) -> Result<Self> {
        Self::build(model, point, true)
    }

    fn build(model: &ChartModel, point: &[f64], derivatives: bool) -> Result<Self> {
        let d = model.dim();
        let k: u8 = if derivatives { 3 } else { 2 };
        let g_jets = model.metric().eval_jets(point, k)?;
        let gj = |a: usize, b: usize| &g_jets[a * d + b];

        let metric = TensorAtPoint::from_fn(d, vec![Lower, Lower], |i| gj(i[0], i[1]).value());
        let inverse = inverse_metric(&metric)?;
        let h_jets = inverse_metric_jets(&g_jets, &inverse, d, k - 1);

        // Γ_{e,bc} and Γ^a_{bc} as jets of order k − 1.
        let mut first: Vec<Jet3> = Vec::with_capacity(d * d * d);
        for e in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let sum = &(&gj(e, c).partial(b) + &gj(b, e).partial(c)) - &gj(b, c).partial(e);
                    first.push(sum.scale(0.5));
                }
            }
        }
        let zero = Jet3::constant(d, k - 1, 0.0);
        let mut gamma_j = vec![zero.clone(); d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    let mut acc = zero.clone();
                    for e in 0..d {
                        let fe = &first[(e * d + b) * d + c];
                        if fe.is_zero() {
                            continue;
                        }
                        acc = &acc + &(&h_jets[a * d + e] * fe);
                    }
                    gamma_j[(a * d + c) * d + b] = acc.clone();
                    gamma_j[(a * d + b) * d + c] = acc;
                }
            }
        }
        let gamma = TensorAtPoint::from_fn(d, vec![Upper, Lower, Lower], |i| gamma_j[(i[0] * d + i[1]) * d + i[2]].value());

        // R^a_{bcd} = ∂_cΓ^a_{db} − ∂_dΓ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
        let r_order = k - 2;
        let low: Vec<Jet3> = gamma_j.iter().map(|j| j.truncate(r_order)).collect();
        let gi = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
        let r_zero = Jet3::constant(d, r_order, 0.0);
        let mut r_j = vec![r_zero.clone(); d * d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for dd in (c + 1)..d {
                        let mut acc = &gamma_j[gi(a, dd, b)].partial(c) - &gamma_j[gi(a, c, b)].partial(dd);
                        for e in 0..d {
                            let p = &low[gi(a, c, e)];
                            let q = &low[gi(e, dd, b)];
                            if !p.is_zero() && !q.is_zero() {
                                acc = &acc + &(p * q);
                            }
                            let p = &low[gi(a, dd, e)];
                            let q = &low[gi(e, c, b)];
                            if !p.is_zero() && !q.is_zero() {
                                acc = &acc - &(p * q);
                            }
                        }
                        r_j[((a * d + b) * d + dd) * d + c] = -&acc;
                        r_j[((a * d + b) * d + c) * d + dd] = acc;
                    }
                }
            }
        }
        let riemann = TensorAtPoint::new(d, vec![Upper, Lower, Lower, Lower], r_j.iter().map(|j| j.value()).collect())?;
        let ricci = ricci_from_riemann(&riemann);
        let scalar = (0..d).flat_map(|b| (0..d).map(move |c| (b, c))).map(|(b, c)| inverse.get(&[b, c]) * ricci.get(&[b, c])).sum();

        let (nabla_riemann, nabla_ricci) = if derivatives {
            let partials: Vec<f64> = r_j.iter().flat_map(|j| (0..d).map(move |e| j.grad(e))).collect();
            let nr = covariant_from_parts(&riemann, &partials, &gamma);
            let ns = TensorAtPoint::from_fn(d, vec![Lower, Lower, Lower], |i| (0..d).map(|a| nr.get(&[a, i[0], a, i[1], i[2]])).sum());
            (Some(nr), Some(ns))
        } else {
            (None, None)
        };

        Ok(Self { point: point.to_vec(), metric, inverse_metric: inverse, gamma, riemann, ricci, scalar, nabla_riemann, nabla_ricci })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        (0..d).map(|a| (0..d).map(|b| self.metric.get(&[a, b]) * x[a] * y[b]).sum::<f64>()).sum()
    }

    /// `R(X,Y)Z = R^a_{bcd} Z^b X^c Y^d`.
    pub fn apply(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for (a, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for b in 0..d {
                if z[b] == 0.0 {
                    continue;
                }
                for c in 0..d {
                    if x[c] == 0.0 {
                        continue;
                    }
                    for e in 0..d {
                        acc += self.riemann.get(&[a, b, c, e]) * z[b] * x[c] * y[e];
                    }
                }
            }
            *o = acc;
        }
        out
    }

    /// The endomorphism `R(X,Y)` as a `(1,1)` tensor `A^a_b`.
    pub fn endomorphism(&self, x: &[f64], y: &[f64]) -> TensorAtPoint {
        let d = self.dim();
        TensorAtPoint::from_fn(d, vec![Upper, Lower], |i| {
            let mut acc = 0.0;
            for c in 0..d {
                for e in 0..d {
                    acc += self.riemann.get(&[i[0], i[1], c, e]) * x[c] * y[e];
                }
            }
            acc
        })
    }

    /// `S(X,Y)`.
    pub fn ricci_form(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim();
        (0..d).map(|a| (0..d).map(|b| self.ricci.get(&[a, b]) * x[a] * y[b]).sum::<f64>()).sum()
    }

    /// `K(X,Y) = g(R(X,Y)Y,X) / (g(X,X)g(Y,Y) − g(X,Y)²)`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let gram = self.inner(x, x) * self.inner(y, y) - self.inner(x, y).powi(2);
        if gram < DEGENERATE_PLANE {
            return Err(Error::DegeneratePlane { gram });
        }
        Ok(self.inner(&self.apply(x, y, y), x) / gram)
    }

    /// The `(1,3)` tensor with `R_{abcd}` lowered in its first slot.
    pub fn lowered_riemann(&self) -> TensorAtPoint {
        self.riemann.lower(0, &self.metric).expect("riemann has an upper first slot")
    }
}

/// `S_bd = R^a_{bad}`, which equals `Σ_k g(R(E_k,X)Y,E_k)` over an
/// orthonormal frame.
pub fn ricci_from_riemann(riemann: &TensorAtPoint) -> TensorAtPoint {
    let d = riemann.dim();
    TensorAtPoint::from_fn(d, vec![Lower, Lower], |i| (0..d).map(|a| riemann.get(&[a, i[0], a, i[1]])).sum())
}

/// Jets of `g^{ab}` through `order ≤ 2` from metric jets of order `order + 1`
/// or more.
fn inverse_metric_jets(g_jets: &[Jet3], inverse: &TensorAtPoint, d: usize, order: u8) -> Vec<Jet3> {
    let h = DMatrix::from_row_slice(d, d, inverse.components());
    let ga: Vec<DMatrix<f64>> = (0..d).map(|a| DMatrix::from_fn(d, d, |i, j| g_jets[i * d + j].grad(a))).collect();
    let ha: Vec<DMatrix<f64>> = ga.iter().map(|m| -(&h * m * &h)).collect();
    let hab: Vec<Option<DMatrix<f64>>> = if order >= 2 {
        (0..d * d)
            .map(|ab| {
                let (a, b) = (ab / d, ab % d);
                (a <= b).then(|| {
                    let gab = DMatrix::from_fn(d, d, |i, j| g_jets[i * d + j].hess(a, b));
                    -(&h * gab * &h) + &h * &ga[a] * &h * &ga[b] * &h + &h * &ga[b] * &h * &ga[a] * &h
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    (0..d * d)
        .map(|ij| {
            let (i, j) = (ij / d, ij % d);
            // Read the upper triangle so that H^{ij} and H^{ji} are identical.
            let (i, j) = (i.min(j), i.max(j));
            Jet3::from_derivatives(d, order, h[(i, j)], |idx| match idx {
                [a] => ha[*a][(i, j)],
                [a, b] => hab[a * d + b].as_ref().expect("sorted pair")[(i, j)],
                _ => unreachable!("inverse metric jets stop at order 2"),
            })
        })
        .collect()
}

pub fn riemann(model: &ChartModel, point: &[f64]) -> Result<TensorAtPoint> {
    Ok(CurvatureBundle::compute(model, point)?.riemann)
}

pub fn ricci_and_scalar(model: &ChartModel, point: &[f64]) -> Result<(TensorAtPoint, f64)> {
    let b = CurvatureBundle::compute(model, point)?;
    Ok((b.ricci, b.scalar))
}

pub fn sectional_curvature(model: &ChartModel, point: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    CurvatureBundle::compute(model, point)?.sectional(x, y)
}

/// `(∇_e R)^a_{bcd}` with layout `(a, b, c, d, e)`.
pub fn nabla_riemann(model: &ChartModel, point: &[f64]) -> Result<TensorAtPoint> {
    Ok(CurvatureBundle::compute_with_derivatives(model, point)?.nabla_riemann.expect("requested derivatives"))
}

/// Derivation action of the endomorphism `A = R(X,Y)` on `T`: upper slots
/// gain `A^i_f T^{..f..}`, lower slots lose `T_{..f..} A^f_i`. Scalars map to
/// zero.
pub fn derivation_action(a: &TensorAtPoint, t: &TensorAtPoint) -> TensorAtPoint {
    let d = t.dim();
    let rank = t.rank();
    let mut src = vec![0; rank];
    TensorAtPoint::from_fn(d, t.variance().to_vec(), |idx| {
        let mut acc = 0.0;
        for (pos, v) in t.variance().iter().enumerate() {
            src.copy_from_slice(idx);
            for f in 0..d {
                src[pos] = f;
                let tv = t.get(&src);
                if tv == 0.0 {
                    continue;
                }
                acc += match v {
                    Upper => a.get(&[idx[pos], f]) * tv,
                    Lower => -tv * a.get(&[f, idx[pos]]),
                };
            }
        }
        acc
    })
}

/// `R(X,Y)·T` at a point.
pub fn curvature_action(model: &ChartModel, point: &[f64], t: &TensorAtPoint, x: &[f64], y: &[f64]) -> Result<TensorAtPoint> {
    let bundle = CurvatureBundle::compute(model, point)?;
    Ok(derivation_action(&bundle.endomorphism(x, y), t))
}
