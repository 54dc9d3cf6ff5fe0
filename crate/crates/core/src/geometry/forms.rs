//! Exterior derivative and wedge product.
//!
//! Conventions: `(α∧β) = Alt(α⊗β)`, which gives
//! `(α∧β)(X,Y) = ½{α(X)β(Y) − α(Y)β(X)}` and
//! `(α∧Φ)(X,Y,Z) = ⅓{α(X)Φ(Y,Z) − α(Y)Φ(X,Z) + α(Z)Φ(X,Y)}`. In components
//! `(dω)_ab = ½(∂_aω_b − ∂_bω_a)` and `(dΦ)_abc = ⅓(∂_aΦ_bc + ∂_bΦ_ca + ∂_cΦ_ab)`,
//! which is `d = Alt∘∂` and matches the invariant formulas with the same
//! ½ and ⅓ prefactors.

use crate::error::{Error, Result};
use crate::field::TensorField;
use crate::jet::Jet3;
use crate::tensor::{TensorAtPoint, Variance};

/// Largest form degree handled by [`wedge`] and [`exterior_derivative`].
pub const MAX_DEGREE: usize = 3;

const ALTERNATING_TOL: f64 = 1e-10;

/// A differential form whose components carry jets, so that `d` can be
/// applied repeatedly (each application costs one derivative order).
#[derive(Clone, Debug)]
pub struct JetForm {
    dim: usize,
    degree: usize,
    components: Vec<Jet3>,
}

impl JetForm {
    pub fn from_field(field: &TensorField, point: &[f64], order: u8) -> Result<Self> {
        if field.variance().iter().any(|v| *v != Variance::Lower) {
            return Err(Error::VarianceMismatch { first: Variance::Lower, second: Variance::Upper });
        }
        let form = Self { dim: field.dim(), degree: field.rank(), components: field.eval_jets(point, order)? };
        let values = form.value();
        let asym = (&values - &values.antisymmetrize(&(0..form.degree).collect::<Vec<_>>())?).max_abs();
        if asym > ALTERNATING_TOL * values.max_abs().max(1.0) {
            return Err(Error::NotAlternating(asym));
        }
        Ok(form)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn value(&self) -> TensorAtPoint {
        TensorAtPoint::new(self.dim, vec![Variance::Lower; self.degree], self.components.iter().map(|j| j.value()).collect())
            .expect("component count matches degree")
    }

    pub fn d(&self) -> Result<JetForm> {
        let d = self.dim;
        let c = |idx: &[usize]| &self.components[idx.iter().fold(0, |acc, &i| acc * d + i)];
        let order = self.components.first().map_or(0, |j| j.order());
        if order == 0 {
            return Err(Error::UnsupportedOrder(0));
        }
        let out_degree = self.degree + 1;
        let count = d.pow(out_degree as u32);
        let mut idx = vec![0; out_degree];
        let mut components = Vec::with_capacity(count);
        for k in 0..count {
            crate::tensor::decode(d, k, &mut idx);
            let jet = match self.degree {
                0 => c(&[]).partial(idx[0]),
                1 => (&c(&[idx[1]]).partial(idx[0]) - &c(&[idx[0]]).partial(idx[1])).scale(0.5),
                2 => {
                    let (a, b, e) = (idx[0], idx[1], idx[2]);
                    let sum = &(&c(&[b, e]).partial(a) + &c(&[e, a]).partial(b)) + &c(&[a, b]).partial(e);
                    sum.scale(1.0 / 3.0)
                }
                k => return Err(Error::UnsupportedDegree(k)),
            };
            components.push(jet);
        }
        Ok(JetForm { dim: d, degree: out_degree, components })
    }
}

/// `dω` at a point for a 0-, 1- or 2-form field.
pub fn exterior_derivative(point: &[f64], omega: &TensorField) -> Result<TensorAtPoint> {
    if omega.rank() >= MAX_DEGREE {
        return Err(Error::UnsupportedDegree(omega.rank()));
    }
    Ok(JetForm::from_field(omega, point, 1)?.d()?.value())
}

/// `α∧β = Alt(α⊗β)` for forms of total degree at most 3.
pub fn wedge(alpha: &TensorAtPoint, beta: &TensorAtPoint) -> Result<TensorAtPoint> {
    let degree = alpha.rank() + beta.rank();
    if degree > MAX_DEGREE {
        return Err(Error::RankOverflow(degree));
    }
    let product = alpha.tensor_product(beta)?;
    if product.variance().iter().any(|v| *v != Variance::Lower) {
        return Err(Error::VarianceMismatch { first: Variance::Lower, second: Variance::Upper });
    }
    product.antisymmetrize(&(0..degree).collect::<Vec<_>>())
}
