//! Closed-form scalar fields over chart coordinates and tensor fields built
//! from them.

use std::fmt;
use std::ops;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Jet3, MAX_ORDER};
use crate::tensor::{TensorAtPoint, Variance};

/// Expression tree for a component function. The vocabulary is closed:
/// constants, coordinate projections, arithmetic, `exp`, `sin`, `cos` and
/// real powers.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarField {
    Const(f64),
    Coord(usize),
    Add(Arc<ScalarField>, Arc<ScalarField>),
    Sub(Arc<ScalarField>, Arc<ScalarField>),
    Mul(Arc<ScalarField>, Arc<ScalarField>),
    Div(Arc<ScalarField>, Arc<ScalarField>),
    Neg(Arc<ScalarField>),
    Exp(Arc<ScalarField>),
    Sin(Arc<ScalarField>),
    Cos(Arc<ScalarField>),
    Pow(Arc<ScalarField>, f64),
}

impl ScalarField {
    pub fn constant(c: f64) -> Self {
        Self::Const(c)
    }

    pub fn zero() -> Self {
        Self::Const(0.0)
    }

    pub fn one() -> Self {
        Self::Const(1.0)
    }

    pub fn coord(index: usize) -> Self {
        Self::Coord(index)
    }

    /// Sum of the listed coordinates.
    pub fn coord_sum(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().map(Self::coord).fold(Self::zero(), |acc, c| acc + c)
    }

    pub fn exp(self) -> Self {
        match self {
            Self::Const(c) => Self::Const(c.exp()),
            other => Self::Exp(Arc::new(other)),
        }
    }

    pub fn sin(self) -> Self {
        Self::Sin(Arc::new(self))
    }

    pub fn cos(self) -> Self {
        Self::Cos(Arc::new(self))
    }

    pub fn powf(self, p: f64) -> Self {
        if p == 1.0 {
            return self;
        }
        Self::Pow(Arc::new(self), p)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Const(c) if *c == 0.0)
    }

    fn is_one(&self) -> bool {
        matches!(self, Self::Const(c) if *c == 1.0)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Self::Const(_) => None,
            Self::Coord(i) => Some(*i),
            Self::Add(a, b) | Self::Sub(a, b) | Self::Mul(a, b) | Self::Div(a, b) => a.max_coord().max(b.max_coord()),
            Self::Neg(a) | Self::Exp(a) | Self::Sin(a) | Self::Cos(a) | Self::Pow(a, _) => a.max_coord(),
        }
    }

    fn check_coords(&self, dim: usize) -> Result<()> {
        match self.max_coord() {
            Some(index) if index >= dim => Err(Error::CoordinateOutOfRange { index, dim }),
            _ => Ok(()),
        }
    }

    /// Evaluates the field and all partial derivatives through `order` at
    /// `point`.
    pub fn jet_eval(&self, point: &[f64], order: u8) -> Result<Jet3> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        self.check_coords(point.len())?;
        let mut path = Vec::new();
        self.jet_rec(point, order, &mut path)
    }

    fn jet_rec(&self, point: &[f64], order: u8, path: &mut Vec<&'static str>) -> Result<Jet3> {
        let d = point.len();
        let child = |label: &'static str, node: &ScalarField, path: &mut Vec<&'static str>| {
            path.push(label);
            let r = node.jet_rec(point, order, path);
            path.pop();
            r
        };
        let jet = match self {
            Self::Const(c) => Jet3::constant(d, order, *c),
            Self::Coord(i) => Jet3::variable(d, order, *i, point[*i]),
            Self::Add(a, b) => &child("add.lhs", a, path)? + &child("add.rhs", b, path)?,
            Self::Sub(a, b) => &child("sub.lhs", a, path)? - &child("sub.rhs", b, path)?,
            Self::Mul(a, b) => &child("mul.lhs", a, path)? * &child("mul.rhs", b, path)?,
            Self::Div(a, b) => {
                let num = child("div.lhs", a, path)?;
                let den = child("div.rhs", b, path)?;
                if den.value() == 0.0 {
                    path.push("div.rhs");
                    return Err(Error::DivisionByZero { path: render_path(path) });
                }
                &num * &den.recip()
            }
            Self::Neg(a) => -&child("neg", a, path)?,
            Self::Exp(a) => child("exp", a, path)?.exp(),
            Self::Sin(a) => child("sin", a, path)?.sin(),
            Self::Cos(a) => child("cos", a, path)?.cos(),
            Self::Pow(a, p) => {
                let base = child("pow", a, path)?;
                if p.fract() != 0.0 && base.value() <= 0.0 {
                    return Err(Error::Domain {
                        path: render_path(path),
                        reason: format!("non-integer power {p} of non-positive base {}", base.value()),
                    });
                }
                if *p < 0.0 && base.value() == 0.0 {
                    return Err(Error::DivisionByZero { path: render_path(path) });
                }
                base.powf(*p)
            }
        };
        if !jet.value().is_finite() {
            return Err(Error::Domain { path: render_path(path), reason: format!("value {} is not finite", jet.value()) });
        }
        Ok(jet)
    }

    /// Plain floating-point evaluation, independent of the jet machinery.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        self.check_coords(point.len())?;
        self.eval_rec(point)
    }

    fn eval_rec(&self, x: &[f64]) -> Result<f64> {
        Ok(match self {
            Self::Const(c) => *c,
            Self::Coord(i) => x[*i],
            Self::Add(a, b) => a.eval_rec(x)? + b.eval_rec(x)?,
            Self::Sub(a, b) => a.eval_rec(x)? - b.eval_rec(x)?,
            Self::Mul(a, b) => a.eval_rec(x)? * b.eval_rec(x)?,
            Self::Div(a, b) => {
                let den = b.eval_rec(x)?;
                if den == 0.0 {
                    return Err(Error::DivisionByZero { path: "div.rhs".into() });
                }
                a.eval_rec(x)? / den
            }
            Self::Neg(a) => -a.eval_rec(x)?,
            Self::Exp(a) => a.eval_rec(x)?.exp(),
            Self::Sin(a) => a.eval_rec(x)?.sin(),
            Self::Cos(a) => a.eval_rec(x)?.cos(),
            Self::Pow(a, p) => {
                let base = a.eval_rec(x)?;
                if p.fract() == 0.0 {
                    base.powi(*p as i32)
                } else {
                    base.powf(*p)
                }
            }
        })
    }
}

fn render_path(path: &[&'static str]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        format!("root/{}", path.join("/"))
    }
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        Self::Const(c)
    }
}

impl ops::Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Const(a), Self::Const(b)) => Self::Const(a + b),
            (a, b) if a.is_zero() => b,
            (a, b) if b.is_zero() => a,
            (a, b) => Self::Add(Arc::new(a), Arc::new(b)),
        }
    }
}

impl ops::Sub for ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Const(a), Self::Const(b)) => Self::Const(a - b),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => -b,
            (a, b) => Self::Sub(Arc::new(a), Arc::new(b)),
        }
    }
}

impl ops::Mul for ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Const(a), Self::Const(b)) => Self::Const(a * b),
            (a, _) if a.is_zero() => Self::zero(),
            (_, b) if b.is_zero() => Self::zero(),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            (a, b) => Self::Mul(Arc::new(a), Arc::new(b)),
        }
    }
}

impl ops::Div for ScalarField {
    type Output = ScalarField;
    fn div(self, rhs: Self) -> Self {
        match (self, rhs) {
            (a, b) if b.is_one() => a,
            (a, b) if a.is_zero() && !b.is_zero() => Self::zero(),
            (a, b) => Self::Div(Arc::new(a), Arc::new(b)),
        }
    }
}

impl ops::Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> Self {
        match self {
            Self::Const(c) => Self::Const(-c),
            Self::Neg(inner) => (*inner).clone(),
            other => Self::Neg(Arc::new(other)),
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "{c}"),
            Self::Coord(i) => write!(f, "x{i}"),
            Self::Add(a, b) => write!(f, "({a} + {b})"),
            Self::Sub(a, b) => write!(f, "({a} - {b})"),
            Self::Mul(a, b) => write!(f, "{a}*{b}"),
            Self::Div(a, b) => write!(f, "{a}/{b}"),
            Self::Neg(a) => write!(f, "-{a}"),
            Self::Exp(a) => write!(f, "exp({a})"),
            Self::Sin(a) => write!(f, "sin({a})"),
            Self::Cos(a) => write!(f, "cos({a})"),
            Self::Pow(a, p) => write!(f, "({a})^{p}"),
        }
    }
}

/// A tensor field whose components are [`ScalarField`]s, stored row-major
/// with slot 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    dim: usize,
    variance: Vec<Variance>,
    components: Vec<ScalarField>,
}

impl TensorField {
    pub fn new(dim: usize, variance: Vec<Variance>, components: Vec<ScalarField>) -> Result<Self> {
        let expected = dim.pow(variance.len() as u32);
        if components.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: components.len() });
        }
        for c in &components {
            c.check_coords(dim)?;
        }
        Ok(Self { dim, variance, components })
    }

    pub fn zeros(dim: usize, variance: Vec<Variance>) -> Self {
        let len = dim.pow(variance.len() as u32);
        Self { dim, variance, components: vec![ScalarField::zero(); len] }
    }

    pub fn vector(components: Vec<ScalarField>) -> Result<Self> {
        Self::new(components.len(), vec![Variance::Upper], components)
    }

    pub fn covector(components: Vec<ScalarField>) -> Result<Self> {
        Self::new(components.len(), vec![Variance::Lower], components)
    }

    /// Rank-2 field from a row-major `rows[i][j]` layout.
    pub fn matrix(variance: [Variance; 2], rows: Vec<Vec<ScalarField>>) -> Result<Self> {
        let dim = rows.len();
        let components: Vec<_> = rows.into_iter().flatten().collect();
        Self::new(dim, variance.to_vec(), components)
    }

    /// Coordinate basis vector field `∂_index`.
    pub fn coordinate_vector(dim: usize, index: usize) -> Self {
        let mut f = Self::zeros(dim, vec![Variance::Upper]);
        f.components[index] = ScalarField::one();
        f
    }

    /// Coordinate differential `dx^index`.
    pub fn coordinate_covector(dim: usize, index: usize) -> Self {
        let mut f = Self::zeros(dim, vec![Variance::Lower]);
        f.components[index] = ScalarField::one();
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, index: &[usize]) -> &ScalarField {
        &self.components[flat_index(self.dim, index)]
    }

    pub fn set_component(&mut self, index: &[usize], value: ScalarField) {
        let k = flat_index(self.dim, index);
        self.components[k] = value;
    }

    /// Multiplies every component by a scalar field.
    pub fn scaled(&self, factor: &ScalarField) -> Self {
        Self {
            dim: self.dim,
            variance: self.variance.clone(),
            components: self.components.iter().map(|c| factor.clone() * c.clone()).collect(),
        }
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: point.len() });
        }
        Ok(())
    }

    pub fn eval(&self, point: &[f64]) -> Result<TensorAtPoint> {
        self.check_point(point)?;
        let values = self.components.iter().map(|c| Ok(c.jet_eval(point, 0)?.value())).collect::<Result<Vec<_>>>()?;
        TensorAtPoint::new(self.dim, self.variance.clone(), values)
    }

    /// Component jets through `order`. Structurally zero components skip
    /// evaluation.
    pub fn eval_jets(&self, point: &[f64], order: u8) -> Result<Vec<Jet3>> {
        self.check_point(point)?;
        self.components
            .iter()
            .map(|c| if c.is_zero() { Ok(Jet3::constant(self.dim, order, 0.0)) } else { c.jet_eval(point, order) })
            .collect()
    }
}

pub(crate) fn flat_index(dim: usize, index: &[usize]) -> usize {
    index.iter().fold(0, |acc, &i| acc * dim + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_sum_exp() -> ScalarField {
        (ScalarField::constant(2.0) * ScalarField::coord_sum(0..3)).exp()
    }

    #[test]
    fn exponential_of_coordinate_sum() {
        let j = z_sum_exp().jet_eval(&[0.0, 0.0, 0.0], 3).unwrap();
        assert_eq!(j.value(), 1.0);
        assert_eq!(j.grad(0), 2.0);
        assert_eq!(j.hess(0, 1), 4.0);
        assert_eq!(j.third(0, 1, 2), 8.0);
    }

    #[test]
    fn constant_field_has_no_derivatives() {
        let j = ScalarField::constant(5.0).jet_eval(&[0.3, -0.2], 3).unwrap();
        assert_eq!(j.value(), 5.0);
        assert!(j.gradient().iter().all(|&v| v == 0.0));
        assert!(j.hessian().iter().all(|&v| v == 0.0));
        assert!(j.third_derivatives().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn division_by_zero_reports_node_path() {
        let f = ScalarField::one() + ScalarField::one() / ScalarField::coord(1);
        let err = f.jet_eval(&[1.0, 0.0], 2).unwrap_err();
        assert_eq!(err, Error::DivisionByZero { path: "root/add.rhs/div.rhs".into() });
    }

    #[test]
    fn out_of_range_coordinate_is_rejected() {
        let f = ScalarField::coord(4);
        assert!(matches!(f.jet_eval(&[0.0; 3], 1), Err(Error::CoordinateOutOfRange { index: 4, dim: 3 })));
    }

    #[test]
    fn partials_above_order_are_zero() {
        let j = z_sum_exp().jet_eval(&[0.1, 0.2, 0.3], 1).unwrap();
        assert!(j.grad(0) > 0.0);
        assert_eq!(j.hess(0, 0), 0.0);
        assert_eq!(j.third(0, 0, 0), 0.0);
    }

    #[test]
    fn smart_constructors_fold_zeros() {
        let x = ScalarField::coord(0);
        assert!((ScalarField::zero() * x.clone()).is_zero());
        assert_eq!(ScalarField::one() * x.clone(), x);
        assert_eq!(x.clone() + ScalarField::zero(), x);
    }

    #[test]
    fn plain_eval_matches_jet_value() {
        let f = (ScalarField::coord(0).sin() * ScalarField::coord(1).cos()).powf(2.0)
            / (ScalarField::constant(3.0) + ScalarField::coord(0).exp());
        let p = [0.4, -1.3];
        assert!((f.eval(&p).unwrap() - f.jet_eval(&p, 3).unwrap().value()).abs() < 1e-15);
    }
}
