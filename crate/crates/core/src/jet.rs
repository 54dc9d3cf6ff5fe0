//! Truncated Taylor jets in `d` variables, up to third order.
//!
//! A [`Jet3`] carries a value and every partial derivative through its order.
//! Second and third derivative arrays are stored densely; entries are only
//! ever computed for sorted index tuples and then mirrored, so the arrays are
//! bitwise symmetric by construction.

use std::ops::{Add, Mul, Neg, Sub};

/// Highest derivative order tracked by the engine.
pub const MAX_ORDER: u8 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet3 {
    dim: usize,
    order: u8,
    value: f64,
    grad: Vec<f64>,
    hess: Vec<f64>,
    third: Vec<f64>,
}

impl Jet3 {
    fn zeros(dim: usize, order: u8, value: f64) -> Self {
        debug_assert!(order <= MAX_ORDER);
        Self {
            dim,
            order,
            value,
            grad: if order >= 1 { vec![0.0; dim] } else { Vec::new() },
            hess: if order >= 2 { vec![0.0; dim * dim] } else { Vec::new() },
            third: if order >= 3 { vec![0.0; dim * dim * dim] } else { Vec::new() },
        }
    }

    pub fn constant(dim: usize, order: u8, value: f64) -> Self {
        Self::zeros(dim, order, value)
    }

    /// The coordinate function `x_index` evaluated at `value`.
    pub fn variable(dim: usize, order: u8, index: usize, value: f64) -> Self {
        let mut jet = Self::zeros(dim, order, value);
        if order >= 1 {
            jet.grad[index] = 1.0;
        }
        jet
    }

    /// Builds a jet from a derivative oracle. `deriv` is queried only with
    /// sorted index tuples of length 1..=order; the rest is mirrored.
    pub fn from_derivatives(dim: usize, order: u8, value: f64, mut deriv: impl FnMut(&[usize]) -> f64) -> Self {
        let mut jet = Self::zeros(dim, order, value);
        if order >= 1 {
            for a in 0..dim {
                jet.grad[a] = deriv(&[a]);
            }
        }
        if order >= 2 {
            for a in 0..dim {
                for b in a..dim {
                    let v = deriv(&[a, b]);
                    jet.set_hess(a, b, v);
                }
            }
        }
        if order >= 3 {
            for a in 0..dim {
                for b in a..dim {
                    for c in b..dim {
                        let v = deriv(&[a, b, c]);
                        jet.set_third(a, b, c, v);
                    }
                }
            }
        }
        jet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True if the value and every stored derivative are exactly zero.
    pub fn is_zero(&self) -> bool {
        self.value == 0.0 && [&self.grad, &self.hess, &self.third].iter().all(|v| v.iter().all(|&x| x == 0.0))
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// First partial `∂_a`; zero when the jet does not track first order.
    pub fn grad(&self, a: usize) -> f64 {
        if self.order >= 1 {
            self.grad[a]
        } else {
            0.0
        }
    }

    pub fn hess(&self, a: usize, b: usize) -> f64 {
        if self.order >= 2 {
            self.hess[a * self.dim + b]
        } else {
            0.0
        }
    }

    pub fn third(&self, a: usize, b: usize, c: usize) -> f64 {
        if self.order >= 3 {
            self.third[(a * self.dim + b) * self.dim + c]
        } else {
            0.0
        }
    }

    /// Gradient as a dense vector (zero-filled above the tracked order).
    pub fn gradient(&self) -> Vec<f64> {
        (0..self.dim).map(|a| self.grad(a)).collect()
    }

    pub fn hessian(&self) -> Vec<f64> {
        let d = self.dim;
        (0..d * d).map(|k| self.hess(k / d, k % d)).collect()
    }

    pub fn third_derivatives(&self) -> Vec<f64> {
        let d = self.dim;
        (0..d * d * d).map(|k| self.third(k / (d * d), (k / d) % d, k % d)).collect()
    }

    fn set_hess(&mut self, a: usize, b: usize, v: f64) {
        let d = self.dim;
        self.hess[a * d + b] = v;
        self.hess[b * d + a] = v;
    }

    fn set_third(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let d = self.dim;
        for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            self.third[(i * d + j) * d + k] = v;
        }
    }

    /// Drops derivative information above `order`.
    pub fn truncate(&self, order: u8) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let mut out = self.clone();
        out.order = order;
        if order < 3 {
            out.third = Vec::new();
        }
        if order < 2 {
            out.hess = Vec::new();
        }
        if order < 1 {
            out.grad = Vec::new();
        }
        out
    }

    /// The jet of `∂_a f`, one order lower.
    pub fn partial(&self, a: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate a zeroth-order jet");
        let d = self.dim;
        let mut out = Self::zeros(d, self.order - 1, self.grad[a]);
        if out.order >= 1 {
            out.grad.copy_from_slice(&self.hess[a * d..(a + 1) * d]);
        }
        if out.order >= 2 {
            out.hess.copy_from_slice(&self.third[a * d * d..(a + 1) * d * d]);
        }
        out
    }

    /// Exact bitwise symmetry of the stored higher derivatives.
    pub fn is_symmetric(&self) -> bool {
        let d = self.dim;
        if self.order >= 2 {
            for a in 0..d {
                for b in 0..d {
                    if self.hess(a, b).to_bits() != self.hess(b, a).to_bits() {
                        return false;
                    }
                }
            }
        }
        if self.order >= 3 {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let v = self.third(a, b, c).to_bits();
                        if v != self.third(b, a, c).to_bits() || v != self.third(a, c, b).to_bits() || v != self.third(c, b, a).to_bits() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            order: self.order,
            value: self.value * c,
            grad: self.grad.iter().map(|v| v * c).collect(),
            hess: self.hess.iter().map(|v| v * c).collect(),
            third: self.third.iter().map(|v| v * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let order = self.order.min(other.order);
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect::<Vec<_>>();
        Self {
            dim: self.dim,
            order,
            value: f(self.value, other.value),
            grad: if order >= 1 { zip(&self.grad, &other.grad) } else { Vec::new() },
            hess: if order >= 2 { zip(&self.hess, &other.hess) } else { Vec::new() },
            third: if order >= 3 { zip(&self.third, &other.third) } else { Vec::new() },
        }
    }

    /// Leibniz product through the common order of both operands.
    pub fn mul_jet(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let (u, v) = (self, other);
        let d = self.dim;
        let order = u.order.min(v.order);
        let mut out = Self::zeros(d, order, u.value * v.value);
        if order >= 1 {
            for a in 0..d {
                out.grad[a] = u.grad[a] * v.value + u.value * v.grad[a];
            }
        }
        if order >= 2 {
            for a in 0..d {
                for b in a..d {
                    let h = u.hess[a * d + b] * v.value + u.grad[a] * v.grad[b] + u.grad[b] * v.grad[a] + u.value * v.hess[a * d + b];
                    out.set_hess(a, b, h);
                }
            }
        }
        if order >= 3 {
            for a in 0..d {
                for b in a..d {
                    for c in b..d {
                        let t = u.third(a, b, c) * v.value
                            + u.hess(a, b) * v.grad[c]
                            + u.hess(a, c) * v.grad[b]
                            + u.hess(b, c) * v.grad[a]
                            + u.grad[a] * v.hess(b, c)
                            + u.grad[b] * v.hess(a, c)
                            + u.grad[c] * v.hess(a, b)
                            + u.value * v.third(a, b, c);
                        out.set_third(a, b, c, t);
                    }
                }
            }
        }
        out
    }

    /// Composes a univariate function with this jet (Faà di Bruno through
    /// third order). `h[k]` is the k-th derivative of the outer function at
    /// `self.value()`.
    pub fn compose(&self, h: [f64; 4]) -> Self {
        let d = self.dim;
        let u = self;
        let mut out = Self::zeros(d, u.order, h[0]);
        if u.order >= 1 {
            for a in 0..d {
                out.grad[a] = h[1] * u.grad[a];
            }
        }
        if u.order >= 2 {
            for a in 0..d {
                for b in a..d {
                    let v = h[2] * u.grad[a] * u.grad[b] + h[1] * u.hess[a * d + b];
                    out.set_hess(a, b, v);
                }
            }
        }
        if u.order >= 3 {
            for a in 0..d {
                for b in a..d {
                    for c in b..d {
                        let v = h[3] * u.grad[a] * u.grad[b] * u.grad[c]
                            + h[2] * (u.hess(a, b) * u.grad[c] + u.hess(a, c) * u.grad[b] + u.hess(b, c) * u.grad[a])
                            + h[1] * u.third(a, b, c);
                        out.set_third(a, b, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.compose([e, e, e, e])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([c, -s, -c, s])
    }

    /// `1 / self`. The caller is responsible for rejecting a zero value.
    pub fn recip(&self) -> Self {
        let x = self.value;
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    /// `self^p`; integer exponents use repeated multiplication semantics
    /// (`powi`) and are valid for negative bases.
    pub fn powf(&self, p: f64) -> Self {
        let x = self.value;
        let integer = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        let pow = |e: f64| {
            if integer {
                x.powi(e as i32)
            } else {
                x.powf(e)
            }
        };
        let mut h = [pow(p), 0.0, 0.0, 0.0];
        let mut coef = 1.0;
        for (k, hk) in h.iter_mut().enumerate().skip(1) {
            coef *= p - (k as f64 - 1.0);
            // A vanishing falling factorial must not meet 0^negative.
            *hk = if coef == 0.0 { 0.0 } else { coef * pow(p - k as f64) };
        }
        self.compose(h)
    }
}

impl Add for &Jet3 {
    type Output = Jet3;
    fn add(self, rhs: &Jet3) -> Jet3 {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: &Jet3) -> Jet3 {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: &Jet3) -> Jet3 {
        self.mul_jet(rhs)
    }
}

impl Neg for &Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}
