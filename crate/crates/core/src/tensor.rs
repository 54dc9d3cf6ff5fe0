//! Dense tensors at a single point with an explicit variance signature.

use std::ops::{Add, Sub};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::flat_index;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Upper,
    Lower,
}

impl Variance {
    pub fn opposite(self) -> Self {
        match self {
            Self::Upper => Self::Lower,
            Self::Lower => Self::Upper,
        }
    }
}

/// Components are stored row-major: slot 0 is the most significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorAtPoint {
    dim: usize,
    variance: Vec<Variance>,
    components: Vec<f64>,
}

impl TensorAtPoint {
    pub fn new(dim: usize, variance: Vec<Variance>, components: Vec<f64>) -> Result<Self> {
        let expected = dim.pow(variance.len() as u32);
        if components.len() != expected {
            return Err(Error::DimensionMismatch { expected, actual: components.len() });
        }
        Ok(Self { dim, variance, components })
    }

    pub fn zeros(dim: usize, variance: Vec<Variance>) -> Self {
        let len = dim.pow(variance.len() as u32);
        Self { dim, variance, components: vec![0.0; len] }
    }

    pub fn from_fn(dim: usize, variance: Vec<Variance>, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let rank = variance.len();
        let mut out = Self::zeros(dim, variance);
        let mut idx = vec![0; rank];
        for k in 0..out.components.len() {
            decode(dim, k, &mut idx);
            out.components[k] = f(&idx);
        }
        out
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self { dim, variance: Vec::new(), components: vec![value] }
    }

    pub fn vector(components: Vec<f64>) -> Self {
        Self { dim: components.len(), variance: vec![Variance::Upper], components }
    }

    pub fn covector(components: Vec<f64>) -> Self {
        Self { dim: components.len(), variance: vec![Variance::Lower], components }
    }

    /// The Kronecker delta `δ^a_b`.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, vec![Variance::Upper, Variance::Lower], |i| if i[0] == i[1] { 1.0 } else { 0.0 })
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

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [f64] {
        &mut self.components
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        debug_assert_eq!(index.len(), self.rank());
        self.components[flat_index(self.dim, index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let k = flat_index(self.dim, index);
        self.components[k] = value;
    }

    /// Value of a rank-0 tensor.
    pub fn as_scalar(&self) -> f64 {
        assert_eq!(self.rank(), 0, "tensor is not a scalar");
        self.components[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { dim: self.dim, variance: self.variance.clone(), components: self.components.iter().map(|v| v * c).collect() }
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot >= self.rank() {
            return Err(Error::SlotOutOfRange { slot, rank: self.rank() });
        }
        Ok(())
    }

    /// Contracts one slot against a vector (lower slot) or covector (upper
    /// slot) given by its components.
    pub fn feed(&self, slot: usize, arg: &[f64]) -> Result<Self> {
        self.check_slot(slot)?;
        if arg.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: arg.len() });
        }
        let d = self.dim;
        let inner = d.pow((self.rank() - slot - 1) as u32);
        let outer = d.pow(slot as u32);
        let mut out = vec![0.0; outer * inner];
        for o in 0..outer {
            for (a, &w) in arg.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let src = &self.components[(o * d + a) * inner..(o * d + a + 1) * inner];
                for (dst, s) in out[o * inner..(o + 1) * inner].iter_mut().zip(src) {
                    *dst += w * s;
                }
            }
        }
        let mut variance = self.variance.clone();
        variance.remove(slot);
        Ok(Self { dim: d, variance, components: out })
    }

    /// Feeds arguments into the leading slots, in order.
    pub fn feed_leading(&self, args: &[&[f64]]) -> Result<Self> {
        let mut t = self.clone();
        for arg in args {
            t = t.feed(0, arg)?;
        }
        Ok(t)
    }

    /// Feeds arguments into the trailing slots: the last argument goes to the
    /// last slot. Useful for vector-valued tensors `T^a_{b…}`.
    pub fn feed_trailing(&self, args: &[&[f64]]) -> Result<Self> {
        let mut t = self.clone();
        for arg in args.iter().rev() {
            let last = t.rank().checked_sub(1).ok_or(Error::SlotOutOfRange { slot: 0, rank: 0 })?;
            t = t.feed(last, arg)?;
        }
        Ok(t)
    }

    /// Full evaluation on one argument per slot.
    pub fn eval(&self, args: &[&[f64]]) -> Result<f64> {
        if args.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), actual: args.len() });
        }
        Ok(self.feed_trailing(args)?.components[0])
    }

    /// Contracts slots `i` and `j`. Mixed-variance slots are traced directly;
    /// two slots of equal variance need a rank-2 metric (or inverse metric)
    /// of the opposite variance.
    pub fn contract(&self, i: usize, j: usize, metric: Option<&TensorAtPoint>) -> Result<Self> {
        self.check_slot(i)?;
        self.check_slot(j)?;
        if i == j {
            return Err(Error::DuplicateSlot(i));
        }
        let (i, j) = (i.min(j), i.max(j));
        let (vi, vj) = (self.variance[i], self.variance[j]);
        let weights: Vec<f64> = if vi != vj {
            TensorAtPoint::identity(self.dim).components
        } else {
            let m = metric.ok_or(Error::MetricRequired(vi))?;
            if m.rank() != 2 || m.dim != self.dim {
                return Err(Error::DimensionMismatch { expected: 2, actual: m.rank() });
            }
            if m.variance[0] != vi.opposite() || m.variance[1] != vi.opposite() {
                return Err(Error::VarianceMismatch { first: vi, second: m.variance[0] });
            }
            m.components.clone()
        };
        let d = self.dim;
        let mut variance = self.variance.clone();
        variance.remove(j);
        variance.remove(i);
        let rank = self.rank();
        let mut out = Self::zeros(d, variance);
        let mut idx = vec![0; rank];
        for (k, &v) in self.components.iter().enumerate() {
            decode(d, k, &mut idx);
            let w = weights[idx[i] * d + idx[j]];
            if w == 0.0 {
                continue;
            }
            let target = idx.iter().enumerate().filter(|(s, _)| *s != i && *s != j).fold(0, |acc, (_, &x)| acc * d + x);
            out.components[target] += w * v;
        }
        Ok(out)
    }

    /// Alternating part over the listed slots, normalized by `1/k!`.
    pub fn antisymmetrize(&self, slots: &[usize]) -> Result<Self> {
        for (n, &s) in slots.iter().enumerate() {
            self.check_slot(s)?;
            if slots[..n].contains(&s) {
                return Err(Error::DuplicateSlot(s));
            }
            if self.variance[s] != self.variance[slots[0]] {
                return Err(Error::VarianceMismatch { first: self.variance[slots[0]], second: self.variance[s] });
            }
        }
        let k = slots.len();
        if k < 2 {
            return Ok(self.clone());
        }
        let perms: Vec<(Vec<usize>, f64)> = (0..k)
            .permutations(k)
            .map(|p| {
                let sign = permutation_sign(&p);
                (p, sign)
            })
            .collect();
        let norm = 1.0 / perms.len() as f64;
        let d = self.dim;
        let rank = self.rank();
        let mut idx = vec![0; rank];
        let mut src = vec![0; rank];
        let mut out = Self::zeros(d, self.variance.clone());
        for k_flat in 0..self.components.len() {
            decode(d, k_flat, &mut idx);
            let mut acc = 0.0;
            for (p, sign) in &perms {
                src.copy_from_slice(&idx);
                for (pos, &from) in p.iter().enumerate() {
                    src[slots[pos]] = idx[slots[from]];
                }
                acc += sign * self.components[flat_index(d, &src)];
            }
            out.components[k_flat] = acc * norm;
        }
        Ok(out)
    }

    pub fn tensor_product(&self, other: &TensorAtPoint) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let components = self.components.iter().flat_map(|a| other.components.iter().map(move |b| a * b)).collect();
        Ok(Self { dim: self.dim, variance, components })
    }

    /// Reorders slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rank());
        let variance = perm.iter().map(|&p| self.variance[p]).collect();
        let mut src = vec![0; self.rank()];
        Self::from_fn(self.dim, variance, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src)
        })
    }

    /// Lowers an upper slot with `g_ab` (result keeps the slot position).
    pub fn lower(&self, slot: usize, metric: &TensorAtPoint) -> Result<Self> {
        self.move_index(slot, metric, Variance::Upper)
    }

    /// Raises a lower slot with `g^ab`.
    pub fn raise(&self, slot: usize, inverse: &TensorAtPoint) -> Result<Self> {
        self.move_index(slot, inverse, Variance::Lower)
    }

    fn move_index(&self, slot: usize, m: &TensorAtPoint, from: Variance) -> Result<Self> {
        self.check_slot(slot)?;
        if self.variance[slot] != from {
            return Err(Error::VarianceMismatch { first: self.variance[slot], second: from });
        }
        let d = self.dim;
        let mut variance = self.variance.clone();
        variance[slot] = from.opposite();
        let mut src = vec![0; self.rank()];
        Ok(Self::from_fn(d, variance, |idx| {
            src.copy_from_slice(idx);
            let mut acc = 0.0;
            for a in 0..d {
                src[slot] = a;
                acc += m.components[idx[slot] * d + a] * self.get(&src);
            }
            acc
        }))
    }

    fn assert_same_shape(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "tensor dimension mismatch");
        assert_eq!(self.variance, other.variance, "tensor variance mismatch");
    }
}

impl Add for &TensorAtPoint {
    type Output = TensorAtPoint;
    fn add(self, rhs: &TensorAtPoint) -> TensorAtPoint {
        self.assert_same_shape(rhs);
        TensorAtPoint {
            dim: self.dim,
            variance: self.variance.clone(),
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TensorAtPoint {
    type Output = TensorAtPoint;
    fn sub(self, rhs: &TensorAtPoint) -> TensorAtPoint {
        self.assert_same_shape(rhs);
        TensorAtPoint {
            dim: self.dim,
            variance: self.variance.clone(),
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect(),
        }
    }
}

pub(crate) fn decode(dim: usize, mut flat: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

pub(crate) fn permutation_sign(p: &[usize]) -> f64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Variance::{Lower, Upper};

    #[test]
    fn trace_of_identity_is_dimension() {
        let t = TensorAtPoint::identity(5).contract(0, 1, None).unwrap();
        assert_eq!(t.as_scalar(), 5.0);
    }

    #[test]
    fn metric_with_inverse_gives_delta() {
        let g = TensorAtPoint::new(2, vec![Lower, Lower], vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        let inv = TensorAtPoint::new(2, vec![Upper, Upper], vec![0.6, -0.2, -0.2, 0.4]).unwrap();
        let delta = g.tensor_product(&inv).unwrap().contract(1, 2, None).unwrap();
        assert_eq!(delta.variance(), &[Lower, Upper]);
        for a in 0..2 {
            for c in 0..2 {
                let expect = if a == c { 1.0 } else { 0.0 };
                assert!((delta.get(&[a, c]) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn same_variance_contraction_needs_metric() {
        let t = TensorAtPoint::zeros(3, vec![Lower, Lower]);
        assert_eq!(t.contract(0, 1, None), Err(Error::MetricRequired(Lower)));
        let wrong = TensorAtPoint::zeros(3, vec![Lower, Lower]);
        assert!(matches!(t.contract(0, 1, Some(&wrong)), Err(Error::VarianceMismatch { .. })));
        assert!(matches!(t.contract(0, 2, None), Err(Error::SlotOutOfRange { slot: 2, rank: 2 })));
    }

    #[test]
    fn antisymmetrize_by_hand() {
        let t = TensorAtPoint::new(2, vec![Lower, Lower], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let a = t.antisymmetrize(&[0, 1]).unwrap();
        assert_eq!(a.get(&[0, 1]), 0.5);
        assert_eq!(a.get(&[1, 0]), -0.5);
    }

    #[test]
    fn antisymmetrize_kills_symmetric_and_fixes_alternating() {
        let g = TensorAtPoint::new(2, vec![Lower, Lower], vec![2.0, 1.0, 1.0, 3.0]).unwrap();
        assert_eq!(g.antisymmetrize(&[0, 1]).unwrap().max_abs(), 0.0);
        let w = TensorAtPoint::new(2, vec![Lower, Lower], vec![0.0, -4.0, 4.0, 0.0]).unwrap();
        assert_eq!(w.antisymmetrize(&[0, 1]).unwrap(), w);
        assert_eq!(w.antisymmetrize(&[0, 0]), Err(Error::DuplicateSlot(0)));
    }

    #[test]
    fn feeding_matches_full_evaluation() {
        let t = TensorAtPoint::from_fn(3, vec![Upper, Lower, Lower], |i| (i[0] * 9 + i[1] * 3 + i[2]) as f64);
        let x = [1.0, -2.0, 0.5];
        let y = [0.0, 1.0, 3.0];
        let w = [2.0, 1.0, -1.0];
        let v = t.feed_trailing(&[&x, &y]).unwrap();
        let direct: f64 = (0..3)
            .flat_map(|a| (0..3).flat_map(move |b| (0..3).map(move |c| (a, b, c))))
            .map(|(a, b, c)| w[a] * t.get(&[a, b, c]) * x[b] * y[c])
            .sum();
        assert!((v.feed(0, &w).unwrap().as_scalar() - direct).abs() < 1e-12);
        assert!((t.eval(&[&w, &x, &y]).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn permute_transposes() {
        let t = TensorAtPoint::from_fn(2, vec![Upper, Lower], |i| (i[0] * 2 + i[1]) as f64);
        let p = t.permute(&[1, 0]);
        assert_eq!(p.variance(), &[Lower, Upper]);
        assert_eq!(p.get(&[1, 0]), t.get(&[0, 1]));
    }
}
