//! Coordinate-chart description of a metric f-manifold.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::{ScalarField, TensorField};
use crate::tensor::{TensorAtPoint, Variance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Example22,
    Example23,
    Warped,
    Control,
    Custom,
}

/// A named vector field attached to a model, e.g. an adapted frame.
#[derive(Clone, Debug)]
pub struct NamedField {
    pub name: String,
    pub field: TensorField,
}

/// `(φ, ξ_i, η^i, g)` on a chart of dimension `2n + s`.
#[derive(Clone, Debug)]
pub struct ChartModel {
    name: String,
    kind: ModelKind,
    n: usize,
    s: usize,
    metric: TensorField,
    phi: TensorField,
    xi: Vec<TensorField>,
    eta: Vec<TensorField>,
    warped: bool,
    frame: Vec<NamedField>,
}

impl ChartModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        kind: ModelKind,
        n: usize,
        s: usize,
        metric: TensorField,
        phi: TensorField,
        xi: Vec<TensorField>,
        eta: Vec<TensorField>,
    ) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidModel(format!("need n >= 1 and s >= 1, got n = {n}, s = {s}")));
        }
        let dim = 2 * n + s;
        let expect = |f: &TensorField, what: &str, variance: &[Variance]| -> Result<()> {
            if f.dim() != dim || f.variance() != variance {
                return Err(Error::InvalidModel(format!(
                    "{what} has shape {:?} in dimension {}, expected {:?} in dimension {dim}",
                    f.variance(),
                    f.dim(),
                    variance
                )));
            }
            Ok(())
        };
        expect(&metric, "metric", &[Variance::Lower, Variance::Lower])?;
        expect(&phi, "phi", &[Variance::Upper, Variance::Lower])?;
        if xi.len() != s || eta.len() != s {
            return Err(Error::InvalidModel(format!("expected {s} structure vectors and 1-forms, got {} and {}", xi.len(), eta.len())));
        }
        for x in &xi {
            expect(x, "xi", &[Variance::Upper])?;
        }
        for e in &eta {
            expect(e, "eta", &[Variance::Lower])?;
        }
        Ok(Self { name: name.into(), kind, n, s, metric, phi, xi, eta, warped: false, frame: Vec::new() })
    }

    /// Marks the model as a warped product `L^s ×_f V^{2n}` with `f = k e^{Σt}`.
    pub fn with_warped(mut self, warped: bool) -> Self {
        self.warped = warped;
        self
    }

    pub fn with_frame(mut self, frame: Vec<NamedField>) -> Self {
        self.frame = frame;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.s
    }

    pub fn is_warped(&self) -> bool {
        self.warped
    }

    pub fn metric(&self) -> &TensorField {
        &self.metric
    }

    pub fn phi(&self) -> &TensorField {
        &self.phi
    }

    pub fn xi(&self) -> &[TensorField] {
        &self.xi
    }

    pub fn eta(&self) -> &[TensorField] {
        &self.eta
    }

    pub fn frame(&self) -> &[NamedField] {
        &self.frame
    }

    pub fn frame_field(&self, name: &str) -> Option<&TensorField> {
        self.frame.iter().find(|f| f.name == name).map(|f| &f.field)
    }

    /// `Φ_ab = g_ac φ^c_b` as a field, so that it can be differentiated.
    pub fn fundamental_two_form_field(&self) -> TensorField {
        let d = self.dim();
        let mut out = TensorField::zeros(d, vec![Variance::Lower, Variance::Lower]);
        for a in 0..d {
            for b in 0..d {
                let mut acc = ScalarField::zero();
                for c in 0..d {
                    acc = acc + self.metric.component(&[a, c]).clone() * self.phi.component(&[c, b]).clone();
                }
                out.set_component(&[a, b], acc);
            }
        }
        out
    }

    /// Metric at a point, checked to be symmetric and positive definite.
    pub fn metric_at(&self, point: &[f64]) -> Result<TensorAtPoint> {
        let g = self.metric.eval(point)?;
        check_metric(&g)?;
        Ok(g)
    }

    /// Same structure with `g` replaced by `c·g`. The structure tensors are
    /// kept as they are, so the result is generally not a metric f-structure;
    /// it exists for scaling checks on the connection and curvature.
    pub fn scale_metric(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.metric = self.metric.scaled(&ScalarField::constant(c));
        out.name = format!("{} (g scaled by {c})", self.name);
        out
    }

    /// Replaces `φ`, e.g. to build degenerate negative controls.
    pub fn with_phi(mut self, phi: TensorField) -> Result<Self> {
        if phi.dim() != self.dim() || phi.variance() != [Variance::Upper, Variance::Lower] {
            return Err(Error::InvalidModel("phi must be a (1,1) tensor of the chart dimension".into()));
        }
        self.phi = phi;
        Ok(self)
    }

    pub fn with_xi(mut self, xi: Vec<TensorField>) -> Result<Self> {
        if xi.len() != self.s || xi.iter().any(|x| x.dim() != self.dim() || x.variance() != [Variance::Upper]) {
            return Err(Error::InvalidModel("xi must be s vector fields of the chart dimension".into()));
        }
        self.xi = xi;
        Ok(self)
    }
}

/// Symmetry and positive definiteness of an evaluated metric.
pub(crate) fn check_metric(g: &TensorAtPoint) -> Result<()> {
    let d = g.dim();
    let m = DMatrix::from_row_slice(d, d, g.components());
    let asym = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| (m[(a, b)] - m[(b, a)]).abs()).fold(0.0, f64::max);
    let scale = m.amax().max(1.0);
    if asym > 1e-12 * scale {
        return Err(Error::InvalidModel(format!("metric is not symmetric (asymmetry {asym:e})")));
    }
    if m.clone().cholesky().is_none() {
        let min_eigenvalue = m.symmetric_eigenvalues().min();
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(())
}
