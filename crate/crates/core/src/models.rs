//! Built-in chart models.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::{ScalarField, TensorField};
use crate::model::{ChartModel, ModelKind, NamedField};
use crate::tensor::Variance;

use Variance::{Lower, Upper};

const KAHLER_TOL: f64 = 1e-12;

fn check_dims(n: usize, s: usize) -> Result<()> {
    if n == 0 || s == 0 {
        return Err(Error::InvalidModel(format!("need n >= 1 and s >= 1, got n = {n}, s = {s}")));
    }
    Ok(())
}

fn diagonal_metric(diag: Vec<ScalarField>) -> TensorField {
    let d = diag.len();
    let mut g = TensorField::zeros(d, vec![Lower, Lower]);
    for (i, v) in diag.into_iter().enumerate() {
        g.set_component(&[i, i], v);
    }
    g
}

/// `φ` rotating each `(p, q)` coordinate pair: `φ∂_p = ∂_q`, `φ∂_q = −∂_p`.
fn pair_rotation(dim: usize, pairs: &[(usize, usize)]) -> TensorField {
    let mut phi = TensorField::zeros(dim, vec![Upper, Lower]);
    for &(p, q) in pairs {
        phi.set_component(&[q, p], ScalarField::one());
        phi.set_component(&[p, q], ScalarField::constant(-1.0));
    }
    phi
}

fn coordinate_structure(dim: usize, first: usize, s: usize) -> (Vec<TensorField>, Vec<TensorField>) {
    let xi = (0..s).map(|a| TensorField::coordinate_vector(dim, first + a)).collect();
    let eta = (0..s).map(|a| TensorField::coordinate_covector(dim, first + a)).collect();
    (xi, eta)
}

fn scaled_vector(dim: usize, entries: &[(usize, ScalarField)]) -> TensorField {
    let mut v = TensorField::zeros(dim, vec![Upper]);
    for (i, c) in entries {
        v.set_component(&[*i], c.clone());
    }
    v
}

/// Coordinates `(x_1..x_n, y_1..y_n, z_1..z_s)`,
/// `g = e^{2Σz}Σ(dx² + dy²) + Σdz²`, `ξ_α = ∂_{z_α}`, `η^α = dz_α`,
/// `φ∂x_i = ∂y_i`, `φ∂y_i = −∂x_i`. Carries the orthonormal frame
/// `X_i = e^{−Σz}∂x_i`, `Y_i = e^{−Σz}∂y_i`, `ξ_α` under the names
/// `X1.., Y1.., xi1..`.
pub fn build_example_2_2(n: usize, s: usize) -> Result<ChartModel> {
    check_dims(n, s)?;
    let dim = 2 * n + s;
    let zsum = ScalarField::coord_sum(2 * n..dim);
    let warp = (ScalarField::constant(2.0) * zsum.clone()).exp();
    let diag = (0..dim).map(|i| if i < 2 * n { warp.clone() } else { ScalarField::one() }).collect();
    let pairs: Vec<_> = (0..n).map(|i| (i, n + i)).collect();
    let (xi, eta) = coordinate_structure(dim, 2 * n, s);
    let shrink = (-zsum).exp();
    let mut frame = Vec::new();
    for i in 0..n {
        frame.push(NamedField { name: format!("X{}", i + 1), field: scaled_vector(dim, &[(i, shrink.clone())]) });
    }
    for i in 0..n {
        frame.push(NamedField { name: format!("Y{}", i + 1), field: scaled_vector(dim, &[(n + i, shrink.clone())]) });
    }
    for a in 0..s {
        frame.push(NamedField { name: format!("xi{}", a + 1), field: xi[a].clone() });
    }
    let model = ChartModel::new(
        format!("example22(n={n}, s={s})"),
        ModelKind::Example22,
        n,
        s,
        diagonal_metric(diag),
        pair_rotation(dim, &pairs),
        xi,
        eta,
    )?;
    Ok(model.with_warped(true).with_frame(frame))
}

/// The functions `(f₁, f₂)` of the seven-dimensional model.
pub fn example_2_3_functions(c1: f64, c2: f64) -> (ScalarField, ScalarField) {
    let z = ScalarField::coord_sum(4..7);
    let decay = (-z.clone()).exp();
    let (cos, sin) = (z.clone().cos(), z.sin());
    let f1 = decay.clone() * (ScalarField::constant(c2) * cos.clone() - ScalarField::constant(c1) * sin.clone());
    let f2 = decay * (ScalarField::constant(c1) * cos + ScalarField::constant(c2) * sin);
    (f1, f2)
}

/// Seven-dimensional model on `(x₁, y₁, x₂, y₂, z₁, z₂, z₃)` with
/// `g = (f₁² + f₂²)^{-1}Σ(dx² + dy²) + Σdz²`. The frame `e1..e7` is attached.
pub fn build_example_2_3(c1: f64, c2: f64) -> Result<ChartModel> {
    if c1 == 0.0 && c2 == 0.0 {
        return Err(Error::InvalidModel("c1 and c2 must not both vanish".into()));
    }
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(Error::InvalidModel("c1 and c2 must be finite".into()));
    }
    let (n, s, dim) = (2, 3, 7);
    let (f1, f2) = example_2_3_functions(c1, c2);
    let conformal = ScalarField::one() / (f1.clone() * f1.clone() + f2.clone() * f2.clone());
    let diag = (0..dim).map(|i| if i < 4 { conformal.clone() } else { ScalarField::one() }).collect();
    let (xi, eta) = coordinate_structure(dim, 4, s);
    let frame_pair = |p: usize, q: usize| {
        [scaled_vector(dim, &[(p, f1.clone()), (q, f2.clone())]), scaled_vector(dim, &[(p, -f2.clone()), (q, f1.clone())])]
    };
    let [e1, e2] = frame_pair(0, 1);
    let [e3, e4] = frame_pair(2, 3);
    let frame = [e1, e2, e3, e4, xi[0].clone(), xi[1].clone(), xi[2].clone()]
        .into_iter()
        .enumerate()
        .map(|(i, field)| NamedField { name: format!("e{}", i + 1), field })
        .collect();
    let model = ChartModel::new(
        format!("example23(c1={c1}, c2={c2})"),
        ModelKind::Example23,
        n,
        s,
        diagonal_metric(diag),
        pair_rotation(dim, &[(0, 1), (2, 3)]),
        xi,
        eta,
    )?;
    Ok(model.with_warped(true).with_frame(frame))
}

/// Constant Kähler data `(G, J)` on `R^{2n}`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatKahler {
    pub metric: Vec<f64>,
    pub complex_structure: Vec<f64>,
}

impl FlatKahler {
    /// Euclidean `G` with `J∂u_{2i−1} = ∂u_{2i}`.
    pub fn standard(n: usize) -> Self {
        let m = 2 * n;
        let mut j = vec![0.0; m * m];
        for i in 0..n {
            let (p, q) = (2 * i, 2 * i + 1);
            j[q * m + p] = 1.0;
            j[p * m + q] = -1.0;
        }
        let g = DMatrix::<f64>::identity(m, m);
        Self { metric: g.as_slice().to_vec(), complex_structure: j }
    }

    fn matrices(&self, n: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let m = 2 * n;
        if self.metric.len() != m * m || self.complex_structure.len() != m * m {
            return Err(Error::DimensionMismatch { expected: m * m, actual: self.metric.len().min(self.complex_structure.len()) });
        }
        Ok((DMatrix::from_row_slice(m, m, &self.metric), DMatrix::from_row_slice(m, m, &self.complex_structure)))
    }

    fn validate(&self, n: usize) -> Result<()> {
        let (g, j) = self.matrices(n)?;
        let m = 2 * n;
        let id = DMatrix::<f64>::identity(m, m);
        let sym = (&g - g.transpose()).amax();
        if sym > KAHLER_TOL {
            return Err(Error::InvalidModel(format!("fiber metric is not symmetric ({sym:e})")));
        }
        if g.clone().cholesky().is_none() {
            return Err(Error::InvalidModel("fiber metric is not positive definite".into()));
        }
        let square = (&j * &j + &id).amax();
        if square > KAHLER_TOL {
            return Err(Error::InvalidModel(format!("J^2 + I has size {square:e}")));
        }
        let compat = (j.transpose() * &g * &j - &g).amax();
        if compat > KAHLER_TOL {
            return Err(Error::InvalidModel(format!("G(JU, JV) differs from G(U, V) by {compat:e}")));
        }
        Ok(())
    }

    /// `G`-orthonormal basis `Ē₁, JĒ₁, Ē₃, JĒ₃, …`.
    pub fn adapted_basis(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        let (g, j) = self.matrices(n)?;
        let m = 2 * n;
        let ip = |x: &[f64], y: &[f64]| -> f64 { (0..m).map(|a| (0..m).map(|b| g[(a, b)] * x[a] * y[b]).sum::<f64>()).sum() };
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        for c in 0..m {
            if basis.len() == m {
                break;
            }
            let mut v: Vec<f64> = (0..m).map(|i| if i == c { 1.0 } else { 0.0 }).collect();
            for _ in 0..2 {
                for e in &basis {
                    let p = ip(&v, e);
                    v.iter_mut().zip(e).for_each(|(vi, ei)| *vi -= p * ei);
                }
            }
            let norm = ip(&v, &v).sqrt();
            if norm < 1e-8 {
                continue;
            }
            let u: Vec<f64> = v.iter().map(|x| x / norm).collect();
            let ju: Vec<f64> = (0..m).map(|a| (0..m).map(|b| j[(a, b)] * u[b]).sum()).collect();
            basis.push(u);
            basis.push(ju);
        }
        if basis.len() != m {
            return Err(Error::FrameExhausted { found: basis.len(), needed: m });
        }
        Ok(basis)
    }
}

/// Warped product `R^s ×_f R^{2n}` with `f = k e^{Σt}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WarpedProductSpec {
    pub s: usize,
    pub n: usize,
    pub k: f64,
    pub fiber: FlatKahler,
}

impl WarpedProductSpec {
    pub fn standard(n: usize, s: usize, k: f64) -> Self {
        Self { s, n, k, fiber: FlatKahler::standard(n) }
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(self.n, self.s)?;
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::InvalidModel(format!("warping constant must be positive, got {}", self.k)));
        }
        self.fiber.validate(self.n)
    }

    /// `f(t) = k e^{Σt}` as a chart field (base coordinates come first).
    pub fn warping_function(&self) -> ScalarField {
        ScalarField::constant(self.k) * ScalarField::coord_sum(0..self.s).exp()
    }
}

/// Coordinates `(t_1..t_s, u_1..u_{2n})`, `g = Σdt² + f²G`, `φ = (0, J)`,
/// `ξ_i = ∂_{t_i}`, `η^i = dt_i`. The attached frame is `E_a = Ē_a / f`
/// for a `G`-orthonormal `J`-adapted `Ē`, followed by the `ξ_i`.
pub fn build_warped(spec: &WarpedProductSpec) -> Result<ChartModel> {
    spec.validate()?;
    let (n, s) = (spec.n, spec.s);
    let dim = 2 * n + s;
    let m = 2 * n;
    let f = spec.warping_function();
    let f2 = f.clone() * f.clone();
    let mut g = TensorField::zeros(dim, vec![Lower, Lower]);
    let mut phi = TensorField::zeros(dim, vec![Upper, Lower]);
    for i in 0..s {
        g.set_component(&[i, i], ScalarField::one());
    }
    for a in 0..m {
        for b in 0..m {
            let gab = spec.fiber.metric[a * m + b];
            if gab != 0.0 {
                g.set_component(&[s + a, s + b], ScalarField::constant(gab) * f2.clone());
            }
            let jab = spec.fiber.complex_structure[a * m + b];
            if jab != 0.0 {
                phi.set_component(&[s + a, s + b], ScalarField::constant(jab));
            }
        }
    }
    let (xi, eta) = coordinate_structure(dim, 0, s);
    let inv_f = ScalarField::constant(1.0 / spec.k) * (-ScalarField::coord_sum(0..s)).exp();
    let mut frame: Vec<NamedField> = spec
        .fiber
        .adapted_basis(n)?
        .into_iter()
        .enumerate()
        .map(|(a, e)| {
            let entries: Vec<_> =
                e.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, v)| (s + i, ScalarField::constant(*v) * inv_f.clone())).collect();
            NamedField { name: format!("E{}", a + 1), field: scaled_vector(dim, &entries) }
        })
        .collect();
    for (i, x) in xi.iter().enumerate() {
        frame.push(NamedField { name: format!("E{}", m + i + 1), field: x.clone() });
    }
    let model = ChartModel::new(format!("warped(n={n}, s={s}, k={})", spec.k), ModelKind::Warped, n, s, g, phi, xi, eta)?;
    Ok(model.with_warped(true).with_frame(frame))
}

/// Unwarped product: structure of [`build_example_2_2`] with the flat metric.
/// A normal metric f-structure that is not generalized Kenmotsu.
pub fn build_control(n: usize, s: usize) -> Result<ChartModel> {
    check_dims(n, s)?;
    let dim = 2 * n + s;
    let pairs: Vec<_> = (0..n).map(|i| (i, n + i)).collect();
    let (xi, eta) = coordinate_structure(dim, 2 * n, s);
    ChartModel::new(
        format!("control(n={n}, s={s})"),
        ModelKind::Control,
        n,
        s,
        diagonal_metric(vec![ScalarField::one(); dim]),
        pair_rotation(dim, &pairs),
        xi,
        eta,
    )
}

/// Maps a point of the `example22` chart `(x, y, z)` to the warped chart
/// `(t, u)` with `t = z`, `u_{2i−1} = x_i`, `u_{2i} = y_i`.
pub fn example_2_2_to_warped(n: usize, s: usize, point: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * n + s];
    out[..s].copy_from_slice(&point[2 * n..]);
    for i in 0..n {
        out[s + 2 * i] = point[i];
        out[s + 2 * i + 1] = point[n + i];
    }
    out
}

/// Index of the warped-chart coordinate matching `example22` coordinate `a`.
pub fn example_2_2_index_in_warped(n: usize, s: usize, a: usize) -> usize {
    if a >= 2 * n {
        a - 2 * n
    } else if a < n {
        s + 2 * a
    } else {
        s + 2 * (a - n) + 1
    }
}
