//! All structure tensors of a model evaluated at one point.

use crate::error::{Error, Result};
use crate::geometry::curvature::{derivation_action, CurvatureBundle};
use crate::geometry::forms::{wedge, JetForm};
use crate::geometry::frame::{normalize, orthogonalize};
use crate::geometry::LeviCivita;
use crate::model::ChartModel;
use crate::tensor::{permutation_sign, TensorAtPoint, Variance};

use Variance::{Lower, Upper};

/// Largest admissible `|η^i(X)|` for a vector treated as horizontal.
pub const HORIZONTAL_TOL: f64 = 1e-10;
/// Largest admissible `| |X|² − 1 |` for a vector treated as unit.
pub const UNIT_TOL: f64 = 1e-10;

/// `N¹ = [φ,φ] + 2Σ dη^i ⊗ ξ_i` as `N1^c_{ab}` and `N²_i` as `(N²_i)_{ab}`.
#[derive(Clone, Debug)]
pub struct NormalityTensors {
    pub nijenhuis: TensorAtPoint,
    pub n1: TensorAtPoint,
    pub n2: Vec<TensorAtPoint>,
}

/// Curvature quantities on top of a [`PointStructure`].
#[derive(Clone, Debug)]
pub struct CurvatureData {
    pub bundle: CurvatureBundle,
    pub nabla_riemann: TensorAtPoint,
    pub nabla_ricci: TensorAtPoint,
    pub projective: TensorAtPoint,
}

/// Structure tensors and their first covariant derivatives at a point.
#[derive(Clone, Debug)]
pub struct PointStructure {
    pub n: usize,
    pub s: usize,
    pub point: Vec<f64>,
    pub connection: LeviCivita,
    pub phi: TensorAtPoint,
    pub xi: Vec<Vec<f64>>,
    pub eta: Vec<Vec<f64>>,
    pub fundamental: TensorAtPoint,
    pub nabla_phi: TensorAtPoint,
    pub nabla_xi: Vec<TensorAtPoint>,
    pub nabla_eta: Vec<TensorAtPoint>,
    pub d_eta: Vec<TensorAtPoint>,
    pub d_fundamental: TensorAtPoint,
    pub normality: NormalityTensors,
    pub curvature: Option<CurvatureData>,
}

impl PointStructure {
    pub fn first_order(model: &ChartModel, point: &[f64]) -> Result<Self> {
        let connection = LeviCivita::at(model, point)?;
        let phi = model.phi().eval(point)?;
        let xi = model.xi().iter().map(|x| Ok(x.eval(point)?.components().to_vec())).collect::<Result<Vec<_>>>()?;
        let eta = model.eta().iter().map(|e| Ok(e.eval(point)?.components().to_vec())).collect::<Result<Vec<_>>>()?;
        let phi_field = model.fundamental_two_form_field();
        let fundamental_form = JetForm::from_field(&phi_field, point, 1)?;
        let fundamental = fundamental_form.value();
        let d_fundamental = fundamental_form.d()?.value();
        let nabla_phi = connection.covariant_derivative(model.phi())?;
        let nabla_xi = model.xi().iter().map(|x| connection.covariant_derivative(x)).collect::<Result<Vec<_>>>()?;
        let nabla_eta = model.eta().iter().map(|e| connection.covariant_derivative(e)).collect::<Result<Vec<_>>>()?;
        let d_eta = model.eta().iter().map(|e| JetForm::from_field(e, point, 1)?.d().map(|f| f.value())).collect::<Result<Vec<_>>>()?;
        let normality = normality_from_parts(model, point, &phi, &xi, &d_eta)?;
        Ok(Self {
            n: model.n(),
            s: model.s(),
            point: point.to_vec(),
            connection,
            phi,
            xi,
            eta,
            fundamental,
            nabla_phi,
            nabla_xi,
            nabla_eta,
            d_eta,
            d_fundamental,
            normality,
            curvature: None,
        })
    }

    pub fn with_curvature(model: &ChartModel, point: &[f64]) -> Result<Self> {
        let mut ps = Self::first_order(model, point)?;
        let bundle = CurvatureBundle::compute_with_derivatives(model, point)?;
        let projective = projective_from_bundle(&bundle, model.n(), model.s());
        let nabla_riemann = bundle.nabla_riemann.clone().expect("derivatives requested");
        let nabla_ricci = bundle.nabla_ricci.clone().expect("derivatives requested");
        ps.curvature = Some(CurvatureData { bundle, nabla_riemann, nabla_ricci, projective });
        Ok(ps)
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn curv(&self) -> &CurvatureData {
        self.curvature.as_ref().expect("curvature was not computed at this point")
    }

    pub fn metric(&self) -> &TensorAtPoint {
        self.connection.metric()
    }

    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        self.connection.inner(x, y)
    }

    pub fn apply_phi(&self, x: &[f64]) -> Vec<f64> {
        apply(&self.phi, x)
    }

    pub fn phi2(&self, x: &[f64]) -> Vec<f64> {
        self.apply_phi(&self.apply_phi(x))
    }

    pub fn eta_of(&self, i: usize, x: &[f64]) -> f64 {
        dot(&self.eta[i], x)
    }

    pub fn eta_sum(&self, x: &[f64]) -> f64 {
        (0..self.s).map(|i| self.eta_of(i, x)).sum()
    }

    pub fn xi_sum(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for x in &self.xi {
            axpy(&mut out, 1.0, x);
        }
        out
    }

    /// `(∇_X φ)Y`.
    pub fn nabla_phi_along(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|a| {
                let mut acc = 0.0;
                for b in 0..d {
                    for e in 0..d {
                        acc += self.nabla_phi.get(&[a, b, e]) * y[b] * x[e];
                    }
                }
                acc
            })
            .collect()
    }

    /// `∇_X ξ_i`.
    pub fn nabla_xi_along(&self, i: usize, x: &[f64]) -> Vec<f64> {
        apply(&self.nabla_xi[i], x)
    }

    /// `(∇_X η^i)Y`.
    pub fn nabla_eta_along(&self, i: usize, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.nabla_eta[i], y, x)
    }

    pub fn fundamental_form(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.fundamental, x, y)
    }

    pub fn d_fundamental_on(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        trilinear(&self.d_fundamental, x, y, z)
    }

    pub fn d_eta_on(&self, i: usize, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.d_eta[i], x, y)
    }

    /// `N¹(X,Y)` as a vector.
    pub fn n1(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        vector_valued(&self.normality.n1, x, y)
    }

    pub fn n2(&self, i: usize, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.normality.n2[i], x, y)
    }

    /// `R(X,Y)Z`.
    pub fn r(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        self.curv().bundle.apply(x, y, z)
    }

    /// `S(X,Y)`.
    pub fn ricci(&self, x: &[f64], y: &[f64]) -> f64 {
        self.curv().bundle.ricci_form(x, y)
    }

    /// `(∇_Z R)(X,Y)W`.
    pub fn nabla_r(&self, z: &[f64], x: &[f64], y: &[f64], w: &[f64]) -> Vec<f64> {
        let nr = &self.curv().nabla_riemann;
        let d = self.dim();
        (0..d)
            .map(|a| {
                let mut acc = 0.0;
                for b in 0..d {
                    if w[b] == 0.0 {
                        continue;
                    }
                    for c in 0..d {
                        if x[c] == 0.0 {
                            continue;
                        }
                        for e in 0..d {
                            if y[e] == 0.0 {
                                continue;
                            }
                            for f in 0..d {
                                acc += nr.get(&[a, b, c, e, f]) * w[b] * x[c] * y[e] * z[f];
                            }
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `(∇_X S)(Y,Z)`.
    pub fn nabla_s(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        trilinear(&self.curv().nabla_ricci, y, z, x)
    }

    /// `P(X,Y)Z`.
    pub fn p(&self, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let proj = &self.curv().projective;
        let d = self.dim();
        (0..d)
            .map(|a| {
                let mut acc = 0.0;
                for b in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            acc += proj.get(&[a, b, c, e]) * z[b] * x[c] * y[e];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal part `X − Σ η^i(X) ξ_i`.
    pub fn horizontal(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        for i in 0..self.s {
            axpy(&mut out, -self.eta_of(i, x), &self.xi[i]);
        }
        out
    }

    /// Unit horizontal vector built from `x`, if `x` has a horizontal part.
    pub fn unit_horizontal(&self, x: &[f64]) -> Option<Vec<f64>> {
        let h = self.horizontal(x);
        let basis: Vec<Vec<f64>> = self.orthonormal_xi();
        normalize(self.metric(), &orthogonalize(self.metric(), &basis, &h))
    }

    fn orthonormal_xi(&self) -> Vec<Vec<f64>> {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for x in &self.xi {
            if let Some(u) = normalize(self.metric(), &orthogonalize(self.metric(), &basis, x)) {
                basis.push(u);
            }
        }
        basis
    }

    /// φ-sectional curvature `K(X, φX)` for a unit horizontal `X`.
    pub fn phi_sectional(&self, x: &[f64]) -> Result<f64> {
        let leakage = (0..self.s).map(|i| self.eta_of(i, x).abs()).fold(0.0, f64::max);
        if leakage > HORIZONTAL_TOL {
            return Err(Error::NotHorizontal { leakage });
        }
        let norm_sq = self.g(x, x);
        if (norm_sq - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm_sq });
        }
        self.curv().bundle.sectional(x, &self.apply_phi(x))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `T^a_b X^b` for a rank-2 tensor.
pub(crate) fn apply(t: &TensorAtPoint, x: &[f64]) -> Vec<f64> {
    let d = t.dim();
    (0..d).map(|a| (0..d).map(|b| t.get(&[a, b]) * x[b]).sum()).collect()
}

pub(crate) fn bilinear(t: &TensorAtPoint, x: &[f64], y: &[f64]) -> f64 {
    let d = t.dim();
    let mut acc = 0.0;
    for a in 0..d {
        for b in 0..d {
            acc += t.get(&[a, b]) * x[a] * y[b];
        }
    }
    acc
}

pub(crate) fn trilinear(t: &TensorAtPoint, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let d = t.dim();
    let mut acc = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                acc += t.get(&[a, b, c]) * x[a] * y[b] * z[c];
            }
        }
    }
    acc
}

/// `T^c_{ab} X^a Y^b`.
pub(crate) fn vector_valued(t: &TensorAtPoint, x: &[f64], y: &[f64]) -> Vec<f64> {
    let d = t.dim();
    (0..d)
        .map(|c| {
            let mut acc = 0.0;
            for a in 0..d {
                for b in 0..d {
                    acc += t.get(&[c, a, b]) * x[a] * y[b];
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn normality_from_parts(
    model: &ChartModel,
    point: &[f64],
    phi: &TensorAtPoint,
    xi: &[Vec<f64>],
    d_eta: &[TensorAtPoint],
) -> Result<NormalityTensors> {
    let d = model.dim();
    let phi_jets = model.phi().eval_jets(point, 1)?;
    let ph = |a: usize, b: usize| phi.get(&[a, b]);
    let dph = |a: usize, b: usize, e: usize| phi_jets[a * d + b].grad(e);
    // [φ,φ](∂_a,∂_b)^c = φ^e_a ∂_eφ^c_b − φ^e_b ∂_eφ^c_a − φ^c_e(∂_aφ^e_b − ∂_bφ^e_a)
    let nijenhuis = TensorAtPoint::from_fn(d, vec![Upper, Lower, Lower], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        let mut acc = 0.0;
        for e in 0..d {
            acc += ph(e, a) * dph(c, b, e) - ph(e, b) * dph(c, a, e) - ph(c, e) * (dph(e, b, a) - dph(e, a, b));
        }
        acc
    });
    let n1 = TensorAtPoint::from_fn(d, vec![Upper, Lower, Lower], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        nijenhuis.get(i) + 2.0 * (0..xi.len()).map(|k| d_eta[k].get(&[a, b]) * xi[k][c]).sum::<f64>()
    });
    // N²_i(X,Y) = 2dη^i(φX,Y) − 2dη^i(φY,X)
    let n2 = d_eta
        .iter()
        .map(|de| {
            TensorAtPoint::from_fn(d, vec![Lower, Lower], |i| {
                let (a, b) = (i[0], i[1]);
                (0..d).map(|c| 2.0 * de.get(&[c, b]) * ph(c, a) - 2.0 * de.get(&[c, a]) * ph(c, b)).sum()
            })
        })
        .collect();
    Ok(NormalityTensors { nijenhuis, n1, n2 })
}

/// `P(X,Y)Z = R(X,Y)Z − (2n+s−1)^{-1}{S(Y,Z)X − S(X,Z)Y}` as `P^a_{bcd}`
/// with the same slot layout as `R`.
pub(crate) fn projective_from_bundle(b: &CurvatureBundle, n: usize, s: usize) -> TensorAtPoint {
    let d = b.dim();
    let c = 1.0 / (2 * n + s - 1) as f64;
    TensorAtPoint::from_fn(d, vec![Upper, Lower, Lower, Lower], |i| {
        let (a, bb, x, y) = (i[0], i[1], i[2], i[3]);
        let delta = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
        b.riemann.get(i) - c * (b.ricci.get(&[y, bb]) * delta(a, x) - b.ricci.get(&[x, bb]) * delta(a, y))
    })
}

/// `Φ_ab = g(∂_a, φ∂_b)` at a point.
pub fn fundamental_two_form(model: &ChartModel, point: &[f64]) -> Result<TensorAtPoint> {
    let g = model.metric_at(point)?;
    let phi = model.phi().eval(point)?;
    g.tensor_product(&phi)?.contract(1, 2, None)
}

/// `|η¹∧…∧η^s∧Φⁿ|` evaluated on the coordinate frame. The wedge is
/// `Alt` of the tensor product, so the value is
/// `(1/d!) Σ_σ sign(σ) Π factors`, summed by a bitmask recursion over the
/// coordinates already used.
pub fn volume_condition(model: &ChartModel, point: &[f64]) -> Result<f64> {
    let phi_form = fundamental_two_form(model, point)?;
    let etas = model.eta().iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>()?;
    Ok(top_form(&etas, &phi_form, model.n()).abs())
}

pub(crate) fn top_form(etas: &[TensorAtPoint], phi_form: &TensorAtPoint, n: usize) -> f64 {
    let d = phi_form.dim();
    let full = (1usize << d) - 1;
    let mut dp = vec![0.0; 1 << d];
    dp[0] = 1.0;
    // Inversions added by placing coordinate c after the coordinates in mask.
    let inv = |mask: usize, c: usize| (mask >> (c + 1)).count_ones();
    let sign = |k: u32| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    for eta in etas {
        let mut next = vec![0.0; 1 << d];
        for mask in 0..=full {
            if dp[mask] == 0.0 {
                continue;
            }
            for c in 0..d {
                if mask & (1 << c) == 0 {
                    let w = eta.get(&[c]);
                    if w != 0.0 {
                        next[mask | (1 << c)] += dp[mask] * sign(inv(mask, c)) * w;
                    }
                }
            }
        }
        dp = next;
    }
    for _ in 0..n {
        let mut next = vec![0.0; 1 << d];
        for mask in 0..=full {
            if dp[mask] == 0.0 {
                continue;
            }
            for c1 in 0..d {
                if mask & (1 << c1) != 0 {
                    continue;
                }
                let m1 = mask | (1 << c1);
                let s1 = sign(inv(mask, c1));
                for c2 in 0..d {
                    if m1 & (1 << c2) != 0 {
                        continue;
                    }
                    let w = phi_form.get(&[c1, c2]);
                    if w != 0.0 {
                        next[m1 | (1 << c2)] += dp[mask] * s1 * sign(inv(m1, c2)) * w;
                    }
                }
            }
        }
        dp = next;
    }
    let factorial: f64 = (1..=d).map(|k| k as f64).product();
    dp[full] / factorial
}

/// Brute-force version of [`top_form`] for cross-checking on small charts.
#[cfg(test)]
pub(crate) fn top_form_brute(etas: &[TensorAtPoint], phi_form: &TensorAtPoint, n: usize) -> f64 {
    use itertools::Itertools;
    let d = phi_form.dim();
    let mut total = 0.0;
    for p in (0..d).permutations(d) {
        let mut v = permutation_sign(&p);
        for (i, e) in etas.iter().enumerate() {
            v *= e.get(&[p[i]]);
        }
        let s = etas.len();
        for k in 0..n {
            v *= phi_form.get(&[p[s + 2 * k], p[s + 2 * k + 1]]);
        }
        total += v;
    }
    let factorial: f64 = (1..=d).map(|k| k as f64).product();
    total / factorial
}

/// `N¹` and `N²` of the model at a point.
pub fn normality_tensors(model: &ChartModel, point: &[f64]) -> Result<NormalityTensors> {
    Ok(PointStructure::first_order(model, point)?.normality)
}

/// `(∇_Xφ)Y − Σ_i{g(φX,Y)ξ_i − η^i(Y)φX}`.
pub fn kenmotsu_defect(model: &ChartModel, point: &[f64], x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    Ok(kenmotsu_defect_at(&PointStructure::first_order(model, point)?, x, y))
}

pub(crate) fn kenmotsu_defect_at(ps: &PointStructure, x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = ps.nabla_phi_along(x, y);
    let phx = ps.apply_phi(x);
    let gphxy = ps.g(&phx, y);
    for i in 0..ps.s {
        axpy(&mut out, -gphxy, &ps.xi[i]);
        axpy(&mut out, ps.eta_of(i, y), &phx);
    }
    out
}

/// Residual of the general `∇φ` formula on metric f-manifolds:
/// `2g((∇_Xφ)Y,Z) − [3dΦ(X,φY,φZ) − 3dΦ(X,Y,Z) + g(N¹(Y,Z),φX)
///   + Σ_i{N²_i(Y,Z)η^i(X) + 2dη^i(φY,X)η^i(Z) − 2dη^i(φZ,X)η^i(Y)}]`.
pub fn nabla_phi_formula_check(model: &ChartModel, point: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    Ok(nabla_phi_formula_at(&PointStructure::first_order(model, point)?, x, y, z))
}

pub(crate) fn nabla_phi_formula_at(ps: &PointStructure, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let (phx, phy, phz) = (ps.apply_phi(x), ps.apply_phi(y), ps.apply_phi(z));
    let lhs = 2.0 * ps.g(&ps.nabla_phi_along(x, y), z);
    let mut rhs = 3.0 * ps.d_fundamental_on(x, &phy, &phz) - 3.0 * ps.d_fundamental_on(x, y, z) + ps.g(&ps.n1(y, z), &phx);
    for i in 0..ps.s {
        rhs += ps.n2(i, y, z) * ps.eta_of(i, x) + 2.0 * ps.d_eta_on(i, &phy, x) * ps.eta_of(i, z)
            - 2.0 * ps.d_eta_on(i, &phz, x) * ps.eta_of(i, y);
    }
    lhs - rhs
}

/// `dΦ − 2Σ η^i∧Φ` at a point.
pub(crate) fn gak_defect(ps: &PointStructure) -> Result<TensorAtPoint> {
    let mut eta_sum = TensorAtPoint::zeros(ps.dim(), vec![Lower]);
    for e in &ps.eta {
        eta_sum = &eta_sum + &TensorAtPoint::covector(e.clone());
    }
    let expected = wedge(&eta_sum, &ps.fundamental)?.scale(2.0);
    Ok(&ps.d_fundamental - &expected)
}

/// φ-sectional curvature `K(X, φX)`; rejects non-horizontal or non-unit `X`.
pub fn phi_sectional(model: &ChartModel, point: &[f64], x: &[f64]) -> Result<f64> {
    let ps = PointStructure::first_order(model, point)?;
    let leakage = (0..ps.s).map(|i| ps.eta_of(i, x).abs()).fold(0.0, f64::max);
    if leakage > HORIZONTAL_TOL {
        return Err(Error::NotHorizontal { leakage });
    }
    let norm_sq = ps.g(x, x);
    if (norm_sq - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm_sq });
    }
    CurvatureBundle::compute(model, point)?.sectional(x, &ps.apply_phi(x))
}

/// Projective curvature tensor `P^a_{bcd}`.
pub fn projective_tensor(model: &ChartModel, point: &[f64]) -> Result<TensorAtPoint> {
    Ok(projective_from_bundle(&CurvatureBundle::compute(model, point)?, model.n(), model.s()))
}

/// Max-abs of `R(X,Y)·R`, `R(X,Y)·S`, `R(X,Y)·P` over a set of `(X, Y)` pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiSymmetryDefects {
    pub rr: f64,
    pub rs: f64,
    pub rp: f64,
}

pub(crate) fn semi_symmetry_at(ps: &PointStructure, pairs: &[(Vec<f64>, Vec<f64>)]) -> SemiSymmetryDefects {
    let c = ps.curv();
    let mut out = SemiSymmetryDefects { rr: 0.0, rs: 0.0, rp: 0.0 };
    for (x, y) in pairs {
        let a = c.bundle.endomorphism(x, y);
        out.rr = out.rr.max(derivation_action(&a, &c.bundle.riemann).max_abs());
        out.rs = out.rs.max(derivation_action(&a, &c.bundle.ricci).max_abs());
        out.rp = out.rp.max(derivation_action(&a, &c.projective).max_abs());
    }
    out
}

/// `(R(U,V)·T)(X,Y)Z` for a `(1,3)` tensor `T` laid out like `R`.
pub(crate) fn action_on_curvature_like(
    ps: &PointStructure,
    t: &TensorAtPoint,
    u: &[f64],
    v: &[f64],
    x: &[f64],
    y: &[f64],
    z: &[f64],
) -> Vec<f64> {
    let a = ps.curv().bundle.endomorphism(u, v);
    let acted = derivation_action(&a, t);
    let d = ps.dim();
    (0..d)
        .map(|i| {
            let mut acc = 0.0;
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        acc += acted.get(&[i, b, c, e]) * z[b] * x[c] * y[e];
                    }
                }
            }
            acc
        })
        .collect()
}

/// Defects over `pairs` of random `(X, Y)` plus the structure pairs
/// `(X, ξ_i)` for every `X` drawn.
pub fn semi_symmetry_defects(model: &ChartModel, point: &[f64], pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<SemiSymmetryDefects> {
    let ps = PointStructure::with_curvature(model, point)?;
    let mut all = pairs.to_vec();
    for (x, _) in pairs {
        for xi in &ps.xi {
            all.push((x.clone(), xi.clone()));
        }
    }
    Ok(semi_symmetry_at(&ps, &all))
}

/// Readouts of the η-parallel condition: the definition form
/// `(∇_XS)(φY,φZ)` and the residual of the closed form
/// `(∇_XS)(Y,Z) + 2nΣ_i{g(X,Y)η^i(Z) + g(X,Z)η^i(Y)} + Σ_i{η^i(Y)S(X,Z) + η^i(Z)S(X,Y)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaParallel {
    pub definition: f64,
    pub closed_form: f64,
}

pub(crate) fn eta_parallel_at(ps: &PointStructure, x: &[f64], y: &[f64], z: &[f64]) -> EtaParallel {
    let definition = ps.nabla_s(x, &ps.apply_phi(y), &ps.apply_phi(z));
    let n2 = 2.0 * ps.n as f64;
    let (ey, ez) = (ps.eta_sum(y), ps.eta_sum(z));
    let rhs = -n2 * (ps.g(x, y) * ez + ps.g(x, z) * ey) - (ey * ps.ricci(x, z) + ez * ps.ricci(x, y));
    EtaParallel { definition, closed_form: ps.nabla_s(x, y, z) - rhs }
}

pub fn eta_parallel_defect(model: &ChartModel, point: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Result<EtaParallel> {
    Ok(eta_parallel_at(&PointStructure::with_curvature(model, point)?, x, y, z))
}

/// Adapted orthonormal frame `{E_1..E_n, φE_1..φE_n, ξ_1..ξ_s}`.
#[derive(Clone, Debug)]
pub struct FBasis {
    pub e: Vec<Vec<f64>>,
    pub phi_e: Vec<Vec<f64>>,
    pub xi: Vec<Vec<f64>>,
}

impl FBasis {
    pub fn vectors(&self) -> Vec<Vec<f64>> {
        self.e.iter().chain(&self.phi_e).chain(&self.xi).cloned().collect()
    }
}

pub fn f_basis(model: &ChartModel, point: &[f64]) -> Result<FBasis> {
    f_basis_at(&PointStructure::first_order(model, point)?)
}

pub(crate) fn f_basis_at(ps: &PointStructure) -> Result<FBasis> {
    let d = ps.dim();
    let g = ps.metric();
    let mut taken: Vec<Vec<f64>> = ps.xi.clone();
    let (mut e, mut phi_e) = (Vec::new(), Vec::new());
    for c in 0..d {
        if e.len() == ps.n {
            break;
        }
        let mut v = vec![0.0; d];
        v[c] = 1.0;
        // Project onto the φ-invariant distribution, then away from earlier vectors.
        let h = ps.horizontal(&v);
        let mut w = h;
        for _ in 0..2 {
            for t in &taken {
                let nt = ps.g(t, t);
                let coef = ps.g(&w, t) / nt;
                axpy(&mut w, -coef, t);
            }
        }
        if let Some(u) = normalize(g, &w) {
            let pu = ps.apply_phi(&u);
            taken.push(u.clone());
            taken.push(pu.clone());
            e.push(u);
            phi_e.push(pu);
        }
    }
    if e.len() < ps.n {
        return Err(Error::FrameExhausted { found: e.len(), needed: ps.n });
    }
    Ok(FBasis { e, phi_e, xi: ps.xi.clone() })
}

/// Sign of a permutation, re-exported for the brute-force cross-check.
#[allow(dead_code)]
pub(crate) fn perm_sign(p: &[usize]) -> f64 {
    permutation_sign(p)
}
