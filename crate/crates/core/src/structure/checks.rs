//! The registry of named identity checks.
//!
//! Each check measures a non-negative residual at one point. Residuals are
//! max-abs over either all tensor components or a seeded batch of random
//! argument tuples, and are merged across points by max (or min for the
//! lower-bound volume check).

use crate::error::Result;
use crate::geometry::curvature::derivation_action;
use crate::geometry::forms::JetForm;
use crate::geometry::frame::{gram_matrix, gram_schmidt};
use crate::geometry::lie::{lie_bracket, lie_derivative};
use crate::model::{ChartModel, ModelKind};
use crate::oracle::{fd_christoffel, FD_STEP};
use crate::rng::Sampler;
use crate::tensor::TensorAtPoint;

use super::point::{
    action_on_curvature_like, axpy, eta_parallel_at, f_basis_at, gak_defect, kenmotsu_defect_at, max_abs, nabla_phi_formula_at, top_form,
    PointStructure,
};

/// Random argument tuples drawn per point for each sampled check.
pub const TUPLES: usize = 20;

pub const ALGEBRAIC: f64 = 1e-10;
pub const FIRST_ORDER: f64 = 1e-9;
pub const CURVATURE: f64 = 1e-8;
pub const ORACLE: f64 = 1e-6;
/// Smallest admissible `|η¹∧…∧η^s∧Φⁿ|`.
pub const VOLUME_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Assert,
    Diagnostic,
}

/// Whether the residual must stay below (`Upper`) or above (`Lower`) the
/// tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Axioms,
    Volume,
    Normality,
    Gak,
    Kenmotsu,
    NablaPhi,
    Suite,
    PhiSectional,
    Projective,
    SemiSymmetry,
    EtaParallel,
    Invariants,
    Oracle,
    Frame,
}

/// Outcome of one named identity, for one point or merged over many.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub id: String,
    pub status: CheckStatus,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub bound: Bound,
    pub samples: usize,
    pub notes: String,
    /// First evaluation error, with the index of the point that raised it.
    pub error: Option<(usize, String)>,
}

impl IdentityCheck {
    /// `Some(pass)` for asserts, `None` for diagnostics.
    pub fn passed(&self) -> Option<bool> {
        match self.status {
            CheckStatus::Diagnostic => None,
            CheckStatus::Assert => {
                let tol = self.tolerance.unwrap_or(0.0);
                let within = match self.bound {
                    Bound::Upper => self.residual <= tol,
                    Bound::Lower => self.residual > tol,
                };
                Some(self.error.is_none() && within)
            }
        }
    }

    /// Combines results for the same id from disjoint point sets.
    pub fn merge(&mut self, other: &IdentityCheck) {
        debug_assert_eq!(self.id, other.id);
        self.residual = match self.bound {
            _ if self.residual.is_nan() || other.residual.is_nan() => f64::NAN,
            Bound::Upper => self.residual.max(other.residual),
            Bound::Lower => self.residual.min(other.residual),
        };
        self.samples += other.samples;
        self.error = match (self.error.take(), &other.error) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b.clone() } else { a }),
            (a, b) => a.or_else(|| b.clone()),
        };
    }

    /// Overrides the tolerance of an assert; diagnostics keep none.
    pub fn set_tolerance(&mut self, tol: f64) {
        if self.status == CheckStatus::Assert {
            self.tolerance = Some(tol);
        }
    }
}

/// Residual and number of samples contributed by one point.
#[derive(Clone, Copy, Debug)]
pub struct Measure {
    pub residual: f64,
    pub samples: usize,
}

impl Measure {
    fn component(residual: f64) -> Self {
        Self { residual, samples: 1 }
    }

    fn tuples(residual: f64) -> Self {
        Self { residual, samples: TUPLES }
    }
}

/// What a check sees at one point.
pub struct Ctx<'a> {
    pub model: &'a ChartModel,
    pub ps: &'a PointStructure,
}

type RunFn = fn(&Ctx<'_>, &mut Sampler) -> Result<Measure>;

#[derive(Clone, Copy)]
pub struct CheckSpec {
    pub id: &'static str,
    pub group: Group,
    pub tolerance: f64,
    pub bound: Bound,
    pub needs_curvature: bool,
    pub notes: &'static str,
    status: fn(&ChartModel) -> CheckStatus,
    applies: fn(&ChartModel) -> bool,
    run: RunFn,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec").field("id", &self.id).field("group", &self.group).finish()
    }
}

impl CheckSpec {
    pub fn status_for(&self, model: &ChartModel) -> CheckStatus {
        (self.status)(model)
    }

    pub fn applies_to(&self, model: &ChartModel) -> bool {
        (self.applies)(model)
    }

    pub fn run(&self, ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
        (self.run)(ctx, rng)
    }

    /// An empty record for this check on `model`.
    pub fn record(&self, model: &ChartModel) -> IdentityCheck {
        let status = self.status_for(model);
        IdentityCheck {
            id: self.id.to_string(),
            status,
            residual: match self.bound {
                Bound::Upper => 0.0,
                Bound::Lower => f64::INFINITY,
            },
            tolerance: (status == CheckStatus::Assert).then_some(self.tolerance),
            bound: self.bound,
            samples: 0,
            notes: self.notes.to_string(),
            error: None,
        }
    }
}

fn always(_: &ChartModel) -> CheckStatus {
    CheckStatus::Assert
}

fn diagnostic(_: &ChartModel) -> CheckStatus {
    CheckStatus::Diagnostic
}

fn assert_if_s1(m: &ChartModel) -> CheckStatus {
    if m.s() == 1 {
        CheckStatus::Assert
    } else {
        CheckStatus::Diagnostic
    }
}

fn assert_if_warped(m: &ChartModel) -> CheckStatus {
    if m.is_warped() {
        CheckStatus::Assert
    } else {
        CheckStatus::Diagnostic
    }
}

fn everywhere(_: &ChartModel) -> bool {
    true
}

fn example22_only(m: &ChartModel) -> bool {
    m.kind() == ModelKind::Example22
}

const fn spec(
    id: &'static str,
    group: Group,
    tolerance: f64,
    status: fn(&ChartModel) -> CheckStatus,
    needs_curvature: bool,
    notes: &'static str,
    run: RunFn,
) -> CheckSpec {
    CheckSpec { id, group, tolerance, bound: Bound::Upper, needs_curvature, notes, status, applies: everywhere, run }
}

/// Every registered check, sorted by id.
pub fn registry() -> Vec<CheckSpec> {
    use Group::*;
    let mut v = vec![
        // algebraic structure
        spec("axiom_phi_squared", Axioms, ALGEBRAIC, always, false, "φ² = −I + Σ η^i⊗ξ_i", run_axiom_phi_squared),
        spec("axiom_eta_xi", Axioms, ALGEBRAIC, always, false, "η^i(ξ_j) = δ_ij", run_axiom_eta_xi),
        spec("axiom_metric_compat", Axioms, ALGEBRAIC, always, false, "g(φX,φY) = g(X,Y) − Σ η^i(X)η^i(Y)", run_axiom_metric_compat),
        spec("axiom_eta_metric", Axioms, ALGEBRAIC, always, false, "η^i(X) = g(X,ξ_i)", run_axiom_eta_metric),
        spec("axiom_phi_skew", Axioms, ALGEBRAIC, always, false, "g(X,φY) = −g(φX,Y)", run_axiom_phi_skew),
        spec("axiom_phi_xi", Axioms, ALGEBRAIC, always, false, "φξ_i = 0", run_axiom_phi_xi),
        spec("axiom_eta_phi", Axioms, ALGEBRAIC, always, false, "η^i∘φ = 0", run_axiom_eta_phi),
        CheckSpec {
            bound: Bound::Lower,
            ..spec("volume", Volume, VOLUME_FLOOR, always, false, "min |η¹∧…∧η^s∧Φⁿ| on the coordinate frame", run_volume)
        },
        spec("normality_n1", Normality, FIRST_ORDER, always, false, "N¹ = [φ,φ] + 2Σ dη^i⊗ξ_i = 0", run_normality_n1),
        spec("normality_n2", Normality, FIRST_ORDER, always, false, "N²_i(X,Y) = 2dη^i(φX,Y) − 2dη^i(φY,X) = 0", run_normality_n2),
        spec("gak_d_eta", Gak, FIRST_ORDER, always, false, "dη^i = 0", run_gak_d_eta),
        spec("gak_d_phi", Gak, FIRST_ORDER, always, false, "dΦ = 2Σ η^i∧Φ", run_gak_d_phi),
        spec("eq9", Kenmotsu, FIRST_ORDER, always, false, "(∇_Xφ)Y = Σ_i{g(φX,Y)ξ_i − η^i(Y)φX}", run_eq9),
        spec(
            "eq1",
            NablaPhi,
            CURVATURE,
            always,
            false,
            "2g((∇_Xφ)Y,Z) = 3dΦ(X,φY,φZ) − 3dΦ(X,Y,Z) + g(N¹(Y,Z),φX) + Σ_i{N²_i(Y,Z)η^i(X) + 2dη^i(φY,X)η^i(Z) − 2dη^i(φZ,X)η^i(Y)}",
            run_eq1,
        ),
        // first-order identities
        spec("eq10", Suite, FIRST_ORDER, always, false, "∇_Xξ_j = −φ²X", run_eq10),
        spec("lem21", Suite, FIRST_ORDER, always, false, "∇_{ξ_j}φ = 0, ∇_{ξ_j}ξ_i = 0, L_{ξ_i}φ = 0, L_{ξ_i}η^j = 0", run_lem21),
        spec("eq11", Suite, FIRST_ORDER, always, false, "(L_{ξ_i}g)(X,Y) = 2{g(X,Y) − Σ_j η^j(X)η^j(Y)}", run_eq11),
        spec("eq12", Suite, FIRST_ORDER, always, false, "(∇_Xη^i)Y = g(X,Y) − Σ_j η^j(X)η^j(Y)", run_eq12),
        // curvature identities
        spec("eq13", Suite, CURVATURE, always, true, "R(X,Y)ξ_i = Σ_j{η^j(Y)φ²X − η^j(X)φ²Y}", run_eq13),
        spec("eq14", Suite, CURVATURE, always, true, "R(X,ξ_i)Y = Σ_j{η^j(Y)φ²X − g(X,φ²Y)ξ_j}", run_eq14),
        spec("eq15", Suite, CURVATURE, always, true, "R(X,ξ_j)ξ_i = φ²X and R(ξ_k,ξ_j)ξ_i = 0", run_eq15),
        spec("eq16", Suite, CURVATURE, always, true, "S(X,ξ_i) = −2n Σ_j η^j(X)", run_eq16),
        spec("eq17", Suite, CURVATURE, always, true, "|S(ξ_k,ξ_i) + 2n| over all pairs (k,i)", run_eq17),
        spec("eq18corrected", Suite, CURVATURE, always, true, "S(φX,φY) = S(X,Y) + 2n Σ_{i,j} η^i(X)η^j(Y)", run_eq18_corrected),
        spec("eq18printed", Suite, CURVATURE, diagnostic, true, "S(φX,φY) = S(X,Y) + 2n Σ_i η^i(X)η^i(Y) (single sum)", run_eq18_printed),
        spec("eq19", Suite, CURVATURE, assert_if_warped, true, "S(X,Y) = −2n{s g(φX,φY) + Σ_{i,j} η^i(X)η^j(Y)}", run_eq19),
        spec(
            "thm32",
            Suite,
            CURVATURE,
            assert_if_s1,
            true,
            "(∇_ZR)(X,Y)ξ_i = s g(Z,X)Y − s g(Z,Y)X − R(X,Y)Z + sΣ_h η^h(Z){η^h(Y)X − η^h(X)Y} + Σ_l η^l(Z)R(X,Y)ξ_l",
            run_thm32,
        ),
        spec("thm33a", Suite, CURVATURE, assert_if_s1, true, "R(X,Y)φZ − φR(X,Y)Z = g(Y,Z)φX − g(X,Z)φY − g(Y,φZ)X + g(X,φZ)Y", run_thm33a),
        spec("thm33b", Suite, CURVATURE, assert_if_s1, true, "R(φX,φY)Z = R(X,Y)Z + g(Y,Z)X − g(X,Z)Y + g(Y,φZ)φX − g(X,φZ)φY", run_thm33b),
        spec(
            "thm43",
            Suite,
            CURVATURE,
            diagnostic,
            true,
            "(∇_{φX}S)(φY,φZ) = (∇_{φX}S)(Y,Z) − Σ_i η^i(Y){S(X,φZ) + 2n g(X,φZ)} − Σ_i η^i(Z){S(X,φY) + 2n g(X,φY)}",
            run_thm43,
        ),
        spec(
            "cor42",
            Suite,
            CURVATURE,
            diagnostic,
            true,
            "(∇_XS)(φY,φZ) = (∇_XS)(Y,Z) + 2nΣ_i{g(X,Y)η^i(Z) + g(X,Z)η^i(Y)} + Σ_i{η^i(Y)S(X,Z) + η^i(Z)S(X,Y)}",
            run_cor42,
        ),
        // model-level consequences
        spec("thm23", Suite, FIRST_ORDER, always, false, "[ξ_i,ξ_j] = 0, ∇_{ξ_i}ξ_j = 0, dη^i = 0", run_thm23),
        spec("kahler_fiber", Suite, CURVATURE, assert_if_warped, false, "horizontal part of (∇_Xφ)Y for horizontal X, Y", run_kahler_fiber),
        spec("phi_sectional", PhiSectional, CURVATURE, assert_if_warped, true, "K(X,φX) = −s for unit horizontal X", run_phi_sectional),
        spec("locally_symmetric", Suite, CURVATURE, assert_if_s1, true, "∇R = 0", run_locally_symmetric),
        spec("einstein", Suite, CURVATURE, assert_if_s1, true, "S = −2n g", run_einstein),
        spec("projective", Projective, CURVATURE, assert_if_s1, true, "P = R − (2n+s−1)^{-1}{S(Y,Z)X − S(X,Z)Y} = 0", run_projective),
        spec("semi_rr", SemiSymmetry, CURVATURE, assert_if_s1, true, "R(X,Y)·R = 0", run_semi_rr),
        spec("semi_rs", SemiSymmetry, CURVATURE, assert_if_s1, true, "R(X,Y)·S = 0", run_semi_rs),
        spec("semi_rp", SemiSymmetry, CURVATURE, assert_if_s1, true, "R(X,Y)·P = 0", run_semi_rp),
        spec(
            "semi_rp_rr_special",
            SemiSymmetry,
            CURVATURE,
            always,
            true,
            "g(((R(X,ξ_i)·P)(X,φX))φX, ξ_j) = g(((R(X,ξ_i)·R)(X,φX))φX, ξ_j)",
            run_semi_rp_rr_special,
        ),
        spec("eta_parallel", EtaParallel, CURVATURE, assert_if_s1, true, "(∇_XS)(φY,φZ) = 0", run_eta_parallel),
        spec(
            "eta_parallel_closed_form",
            EtaParallel,
            CURVATURE,
            assert_if_s1,
            true,
            "(∇_XS)(Y,Z) = −2nΣ_i{g(X,Y)η^i(Z) + g(X,Z)η^i(Y)} − Σ_i{η^i(Y)S(X,Z) + η^i(Z)S(X,Y)}",
            run_eta_parallel_closed_form,
        ),
        // chart-level invariants
        spec("metricity", Invariants, ALGEBRAIC, always, false, "∇g = 0", run_metricity),
        spec("christoffel_symmetry", Invariants, ALGEBRAIC, always, false, "Γ^a_bc = Γ^a_cb", run_christoffel_symmetry),
        spec(
            "curvature_symmetries",
            Invariants,
            FIRST_ORDER,
            always,
            true,
            "R_abcd skew in (a,b) and (c,d), pair symmetric, first Bianchi",
            run_curvature_symmetries,
        ),
        spec("bianchi_second", Invariants, CURVATURE, always, true, "∇_eR^a_bcd + ∇_cR^a_bde + ∇_dR^a_bec = 0", run_bianchi_second),
        spec("r_dot_g", Invariants, ALGEBRAIC, always, true, "R(X,Y)·g = 0", run_r_dot_g),
        spec(
            "ricci_frame",
            Invariants,
            FIRST_ORDER,
            always,
            true,
            "S(X,Y) = Σ_k g(R(E_k,X)Y,E_k) on a ξ-seeded orthonormal frame",
            run_ricci_frame,
        ),
        spec("dd_zero", Invariants, ALGEBRAIC, always, false, "d(dη^i) = 0 and d(dω) = 0 for ω = Σ x_a dx_b", run_dd_zero),
        spec("f_basis", Invariants, ALGEBRAIC, always, false, "{E_k, φE_k, ξ_i} is g-orthonormal", run_f_basis),
        spec(
            "oracle_christoffel",
            Oracle,
            ORACLE,
            always,
            false,
            "jet Christoffels against central differences of the metric",
            run_oracle_christoffel,
        ),
        CheckSpec {
            applies: example22_only,
            ..spec(
                "koszul_frame",
                Frame,
                FIRST_ORDER,
                always,
                false,
                "∇_{X_i}X_i = −Σξ, ∇_{X_i}ξ = X_i, ∇_{X_i}X_j = 0 (i≠j), ∇_{X_i}Y_j = 0",
                run_koszul_frame,
            )
        },
        CheckSpec {
            applies: example22_only,
            ..spec("koszul_frame_printed", Frame, FIRST_ORDER, diagnostic, false, "∇_{X_i}X_i = +Σξ as printed", run_koszul_frame_printed)
        },
        CheckSpec {
            applies: example22_only,
            ..spec("frame_brackets", Frame, FIRST_ORDER, always, false, "[X_i,ξ_α] = X_i, [Y_i,ξ_α] = Y_i", run_frame_brackets)
        },
    ];
    v.sort_by_key(|c| c.id);
    v
}

/// Looks up a registered check.
pub fn find(id: &str) -> Option<CheckSpec> {
    registry().into_iter().find(|c| c.id == id)
}

// ---- helpers ---------------------------------------------------------------

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scaled(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| x * c).collect()
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn basis(d: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e
}

fn arg(rng: &mut Sampler, d: usize) -> Vec<f64> {
    rng.vector(d, -1.0, 1.0)
}

/// Max over `TUPLES` draws of `f(X)`.
fn sample1(ctx: &Ctx<'_>, rng: &mut Sampler, mut f: impl FnMut(&[f64]) -> f64) -> Measure {
    let d = ctx.ps.dim();
    let mut r: f64 = 0.0;
    for _ in 0..TUPLES {
        let x = arg(rng, d);
        r = nan_max(r, f(&x));
    }
    Measure::tuples(r)
}

fn sample2(ctx: &Ctx<'_>, rng: &mut Sampler, mut f: impl FnMut(&[f64], &[f64]) -> f64) -> Measure {
    let d = ctx.ps.dim();
    let mut r: f64 = 0.0;
    for _ in 0..TUPLES {
        let (x, y) = (arg(rng, d), arg(rng, d));
        r = nan_max(r, f(&x, &y));
    }
    Measure::tuples(r)
}

fn sample3(ctx: &Ctx<'_>, rng: &mut Sampler, mut f: impl FnMut(&[f64], &[f64], &[f64]) -> f64) -> Measure {
    let d = ctx.ps.dim();
    let mut r: f64 = 0.0;
    for _ in 0..TUPLES {
        let (x, y, z) = (arg(rng, d), arg(rng, d), arg(rng, d));
        r = nan_max(r, f(&x, &y, &z));
    }
    Measure::tuples(r)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn for_pairs(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> f64 {
    let mut r: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            r = nan_max(r, f(a, b).abs());
        }
    }
    r
}

// ---- algebraic structure ---------------------------------------------------

fn run_axiom_phi_squared(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let d = ps.dim();
    Ok(Measure::component(for_pairs(d, |a, b| {
        let phi2: f64 = (0..d).map(|c| ps.phi.get(&[a, c]) * ps.phi.get(&[c, b])).sum();
        let proj: f64 = (0..ps.s).map(|i| ps.xi[i][a] * ps.eta[i][b]).sum();
        phi2 + delta(a, b) - proj
    })))
}

fn run_axiom_eta_xi(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(Measure::component(for_pairs(ps.s, |i, j| ps.eta_of(i, &ps.xi[j]) - delta(i, j))))
}

fn run_axiom_metric_compat(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let d = ps.dim();
    Ok(Measure::component(for_pairs(d, |a, b| {
        let (ea, eb) = (basis(d, a), basis(d, b));
        let etas: f64 = (0..ps.s).map(|i| ps.eta[i][a] * ps.eta[i][b]).sum();
        ps.g(&ps.apply_phi(&ea), &ps.apply_phi(&eb)) - ps.metric().get(&[a, b]) + etas
    })))
}

fn run_axiom_eta_metric(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let d = ps.dim();
    let mut r: f64 = 0.0;
    for i in 0..ps.s {
        for a in 0..d {
            r = nan_max(r, (ps.eta[i][a] - ps.g(&basis(d, a), &ps.xi[i])).abs());
        }
    }
    Ok(Measure::component(r))
}

fn run_axiom_phi_skew(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let d = ps.dim();
    Ok(Measure::component(for_pairs(d, |a, b| {
        let (ea, eb) = (basis(d, a), basis(d, b));
        ps.g(&ea, &ps.apply_phi(&eb)) + ps.g(&ps.apply_phi(&ea), &eb)
    })))
}

fn run_axiom_phi_xi(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(Measure::component(ps.xi.iter().map(|x| max_abs(&ps.apply_phi(x))).fold(0.0, nan_max)))
}

fn run_axiom_eta_phi(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let d = ps.dim();
    let mut r: f64 = 0.0;
    for i in 0..ps.s {
        for b in 0..d {
            r = nan_max(r, ps.eta_of(i, &ps.apply_phi(&basis(d, b))).abs());
        }
    }
    Ok(Measure::component(r))
}

fn run_volume(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let etas: Vec<TensorAtPoint> = ps.eta.iter().map(|e| TensorAtPoint::covector(e.clone())).collect();
    Ok(Measure::component(top_form(&etas, &ps.fundamental, ps.n).abs()))
}

fn run_normality_n1(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.normality.n1.max_abs()))
}

fn run_normality_n2(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.normality.n2.iter().map(|t| t.max_abs()).fold(0.0, nan_max)))
}

fn run_gak_d_eta(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.d_eta.iter().map(|t| t.max_abs()).fold(0.0, nan_max)))
}

fn run_gak_d_phi(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(gak_defect(ctx.ps)?.max_abs()))
}

fn run_eq9(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let mut m = sample2(ctx, rng, |x, y| max_abs(&kenmotsu_defect_at(ps, x, y)));
    // X = ξ_j reduces the defect to (∇_{ξ_j}φ)Y.
    for xi in &ps.xi {
        let y = arg(rng, ps.dim());
        m.residual = nan_max(m.residual, max_abs(&kenmotsu_defect_at(ps, xi, &y)));
        m.samples += 1;
    }
    Ok(m)
}

fn run_eq1(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    Ok(sample3(ctx, rng, |x, y, z| nabla_phi_formula_at(ctx.ps, x, y, z).abs()))
}

// ---- first-order identities ------------------------------------------------

fn run_eq10(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample1(ctx, rng, |x| {
        let phi2x = ps.phi2(x);
        (0..ps.s).map(|j| max_abs(&sub(&ps.nabla_xi_along(j, x), &scaled(&phi2x, -1.0)))).fold(0.0, nan_max)
    }))
}

fn run_lem21(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let d = ps.dim();
    let mut r: f64 = 0.0;
    for j in 0..ps.s {
        // ∇_{ξ_j}φ
        for a in 0..d {
            for b in 0..d {
                let v: f64 = (0..d).map(|e| ps.nabla_phi.get(&[a, b, e]) * ps.xi[j][e]).sum();
                r = nan_max(r, v.abs());
            }
        }
        for i in 0..ps.s {
            r = nan_max(r, max_abs(&ps.nabla_xi_along(i, &ps.xi[j])));
        }
        let xi_field = &model.xi()[j];
        r = nan_max(r, lie_derivative(&ps.point, xi_field, model.phi())?.max_abs());
        for eta in model.eta() {
            r = nan_max(r, lie_derivative(&ps.point, xi_field, eta)?.max_abs());
        }
    }
    Ok(Measure::component(r))
}

fn run_eq11(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let lies = model.xi().iter().map(|x| lie_derivative(&ps.point, x, model.metric())).collect::<Result<Vec<_>>>()?;
    Ok(sample2(ctx, rng, |x, y| {
        let expected = 2.0 * (ps.g(x, y) - (0..ps.s).map(|j| ps.eta_of(j, x) * ps.eta_of(j, y)).sum::<f64>());
        lies.iter().map(|l| (super::point::bilinear(l, x, y) - expected).abs()).fold(0.0, nan_max)
    }))
}

fn run_eq12(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample2(ctx, rng, |x, y| {
        let expected = ps.g(x, y) - (0..ps.s).map(|j| ps.eta_of(j, x) * ps.eta_of(j, y)).sum::<f64>();
        (0..ps.s).map(|i| (ps.nabla_eta_along(i, x, y) - expected).abs()).fold(0.0, nan_max)
    }))
}

// ---- curvature identities --------------------------------------------------

fn run_eq13(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample2(ctx, rng, |x, y| {
        let (p2x, p2y) = (ps.phi2(x), ps.phi2(y));
        let mut expected = vec![0.0; ps.dim()];
        for j in 0..ps.s {
            axpy(&mut expected, ps.eta_of(j, y), &p2x);
            axpy(&mut expected, -ps.eta_of(j, x), &p2y);
        }
        ps.xi.iter().map(|xi| max_abs(&sub(&ps.r(x, y, xi), &expected))).fold(0.0, nan_max)
    }))
}

fn run_eq14(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample2(ctx, rng, |x, y| {
        let p2x = ps.phi2(x);
        let gxp2y = ps.g(x, &ps.phi2(y));
        let mut expected = vec![0.0; ps.dim()];
        for j in 0..ps.s {
            axpy(&mut expected, ps.eta_of(j, y), &p2x);
            axpy(&mut expected, -gxp2y, &ps.xi[j]);
        }
        ps.xi.iter().map(|xi| max_abs(&sub(&ps.r(x, xi, y), &expected))).fold(0.0, nan_max)
    }))
}

fn run_eq15(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let mut m = sample1(ctx, rng, |x| {
        let p2x = ps.phi2(x);
        let mut r: f64 = 0.0;
        for xj in &ps.xi {
            for xi in &ps.xi {
                r = nan_max(r, max_abs(&sub(&ps.r(x, xj, xi), &p2x)));
            }
        }
        r
    });
    for xk in &ps.xi {
        for xj in &ps.xi {
            for xi in &ps.xi {
                m.residual = nan_max(m.residual, max_abs(&ps.r(xk, xj, xi)));
            }
        }
    }
    Ok(m)
}

fn run_eq16(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    Ok(sample1(ctx, rng, |x| {
        let expected = -two_n * ps.eta_sum(x);
        ps.xi.iter().map(|xi| (ps.ricci(x, xi) - expected).abs()).fold(0.0, nan_max)
    }))
}

fn run_eq17(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    Ok(Measure::component(for_pairs(ps.s, |k, i| ps.ricci(&ps.xi[k], &ps.xi[i]) + two_n)))
}

fn eq18(ps: &PointStructure, x: &[f64], y: &[f64], double_sum: bool) -> f64 {
    let two_n = 2.0 * ps.n as f64;
    let sum = if double_sum { ps.eta_sum(x) * ps.eta_sum(y) } else { (0..ps.s).map(|i| ps.eta_of(i, x) * ps.eta_of(i, y)).sum() };
    (ps.ricci(&ps.apply_phi(x), &ps.apply_phi(y)) - ps.ricci(x, y) - two_n * sum).abs()
}

fn run_eq18_corrected(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let mut m = sample2(ctx, rng, |x, y| eq18(ps, x, y, true));
    for a in &ps.xi {
        for b in &ps.xi {
            m.residual = nan_max(m.residual, eq18(ps, a, b, true));
        }
    }
    Ok(m)
}

fn run_eq18_printed(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let mut m = sample2(ctx, rng, |x, y| eq18(ps, x, y, false));
    for a in &ps.xi {
        for b in &ps.xi {
            m.residual = nan_max(m.residual, eq18(ps, a, b, false));
        }
    }
    Ok(m)
}

fn run_eq19(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    let s = ps.s as f64;
    Ok(sample2(ctx, rng, |x, y| {
        let expected = -two_n * (s * ps.g(&ps.apply_phi(x), &ps.apply_phi(y)) + ps.eta_sum(x) * ps.eta_sum(y));
        (ps.ricci(x, y) - expected).abs()
    }))
}

fn run_thm32(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let s = ps.s as f64;
    Ok(sample3(ctx, rng, |x, y, z| {
        let mut expected = scaled(y, s * ps.g(z, x));
        axpy(&mut expected, -s * ps.g(z, y), x);
        axpy(&mut expected, -1.0, &ps.r(x, y, z));
        for h in 0..ps.s {
            let ez = ps.eta_of(h, z);
            axpy(&mut expected, s * ez * ps.eta_of(h, y), x);
            axpy(&mut expected, -s * ez * ps.eta_of(h, x), y);
            axpy(&mut expected, ez, &ps.r(x, y, &ps.xi[h]));
        }
        ps.xi.iter().map(|xi| max_abs(&sub(&ps.nabla_r(z, x, y, xi), &expected))).fold(0.0, nan_max)
    }))
}

fn run_thm33a(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample3(ctx, rng, |x, y, z| {
        let phz = ps.apply_phi(z);
        let lhs = sub(&ps.r(x, y, &phz), &ps.apply_phi(&ps.r(x, y, z)));
        let mut expected = scaled(&ps.apply_phi(x), ps.g(y, z));
        axpy(&mut expected, -ps.g(x, z), &ps.apply_phi(y));
        axpy(&mut expected, -ps.g(y, &phz), x);
        axpy(&mut expected, ps.g(x, &phz), y);
        max_abs(&sub(&lhs, &expected))
    }))
}

fn run_thm33b(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample3(ctx, rng, |x, y, z| {
        let (phx, phy, phz) = (ps.apply_phi(x), ps.apply_phi(y), ps.apply_phi(z));
        let mut expected = ps.r(x, y, z);
        axpy(&mut expected, ps.g(y, z), x);
        axpy(&mut expected, -ps.g(x, z), y);
        axpy(&mut expected, ps.g(y, &phz), &phx);
        axpy(&mut expected, -ps.g(x, &phz), &phy);
        max_abs(&sub(&ps.r(&phx, &phy, z), &expected))
    }))
}

fn run_thm43(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    Ok(sample3(ctx, rng, |x, y, z| {
        let (phx, phy, phz) = (ps.apply_phi(x), ps.apply_phi(y), ps.apply_phi(z));
        let lhs = ps.nabla_s(&phx, &phy, &phz);
        let rhs = ps.nabla_s(&phx, y, z)
            - ps.eta_sum(y) * (ps.ricci(x, &phz) + two_n * ps.g(x, &phz))
            - ps.eta_sum(z) * (ps.ricci(x, &phy) + two_n * ps.g(x, &phy));
        (lhs - rhs).abs()
    }))
}

fn run_cor42(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    Ok(sample3(ctx, rng, |x, y, z| {
        let lhs = ps.nabla_s(x, &ps.apply_phi(y), &ps.apply_phi(z));
        let (ey, ez) = (ps.eta_sum(y), ps.eta_sum(z));
        let rhs = ps.nabla_s(x, y, z) + two_n * (ps.g(x, y) * ez + ps.g(x, z) * ey) + (ey * ps.ricci(x, z) + ez * ps.ricci(x, y));
        (lhs - rhs).abs()
    }))
}

// ---- model-level consequences ----------------------------------------------

fn run_thm23(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let mut r: f64 = 0.0;
    for i in 0..ps.s {
        for j in 0..ps.s {
            r = nan_max(r, lie_bracket(&ps.point, &model.xi()[i], &model.xi()[j])?.max_abs());
            r = nan_max(r, max_abs(&ps.nabla_xi_along(j, &ps.xi[i])));
        }
        r = nan_max(r, ps.d_eta[i].max_abs());
    }
    Ok(Measure::component(r))
}

fn run_kahler_fiber(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    Ok(sample2(ctx, rng, |x, y| {
        let (hx, hy) = (ps.horizontal(x), ps.horizontal(y));
        max_abs(&ps.horizontal(&ps.nabla_phi_along(&hx, &hy)))
    }))
}

fn run_phi_sectional(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let target = -(ps.s as f64);
    let mut r: f64 = 0.0;
    let mut samples = 0;
    while samples < TUPLES {
        let x = arg(rng, ps.dim());
        let Some(u) = ps.unit_horizontal(&x) else { continue };
        r = nan_max(r, (ps.phi_sectional(&u)? - target).abs());
        samples += 1;
    }
    Ok(Measure { residual: r, samples })
}

fn run_locally_symmetric(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.curv().nabla_riemann.max_abs()))
}

fn run_einstein(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let two_n = 2.0 * ps.n as f64;
    let c = ps.curv();
    Ok(Measure::component(for_pairs(ps.dim(), |a, b| c.bundle.ricci.get(&[a, b]) + two_n * ps.metric().get(&[a, b]))))
}

fn run_projective(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.curv().projective.max_abs()))
}

/// Half random pairs, half structure pairs `(X, ξ_i)`.
fn semi_pairs(ps: &PointStructure, rng: &mut Sampler) -> Vec<(Vec<f64>, Vec<f64>)> {
    let d = ps.dim();
    (0..TUPLES)
        .map(|k| {
            let x = arg(rng, d);
            let y = if k % 2 == 0 { arg(rng, d) } else { ps.xi[(k / 2) % ps.s].clone() };
            (x, y)
        })
        .collect()
}

fn run_semi_rr(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let pairs = semi_pairs(ps, rng);
    let c = ps.curv();
    let r = pairs.iter().map(|(x, y)| derivation_action(&c.bundle.endomorphism(x, y), &c.bundle.riemann).max_abs()).fold(0.0, nan_max);
    Ok(Measure::tuples(r))
}

fn run_semi_rs(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let pairs = semi_pairs(ps, rng);
    Ok(Measure::tuples(semi_symmetry_rs(ps, &pairs)))
}

fn semi_symmetry_rs(ps: &PointStructure, pairs: &[(Vec<f64>, Vec<f64>)]) -> f64 {
    let c = ps.curv();
    pairs.iter().map(|(x, y)| derivation_action(&c.bundle.endomorphism(x, y), &c.bundle.ricci).max_abs()).fold(0.0, nan_max)
}

fn run_semi_rp(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let pairs = semi_pairs(ps, rng);
    let c = ps.curv();
    let r = pairs.iter().map(|(x, y)| derivation_action(&c.bundle.endomorphism(x, y), &c.projective).max_abs()).fold(0.0, nan_max);
    Ok(Measure::tuples(r))
}

fn run_semi_rp_rr_special(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let c = ps.curv();
    let mut r: f64 = 0.0;
    let mut samples = 0;
    for k in 0..TUPLES {
        let x = arg(rng, ps.dim());
        let (i, j) = (k % ps.s, (k / ps.s) % ps.s);
        let phx = ps.apply_phi(&x);
        let with_p = action_on_curvature_like(ps, &c.projective, &x, &ps.xi[i], &x, &phx, &phx);
        let with_r = action_on_curvature_like(ps, &c.bundle.riemann, &x, &ps.xi[i], &x, &phx, &phx);
        r = nan_max(r, (ps.g(&with_p, &ps.xi[j]) - ps.g(&with_r, &ps.xi[j])).abs());
        samples += 1;
    }
    Ok(Measure { residual: r, samples })
}

fn run_eta_parallel(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    Ok(sample3(ctx, rng, |x, y, z| eta_parallel_at(ctx.ps, x, y, z).definition.abs()))
}

fn run_eta_parallel_closed_form(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    Ok(sample3(ctx, rng, |x, y, z| eta_parallel_at(ctx.ps, x, y, z).closed_form.abs()))
}

// ---- chart-level invariants ------------------------------------------------

fn run_metricity(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(ctx.ps.connection.covariant_derivative(ctx.model.metric())?.max_abs()))
}

fn run_christoffel_symmetry(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let gamma = ctx.ps.connection.christoffel();
    let d = gamma.dim();
    let mut r: f64 = 0.0;
    for a in 0..d {
        r = nan_max(r, for_pairs(d, |b, c| gamma.get(&[a, b, c]) - gamma.get(&[a, c, b])));
    }
    Ok(Measure::component(r))
}

fn run_curvature_symmetries(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let low = ctx.ps.curv().bundle.lowered_riemann();
    let d = low.dim();
    let mut r: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    let v = low.get(&[a, b, c, e]);
                    r = nan_max(r, (v + low.get(&[b, a, c, e])).abs());
                    r = nan_max(r, (v + low.get(&[a, b, e, c])).abs());
                    r = nan_max(r, (v - low.get(&[c, e, a, b])).abs());
                    r = nan_max(r, (v + low.get(&[a, c, e, b]) + low.get(&[a, e, b, c])).abs());
                }
            }
        }
    }
    Ok(Measure::component(r))
}

fn run_bianchi_second(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let nr = &ctx.ps.curv().nabla_riemann;
    let d = nr.dim();
    let mut r: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    for f in 0..d {
                        let v = nr.get(&[a, b, c, e, f]) + nr.get(&[a, b, e, f, c]) + nr.get(&[a, b, f, c, e]);
                        r = nan_max(r, v.abs());
                    }
                }
            }
        }
    }
    Ok(Measure::component(r))
}

fn run_r_dot_g(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let c = ps.curv();
    Ok(sample2(ctx, rng, |x, y| derivation_action(&c.bundle.endomorphism(x, y), ps.metric()).max_abs()))
}

fn run_ricci_frame(ctx: &Ctx<'_>, rng: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let frame = gram_schmidt(ps.metric(), &ps.xi)?;
    Ok(sample2(ctx, rng, |x, y| {
        let traced: f64 = frame.iter().map(|e| ps.g(&ps.r(e, x, y), e)).sum();
        (ps.ricci(x, y) - traced).abs()
    }))
}

fn run_dd_zero(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let d = ps.dim();
    let mut r: f64 = 0.0;
    for eta in model.eta() {
        let dd = JetForm::from_field(eta, &ps.point, 2)?.d()?.d()?;
        r = nan_max(r, dd.value().max_abs());
    }
    // A non-closed 1-form built from the metric components.
    let mut comps = Vec::with_capacity(d);
    for a in 0..d {
        comps.push(model.metric().component(&[a, a]).clone() * crate::field::ScalarField::coord((a + 1) % d));
    }
    let omega = crate::field::TensorField::covector(comps)?;
    let dd = JetForm::from_field(&omega, &ps.point, 2)?.d()?.d()?;
    r = nan_max(r, dd.value().max_abs());
    Ok(Measure::component(r))
}

fn run_f_basis(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let ps = ctx.ps;
    let fb = f_basis_at(ps)?;
    let vectors = fb.vectors();
    let gram = gram_matrix(ps.metric(), &vectors);
    let mut r: f64 = 0.0;
    for (i, row) in gram.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            r = nan_max(r, (v - delta(i, j)).abs());
        }
    }
    Ok(Measure::component(r))
}

fn run_oracle_christoffel(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let fd = fd_christoffel(ctx.model, &ctx.ps.point, FD_STEP)?;
    Ok(Measure::component((&fd - ctx.ps.connection.christoffel()).max_abs()))
}

// ---- frame fixtures ----------------------------------------------------------

struct Example22Frame {
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
    x_fields: Vec<crate::field::TensorField>,
}

fn example22_frame(ctx: &Ctx<'_>) -> Result<Example22Frame> {
    let (ps, model) = (ctx.ps, ctx.model);
    let mut out = Example22Frame { x: Vec::new(), y: Vec::new(), x_fields: Vec::new() };
    for i in 1..=ps.n {
        let xf = model.frame_field(&format!("X{i}")).expect("example22 carries X frame").clone();
        let yf = model.frame_field(&format!("Y{i}")).expect("example22 carries Y frame");
        out.x.push(xf.eval(&ps.point)?.components().to_vec());
        out.y.push(yf.eval(&ps.point)?.components().to_vec());
        out.x_fields.push(xf);
    }
    Ok(out)
}

fn koszul_diag(ctx: &Ctx<'_>, sign: f64) -> Result<f64> {
    let ps = ctx.ps;
    let f = example22_frame(ctx)?;
    let xi_sum = ps.xi_sum();
    let mut r: f64 = 0.0;
    for (x, xf) in f.x.iter().zip(&f.x_fields) {
        let v = ps.connection.nabla_along(x, xf)?;
        r = nan_max(r, max_abs(&sub(v.components(), &scaled(&xi_sum, sign))));
    }
    Ok(r)
}

fn run_koszul_frame(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let f = example22_frame(ctx)?;
    let mut r = koszul_diag(ctx, -1.0)?;
    for (i, x) in f.x.iter().enumerate() {
        for xi in model.xi() {
            let v = ps.connection.nabla_along(x, xi)?;
            r = nan_max(r, max_abs(&sub(v.components(), x)));
        }
        for (j, xf) in f.x_fields.iter().enumerate() {
            if i != j {
                r = nan_max(r, ps.connection.nabla_along(x, xf)?.max_abs());
            }
        }
        for j in 1..=ps.n {
            let yf = model.frame_field(&format!("Y{j}")).expect("example22 carries Y frame");
            r = nan_max(r, ps.connection.nabla_along(x, yf)?.max_abs());
        }
    }
    Ok(Measure::component(r))
}

fn run_koszul_frame_printed(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    Ok(Measure::component(koszul_diag(ctx, 1.0)?))
}

fn run_frame_brackets(ctx: &Ctx<'_>, _: &mut Sampler) -> Result<Measure> {
    let (ps, model) = (ctx.ps, ctx.model);
    let f = example22_frame(ctx)?;
    let mut r: f64 = 0.0;
    for i in 1..=ps.n {
        for (name, value) in [(format!("X{i}"), &f.x[i - 1]), (format!("Y{i}"), &f.y[i - 1])] {
            let field = model.frame_field(&name).expect("example22 carries its frame");
            for xi in model.xi() {
                let b = lie_bracket(&ps.point, field, xi)?;
                r = nan_max(r, max_abs(&sub(b.components(), value)));
            }
        }
    }
    Ok(Measure::component(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_sorted() {
        let r = registry();
        for w in r.windows(2) {
            assert!(w[0].id < w[1].id, "{} / {}", w[0].id, w[1].id);
        }
    }

    #[test]
    fn merge_takes_max_and_sums_samples() {
        let model = crate::models::build_example_2_2(1, 1).unwrap();
        let spec = find("eq13").unwrap();
        let mut a = spec.record(&model);
        a.residual = 1e-12;
        a.samples = 20;
        let mut b = a.clone();
        b.residual = 3e-12;
        b.error = Some((4, "x".into()));
        let mut c = a.clone();
        c.error = Some((2, "y".into()));
        let mut ab = a.clone();
        ab.merge(&b);
        ab.merge(&c);
        let mut ba = c.clone();
        ba.merge(&b);
        ba.merge(&a);
        assert_eq!(ab, ba);
        assert_eq!(ab.residual, 3e-12);
        assert_eq!(ab.samples, 60);
        assert_eq!(ab.error.as_ref().unwrap().0, 2);
    }

    #[test]
    fn lower_bound_merges_by_min() {
        let model = crate::models::build_example_2_2(1, 1).unwrap();
        let mut a = find("volume").unwrap().record(&model);
        a.residual = 0.5;
        let mut b = a.clone();
        b.residual = 0.2;
        a.merge(&b);
        assert_eq!(a.residual, 0.2);
        assert_eq!(a.passed(), Some(true));
    }

    #[test]
    fn diagnostics_carry_no_tolerance() {
        let model = crate::models::build_example_2_2(2, 3).unwrap();
        for spec in registry() {
            let rec = spec.record(&model);
            match rec.status {
                CheckStatus::Assert => assert!(rec.tolerance.unwrap() > 0.0),
                CheckStatus::Diagnostic => assert!(rec.tolerance.is_none()),
            }
        }
    }
}
