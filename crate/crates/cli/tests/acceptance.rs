//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails. Tolerances are pinned here, independent of the registry
//! defaults and of any CLI overrides.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};

use kenmotsu::geometry::{christoffel, CurvatureBundle, LeviCivita};
use kenmotsu::models::build_control;
use kenmotsu::oracle::{fd_christoffel, FD_STEP};
use kenmotsu::rng::Sampler;
use kenmotsu::structure::suite::sample_generic_points;
use kenmotsu::structure::{evaluate_point, kenmotsu_defect, registry, sample_points};
use kenmotsu::ChartModel;
use kenmotsu_cli::{run_verify, RunConfig, VerificationReport};

const AXIOM_TOL: f64 = 1e-10;
const FIRST_ORDER_TOL: f64 = 1e-9;
const CURVATURE_TOL: f64 = 1e-8;
const ORACLE_TOL: f64 = 1e-6;
const CONTROL_GAK_MIN: f64 = 0.1;
const CONTROL_KENMOTSU_MIN: f64 = 0.05;
const POINTS: usize = 50;
const ORACLE_POINTS: usize = 20;
const SEED: u64 = 42;

struct Gate {
    reports: BTreeMap<String, VerificationReport>,
}

impl Gate {
    fn report(&mut self, label: &str, config: RunConfig) -> &VerificationReport {
        self.reports.entry(label.to_string()).or_insert_with(|| run_verify(&config).unwrap_or_else(|e| panic!("{label}: {e}")))
    }
}

fn config(model: &str, n: usize, s: usize) -> RunConfig {
    RunConfig { points: POINTS, seed: SEED, ..RunConfig::for_model(model, n, s) }
}

/// The three Kenmotsu models at s = 3 plus the control, by label.
fn standard_configs() -> Vec<(&'static str, RunConfig)> {
    vec![
        ("example22(2,3)", config("example22", 2, 3)),
        ("example23", config("example23", 2, 3)),
        ("warped(2,3,k=2)", config("warped", 2, 3)),
        ("control(1,1)", config("control", 1, 1)),
    ]
}

const KENMOTSU: [&str; 3] = ["example22(2,3)", "example23", "warped(2,3,k=2)"];

/// Largest residual among `ids` in `report`; errors and missing records
/// count as infinite.
fn worst(report: &VerificationReport, ids: &[&str]) -> (f64, String) {
    let mut out = (0.0, String::new());
    for id in ids {
        let r = match report.check(id) {
            Some(c) if c.error.is_none() => c.residual.unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        };
        if r > out.0 || out.1.is_empty() {
            out = (r, id.to_string());
        }
    }
    out
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn upper(gate: &mut Gate, labels: &[&str], ids: &[&str], tol: f64) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for label in labels {
        let (r, id) = worst(&gate.reports[*label], ids);
        ok &= r < tol;
        detail.push(format!("{label} max {r:.1e} ({id})"));
    }
    Outcome { ok, detail: format!("{}; tol {tol:.0e}", detail.join(", ")) }
}

fn all_ids(prefix: &str) -> Vec<&'static str> {
    registry().into_iter().map(|c| c.id).filter(|id| id.starts_with(prefix)).collect()
}

fn oracle_gate() -> Outcome {
    let models: Vec<ChartModel> = standard_configs().iter().map(|(_, c)| c.build_model().unwrap()).collect();
    let mut worst_diff: f64 = 0.0;
    for m in &models {
        for p in sample_points(m.dim(), ORACLE_POINTS, SEED) {
            let jet = christoffel(m, &p).unwrap();
            let fd = fd_christoffel(m, &p, FD_STEP).unwrap();
            worst_diff = worst_diff.max((&jet - &fd).max_abs());
        }
    }
    Outcome {
        ok: worst_diff < ORACLE_TOL,
        detail: format!("max |Γ_jet − Γ_fd| {worst_diff:.1e} over {} models × {ORACLE_POINTS} points; tol {ORACLE_TOL:.0e}", models.len()),
    }
}

fn axioms(gate: &mut Gate) -> Outcome {
    let labels: Vec<&str> = standard_configs().iter().map(|(l, _)| *l).collect();
    upper(gate, &labels, &all_ids("axiom_"), AXIOM_TOL)
}

fn classification(gate: &mut Gate) -> Outcome {
    let mut out = upper(gate, &KENMOTSU, &["gak_d_eta", "gak_d_phi", "normality_n1"], FIRST_ORDER_TOL);
    let control = build_control(1, 1).unwrap();
    let specs: Vec<_> = registry().into_iter().filter(|c| c.id == "gak_d_phi").collect();
    let min_gak = sample_generic_points(control.dim(), POINTS, SEED)
        .iter()
        .enumerate()
        .map(|(i, p)| evaluate_point(&control, p, i, SEED, &specs)[0].residual)
        .fold(f64::INFINITY, f64::min);
    let (axiom_res, _) = worst(&gate.reports["control(1,1)"], &all_ids("axiom_"));
    out.ok &= min_gak > CONTROL_GAK_MIN && axiom_res < AXIOM_TOL;
    out.detail += &format!("; control min gak_d_phi {min_gak:.3} (> {CONTROL_GAK_MIN}), axioms {axiom_res:.1e}");
    out
}

fn characterization(gate: &mut Gate) -> Outcome {
    let mut out = upper(gate, &KENMOTSU, &["eq9"], FIRST_ORDER_TOL);
    let control = build_control(1, 1).unwrap();
    let d = control.dim();
    let mut rng = Sampler::stream(SEED, &[kenmotsu::rng::label("acceptance kenmotsu control")]);
    let mut min_defect = f64::INFINITY;
    for p in sample_generic_points(d, POINTS, SEED) {
        let (x, y) = (rng.vector(d, 0.3, 1.0), rng.vector(d, 0.3, 1.0));
        let v = kenmotsu_defect(&control, &p, &x, &y).unwrap();
        min_defect = min_defect.min(v.iter().fold(0.0, |m, c| m.max(c.abs())));
    }
    out.ok &= min_defect > CONTROL_KENMOTSU_MIN;
    out.detail += &format!("; control min defect {min_defect:.3} (> {CONTROL_KENMOTSU_MIN})");
    out
}

fn master_form(gate: &mut Gate) -> Outcome {
    let labels: Vec<&str> = standard_configs().iter().map(|(l, _)| *l).collect();
    upper(gate, &labels, &["eq1"], CURVATURE_TOL)
}

/// The connection values listed for the first example, taken as printed:
/// `∇_{X_i}X_i = +Σξ_α`, `∇_{X_i}ξ_α = X_i`, `∇_{X_i}X_j = 0`, `∇_{X_i}Y_j = 0`.
fn koszul_fixtures() -> Outcome {
    let mut printed: f64 = 0.0;
    let mut opposite: f64 = 0.0;
    let mut others: f64 = 0.0;
    for (n, s) in [(1, 1), (2, 3)] {
        let m = config("example22", n, s).build_model().unwrap();
        let field = |name: String| m.frame_field(&name).unwrap().clone();
        for p in sample_points(m.dim(), POINTS, SEED) {
            let lc = LeviCivita::at(&m, &p).unwrap();
            let xi_sum: Vec<f64> = (0..m.dim()).map(|a| if a >= 2 * n { 1.0 } else { 0.0 }).collect();
            for i in 1..=n {
                let xf = field(format!("X{i}"));
                let x = xf.eval(&p).unwrap().components().to_vec();
                let xx = lc.nabla_along(&x, &xf).unwrap();
                let xx = xx.components();
                printed = printed.max(xx.iter().zip(&xi_sum).fold(0.0, |acc, (v, w)| acc.max((v - w).abs())));
                opposite = opposite.max(xx.iter().zip(&xi_sum).fold(0.0, |acc, (v, w)| acc.max((v + w).abs())));
                for a in 1..=s {
                    let v = lc.nabla_along(&x, &field(format!("xi{a}"))).unwrap();
                    others = others.max(v.components().iter().zip(&x).fold(0.0, |acc, (v, w)| acc.max((v - w).abs())));
                }
                for j in 1..=n {
                    if j != i {
                        others = others.max(lc.nabla_along(&x, &field(format!("X{j}"))).unwrap().max_abs());
                    }
                    others = others.max(lc.nabla_along(&x, &field(format!("Y{j}"))).unwrap().max_abs());
                }
            }
        }
    }
    Outcome {
        ok: printed.max(others) < FIRST_ORDER_TOL,
        detail: format!(
            "∇_X X − Σξ {printed:.1e}, other fixtures {others:.1e}; tol {FIRST_ORDER_TOL:.0e} (∇_X X + Σξ measures {opposite:.1e})"
        ),
    }
}

fn first_order(gate: &mut Gate) -> Outcome {
    upper(gate, &KENMOTSU, &["eq10", "eq11", "eq12", "lem21"], FIRST_ORDER_TOL)
}

fn curvature(gate: &mut Gate) -> Outcome {
    let ids = ["eq13", "eq14", "eq15", "eq16", "eq17", "eq18corrected", "eq19"];
    let mut out = upper(gate, &KENMOTSU, &ids, CURVATURE_TOL);
    // S(ξ_k, ξ_i) straight from the Ricci contraction, every ordered pair.
    let mut ricci: f64 = 0.0;
    for label in KENMOTSU {
        let (_, c) = standard_configs().into_iter().find(|(l, _)| *l == label).unwrap();
        let m = c.build_model().unwrap();
        for p in sample_points(m.dim(), 10, SEED) {
            let b = CurvatureBundle::compute(&m, &p).unwrap();
            let xi: Vec<Vec<f64>> = m.xi().iter().map(|x| x.eval(&p).unwrap().components().to_vec()).collect();
            for xk in &xi {
                for xj in &xi {
                    ricci = ricci.max((b.ricci_form(xk, xj) + 2.0 * m.n() as f64).abs());
                }
            }
        }
    }
    out.ok &= ricci < CURVATURE_TOL;
    out.detail += &format!("; all-pairs |S(ξ_k,ξ_i) + 2n| {ricci:.1e}");
    out
}

fn phi_sectional() -> Outcome {
    let mut ok = true;
    let mut worst_r: f64 = 0.0;
    let mut min_samples = usize::MAX;
    for model in ["example22", "warped"] {
        for s in 1..=3 {
            let mut c = config(model, 2, s);
            c.checks = Some(vec!["phi_sectional".into()]);
            let r = run_verify(&c).unwrap();
            let rec = r.check("phi_sectional").unwrap();
            let res = rec.residual.unwrap_or(f64::INFINITY);
            ok &= rec.error.is_none() && res < CURVATURE_TOL && rec.samples >= 20 * POINTS;
            worst_r = worst_r.max(res);
            min_samples = min_samples.min(rec.samples);
        }
    }
    Outcome {
        ok, detail: format!("max |K(X,φX) + s| {worst_r:.1e} over 6 models, ≥ {min_samples} planes each; tol {CURVATURE_TOL:.0e}")
    }
}

fn classical(gate: &mut Gate) -> Outcome {
    let ids = [
        "locally_symmetric",
        "semi_rr",
        "semi_rs",
        "einstein",
        "projective",
        "thm32",
        "thm33a",
        "thm33b",
        "eta_parallel",
        "eta_parallel_closed_form",
    ];
    gate.report("example22(2,1)", config("example22", 2, 1));
    gate.report("warped(2,1,k=2)", config("warped", 2, 1));
    let mut out = upper(gate, &["example22(2,1)", "warped(2,1,k=2)"], &ids, CURVATURE_TOL);
    let asserted = ["example22(2,1)", "warped(2,1,k=2)"]
        .iter()
        .all(|l| ids.iter().all(|id| gate.reports[*l].check(id).is_some_and(|c| c.status == "assert")));
    out.ok &= asserted;
    out
}

fn diagnostics(gate: &mut Gate) -> Outcome {
    let ids = ["thm32", "thm33a", "thm33b", "eq18printed", "thm43", "cor42", "semi_rs", "semi_rp"];
    let mut bad = Vec::new();
    for label in KENMOTSU {
        for id in ids {
            match gate.reports[label].check(id) {
                Some(c) if c.status == "diagnostic" && c.residual.is_some_and(f64::is_finite) && c.error.is_none() => {}
                _ => bad.push(format!("{label}:{id}")),
            }
        }
    }
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("{} records diagnostic and finite across s = 3 models", ids.len() * KENMOTSU.len())
        } else {
            format!("missing or not diagnostic: {}", bad.join(", "))
        },
    }
}

fn determinism(gate: &mut Gate) -> Outcome {
    let (label, c) = standard_configs().remove(0);
    let again = run_verify(&c).unwrap();
    let same = serde_json::to_string(&gate.reports[label].checks).unwrap() == serde_json::to_string(&again.checks).unwrap();
    let bin = env!("CARGO_BIN_EXE_kenmotsu");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    let codes = [
        code(&["verify", "--model", "example22", "--n", "2", "--s", "3", "--points", "50", "--seed", "42"]),
        code(&["verify", "--model", "control", "--n", "1", "--s", "1"]),
        code(&["verify", "--model", "nosuch"]),
    ];
    Outcome { ok: same && codes == [Some(0), Some(1), Some(2)], detail: format!("byte-identical checks: {same}; exit codes {codes:?}") }
}

fn main() -> ExitCode {
    // The oracle gate runs before any identity suite is evaluated.
    let oracle = oracle_gate();
    let mut gate = Gate { reports: BTreeMap::new() };
    for (label, c) in standard_configs() {
        gate.report(label, c);
    }
    let results: Vec<(u8, &str, Outcome)> = vec![
        (1, "metric f-structure axioms", axioms(&mut gate)),
        (2, "structure classification", classification(&mut gate)),
        (3, "Kenmotsu characterization both ways", characterization(&mut gate)),
        (4, "master identity for dΦ", master_form(&mut gate)),
        (5, "connection fixtures as listed", koszul_fixtures()),
        (6, "first-order identities", first_order(&mut gate)),
        (7, "curvature and Ricci identities", curvature(&mut gate)),
        (8, "φ-sectional curvature −s", phi_sectional()),
        (9, "s = 1 specialization", classical(&mut gate)),
        (10, "diagnostics completeness", diagnostics(&mut gate)),
        (11, "finite-difference oracle", oracle),
        (12, "determinism and exit codes", determinism(&mut gate)),
    ];
    let mut failed = 0;
    for (n, title, o) in &results {
        println!("{} criterion {n:>2} {title}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
