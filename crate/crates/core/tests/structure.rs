use kenmotsu::models::*;
use kenmotsu::rng::Sampler;
use kenmotsu::structure::checks::{find, registry, CheckStatus};
use kenmotsu::structure::suite::{run_checks, sample_generic_points};
use kenmotsu::structure::*;
use kenmotsu::{ChartModel, Error, ModelKind, ScalarField, TensorField, Variance};

fn kenmotsu_models() -> Vec<ChartModel> {
    vec![
        build_example_2_2(2, 3).unwrap(),
        build_example_2_3(1.0, 1.0).unwrap(),
        build_warped(&WarpedProductSpec::standard(2, 3, 2.0)).unwrap(),
    ]
}

fn residual(checks: &[IdentityCheck], id: &str) -> f64 {
    checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no check {id}")).residual
}

fn apply(model: &ChartModel, p: &[f64], x: &[f64]) -> Vec<f64> {
    model.phi().eval(p).unwrap().feed(1, x).unwrap().components().to_vec()
}

fn norm_sq(model: &ChartModel, p: &[f64], x: &[f64]) -> f64 {
    model.metric_at(p).unwrap().eval(&[x, x]).unwrap()
}

#[test]
fn fundamental_form_values() {
    let model = build_example_2_2(2, 3).unwrap();
    let p = [0.1, 0.2, -0.3, 0.4, 0.3, -0.1, 0.25];
    let phi = fundamental_two_form(&model, &p).unwrap();
    let zsum: f64 = p[4..].iter().sum();
    assert!((phi.get(&[0, 2]) + (2.0 * zsum).exp()).abs() < 1e-12);
    assert!((phi.get(&[1, 3]) + (2.0 * zsum).exp()).abs() < 1e-12);
    for a in 0..7 {
        for xi in 4..7 {
            assert_eq!(phi.get(&[xi, a]), 0.0);
        }
        for b in 0..7 {
            assert!((phi.get(&[a, b]) + phi.get(&[b, a])).abs() < 1e-10);
        }
    }

    let (c1, c2) = (0.7, -1.3);
    let model = build_example_2_3(c1, c2).unwrap();
    let p = [0.1, -0.2, 0.3, 0.0, 0.2, -0.4, 0.1];
    let phi = fundamental_two_form(&model, &p).unwrap();
    let (f1, f2) = example_2_3_functions(c1, c2);
    let (f1, f2) = (f1.eval(&p).unwrap(), f2.eval(&p).unwrap());
    let zsum: f64 = p[4..].iter().sum();
    assert!((phi.get(&[0, 1]) + 1.0 / (f1 * f1 + f2 * f2)).abs() < 1e-12);
    assert!((phi.get(&[2, 3]) + (2.0 * zsum).exp() / (c1 * c1 + c2 * c2)).abs() < 1e-12);
}

#[test]
fn axioms_hold_on_every_builder() {
    let mut models = kenmotsu_models();
    models.push(build_control(2, 2).unwrap());
    models.push(build_example_2_2(1, 1).unwrap());
    for model in &models {
        let points = sample_points(model.dim(), 100, 1);
        for c in axioms_check(model, &points) {
            assert!(c.residual < 1e-10, "{} {}: {}", model.name(), c.id, c.residual);
            assert_eq!(c.passed(), Some(true));
        }
    }
}

#[test]
fn zeroed_phi_is_detected() {
    let model = build_control(1, 1).unwrap().with_phi(TensorField::zeros(3, vec![Variance::Upper, Variance::Lower])).unwrap();
    let checks = axioms_check(&model, &sample_points(3, 5, 1));
    let r = residual(&checks, "axiom_phi_squared");
    assert!((r - 1.0).abs() < 1e-12, "{r}");
}

#[test]
fn volume_condition_values() {
    for model in kenmotsu_models() {
        for p in sample_points(model.dim(), 20, 4) {
            assert!(volume_condition(&model, &p).unwrap() > 1e-12);
        }
    }
    // η¹ repeated as η²
    let base = build_example_2_2(1, 2).unwrap();
    let eta = vec![base.eta()[0].clone(), base.eta()[0].clone()];
    let xi = vec![base.xi()[0].clone(), base.xi()[0].clone()];
    let dup = ChartModel::new("dup", ModelKind::Custom, 1, 2, base.metric().clone(), base.phi().clone(), xi, eta).unwrap();
    assert_eq!(volume_condition(&dup, &[0.1, 0.2, 0.3, 0.4]).unwrap(), 0.0);
}

#[test]
fn normality_and_gak() {
    for model in kenmotsu_models() {
        let points = sample_points(model.dim(), 100, 2);
        for p in points.iter().take(20) {
            let nt = normality_tensors(&model, p).unwrap();
            assert!(nt.n1.max_abs() < 1e-9, "{}", model.name());
            assert!(nt.n2.iter().all(|t| t.max_abs() < 1e-9));
        }
        for c in gak_check(&model, &points) {
            assert!(c.residual < 1e-9, "{} {}", model.name(), c.id);
        }
    }
    let control = build_control(2, 2).unwrap();
    let generic = sample_generic_points(control.dim(), 10, 3);
    let gak = gak_check(&control, &generic);
    assert!(residual(&gak, "gak_d_eta") < 1e-12);
    assert!(residual(&gak, "gak_d_phi") > 0.1);
    let nt = normality_tensors(&control, &generic[0]).unwrap();
    assert!(nt.n1.max_abs() < 1e-9);
}

#[test]
fn kenmotsu_characterization_both_directions() {
    for model in kenmotsu_models() {
        let d = model.dim();
        for (k, p) in sample_points(d, 10, 5).iter().enumerate() {
            let mut rng = Sampler::stream(5, &[k as u64]);
            for _ in 0..20 {
                let (x, y) = (rng.vector(d, -1.0, 1.0), rng.vector(d, -1.0, 1.0));
                let defect = kenmotsu_defect(&model, p, &x, &y).unwrap();
                assert!(defect.iter().all(|v| v.abs() < 1e-9), "{}", model.name());
            }
            for xi in model.xi() {
                let xi = xi.eval(p).unwrap();
                let y = rng.vector(d, -1.0, 1.0);
                let defect = kenmotsu_defect(&model, p, xi.components(), &y).unwrap();
                assert!(defect.iter().all(|v| v.abs() < 1e-9));
            }
        }
    }
    // Contrapositive probe on the control at generic arguments.
    let control = build_control(2, 1).unwrap();
    let d = control.dim();
    let mut rng = Sampler::new(77);
    for p in sample_generic_points(d, 10, 6) {
        let (x, y) = (rng.vector(d, 0.3, 1.0), rng.vector(d, 0.3, 1.0));
        let defect = kenmotsu_defect(&control, &p, &x, &y).unwrap();
        assert!(defect.iter().fold(0.0f64, |m, v| m.max(v.abs())) > 0.05);
    }
}

#[test]
fn nabla_phi_formula_holds_on_all_metric_f_manifolds() {
    let mut models = kenmotsu_models();
    models.push(build_control(2, 2).unwrap());
    for model in &models {
        let d = model.dim();
        let mut rng = Sampler::new(3);
        for p in sample_points(d, 10, 8) {
            for _ in 0..20 {
                let (x, y, z) = (rng.vector(d, -1.0, 1.0), rng.vector(d, -1.0, 1.0), rng.vector(d, -1.0, 1.0));
                assert!(nabla_phi_formula_check(model, &p, &x, &y, &z).unwrap().abs() < 1e-8, "{}", model.name());
            }
            let xi = model.xi()[0].eval(&p).unwrap();
            let xi = xi.components();
            assert!(nabla_phi_formula_check(model, &p, xi, xi, xi).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn identity_suite_on_example22() {
    let model = build_example_2_2(2, 3).unwrap();
    let checks = identity_suite(&model, &sample_points(model.dim(), 50, 42));
    for c in &checks {
        if c.status == CheckStatus::Assert {
            assert_eq!(c.passed(), Some(true), "{} = {}", c.id, c.residual);
        }
    }
    for id in ["thm32", "thm33a", "thm33b", "thm43", "cor42", "eq18printed"] {
        let c = checks.iter().find(|c| c.id == id).unwrap();
        assert_eq!(c.status, CheckStatus::Diagnostic);
        assert!(c.residual.is_finite() && c.tolerance.is_none());
    }
    // S(ξ_k,ξ_i) = −4 at every pair, including k ≠ i.
    let p = [0.1, -0.2, 0.3, 0.05, -0.3, 0.2, 0.4];
    let ps = PointStructure::with_curvature(&model, &p).unwrap();
    for k in 0..3 {
        for i in 0..3 {
            assert!((ps.ricci(&ps.xi[k], &ps.xi[i]) + 4.0).abs() < 1e-9);
        }
    }
}

#[test]
fn classical_case_passes_commutation_identities() {
    let model = build_example_2_2(1, 1).unwrap();
    let checks = full_suite(&model, &sample_points(3, 20, 9), 9);
    for id in ["thm32", "thm33a", "thm33b", "locally_symmetric", "semi_rr", "semi_rs", "einstein", "projective", "eta_parallel"] {
        let c = checks.iter().find(|c| c.id == id).unwrap();
        assert_eq!(c.status, CheckStatus::Assert);
        assert!(c.residual < 1e-8, "{id}: {}", c.residual);
    }
}

#[test]
fn eq18_follows_from_eq16_and_eq17() {
    for model in kenmotsu_models() {
        let checks =
            run_checks(&model, &sample_points(model.dim(), 10, 12), 12, &["eq16", "eq17", "eq18corrected"].map(|id| find(id).unwrap()));
        if residual(&checks, "eq16") < 1e-9 && residual(&checks, "eq17") < 1e-9 {
            assert!(residual(&checks, "eq18corrected") < 1e-7);
        }
    }
}

#[test]
fn phi_sectional_curvature_is_minus_s() {
    let cases = [
        (build_example_2_2(2, 3).unwrap(), -3.0),
        (build_example_2_2(1, 1).unwrap(), -1.0),
        (build_warped(&WarpedProductSpec::standard(2, 2, 0.5)).unwrap(), -2.0),
        (build_warped(&WarpedProductSpec::standard(1, 3, 2.0)).unwrap(), -3.0),
    ];
    for (model, expected) in &cases {
        let d = model.dim();
        let mut rng = Sampler::new(21);
        for p in sample_points(d, 5, 13) {
            let ps = PointStructure::first_order(model, &p).unwrap();
            for _ in 0..20 {
                let x = ps.unit_horizontal(&rng.vector(d, -1.0, 1.0)).unwrap();
                let k = phi_sectional(model, &p, &x).unwrap();
                assert!((k - expected).abs() < 1e-8, "{}: {k}", model.name());
            }
        }
    }
}

#[test]
fn phi_sectional_rejects_bad_input() {
    let model = build_example_2_2(1, 1).unwrap();
    let p = [0.0; 3];
    assert!(matches!(phi_sectional(&model, &p, &[1.0, 0.0, 0.1]), Err(Error::NotHorizontal { .. })));
    assert!(matches!(phi_sectional(&model, &p, &[2.0, 0.0, 0.0]), Err(Error::NotUnit { .. })));
}

#[test]
fn projective_tensor_values() {
    let hyper = build_example_2_2(1, 1).unwrap();
    for p in sample_points(3, 5, 2) {
        assert!(projective_tensor(&hyper, &p).unwrap().max_abs() < 1e-8);
    }
    let control = build_control(1, 2).unwrap();
    let p = [0.1, 0.2, 0.3, 0.4];
    let diff = &projective_tensor(&control, &p).unwrap() - &kenmotsu::geometry::riemann(&control, &p).unwrap();
    assert_eq!(diff.max_abs(), 0.0);
    let warped = build_warped(&WarpedProductSpec::standard(2, 3, 1.0)).unwrap();
    assert!(projective_tensor(&warped, &[0.1; 7]).unwrap().max_abs() > 0.1);
}

#[test]
fn semi_symmetry() {
    let pairs = |d: usize| {
        let mut rng = Sampler::new(4);
        (0..10).map(|_| (rng.vector(d, -1.0, 1.0), rng.vector(d, -1.0, 1.0))).collect::<Vec<_>>()
    };
    let hyper = build_example_2_2(1, 1).unwrap();
    let s = semi_symmetry_defects(&hyper, &[0.2, -0.1, 0.3], &pairs(3)).unwrap();
    assert!(s.rr < 1e-8 && s.rs < 1e-8 && s.rp < 1e-8);
    let control = build_control(1, 1).unwrap();
    let s = semi_symmetry_defects(&control, &[0.2, -0.1, 0.3], &pairs(3)).unwrap();
    assert_eq!((s.rr, s.rs, s.rp), (0.0, 0.0, 0.0));
    // R·P and R·R agree on the structure tuple for every s.
    let warped = build_warped(&WarpedProductSpec::standard(2, 3, 1.0)).unwrap();
    let checks = run_checks(&warped, &sample_points(7, 5, 3), 3, &[find("semi_rp_rr_special").unwrap()]);
    assert!(checks[0].residual < 1e-8);
}

#[test]
fn eta_parallel_readouts() {
    let hyper = build_example_2_2(1, 1).unwrap();
    let control = build_control(1, 1).unwrap();
    let mut rng = Sampler::new(6);
    for p in sample_points(3, 5, 6) {
        let (x, y, z) = (rng.vector(3, -1.0, 1.0), rng.vector(3, -1.0, 1.0), rng.vector(3, -1.0, 1.0));
        let e = eta_parallel_defect(&hyper, &p, &x, &y, &z).unwrap();
        assert!(e.definition.abs() < 1e-8 && e.closed_form.abs() < 1e-8);
        assert!((e.definition.abs() - e.closed_form.abs()).abs() < 1e-8);
        assert_eq!(eta_parallel_defect(&control, &p, &x, &y, &z).unwrap().definition, 0.0);
    }
    // For s ≥ 2 the definition readout vanishes (∇S = 0 on the warped
    // model) while the closed form does not, so the two disagree.
    let warped = build_warped(&WarpedProductSpec::standard(2, 3, 1.0)).unwrap();
    let (x, y, z) = (rng.vector(7, -1.0, 1.0), rng.vector(7, -1.0, 1.0), rng.vector(7, -1.0, 1.0));
    let e = eta_parallel_defect(&warped, &[0.1; 7], &x, &y, &z).unwrap();
    assert!(e.definition.abs() < 1e-8);
    assert!(e.closed_form.abs() > 1e-3);
}

#[test]
fn f_basis_is_orthonormal() {
    for model in kenmotsu_models() {
        for p in sample_points(model.dim(), 5, 8) {
            let fb = f_basis(&model, &p).unwrap();
            let g = model.metric_at(&p).unwrap();
            let v = fb.vectors();
            assert_eq!(v.len(), model.dim());
            for (i, a) in v.iter().enumerate() {
                for (j, b) in v.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((g.eval(&[a, b]).unwrap() - e).abs() < 1e-10);
                }
            }
            for (e, pe) in fb.e.iter().zip(&fb.phi_e) {
                assert_eq!(&apply(&model, &p, e), pe);
                assert!((norm_sq(&model, &p, e) - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn warped_necessary_conditions_and_fiber_kahler() {
    for model in kenmotsu_models() {
        let pts = sample_points(model.dim(), 10, 14);
        let checks = run_checks(&model, &pts, 14, &[find("thm23").unwrap(), find("kahler_fiber").unwrap()]);
        assert!(residual(&checks, "thm23") < 1e-9);
        assert!(residual(&checks, "kahler_fiber") < 1e-8);
    }
}

#[test]
fn warped_and_example22_reports_agree() {
    let (n, s) = (2, 2);
    let ex = build_example_2_2(n, s).unwrap();
    let wp = build_warped(&WarpedProductSpec::standard(n, s, 1.0)).unwrap();
    let pts = sample_points(ex.dim(), 10, 15);
    let mapped: Vec<Vec<f64>> = pts.iter().map(|p| example_2_2_to_warped(n, s, p)).collect();
    let a = identity_suite(&ex, &pts);
    let b = identity_suite(&wp, &mapped);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.id, y.id);
        if x.status == CheckStatus::Assert {
            assert!(x.residual < 1e-10 && y.residual < 1e-10, "{}: {} vs {}", x.id, x.residual, y.residual);
        }
    }
}

#[test]
fn merge_is_order_independent() {
    let model = build_example_2_2(1, 2).unwrap();
    let pts = sample_points(model.dim(), 6, 1);
    let specs = registry();
    let per_point: Vec<_> = pts.iter().enumerate().map(|(i, p)| evaluate_point(&model, p, i, 1, &specs)).collect();
    let forward = merge_checks(per_point.clone());
    let backward = merge_checks(per_point.iter().rev().cloned());
    assert_eq!(forward, backward);
    assert_eq!(forward, run_checks(&model, &pts, 1, &specs));
    let split = merge_checks([merge_checks(per_point[..2].to_vec()), merge_checks(per_point[2..].to_vec())]);
    for (a, b) in forward.iter().zip(&split) {
        assert_eq!(a.residual.to_bits(), b.residual.to_bits());
    }
}

#[test]
fn evaluation_errors_are_captured() {
    // A metric that degenerates at z = 0.
    let z = ScalarField::coord(2);
    let mut g = TensorField::zeros(3, vec![Variance::Lower, Variance::Lower]);
    g.set_component(&[0, 0], z.clone() * z.clone());
    g.set_component(&[1, 1], z.clone() * z);
    g.set_component(&[2, 2], ScalarField::one());
    let base = build_example_2_2(1, 1).unwrap();
    let model = ChartModel::new("bad", ModelKind::Custom, 1, 1, g, base.phi().clone(), base.xi().to_vec(), base.eta().to_vec()).unwrap();
    let checks = run_checks(&model, &[vec![0.1, 0.1, 0.0], vec![0.1, 0.1, 0.3]], 1, &[find("eq13").unwrap()]);
    assert_eq!(checks[0].error.as_ref().unwrap().0, 0);
    assert_eq!(checks[0].passed(), Some(false));
}
