use kenmotsu::geometry::curvature::riemann;
use kenmotsu::geometry::forms::exterior_derivative;
use kenmotsu::geometry::frame::gram_matrix;
use kenmotsu::models::{
    build_control, build_example_2_2, build_example_2_3, build_warped, example_2_2_index_in_warped, example_2_2_to_warped,
    WarpedProductSpec,
};
use kenmotsu::structure::sample_points;
use kenmotsu::{ChartModel, ModelKind};

fn models() -> Vec<ChartModel> {
    vec![
        build_example_2_2(1, 1).unwrap(),
        build_example_2_2(2, 3).unwrap(),
        build_example_2_3(1.0, 0.5).unwrap(),
        build_warped(&WarpedProductSpec::standard(2, 2, 2.0)).unwrap(),
        build_control(1, 2).unwrap(),
    ]
}

#[test]
fn structure_vectors_are_dual_to_structure_forms() {
    for m in models() {
        for p in sample_points(m.dim(), 10, 3) {
            for (i, eta) in m.eta().iter().enumerate() {
                let e = eta.eval(&p).unwrap();
                for (j, xi) in m.xi().iter().enumerate() {
                    let v = xi.eval(&p).unwrap();
                    let pairing = e.eval(&[v.components()]).unwrap();
                    assert_eq!(pairing, if i == j { 1.0 } else { 0.0 }, "{}", m.name());
                }
            }
        }
    }
}

#[test]
fn attached_frames_are_orthonormal() {
    for m in models().into_iter().filter(|m| !m.frame().is_empty()) {
        assert_eq!(m.frame().len(), m.dim());
        for p in sample_points(m.dim(), 10, 5) {
            let g = m.metric_at(&p).unwrap();
            let frame: Vec<Vec<f64>> = m.frame().iter().map(|f| f.field.eval(&p).unwrap().components().to_vec()).collect();
            let gram = gram_matrix(&g, &frame);
            for (a, row) in gram.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-12, "{} <{a},{b}> = {v}", m.name());
                }
            }
        }
    }
}

#[test]
fn example23_first_frame_vector_is_unit_at_origin() {
    let m = build_example_2_3(0.7, -1.1).unwrap();
    let p = [0.0; 7];
    let e1 = m.frame_field("e1").unwrap().eval(&p).unwrap();
    let g = m.metric_at(&p).unwrap();
    let norm = g.eval(&[e1.components(), e1.components()]).unwrap();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn warped_with_unit_constant_is_example22_in_other_coordinates() {
    for (n, s) in [(1, 1), (2, 3)] {
        let ex = build_example_2_2(n, s).unwrap();
        let w = build_warped(&WarpedProductSpec::standard(n, s, 1.0)).unwrap();
        for p in sample_points(ex.dim(), 20, 9) {
            let q = example_2_2_to_warped(n, s, &p);
            let (ge, gw) = (ex.metric_at(&p).unwrap(), w.metric_at(&q).unwrap());
            let (pe, pw) = (ex.phi().eval(&p).unwrap(), w.phi().eval(&q).unwrap());
            for a in 0..ex.dim() {
                for b in 0..ex.dim() {
                    let (wa, wb) = (example_2_2_index_in_warped(n, s, a), example_2_2_index_in_warped(n, s, b));
                    let scale = ge.get(&[a, b]).abs().max(1.0);
                    assert!((ge.get(&[a, b]) - gw.get(&[wa, wb])).abs() < 1e-12 * scale);
                    assert_eq!(pe.get(&[a, b]), pw.get(&[wa, wb]));
                }
            }
        }
    }
}

#[test]
fn warping_function_grows_at_unit_rate_along_each_base_direction() {
    let spec = WarpedProductSpec::standard(1, 3, 2.5);
    let f = spec.warping_function();
    for p in sample_points(5, 10, 11) {
        let j = f.jet_eval(&p, 1).unwrap();
        for i in 0..spec.s {
            assert!((j.grad(i) / j.value() - 1.0).abs() < 1e-14);
        }
        for i in spec.s..5 {
            assert_eq!(j.grad(i), 0.0);
        }
    }
}

#[test]
fn control_is_flat_with_closed_fundamental_form() {
    let m = build_control(2, 2).unwrap();
    assert_eq!(m.kind(), ModelKind::Control);
    assert!(!m.is_warped());
    for p in sample_points(m.dim(), 5, 13) {
        assert_eq!(riemann(&m, &p).unwrap().max_abs(), 0.0);
        let d_phi = exterior_derivative(&p, &m.fundamental_two_form_field()).unwrap();
        assert_eq!(d_phi.max_abs(), 0.0);
    }
}

#[test]
fn scaled_metric_scales_every_component() {
    let m = build_example_2_2(1, 2).unwrap();
    let big = m.scale_metric(4.0);
    let p = [0.2, -0.1, 0.3, 0.05];
    let (g, h) = (m.metric_at(&p).unwrap(), big.metric_at(&p).unwrap());
    for (a, b) in g.components().iter().zip(h.components()) {
        assert!((4.0 * a - b).abs() < 1e-14 * b.abs().max(1.0));
    }
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(build_example_2_2(1, 0).is_err());
    assert!(build_example_2_3(0.0, 0.0).is_err());
    assert!(build_example_2_3(f64::NAN, 1.0).is_err());
    assert!(build_warped(&WarpedProductSpec::standard(0, 1, 1.0)).is_err());
    assert!(build_warped(&WarpedProductSpec::standard(1, 1, -1.0)).is_err());
    let mut skew = WarpedProductSpec::standard(1, 1, 1.0);
    skew.fiber.metric = vec![1.0, 0.5, 0.0, 1.0];
    assert!(build_warped(&skew).is_err());
    let mut short = WarpedProductSpec::standard(2, 1, 1.0);
    short.fiber.metric.pop();
    assert!(build_warped(&short).is_err());
}
