use gromov_lab::generators::{gen_kary_tree, gen_line, Weight};
use gromov_lab::io::GraphDocument;
use gromov_lab::potential::{p_energy, EdgeMassField};
use gromov_lab::uniformize::{mu_beta, uniformize};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn uniformized_metric_is_shorter_and_bounded(k in 2usize..=3, d in 1usize..=5, eps in 0.1f64..2.0) {
        let ms = gen_kary_tree(k, d, 1.0).unwrap();
        let us = uniformize(&ms.space, eps).unwrap();
        let base = ms.space.base;
        for v in 0..ms.space.graph.len() {
            let orig = ms.space.graph.sssp(v);
            let new = us.graph.sssp(v);
            for (a, b) in orig.iter().zip(&new) {
                prop_assert!(*b <= *a * (1.0 + 1e-12));
            }
            prop_assert!(new[base] < 1.0 / eps);
        }
    }

    #[test]
    fn uniformized_line_satisfies_triangle_inequality(n in 2usize..=24, eps in 0.2f64..1.5) {
        let h = 0.25;
        let ms = gen_line(n as f64 * h, h, &Weight::Const(1.0)).unwrap();
        let us = uniformize(&ms.space, eps).unwrap();
        let dm = us.graph.all_pairs();
        let m = us.graph.len();
        for x in (0..m).step_by(3) {
            for y in 0..m {
                for z in (0..m).step_by(5) {
                    prop_assert!(dm.get(x, y) <= dm.get(x, z) + dm.get(z, y) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn mu_beta_decreases_in_beta(d in 1usize..=6, b1 in 0.1f64..3.0, gap in 0.0f64..3.0) {
        let ms = gen_kary_tree(2, d, 1.0).unwrap();
        let lo = mu_beta(&ms.space, &ms.measure, b1).unwrap();
        let hi = mu_beta(&ms.space, &ms.measure, b1 + gap).unwrap();
        for (a, b) in lo.masses().iter().zip(hi.masses()) {
            prop_assert!(*b <= *a);
        }
        prop_assert_eq!(lo.mass(ms.space.base), ms.measure.mass(ms.space.base));
    }

    #[test]
    fn p_energy_ignores_constants_and_is_homogeneous(
        values in prop::collection::vec(-2.0f64..2.0, 17),
        c in -5.0f64..5.0,
        lambda in -3.0f64..3.0,
        p in 1.1f64..4.0,
    ) {
        let ms = gen_line(2.0, 0.25, &Weight::Const(1.0)).unwrap();
        let g = &ms.space.graph;
        let m = EdgeMassField::from_vertex_masses(g, &ms.measure).unwrap();
        let e = p_energy(g, &m, &values, p).unwrap();
        let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
        let scaled: Vec<f64> = values.iter().map(|v| lambda * v).collect();
        prop_assert!((p_energy(g, &m, &shifted, p).unwrap() - e).abs() <= 1e-9 * e.max(1.0));
        let expected = lambda.abs().powf(p) * e;
        prop_assert!((p_energy(g, &m, &scaled, p).unwrap() - expected).abs() <= 1e-9 * expected.max(1.0));
    }

    #[test]
    fn graph_json_round_trip_is_exact(k in 2usize..=3, d in 1usize..=4, sub in 1usize..=4) {
        let ms = gen_kary_tree(k, d, 1.0 / sub as f64).unwrap();
        let text = GraphDocument::from_space(&ms, None).to_json().unwrap();
        let back = GraphDocument::from_json(&text).unwrap();
        prop_assert_eq!(back.graph.edges(), ms.space.graph.edges());
        let mu = back.measure().unwrap();
        prop_assert_eq!(mu.masses(), ms.measure.masses());
        prop_assert_eq!(back.to_json().unwrap(), text);
    }
}
