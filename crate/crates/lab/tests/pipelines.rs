//! Cross-module pipelines checked against closed forms computed here.

use gromov_lab::generators::{gen_interval, gen_kary_tree, gen_line, generate, GeneratorSpec, Generated, Weight};
use gromov_lab::hyperbolize::{mu_alpha, quasihyperbolic, roundtrip_bilipschitz};
use gromov_lab::io::GraphDocument;
use gromov_lab::potential::{
    annulus_dirichlet, liouville_experiment, solve_p_harmonic, transfer_check_pharmonic, CriterionKind, LiouvilleThresholds, SolveOptions,
};
use gromov_lab::products::{product_domain, product_uniform, product_uniformity_check};
use gromov_lab::uniformize::{mu_beta, uniformize};

#[test]
fn generated_file_uniformizes_like_the_generator_output() {
    let spec = GeneratorSpec::KaryTree { k: 3, d: 4, h: 0.5 };
    let Generated::Space(ms) = generate(&spec).unwrap() else {
        panic!("tree is a pointed space")
    };
    let text = GraphDocument::from_space(&ms, Some(&spec)).to_json().unwrap();
    let doc = GraphDocument::from_json(&text).unwrap();
    let ps = doc.pointed_space().unwrap();
    let a = uniformize(&ms.space, 0.7).unwrap();
    let b = uniformize(&ps, 0.7).unwrap();
    assert_eq!(a.graph.edges(), b.graph.edges());
    assert_eq!(a.boundary_distances().unwrap(), b.boundary_distances().unwrap());
    assert_eq!(doc.measure().unwrap().masses(), ms.measure.masses());
}

#[test]
fn uniformized_tree_edges_match_exponential_integral() {
    let ms = gen_kary_tree(2, 5, 1.0).unwrap();
    let eps = 0.8;
    let us = uniformize(&ms.space, eps).unwrap();
    let d = ms.space.base_distances();
    for (e, ee) in ms.space.graph.edges().iter().zip(us.graph.edges()) {
        let (a, b) = (d[e.u].min(d[e.v]), d[e.u].max(d[e.v]));
        let expected = ((-eps * a).exp() - (-eps * b).exp()) / eps;
        assert!((ee.len - expected).abs() <= 1e-15, "{} vs {expected}", ee.len);
    }
}

#[test]
fn mu_beta_total_on_line_matches_cell_integral() {
    let t = 5.0;
    let ms = gen_line(t, 0.125, &Weight::Const(1.0)).unwrap();
    let beta = 1.5;
    let mb = mu_beta(&ms.space, &ms.measure, beta).unwrap();
    // lumped masses e^{-β|x|}·m(x) converge to 2(1 − e^{−βT})/β at rate h²
    let exact = 2.0 * (1.0 - (-beta * t).exp()) / beta;
    assert!((mb.total() - exact).abs() / exact < 1e-2, "{} vs {exact}", mb.total());
}

#[test]
fn unit_line_energy_is_one_over_twice_the_length() {
    let th = LiouvilleThresholds::default();
    let x = liouville_experiment(CriterionKind::Line, &Weight::Const(1.0), 0.25, 2.0, 1.0, &[4.0, 6.0, 8.0], 1e-12, th).unwrap();
    for &(t, e) in &x.energies {
        assert!((e - 1.0 / (2.0 * t)).abs() < 1e-9, "T = {t}: {e}");
    }
    assert!(!x.nonconstant_exists);
}

#[test]
fn transfer_holds_on_a_tree_for_p_three() {
    let ms = gen_kary_tree(2, 5, 1.0).unwrap();
    let dir = annulus_dirichlet(&ms.space, 1.0, 4.0, 0.0, 1.0).unwrap();
    let o = transfer_check_pharmonic(&ms.space, &ms.measure, 0.5, 3.0, &dir, 1e-10).unwrap();
    assert!(o.energy_rel_gap < 1e-6, "{o:?}");
    assert!(o.sup_diff < 1e-8, "{o:?}");
    assert_eq!(o.band_violations, 0);
}

#[test]
fn solver_reproduces_series_resistance_on_weighted_line() {
    let t = 2.0;
    let ms = gen_line(t, 0.25, &Weight::Exp(1.0)).unwrap();
    let g = &ms.space.graph;
    let tips = &ms.space.ray_tips;
    let sol = solve_p_harmonic(g, &ms.measure, &[(tips[0], 0.0), (tips[1], 1.0)], &SolveOptions::new(2.0, 1e-12)).unwrap();
    // edge conductances m_e/ℓ_e in series
    let m = gromov_lab::potential::EdgeMassField::from_vertex_masses(g, &ms.measure).unwrap();
    let resistance: f64 = g.edges().iter().zip(m.masses()).map(|(e, me)| e.len * e.len / me).sum();
    assert!((sol.energy - 1.0 / resistance).abs() < 1e-10 * sol.energy, "{} vs {}", sol.energy, 1.0 / resistance);
}

#[test]
fn uniformize_then_hyperbolize_is_bilipschitz_on_a_tree() {
    let ms = gen_kary_tree(2, 4, 1.0).unwrap();
    let r = roundtrip_bilipschitz(&ms.space, 1.0, 60, 3).unwrap();
    assert!(r.min_ratio > 0.0 && r.max_ratio.is_finite(), "{r:?}");
    assert!(r.band() < 50.0, "{r:?}");
}

#[test]
fn hyperbolized_interval_measure_matches_density() {
    let md = gen_interval(0.125).unwrap();
    let dom = &md.domain;
    let qh = quasihyperbolic(dom).unwrap();
    let ma = mu_alpha(dom, &qh, &md.measure, 2.0).unwrap();
    for (i, &v) in qh.to_source.iter().enumerate() {
        let x = dom.graph().position(v).unwrap()[0];
        let expected = md.measure.mass(v) / (1.0 - x.abs()).powi(2);
        assert!((ma.mass(i) - expected).abs() <= 1e-12 * expected);
    }
}

#[test]
fn product_of_intervals_is_a_square_with_sum_metric() {
    let i = gen_interval(0.25).unwrap().domain;
    let pd = product_domain(&i, &i).unwrap();
    let g = pd.domain.graph();
    assert_eq!(g.len(), 81);
    // distance to the boundary of the square is the smaller coordinate gap
    for v in 0..g.len() {
        let [x, y] = g.position(v).unwrap();
        let expected = (1.0 - x.abs()).min(1.0 - y.abs());
        assert!((pd.domain.d_omega()[v] - expected).abs() < 1e-12);
    }
    let pu = product_uniform(&i, &i, 20, 1).unwrap();
    assert!(product_uniformity_check(&pu, &i, &i, 20, 2).unwrap().pass());
}
