use dmf_core::catalog::{self, Shape};
use dmf_core::classify::is_n_disk;
use dmf_core::digitizer::{bundled, cubical_model, digitize_reduce, model_graph, ShapeSpec};
use dmf_core::homotopy::is_contractible;
use dmf_core::invariants::euler_characteristic;
use dmf_core::rational::Q;
use proptest::prelude::*;

#[test]
fn every_entry_validates() {
    for name in catalog::list() {
        let v = catalog::get(name).unwrap();
        assert!(v.report.passed, "{name}: {:?}", v.report.checks);
        assert_eq!(v.entry.graph.order(), v.entry.expected.vertices, "{name}");
    }
    assert!(catalog::get("sphere_min(3)").is_ok());
    assert!(catalog::get("nope").is_err());
}

#[test]
fn torus16_looks_the_same_everywhere() {
    let t = catalog::get("torus16").unwrap().entry.graph;
    let key = t.remove_index(0).canonical_key();
    for v in 0..t.order() {
        let rim = t.induced_by_indices(&t.rim_indices(v));
        assert_eq!(rim.order(), 6);
        assert_eq!(rim.size(), 6);
        assert_eq!(t.remove_index(v).canonical_key(), key);
    }
}

#[test]
fn small_spheres_minus_a_point() {
    for name in [
        "sphere_min0",
        "sphere_min1",
        "sphere_min2",
        "sphere_min3",
        "icosahedron",
    ] {
        let e = catalog::get(name).unwrap().entry;
        assert_eq!(e.expected.shape, Shape::Sphere);
        let n = e.expected.dimension;
        for v in e.graph.labels() {
            let rim: Vec<String> = e.graph.rim(v).unwrap().labels().to_vec();
            let d = e.graph.remove_vertex(v).unwrap();
            assert!(is_contractible(&d), "{name} - {v}");
            assert!(is_n_disk(&d, &rim, n).unwrap(), "{name} - {v}");
        }
    }
}

#[test]
fn bundled_shapes() {
    let half = Q::new(1, 2);
    for name in ["segment", "disk"] {
        let s = bundled(name).unwrap();
        let r = digitize_reduce(&s, &s.window, half).unwrap();
        assert_eq!(r.residue.vertices.len(), 1, "{name}");
    }
    let s = bundled("sphere").unwrap();
    let r = digitize_reduce(&s, &s.window, half).unwrap();
    assert_eq!(r.euler, 2);
    assert_eq!(&r.betti_q[..3], &[1, 0, 1]);
    assert!(r.betti_q[3..].iter().all(|&b| b == 0));
    assert!(!is_contractible(&r.residue_graph()));
}

#[test]
fn shape_json_round_trip() {
    let s = bundled("annulus").unwrap().with_pitch(Q::new(1, 2));
    assert_eq!(ShapeSpec::from_json(&s.to_json()).unwrap(), s);
    let err =
        ShapeSpec::from_json(r#"{"kind":"region","expr":"(+ x","window":{"lo":[0],"hi":[1]}}"#)
            .unwrap_err();
    assert!(err.to_string().contains("offset"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn model_degree_bound(r in 1i64..4, k in 2i64..6, three_d in any::<bool>()) {
        let (expr, p) = if three_d {
            (format!("(- (+ (sq x) (sq y) (sq z)) {})", r * r), 3u32)
        } else {
            (format!("(- (+ (sq x) (sq y)) {})", r * r), 2u32)
        };
        let win = dmf_core::covers::BoxCell::int(&vec![-r - 1; p as usize], &vec![r + 1; p as usize]).unwrap();
        let s = ShapeSpec::region(&expr, win.clone()).unwrap();
        let m = cubical_model(&s, &win, Q::new(1, k)).unwrap();
        let g = model_graph(&m);
        let bound = 3usize.pow(p) - 1;
        prop_assert!((0..g.order()).all(|v| g.degree(v) <= bound));
        if !three_d {
            prop_assert_eq!(euler_characteristic(&g).unwrap(), 1);
        }
    }
}
