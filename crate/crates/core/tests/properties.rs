use hilbert_geom::domain::ConvexDomain;
use hilbert_geom::flats::{phi_inverse, phi_map, simplex_distance};
use hilbert_geom::projective::{cross_ratio, Hyperplane, ProjMap, ProjPoint};
use hilbert_geom::sampling::rng_for;
use hilbert_geom::scalar::{rat, rat_int, Rat};
use hilbert_geom::slice::slice;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn domains() -> Vec<ConvexDomain> {
    vec![
        ConvexDomain::simplex(2),
        ConvexDomain::simplex(3),
        ConvexDomain::cube(3),
        ConvexDomain::cross_polytope(3),
        ConvexDomain::unit_ball(2),
        ConvexDomain::unit_ball(3),
    ]
}

fn three(dom: &ConvexDomain, seed: u64) -> [ProjPoint<f64>; 3] {
    let mut rng = rng_for(seed, 0);
    [dom.sample_interior(&mut rng), dom.sample_interior(&mut rng), dom.sample_interior(&mut rng)]
}

fn nonzero(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = i64> {
    range.prop_filter("nonzero", |v| *v != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(k in 0usize..6, seed in any::<u64>()) {
        let dom = &domains()[k];
        let [x, y, z] = three(dom, seed);
        let dxy = dom.hilbert_distance(&x, &y, TOL).unwrap();
        let dyx = dom.hilbert_distance(&y, &x, TOL).unwrap();
        let dxz = dom.hilbert_distance(&x, &z, TOL).unwrap();
        let dzy = dom.hilbert_distance(&z, &y, TOL).unwrap();
        prop_assert!(dxy > 0.0);
        prop_assert!((dxy - dyx).abs() <= 1e-9 * (1.0 + dxy));
        prop_assert!(dxy <= dxz + dzy + 1e-9 * (1.0 + dxy));
        prop_assert_eq!(dom.hilbert_distance(&x, &x, TOL).unwrap(), 0.0);
    }

    #[test]
    fn distance_ignores_representative_scale(seed in any::<u64>(), k in 0usize..6, s in 1e-3f64..1e3) {
        let dom = &domains()[k];
        let [x, y, _] = three(dom, seed);
        let xs = ProjPoint::new(x.coords().iter().map(|c| -s * c).collect()).unwrap();
        let a = dom.hilbert_distance(&x, &y, TOL).unwrap();
        let b = dom.hilbert_distance(&xs, &y, TOL).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn simplex_distance_matches_positive_cone_formula(seed in any::<u64>()) {
        let dom = ConvexDomain::simplex(3);
        let [x, y, _] = three(&dom, seed);
        let pos = |p: &ProjPoint<f64>| {
            let s: f64 = p.coords().iter().sum();
            p.coords().iter().map(|c| c / s).collect::<Vec<f64>>()
        };
        let (px, py) = (pos(&x), pos(&y));
        let logs: Vec<f64> = px.iter().zip(&py).map(|(a, b)| (a / b).ln()).collect();
        let want = 0.5 * (logs.iter().cloned().fold(f64::MIN, f64::max) - logs.iter().cloned().fold(f64::MAX, f64::min));
        let got = dom.hilbert_distance(&x, &y, TOL).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want));
        prop_assert!((simplex_distance(&px, &py).unwrap() - want).abs() <= 1e-12 * (1.0 + want));
    }

    #[test]
    fn simplex_automorphisms_are_isometries(
        seed in any::<u64>(),
        diag in prop::collection::vec(1i64..20, 4),
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let dom = ConvexDomain::simplex(3);
        let d: Vec<Rat> = diag.iter().map(|v| rat_int(*v)).collect();
        let g = ProjMap::diagonal(&d).unwrap().compose(&ProjMap::permutation(&perm)).to_f64();
        let [x, y, _] = three(&dom, seed);
        let (gx, gy) = (g.apply(&x), g.apply(&y));
        let a = dom.hilbert_distance(&x, &y, TOL).unwrap();
        let b = dom.hilbert_distance(&gx, &gy, TOL).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn cube_symmetries_are_isometries(
        seed in any::<u64>(),
        signs in prop::collection::vec(prop::bool::ANY, 3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        let dom = ConvexDomain::cube(3);
        let mut m = vec![vec![0.0; 4]; 4];
        for (i, &j) in perm.iter().enumerate() {
            m[i][j] = if signs[i] { -1.0 } else { 1.0 };
        }
        m[3][3] = 1.0;
        let g = ProjMap::new(m, TOL).unwrap();
        let [x, y, _] = three(&dom, seed);
        let a = dom.hilbert_distance(&x, &y, TOL).unwrap();
        let b = dom.hilbert_distance(&g.apply(&x), &g.apply(&y), TOL).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn normalized_is_idempotent_and_scale_free(
        coords in prop::collection::vec(-50i64..50, 4).prop_filter("nonzero", |v| v.iter().any(|c| *c != 0)),
        k in nonzero(-9..=9),
    ) {
        let p = ProjPoint::new(coords.iter().map(|c| rat_int(*c)).collect()).unwrap();
        let n = p.normalized();
        prop_assert_eq!(n.normalized().coords().to_vec(), n.coords().to_vec());
        prop_assert_eq!(p.scaled(&rat(k, 7)).normalized().coords().to_vec(), n.coords().to_vec());
    }

    #[test]
    fn cross_ratio_swap_symmetry(t in prop::collection::vec(-40i64..40, 4)) {
        let mut t = t;
        t.sort();
        t.dedup();
        prop_assume!(t.len() == 4);
        let pt = |s: i64| ProjPoint::new(vec![rat_int(s), rat_int(1)]).unwrap();
        let [a, b, c, d] = [pt(t[0]), pt(t[1]), pt(t[2]), pt(t[3])];
        let r = cross_ratio(&a, &b, &c, &d, 0.0).unwrap();
        // Reversing the line leaves [z1, x, y, z2] unchanged.
        prop_assert_eq!(cross_ratio(&d, &c, &b, &a, 0.0).unwrap(), r.clone());
        // Swapping x and y inverts it.
        prop_assert_eq!(cross_ratio(&a, &c, &b, &d, 0.0).unwrap(), Rat::from_integer(1.into()) / r.clone());
        let f = |s: i64| s as f64;
        let want = ((f(t[2]) - f(t[0])) * (f(t[3]) - f(t[1]))) / ((f(t[1]) - f(t[0])) * (f(t[3]) - f(t[2])));
        prop_assert!((hilbert_geom::scalar::rat_to_f64(&r) - want).abs() <= 1e-12 * want.abs());
    }

    #[test]
    fn apply_dual_preserves_incidence(
        m in prop::collection::vec(-5i64..6, 9),
        p in prop::collection::vec(-5i64..6, 3),
        h in prop::collection::vec(-5i64..6, 3),
    ) {
        let mat: Vec<Vec<Rat>> = m.chunks(3).map(|r| r.iter().map(|v| rat_int(*v)).collect()).collect();
        let Ok(g) = ProjMap::new(mat, 0.0) else { return Ok(()) };
        let Ok(p) = ProjPoint::new(p.iter().map(|v| rat_int(*v)).collect()) else { return Ok(()) };
        let Ok(h) = Hyperplane::new(h.iter().map(|v| rat_int(*v)).collect()) else { return Ok(()) };
        let before = h.incidence(&p);
        let after = g.apply_dual(&h).incidence(&g.apply(&p));
        // Projective images only fix incidence up to a nonzero scale.
        prop_assert_eq!(before == rat_int(0), after == rat_int(0));
    }

    #[test]
    fn phi_round_trip(x in prop::collection::vec(0.01f64..100.0, 2..6)) {
        let e = phi_map(&x).unwrap();
        prop_assert!(e.iter().sum::<f64>().abs() < 1e-9);
        let back = phi_inverse(&e);
        let ratio = x[0] / back[0];
        for (a, b) in x.iter().zip(&back) {
            prop_assert!((a / b - ratio).abs() <= 1e-9 * ratio);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn slice_outline_lies_on_the_boundary(z in -9i64..10, tilt in -5i64..6) {
        // Planes through the cube at height z/10 with a small tilt.
        let dom = ConvexDomain::cube(3);
        let h = rat(z, 10);
        let pts = [
            ProjPoint::from_affine(&[rat_int(0), rat_int(0), h.clone()]),
            ProjPoint::from_affine(&[rat_int(1), rat_int(0), h.clone() + rat(tilt, 20)]),
            ProjPoint::from_affine(&[rat_int(0), rat_int(1), h]),
        ];
        let s = slice(&dom, &pts, 64, None).unwrap();
        prop_assert_eq!(s.outline.len(), 64);
        for &(a, b) in &s.outline {
            let tz = z as f64 / 10.0 + a * tilt as f64 / 20.0;
            let p = [a, b, tz];
            let sup = p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            prop_assert!((sup - 1.0).abs() < 1e-7, "({a}, {b}) -> {p:?}");
        }
    }
}
