use std::collections::BTreeSet;

use hilbert_geom::domain::ConvexDomain;
use hilbert_geom::faces::{FaceLattice, PairClass};
use hilbert_geom::flats::{flat_dual, validate_flat, FlatError};
use hilbert_geom::group::{certify_preserves, orbit, translation_length, GeneratorSet};
use hilbert_geom::io::{domain_from_json, domain_to_json};
use hilbert_geom::projective::{ProjMap, ProjPoint};
use hilbert_geom::scalar::{rat, rat_int, Rat};
use hilbert_geom::verify::simplex_corner_flat;

fn pt(c: &[i64]) -> ProjPoint<Rat> {
    ProjPoint::new(c.iter().map(|v| rat_int(*v)).collect()).unwrap()
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn interval_and_disk_endpoints() {
    let interval = domain_from_json(r#"{"type":"polytope","dim":1,"vertices":[[-1],[1]]}"#).unwrap();
    let x = ProjPoint::new(vec![0.0, 1.0]).unwrap();
    let y = ProjPoint::new(vec![0.5, 1.0]).unwrap();
    let pair = interval.boundary_intersections(&x, &y, 1e-9).unwrap();
    let aff = |p: &ProjPoint<f64>| p.coords()[0] / p.coords()[1];
    assert!((aff(&pair.z1) + 1.0).abs() < 1e-12 && (aff(&pair.z2) - 1.0).abs() < 1e-12);
    let d = interval.hilbert_distance(&x, &y, 1e-9).unwrap();
    assert!((d - 0.5f64.atanh()).abs() < 1e-12);

    let disk = ConvexDomain::unit_ball(2);
    let o = ProjPoint::new(vec![0.0, 0.0, 1.0]).unwrap();
    let r = ProjPoint::new(vec![0.3, 0.0, 1.0]).unwrap();
    let pair = disk.boundary_intersections(&o, &r, 1e-9).unwrap();
    let z1 = pair.z1.affine().unwrap();
    let z2 = pair.z2.affine().unwrap();
    assert!((z1[0] + 1.0).abs() < 1e-12 && z1[1].abs() < 1e-12);
    assert!((z2[0] - 1.0).abs() < 1e-12 && z2[1].abs() < 1e-12);
}

#[test]
fn polytope_f_vectors() {
    let f = |d: &ConvexDomain| FaceLattice::new(d.as_polytope().unwrap()).f_vector();
    assert_eq!(f(&ConvexDomain::simplex(3))[..3], [4, 6, 4]);
    assert_eq!(f(&ConvexDomain::cube(3))[..3], [8, 12, 6]);
    assert_eq!(f(&ConvexDomain::simplex(1))[0], 2);
}

#[test]
fn cube_faces_and_duals() {
    let cube = ConvexDomain::cube(3);
    let poly = cube.as_polytope().unwrap();
    let lat = FaceLattice::new(poly);
    let facet = lat.faces().iter().find(|f| f.dim == 2).unwrap();
    let vertex = lat.faces().iter().find(|f| f.dim == 0).unwrap();
    assert_eq!(lat.dual_face(poly, facet.id).unwrap().dim, 0);
    assert_eq!(lat.dual_face(poly, vertex.id).unwrap().dim, 2);
    assert!(lat.is_angular(poly, facet.id).unwrap());

    // The centroid of a facet lies on that facet and nothing smaller.
    let n = facet.vertices.len() as i64;
    let mut c = vec![rat_int(0); 4];
    for &v in &facet.vertices {
        for (a, b) in c.iter_mut().zip(poly.vertices()[v].coords()) {
            *a += b / rat_int(n);
        }
    }
    assert_eq!(lat.face_of_point(poly, &ProjPoint::new(c).unwrap()).unwrap().id, facet.id);

    let dual = cube.dual_domain().unwrap();
    let dp = dual.as_polytope().unwrap();
    assert_eq!((dp.vertices().len(), dp.facets().len()), (6, 8));
}

#[test]
fn adjacent_cube_facets_meet_in_an_edge() {
    let poly = ConvexDomain::cube(3);
    let poly = poly.as_polytope().unwrap();
    let lat = FaceLattice::new(poly);
    let facets: Vec<_> = lat.faces().iter().filter(|f| f.dim == 2).collect();
    for a in &facets {
        for b in &facets {
            let shared: BTreeSet<usize> = a.vertices.intersection(&b.vertices).copied().collect();
            let class = lat.classify_pair(a.id, b.id).unwrap();
            match shared.len() {
                4 => assert_eq!(class, PairClass::Equal),
                0 => assert_eq!(class, PairClass::Disjoint),
                2 => {
                    let PairClass::ProperMeeting(m) = class else { panic!("{class:?}") };
                    assert_eq!(lat.face(m).unwrap().dim, 1);
                    assert_eq!(lat.face(m).unwrap().vertices, shared);
                }
                k => panic!("facets sharing {k} vertices"),
            }
        }
    }
}

#[test]
fn simplex_edge_dualizes_to_an_edge() {
    let s = ConvexDomain::simplex(3);
    let poly = s.as_polytope().unwrap();
    let lat = FaceLattice::new(poly);
    let edge = lat.find(&set(&[0, 1])).unwrap();
    assert_eq!(lat.dual_face(poly, edge).unwrap().dim, 1);
}

#[test]
fn simplex_is_self_dual() {
    for d in 1..=4 {
        let s = ConvexDomain::simplex(d);
        let dual = s.dual_domain().unwrap();
        let dp = dual.as_polytope().unwrap();
        assert!(dp.is_simplex());
        assert_eq!(
            FaceLattice::new(dp).f_vector(),
            FaceLattice::new(s.as_polytope().unwrap()).f_vector()
        );
    }
}

#[test]
fn corner_flats_and_their_duals() {
    let s = ConvexDomain::simplex(3);
    for q in [rat(1, 2), rat(1, 4)] {
        let flat = simplex_corner_flat(&s, 0, &q).unwrap();
        assert!(flat.pseudo_dual().unwrap().same_point(&pt(&[1, 0, 0, 0]), 0.0));
        let dual = flat_dual(&flat).unwrap();
        let back = flat_dual(&dual).unwrap();
        assert!(back.carrier().same_hyperplane(flat.carrier(), 0.0));
    }
    let facet = [pt(&[1, 0, 0, 0]), pt(&[0, 1, 0, 0]), pt(&[0, 0, 1, 0])];
    assert!(matches!(validate_flat(&s, &facet), Err(FlatError::InteriorEscapes(..))));
    let bary = [pt(&[1, 1, 1, 1]), pt(&[0, 1, 1, 0]), pt(&[0, 0, 1, 1])];
    assert!(matches!(validate_flat(&s, &bary), Err(FlatError::VertexNotOnBoundary(_))));
}

#[test]
fn translation_lengths_in_closed_form() {
    let s2 = ConvexDomain::simplex(2);
    let g = ProjMap::diagonal(&[rat_int(4), rat(1, 2), rat(1, 2)]).unwrap();
    let g = certify_preserves(&s2, &g).unwrap();
    let t = translation_length(&s2, &g, 1000).unwrap();
    assert!(t.closed_form);
    // Exponents log 4, -log 2, -log 2 give (log 4 + log 2) / 2.
    assert!((t.value - 0.5 * 8f64.ln()).abs() < 1e-12);

    let s1 = ConvexDomain::simplex(1);
    let g = ProjMap::diagonal(&[rat_int(3), rat(1, 3)]).unwrap();
    let t = translation_length(&s1, &certify_preserves(&s1, &g).unwrap(), 1000).unwrap();
    assert!((t.value - 9f64.ln() / 2.0).abs() < 1e-12);
}

#[test]
fn orbit_sizes() {
    let s2 = ConvexDomain::simplex(2);
    let a = certify_preserves(&s2, &ProjMap::diagonal(&[rat_int(2), rat_int(1), rat_int(1)]).unwrap()).unwrap();
    let b = certify_preserves(&s2, &ProjMap::diagonal(&[rat_int(1), rat_int(3), rat_int(1)]).unwrap()).unwrap();
    let x = pt(&[1, 1, 1]);
    let one = GeneratorSet::new(vec![a.clone()], vec!["a".into()]);
    assert_eq!(orbit(&one, &x, 3).len(), 7);
    let two = GeneratorSet::new(vec![a, b], vec!["a".into(), "b".into()]);
    // Reduced words of length at most L of two commuting generators land on the
    // lattice points with |i| + |j| <= L.
    assert_eq!(orbit(&two, &x, 3).len(), 2 * 9 + 2 * 3 + 1);
}

#[test]
fn json_round_trip() {
    for d in [ConvexDomain::cube(3), ConvexDomain::simplex(2), ConvexDomain::unit_ball(2)] {
        let text = domain_to_json(&d).to_string();
        let back = domain_from_json(&text).unwrap();
        assert_eq!(domain_to_json(&back), domain_to_json(&d));
    }
}
