use hilbert_geom_web::Polygon;

fn square() -> Polygon {
    Polygon::new(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [0.0, 0.0]]).unwrap()
}

#[test]
fn vertices_come_back_in_order() {
    let v = square().vertices();
    assert_eq!(v.len(), 4);
    let area: f64 = (0..4).map(|i| v[i][0] * v[(i + 1) % 4][1] - v[(i + 1) % 4][0] * v[i][1]).sum();
    assert!((area - 8.0).abs() < 1e-12);
}

#[test]
fn distance_along_an_axis() {
    let d = square().distance([0.0, 0.0], [0.5, 0.0]).unwrap();
    assert!((d.value - 0.5f64.atanh()).abs() < 1e-12);
    assert!((d.z1[0] + 1.0).abs() < 1e-12 && (d.z2[0] - 1.0).abs() < 1e-12);
    assert!(square().distance([0.0, 0.0], [2.0, 0.0]).is_err());
}

#[test]
fn ball_outline_sits_at_the_radius() {
    let sq = square();
    let r = 0.7;
    let ring = sq.ball([0.1, -0.2], r, 24).unwrap();
    assert_eq!(ring.len(), 24);
    for p in ring {
        let d = sq.distance([0.1, -0.2], p).unwrap().value;
        assert!((d - r).abs() < 1e-9, "{d}");
    }
    let axis = sq.ball([0.0, 0.0], r, 4).unwrap()[0];
    assert!((axis[0] - r.tanh()).abs() < 1e-9 && axis[1].abs() < 1e-12);
}

#[test]
fn projection_onto_a_chord_between_parallel_sides() {
    // The supporting lines x = -1 and x = 1 meet at infinity, so the normal
    // lines are vertical.
    let mut sq = square();
    let ends = sq.set_chord([-1.1, 0.5], [1.2, 0.5]).unwrap();
    assert_eq!(ends, [[-1.0, 0.5], [1.0, 0.5]]);
    let p = sq.project([0.3, -0.4]).unwrap();
    assert!((p.image[0] - 0.3).abs() < 1e-12 && (p.image[1] - 0.5).abs() < 1e-12);
    assert!(p.pseudo_dual.is_none());
}

#[test]
fn projection_in_a_triangle_goes_through_the_corner() {
    let mut t = Polygon::new(&[[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]]).unwrap();
    assert!(t.project([1.0, 1.0]).is_err());
    t.set_chord([2.0, -0.1], [-0.1, 2.0]).unwrap();
    let p = t.project([0.5, 1.0]).unwrap();
    assert_eq!(p.pseudo_dual, Some([0.0, 0.0]));
    // The ray from the corner through (0.5, 1) meets x + y = 2 at (2/3, 4/3).
    assert!((p.image[0] - 2.0 / 3.0).abs() < 1e-12 && (p.image[1] - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn degenerate_input_is_rejected() {
    assert!(Polygon::new(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    assert!(Polygon::new(&[[0.0, f64::NAN], [1.0, 0.0], [0.0, 1.0]]).is_err());
    assert!(square().ball([0.0, 0.0], -1.0, 8).is_err());
}
