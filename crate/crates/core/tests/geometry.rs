mod common;

use common::{circumcircle_violations, random_points, rng, triangle_area};
use meshfree_transfer::geometry::*;
use meshfree_transfer::Error;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn unit_square_corners_share_one_diagonal() {
    let pts = [
        Point::new2(0.0, 0.0),
        Point::new2(1.0, 0.0),
        Point::new2(1.0, 1.0),
        Point::new2(0.0, 1.0),
    ];
    let mesh = delaunay_triangulate(&pts).unwrap();
    assert_eq!(mesh.num_elements(), 2);
    let shared: Vec<usize> = mesh.element(0).iter().copied().filter(|v| mesh.element(1).contains(v)).collect();
    assert_eq!(shared.len(), 2);
    // Cocircular corners: neither diagonal may leave a node strictly inside.
    assert_eq!(circumcircle_violations(&mesh, 1e-10), 0);
}

#[test]
fn fifty_random_points_are_delaunay() {
    let pts = random_points(50, 1, 0.0, 1.0);
    let mesh = delaunay_triangulate(&pts).unwrap();
    assert_eq!(mesh.num_nodes(), 50);
    assert_eq!(circumcircle_violations(&mesh, 1e-10), 0);
}

#[test]
fn five_hundred_points_are_delaunay_and_cover_the_hull() {
    let pts = random_points(500, 9, -1.0, 1.0);
    let mesh = delaunay_triangulate(&pts).unwrap();
    assert_eq!(circumcircle_violations(&mesh, 1e-10), 0);
    // Euler: a triangulation of n points with h hull vertices has 2n − h − 2 triangles.
    let h = mesh.boundary_nodes().len();
    assert_eq!(mesh.num_elements(), 2 * 500 - h - 2);
    for e in 0..mesh.num_elements() {
        assert!(mesh.element_measure(e) > 0.0);
    }
}

#[test]
fn delaunay_rejects_degenerate_input() {
    let line: Vec<Point> = (0..5).map(|i| Point::new2(i as f64, 2.0 * i as f64)).collect();
    assert!(matches!(delaunay_triangulate(&line), Err(Error::DegenerateGeometry(_))));
    assert!(matches!(
        delaunay_triangulate(&line[..2]),
        Err(Error::DegenerateGeometry(_))
    ));
}

#[test]
fn locate_matches_exhaustive_scan() {
    let mesh = generate_uniform_triangular(10, 10, Rect::new(0.0, 1.0, 0.0, 1.0)).unwrap();
    let mut r = rng(77);
    for _ in 0..200 {
        let p = Point::new2(r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
        let fast = mesh.locate(&p).unwrap();
        let slow = mesh.locate_exhaustive(&p).unwrap();
        assert_eq!(fast.element_index, slow.element_index);
    }
}

#[test]
fn locate_on_unit_triangle() {
    let mesh = Mesh::from_triangles(
        vec![Point::new2(0.0, 0.0), Point::new2(1.0, 0.0), Point::new2(0.0, 1.0)],
        vec![[0, 1, 2]],
        vec![0, 1, 2],
    )
    .unwrap();
    let loc = mesh.locate(&Point::new2(1.0 / 3.0, 1.0 / 3.0)).unwrap();
    for w in loc.barycentric() {
        assert!((w - 1.0 / 3.0).abs() < 1e-15);
    }
    let loc = mesh.locate(&Point::new2(1.0, 0.0)).unwrap();
    assert_eq!(loc.barycentric(), &[0.0, 1.0, 0.0]);
    assert_eq!(mesh.element_measure(0), 0.5);
    assert!(matches!(mesh.locate(&Point::new2(1.0, 1.0)), Err(Error::PointOutsideDomain { .. })));
}

#[test]
fn midpoint_mesh_of_uniform_grid() {
    let a = generate_uniform_triangular(99, 99, Rect::symmetric_unit()).unwrap();
    assert_eq!(a.num_nodes(), 10_000);
    assert_eq!(a.num_elements(), 19_602);
    let b = derive_midpoint_mesh(&a).unwrap();
    assert_eq!(b.num_nodes(), 19_602 + a.boundary_nodes().len());
    let area: f64 = b.element_measures().iter().sum();
    assert!((area - 4.0).abs() < 1e-12 * 4.0);
}

#[test]
fn midpoint_mesh_1d_examples() {
    let m = generate_uniform_1d(2, Interval::new(0.0, 1.0)).unwrap();
    let xs: Vec<f64> = derive_midpoint_mesh(&m).unwrap().nodes().iter().map(|p| p.x()).collect();
    assert_eq!(xs, vec![0.0, 0.25, 0.75, 1.0]);
    let m = generate_uniform_1d(1, Interval::new(0.0, 1.0)).unwrap();
    let xs: Vec<f64> = derive_midpoint_mesh(&m).unwrap().nodes().iter().map(|p| p.x()).collect();
    assert_eq!(xs, vec![0.0, 0.5, 1.0]);
    let m = generate_uniform_1d(99, Interval::new(0.0, 1.0)).unwrap();
    assert_eq!(m.num_nodes(), 100);
    assert_eq!(derive_midpoint_mesh(&m).unwrap().num_nodes(), 101);
    let m = generate_uniform_1d(4, Interval::new(-1.0, 1.0)).unwrap();
    assert!(m.element_measures().iter().all(|&l| (l - 0.5).abs() < 1e-15));
}

#[test]
fn graded_mesh_examples() {
    let flat = generate_graded_mesh(|_: &Point| 1.0, 100, Rect::symmetric_unit(), 3).unwrap();
    assert!((90..=110).contains(&flat.num_nodes()));
    let bump = |p: &Point| 0.05 + (-20.0 * ((p.x() - 0.5).powi(2) + p.y().powi(2))).exp();
    let mesh = generate_graded_mesh(bump, 800, Rect::symmetric_unit(), 5).unwrap();
    let count = |cx: f64| {
        mesh.nodes()
            .iter()
            .filter(|p| (p.x() - cx).powi(2) + p.y().powi(2) < 0.09)
            .count()
    };
    assert!(count(0.5) > count(-0.5));
    let again = generate_graded_mesh(bump, 800, Rect::symmetric_unit(), 5).unwrap();
    assert_eq!(mesh.nodes(), again.nodes());
    for bad in [0usize, 3] {
        assert!(generate_graded_mesh(|_: &Point| 1.0, bad, Rect::symmetric_unit(), 0).is_err());
    }
    assert!(generate_graded_mesh(|_: &Point| 0.0, 100, Rect::symmetric_unit(), 0).is_err());
}

#[test]
fn mesh_file_round_trip() {
    let mesh = generate_graded_mesh(|p: &Point| 1.0 + p.x() * p.x(), 60, Rect::symmetric_unit(), 1).unwrap();
    let mut buf = Vec::new();
    mesh.write_to(&mut buf).unwrap();
    assert!(String::from_utf8_lossy(&buf).starts_with("MESHv1 2\n"));
    let back = Mesh::read_from(&buf[..]).unwrap();
    assert_eq!(back.nodes(), mesh.nodes());
    assert!(back.elements().eq(mesh.elements()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_delaunay_has_empty_circumcircles(seed in any::<u64>(), n in 3usize..120) {
        let pts = random_points(n, seed, -1.0, 1.0);
        match delaunay_triangulate(&pts) {
            Ok(mesh) => {
                prop_assert_eq!(mesh.num_nodes(), n);
                prop_assert_eq!(circumcircle_violations(&mesh, 1e-10), 0);
            }
            Err(Error::DegenerateGeometry(_)) if n == 3 => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn locate_reconstructs_the_point(nx in 1usize..12, ny in 1usize..12, fx in 0.0f64..1.0, fy in 0.0f64..1.0) {
        let r = Rect::new(-0.5, 2.0, 1.0, 1.75);
        let mesh = generate_uniform_triangular(nx, ny, r).unwrap();
        let p = Point::new2(r.x_min + fx * (r.x_max - r.x_min), r.y_min + fy * (r.y_max - r.y_min));
        let loc = mesh.locate(&p).unwrap();
        let w = loc.barycentric();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|&x| x >= BARYCENTRIC_TOLERANCE));
        let v = mesh.element(loc.element_index);
        let (mut x, mut y) = (0.0, 0.0);
        for (k, &i) in v.iter().enumerate() {
            x += w[k] * mesh.nodes()[i].x();
            y += w[k] * mesh.nodes()[i].y();
        }
        prop_assert!((x - p.x()).abs() < 1e-12 && (y - p.y()).abs() < 1e-12);
    }

    #[test]
    fn uniform_mesh_area_matches_bounds(nx in 1usize..40, ny in 1usize..40, w in 0.1f64..5.0, h in 0.1f64..5.0) {
        let r = Rect::new(-1.0, -1.0 + w, 3.0, 3.0 + h);
        let mesh = generate_uniform_triangular(nx, ny, r).unwrap();
        prop_assert_eq!(mesh.num_nodes(), (nx + 1) * (ny + 1));
        prop_assert_eq!(mesh.num_elements(), 2 * nx * ny);
        let nodes = mesh.nodes();
        let total: f64 = mesh.elements().map(|t| triangle_area(nodes[t[0]], nodes[t[1]], nodes[t[2]])).sum();
        prop_assert!((total - w * h).abs() <= 1e-12 * w * h);
    }
}
