mod common;

use std::f64::consts::PI;

use common::{random_points, rng, segment_scan};
use meshfree_transfer::baseline::{FieldFile, NodalField};
use meshfree_transfer::geometry::*;
use proptest::prelude::*;
use rand::Rng;

fn bump(p: &Point) -> f64 {
    (PI * p.x()).sin() * (PI * p.y()).sin()
}

/// Largest error of the P1 interpolant of `bump` on an n×n grid of [0,1]².
fn max_error(n: usize, probes: &[Point]) -> f64 {
    let mesh = generate_uniform_triangular(n, n, Rect::new(0.0, 1.0, 0.0, 1.0)).unwrap();
    let values = mesh.nodes().iter().map(bump).collect();
    let field = NodalField::new(&mesh, values).unwrap();
    let approx = field.interpolate_batch(probes).unwrap();
    probes
        .iter()
        .zip(approx)
        .map(|(p, v)| (v - bump(p)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn quadratic_convergence_in_h() {
    let probes = random_points(4000, 3, 0.0, 1.0);
    let coarse = max_error(16, &probes);
    let fine = max_error(32, &probes);
    let ratio = coarse / fine;
    assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    // |u − Iu| ≤ h²/2 · max|D²u| with h the longest edge (the cell diagonal).
    for (n, err) in [(16, coarse), (32, fine)] {
        let h = 2f64.sqrt() / n as f64;
        assert!(err <= 0.5 * h * h * PI * PI, "n={n} err={err}");
    }
}

#[test]
fn matches_segment_scan_in_1d() {
    let mesh = generate_uniform_1d(37, Interval::new(0.0, 1.0)).unwrap();
    let xs: Vec<f64> = mesh.nodes().iter().map(|p| p.x()).collect();
    let values: Vec<f64> = xs.iter().map(|x| (7.0 * x).cos() + x).collect();
    let field = NodalField::new(&mesh, values.clone()).unwrap();
    let mut r = rng(5);
    for _ in 0..1000 {
        let x: f64 = r.gen_range(0.0..1.0);
        let got = field.interpolate(&Point::new1(x)).unwrap();
        assert_eq!(got, segment_scan(&xs, &values, x));
    }
}

#[test]
fn outside_points_and_bad_values_are_rejected() {
    let mesh = generate_uniform_triangular(3, 3, Rect::symmetric_unit()).unwrap();
    assert!(NodalField::new(&mesh, vec![0.0; 3]).is_err());
    let field = NodalField::new(&mesh, vec![1.0; mesh.num_nodes()]).unwrap();
    assert!(field.interpolate(&Point::new2(1.5, 0.0)).is_err());
    assert!(field.interpolate_batch(&[Point::new2(0.0, 0.0), Point::new2(0.0, -2.0)]).is_err());
}

#[test]
fn field_file_round_trip() {
    let ff = FieldFile {
        mesh_path: "a.mesh".into(),
        values: vec![0.1, -3.5e-300, 1.0 / 3.0, f64::MAX],
    };
    let mut buf = Vec::new();
    ff.write_to(&mut buf).unwrap();
    assert_eq!(FieldFile::read_from(&buf[..]).unwrap(), ff);
    assert!(FieldFile::read_from(&b"FIELDv1\nmesh a\nvalues 2\n1\n"[..]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reproduces_linear_functions(
        seed in any::<u64>(),
        a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0,
    ) {
        let mesh = delaunay_triangulate(&random_points(60, seed, -1.0, 1.0)).unwrap();
        let lin = |p: &Point| a + b * p.x() + c * p.y();
        let field = NodalField::new(&mesh, mesh.nodes().iter().map(lin).collect()).unwrap();
        let mut r = rng(seed ^ 1);
        for e in 0..mesh.num_elements().min(40) {
            let v = mesh.element(e);
            let (s, t): (f64, f64) = (r.gen_range(0.0..1.0), r.gen_range(0.0..1.0));
            let (s, t) = if s + t > 1.0 { (1.0 - s, 1.0 - t) } else { (s, t) };
            let [p0, p1, p2] = [mesh.nodes()[v[0]], mesh.nodes()[v[1]], mesh.nodes()[v[2]]];
            let p = Point::new2(
                p0.x() + s * (p1.x() - p0.x()) + t * (p2.x() - p0.x()),
                p0.y() + s * (p1.y() - p0.y()) + t * (p2.y() - p0.y()),
            );
            let got = field.interpolate(&p).unwrap();
            prop_assert!((got - lin(&p)).abs() <= 1e-12 * (1.0 + lin(&p).abs()));
        }
    }

    #[test]
    fn reproduces_nodal_values_and_stays_in_range(seed in any::<u64>()) {
        let mesh = generate_graded_mesh(|p: &Point| 1.0 + p.x().abs(), 80, Rect::symmetric_unit(), seed).unwrap();
        let mut r = rng(seed);
        let values: Vec<f64> = (0..mesh.num_nodes()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let field = NodalField::new(&mesh, values.clone()).unwrap();
        for (p, &v) in mesh.nodes().iter().zip(&values) {
            prop_assert_eq!(field.interpolate(p).unwrap(), v);
        }
        for p in random_points(200, seed ^ 7, -1.0, 1.0) {
            let loc = mesh.locate(&p).unwrap();
            let vs: Vec<f64> = mesh.element(loc.element_index).iter().map(|&i| values[i]).collect();
            let lo = vs.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let got = field.interpolate(&p).unwrap();
            prop_assert!(got >= lo - 1e-14 && got <= hi + 1e-14);
        }
    }
}
