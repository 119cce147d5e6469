//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use meshfree_transfer::geometry::{Mesh, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(n: usize, seed: u64, lo: f64, hi: f64) -> Vec<Point> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| Point::new2(r.gen_range(lo..hi), r.gen_range(lo..hi)))
        .collect()
}

/// Dense Gaussian elimination with partial pivoting on row-major `a`.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// `(HᵀH + λI) β = HᵀU` assembled entry by entry and solved by elimination.
pub fn ridge_oracle(h: &[Vec<f64>], u: &[f64], lambda: f64) -> Vec<f64> {
    let d = h[0].len();
    let mut a = vec![vec![0.0; d]; d];
    let mut rhs = vec![0.0; d];
    for (row, &ui) in h.iter().zip(u) {
        for i in 0..d {
            rhs[i] += row[i] * ui;
            for j in 0..d {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    for (i, r) in a.iter_mut().enumerate() {
        r[i] += lambda;
    }
    gauss_solve(a, rhs)
}

/// Circumcenter and squared radius of a triangle.
pub fn circumcircle(a: Point, b: Point, c: Point) -> (f64, f64, f64) {
    let (ax, ay) = (a.x(), a.y());
    let (bx, by) = (b.x() - ax, b.y() - ay);
    let (cx, cy) = (c.x() - ax, c.y() - ay);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    (ax + ux, ay + uy, ux * ux + uy * uy)
}

/// Number of (triangle, node) pairs with the node strictly inside the
/// circumcircle beyond `rel_tol` of the radius.
pub fn circumcircle_violations(mesh: &Mesh, rel_tol: f64) -> usize {
    let nodes = mesh.nodes();
    let mut bad = 0;
    for tri in mesh.elements() {
        let (cx, cy, r2) = circumcircle(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
        let r = r2.sqrt();
        for (k, p) in nodes.iter().enumerate() {
            if tri.contains(&k) {
                continue;
            }
            let d = ((p.x() - cx).powi(2) + (p.y() - cy).powi(2)).sqrt();
            if d < r * (1.0 - rel_tol) {
                bad += 1;
            }
        }
    }
    bad
}

pub fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()))
}

/// Piecewise-linear value by scanning every 1D segment.
pub fn segment_scan(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if nodes[i] <= x && x <= nodes[j] {
            let t = (x - nodes[i]) / (nodes[j] - nodes[i]);
            return (1.0 - t) * values[i] + t * values[j];
        }
    }
    panic!("{x} outside the mesh");
}
