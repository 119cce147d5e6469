//! Incremental Bowyer–Watson triangulation.
//!
//! Points are inserted in a snake-ordered sweep so that the walk from the
//! previously created triangle to the next containing triangle stays short.
//! Orientation and in-circle decisions use exact adaptive predicates, so the
//! cavity of every insertion is star-shaped and the result is Delaunay up to
//! cocircular ties, which fall to insertion order.

use std::collections::{HashMap, HashSet};

use super::mesh::{coord, orient, Mesh, NODE_TOLERANCE};
use super::point::{find_near_duplicate, Point};
use crate::error::{Error, Result};

/// Super-triangle size relative to the point-cloud extent. Large enough that
/// no hull triangle of a unit-scale cloud has a circumcircle reaching it.
const SUPER_SCALE: f64 = 1e6;

#[derive(Clone, Copy, Debug)]
struct Tri {
    v: [usize; 3],
    /// `n[i]` is the neighbour across the edge opposite `v[i]`.
    n: [Option<usize>; 3],
    alive: bool,
}

struct Triangulation {
    pts: Vec<Point>,
    tris: Vec<Tri>,
    last: usize,
}

impl Triangulation {
    fn incircle(&self, t: usize, p: &Point) -> f64 {
        let v = self.tris[t].v;
        robust::incircle(
            coord(&self.pts[v[0]]),
            coord(&self.pts[v[1]]),
            coord(&self.pts[v[2]]),
            coord(p),
        )
    }

    /// Visibility walk from the last created triangle.
    fn locate(&self, p: &Point) -> usize {
        let mut t = self.last;
        let mut rot = 0usize;
        loop {
            let tri = &self.tris[t];
            let mut next = None;
            for k in 0..3 {
                let i = (rot + k) % 3;
                let a = &self.pts[tri.v[(i + 1) % 3]];
                let b = &self.pts[tri.v[(i + 2) % 3]];
                if orient(a, b, p) < 0.0 {
                    next = tri.n[i];
                    break;
                }
            }
            match next {
                Some(n) => {
                    t = n;
                    rot = rot.wrapping_add(1);
                }
                None => return t,
            }
        }
    }

    fn insert(&mut self, pi: usize) {
        let p = self.pts[pi];
        let start = self.locate(&p);

        let mut in_cavity = HashSet::new();
        let mut stack = vec![start];
        in_cavity.insert(start);
        let mut cavity = Vec::new();
        while let Some(t) = stack.pop() {
            cavity.push(t);
            for n in self.tris[t].n.into_iter().flatten() {
                if !in_cavity.contains(&n) && self.incircle(n, &p) > 0.0 {
                    in_cavity.insert(n);
                    stack.push(n);
                }
            }
        }

        // Boundary edges (a, b) keep the counter-clockwise orientation of the
        // cavity triangle they came from.
        let mut boundary = Vec::new();
        for &t in &cavity {
            let tri = self.tris[t];
            for i in 0..3 {
                let outside = tri.n[i].filter(|n| !in_cavity.contains(n));
                if tri.n[i].is_none() || outside.is_some() {
                    boundary.push((tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], outside, t));
                }
            }
        }
        for &t in &cavity {
            self.tris[t].alive = false;
        }

        let mut by_start = HashMap::with_capacity(boundary.len());
        let mut by_end = HashMap::with_capacity(boundary.len());
        let first = self.tris.len();
        for (k, &(a, b, outside, from)) in boundary.iter().enumerate() {
            let id = first + k;
            self.tris.push(Tri {
                v: [a, b, pi],
                n: [None, None, outside],
                alive: true,
            });
            by_start.insert(a, id);
            by_end.insert(b, id);
            if let Some(o) = outside {
                let slot = self.tris[o]
                    .n
                    .iter()
                    .position(|&n| n == Some(from))
                    .expect("outside neighbour points back into the cavity");
                self.tris[o].n[slot] = Some(id);
            }
        }
        for k in 0..boundary.len() {
            let id = first + k;
            let [a, b, _] = self.tris[id].v;
            // Edge opposite `a` is (b, p): shared with the triangle starting at b.
            self.tris[id].n[0] = by_start.get(&b).copied();
            // Edge opposite `b` is (p, a): shared with the triangle ending at a.
            self.tris[id].n[1] = by_end.get(&a).copied();
        }
        self.last = first;
    }
}

/// Order of insertion: rows of a coarse grid, alternating direction.
fn snake_order(points: &[Point]) -> Vec<usize> {
    let n = points.len();
    let (lo, hi) = super::mesh::bbox_of(points);
    let rows = ((n as f64).sqrt() / 2.0).ceil().max(1.0);
    let h = ((hi[1] - lo[1]) / rows).max(f64::MIN_POSITIVE);
    let mut keyed: Vec<(usize, f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let r = (((p.y() - lo[1]) / h) as usize).min(rows as usize - 1);
            let x = if r % 2 == 0 { p.x() } else { -p.x() };
            (r, x, i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    keyed.into_iter().map(|k| k.2).collect()
}

/// Delaunay triangulation of a 2D point set covering its convex hull.
///
/// Every input point becomes a node, in input order. Boundary nodes are the
/// vertices of hull edges.
pub fn delaunay_triangulate(points: &[Point]) -> Result<Mesh> {
    if points.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    if let Some((i, j)) = find_near_duplicate(points, NODE_TOLERANCE) {
        return Err(Error::invalid(format!("points {i} and {j} coincide")));
    }
    let p0 = points[0];
    let p1 = points[1];
    if points[2..].iter().all(|q| orient(&p0, &p1, q) == 0.0) {
        return Err(Error::DegenerateGeometry("all points are collinear".into()));
    }

    let n = points.len();
    let (lo, hi) = super::mesh::bbox_of(points);
    let cx = 0.5 * (lo[0] + hi[0]);
    let cy = 0.5 * (lo[1] + hi[1]);
    let m = (hi[0] - lo[0]).max(hi[1] - lo[1]) * SUPER_SCALE;
    let mut pts = points.to_vec();
    pts.push(Point::new2(cx - 2.0 * m, cy - m));
    pts.push(Point::new2(cx + 2.0 * m, cy - m));
    pts.push(Point::new2(cx, cy + 2.0 * m));

    let mut tr = Triangulation {
        pts,
        tris: vec![Tri {
            v: [n, n + 1, n + 2],
            n: [None; 3],
            alive: true,
        }],
        last: 0,
    };
    for i in snake_order(points) {
        tr.insert(i);
    }

    let triangles: Vec<[usize; 3]> = tr
        .tris
        .iter()
        .filter(|t| t.alive && t.v.iter().all(|&v| v < n))
        .map(|t| t.v)
        .collect();
    if triangles.is_empty() {
        return Err(Error::DegenerateGeometry("no triangles produced".into()));
    }

    let mut edge_count: HashMap<(usize, usize), u32> = HashMap::new();
    for t in &triangles {
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            *edge_count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut boundary: Vec<usize> = edge_count
        .iter()
        .filter(|(_, &c)| c == 1)
        .flat_map(|(&(a, b), _)| [a, b])
        .collect();
    boundary.sort_unstable();
    boundary.dedup();

    Mesh::from_triangles(points.to_vec(), triangles, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points_one_triangle() {
        let pts = [Point::new2(0.0, 0.0), Point::new2(1.0, 0.0), Point::new2(0.2, 0.7)];
        let mesh = delaunay_triangulate(&pts).unwrap();
        assert_eq!(mesh.num_elements(), 1);
        assert_eq!(mesh.boundary_nodes(), &[0, 1, 2]);
    }

    #[test]
    fn degenerate_inputs() {
        let two = [Point::new2(0.0, 0.0), Point::new2(1.0, 0.0)];
        assert!(matches!(delaunay_triangulate(&two), Err(Error::DegenerateGeometry(_))));
        let line: Vec<_> = (0..5).map(|i| Point::new2(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(delaunay_triangulate(&line), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn collinear_hull_points_are_covered() {
        // Lattice with many collinear boundary points: coverage must be exact.
        let mut pts = Vec::new();
        for j in 0..=6 {
            for i in 0..=6 {
                pts.push(Point::new2(i as f64 / 6.0, j as f64 / 6.0));
            }
        }
        let mesh = delaunay_triangulate(&pts).unwrap();
        let area: f64 = mesh.element_measures().iter().sum();
        assert!((area - 1.0).abs() < 1e-12);
        assert_eq!(mesh.num_elements(), 72);
        assert_eq!(mesh.boundary_nodes().len(), 24);
    }
}
