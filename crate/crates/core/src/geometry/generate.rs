use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::delaunay::delaunay_triangulate;
use super::mesh::{Mesh, NODE_TOLERANCE};
use super::point::Point;
use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Rect {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// The square `[-1, 1]²` used by all 2D benchmark fields.
    pub const fn symmetric_unit() -> Self {
        Rect::new(-1.0, 1.0, -1.0, 1.0)
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::invalid(format!("degenerate bounds {self:?}")));
        }
        Ok(())
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
}

fn lattice(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / n as f64)
    }
}

/// Regular lattice of `(nx+1)(ny+1)` nodes, each cell split along its
/// lower-left to upper-right diagonal.
///
/// ```
/// use meshfree_transfer::geometry::{generate_uniform_triangular, Rect};
///
/// let mesh = generate_uniform_triangular(49, 49, Rect::symmetric_unit()).unwrap();
/// assert_eq!(mesh.num_nodes(), 2_500);
/// assert_eq!(mesh.num_elements(), 2 * 49 * 49);
/// ```
pub fn generate_uniform_triangular(nx: usize, ny: usize, bounds: Rect) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::invalid("cell counts must be at least 1"));
    }
    bounds.validate()?;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut boundary = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            if i == 0 || j == 0 || i == nx || j == ny {
                boundary.push(nodes.len());
            }
            nodes.push(Point::new2(
                lattice(bounds.x_min, bounds.x_max, i, nx),
                lattice(bounds.y_min, bounds.y_max, j, ny),
            ));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v11, v01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Mesh::from_triangles(nodes, triangles, boundary)
}

/// `n + 1` equally spaced nodes on `interval`, joined by `n` segments.
pub fn generate_uniform_1d(n: usize, interval: Interval) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::invalid("cell count must be at least 1"));
    }
    if !(interval.lo.is_finite() && interval.hi.is_finite()) || interval.hi <= interval.lo {
        return Err(Error::invalid(format!("degenerate interval {interval:?}")));
    }
    let nodes = (0..=n)
        .map(|i| Point::new1(lattice(interval.lo, interval.hi, i, n)))
        .collect();
    let segments = (0..n).map(|i| [i, i + 1]).collect();
    Mesh::from_segments(nodes, segments, vec![0, n])
}

/// 1D mesh over sorted distinct coordinates.
fn chain_1d(mut xs: Vec<f64>) -> Result<Mesh> {
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= NODE_TOLERANCE);
    let n = xs.len();
    let nodes = xs.into_iter().map(Point::new1).collect();
    let segments = (0..n.saturating_sub(1)).map(|i| [i, i + 1]).collect();
    Mesh::from_segments(nodes, segments, vec![0, n - 1])
}

/// Companion mesh built from element midpoints plus the source boundary.
///
/// In 1D the nodes are the segment midpoints and the interval endpoints. In
/// 2D they are the triangle barycentres (one per element, in element order)
/// followed by the source boundary nodes, Delaunay-triangulated.
pub fn derive_midpoint_mesh(source: &Mesh) -> Result<Mesh> {
    if source.num_elements() == 0 {
        return Err(Error::invalid("source mesh has no elements"));
    }
    let mut points: Vec<Point> = (0..source.num_elements())
        .map(|e| source.element_centroid(e))
        .collect();
    if source.dim() == 1 {
        let (lo, hi) = source.bounding_box();
        let mut xs: Vec<f64> = points.iter().map(|p| p.x()).collect();
        xs.push(lo[0]);
        xs.push(hi[0]);
        return chain_1d(xs);
    }
    points.extend(source.boundary_nodes().iter().map(|&i| source.nodes()[i]));
    delaunay_triangulate(&points)
}

/// Density-graded mesh: a ring of boundary nodes plus interior nodes drawn by
/// rejection sampling proportional to `density`, then Delaunay-triangulated.
///
/// The ring has `4·max(1, round(√target / 2))` nodes; the interior takes the
/// rest, so the node count equals `target_nodes` exactly.
pub fn generate_graded_mesh<F>(density: F, target_nodes: usize, bounds: Rect, seed: u64) -> Result<Mesh>
where
    F: Fn(&Point) -> f64,
{
    bounds.validate()?;
    if target_nodes < 4 {
        return Err(Error::invalid(format!(
            "graded mesh needs at least 4 nodes, got {target_nodes}"
        )));
    }
    let per_side = (((target_nodes as f64).sqrt() / 2.0).round() as usize).max(1);
    let ring = ring_nodes(bounds, per_side);
    let interior = target_nodes.saturating_sub(ring.len());

    let probe = 101;
    let mut envelope = 0.0f64;
    for j in 0..probe {
        for i in 0..probe {
            let p = Point::new2(
                lattice(bounds.x_min, bounds.x_max, i, probe - 1),
                lattice(bounds.y_min, bounds.y_max, j, probe - 1),
            );
            let d = checked_density(&density, &p)?;
            envelope = envelope.max(d);
        }
    }
    envelope *= 1.25;

    let margin = 1e-3 * (bounds.x_max - bounds.x_min).min(bounds.y_max - bounds.y_min);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = ring;
    let mut accepted = 0;
    let mut attempts = 0usize;
    while accepted < interior {
        attempts += 1;
        if attempts > 10_000 * (interior + 1) + 1_000_000 {
            return Err(Error::invalid("rejection sampling did not converge"));
        }
        let p = Point::new2(
            rng.gen_range(bounds.x_min + margin..bounds.x_max - margin),
            rng.gen_range(bounds.y_min + margin..bounds.y_max - margin),
        );
        let d = checked_density(&density, &p)?;
        envelope = envelope.max(d);
        if rng.gen::<f64>() * envelope < d {
            nodes.push(p);
            accepted += 1;
        }
    }
    delaunay_triangulate(&nodes)
}

fn checked_density<F: Fn(&Point) -> f64>(density: &F, p: &Point) -> Result<f64> {
    let d = density(p);
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::invalid(format!(
            "density must be positive and finite, got {d} at {p:?}"
        )));
    }
    Ok(d)
}

fn ring_nodes(b: Rect, per_side: usize) -> Vec<Point> {
    let mut ring = Vec::with_capacity(4 * per_side);
    for i in 0..per_side {
        ring.push(Point::new2(lattice(b.x_min, b.x_max, i, per_side), b.y_min));
    }
    for j in 0..per_side {
        ring.push(Point::new2(b.x_max, lattice(b.y_min, b.y_max, j, per_side)));
    }
    for i in (1..=per_side).rev() {
        ring.push(Point::new2(lattice(b.x_min, b.x_max, i, per_side), b.y_max));
    }
    for j in (1..=per_side).rev() {
        ring.push(Point::new2(b.x_min, lattice(b.y_min, b.y_max, j, per_side)));
    }
    ring
}
