use super::point::{find_near_duplicate, Point};
use crate::error::{Error, Result};

/// Node dedup tolerance (absolute, domain units).
pub const NODE_TOLERANCE: f64 = 1e-12;

/// Smallest barycentric weight accepted as "inside" an element.
pub const BARYCENTRIC_TOLERANCE: f64 = -1e-12;

#[derive(Clone, Debug, PartialEq)]
enum Cells {
    Segments(Vec<[usize; 2]>),
    Triangles(Vec<[usize; 3]>),
}

/// Unstructured simplicial mesh: segments in 1D, triangles in 2D.
///
/// Meshes are immutable once built. Construction validates the connectivity,
/// orients every triangle counter-clockwise and builds the spatial bins used
/// by [`Mesh::locate`].
#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    nodes: Vec<Point>,
    cells: Cells,
    boundary: Vec<usize>,
    bins: BinIndex,
}

/// Containing element of a point together with its barycentric weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementLocation {
    pub element_index: usize,
    weights: [f64; 3],
    len: usize,
}

impl ElementLocation {
    /// Weights ordered like the element's vertex list.
    pub fn barycentric(&self) -> &[f64] {
        &self.weights[..self.len]
    }
}

impl Mesh {
    /// Builds a 1D mesh. Segments are re-oriented so the first vertex has the
    /// smaller coordinate.
    pub fn from_segments(
        nodes: Vec<Point>,
        segments: Vec<[usize; 2]>,
        boundary: Vec<usize>,
    ) -> Result<Mesh> {
        check_nodes(&nodes, 1)?;
        let mut segments = segments;
        for (e, seg) in segments.iter_mut().enumerate() {
            check_indices(e, seg, nodes.len())?;
            let (a, b) = (nodes[seg[0]].x(), nodes[seg[1]].x());
            if a == b {
                return Err(Error::DegenerateGeometry(format!(
                    "segment {e} has zero length"
                )));
            }
            if a > b {
                seg.swap(0, 1);
            }
        }
        Self::finish(1, nodes, Cells::Segments(segments), boundary)
    }

    /// Builds a 2D triangle mesh. Clockwise triangles are flipped; zero-area
    /// triangles are rejected.
    pub fn from_triangles(
        nodes: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<usize>,
    ) -> Result<Mesh> {
        check_nodes(&nodes, 2)?;
        let mut triangles = triangles;
        for (e, tri) in triangles.iter_mut().enumerate() {
            check_indices(e, tri, nodes.len())?;
            let o = orient(&nodes[tri[0]], &nodes[tri[1]], &nodes[tri[2]]);
            if o == 0.0 {
                return Err(Error::DegenerateGeometry(format!(
                    "triangle {e} has zero area"
                )));
            }
            if o < 0.0 {
                tri.swap(1, 2);
            }
        }
        Self::finish(2, nodes, Cells::Triangles(triangles), boundary)
    }

    fn finish(dim: usize, nodes: Vec<Point>, cells: Cells, boundary: Vec<usize>) -> Result<Mesh> {
        if let Some(&b) = boundary.iter().find(|&&b| b >= nodes.len()) {
            return Err(Error::invalid(format!(
                "boundary index {b} out of range for {} nodes",
                nodes.len()
            )));
        }
        let mut mesh = Mesh {
            dim,
            nodes,
            cells,
            boundary,
            bins: BinIndex::default(),
        };
        mesh.bins = BinIndex::build(&mesh);
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        match &self.cells {
            Cells::Segments(s) => s.len(),
            Cells::Triangles(t) => t.len(),
        }
    }

    /// Vertex indices of element `e` (2 in 1D, 3 in 2D).
    pub fn element(&self, e: usize) -> &[usize] {
        match &self.cells {
            Cells::Segments(s) => &s[e][..],
            Cells::Triangles(t) => &t[e][..],
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.num_elements()).map(move |e| self.element(e))
    }

    pub fn boundary_nodes(&self) -> &[usize] {
        &self.boundary
    }

    /// Axis-aligned bounding box as `(min, max)`; the unused axis is zero in 1D.
    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        bbox_of(&self.nodes)
    }

    /// Length (1D) or area (2D) of element `e`.
    pub fn element_measure(&self, e: usize) -> f64 {
        let v = self.element(e);
        if self.dim == 1 {
            self.nodes[v[1]].x() - self.nodes[v[0]].x()
        } else {
            let [a, b, c] = [&self.nodes[v[0]], &self.nodes[v[1]], &self.nodes[v[2]]];
            0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()))
        }
    }

    /// Per-element lengths or areas, in element order.
    pub fn element_measures(&self) -> Vec<f64> {
        (0..self.num_elements())
            .map(|e| self.element_measure(e))
            .collect()
    }

    /// Element centroid (segment midpoint in 1D).
    pub fn element_centroid(&self, e: usize) -> Point {
        let v = self.element(e);
        if self.dim == 1 {
            Point::new1(0.5 * (self.nodes[v[0]].x() + self.nodes[v[1]].x()))
        } else {
            let (mut x, mut y) = (0.0, 0.0);
            for &i in v {
                x += self.nodes[i].x();
                y += self.nodes[i].y();
            }
            Point::new2(x / 3.0, y / 3.0)
        }
    }

    /// Barycentric weights of `p` with respect to element `e`. Weights are
    /// not clamped: points outside the element get negative entries.
    pub fn barycentric(&self, e: usize, p: &Point) -> ElementLocation {
        let v = self.element(e);
        let mut weights = [0.0; 3];
        if self.dim == 1 {
            let (a, b) = (self.nodes[v[0]].x(), self.nodes[v[1]].x());
            let t = (p.x() - a) / (b - a);
            weights[0] = 1.0 - t;
            weights[1] = t;
        } else {
            let [a, b, c] = [&self.nodes[v[0]], &self.nodes[v[1]], &self.nodes[v[2]]];
            let det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
            let wb = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
            let wc = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
            weights = [1.0 - wb - wc, wb, wc];
        }
        ElementLocation {
            element_index: e,
            weights,
            len: self.dim + 1,
        }
    }

    /// Finds the lowest-indexed element whose barycentric weights for `p` are
    /// all at least [`BARYCENTRIC_TOLERANCE`].
    pub fn locate(&self, p: &Point) -> Result<ElementLocation> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        self.bins
            .candidates(p)
            .iter()
            .map(|&e| self.barycentric(e as usize, p))
            .find(|loc| loc.barycentric().iter().all(|&w| w >= BARYCENTRIC_TOLERANCE))
            .ok_or_else(|| Error::PointOutsideDomain {
                point: p.coords().to_vec(),
            })
    }

    /// Reference implementation of [`Mesh::locate`] that scans every element.
    pub fn locate_exhaustive(&self, p: &Point) -> Option<ElementLocation> {
        (0..self.num_elements())
            .map(|e| self.barycentric(e, p))
            .find(|loc| loc.barycentric().iter().all(|&w| w >= BARYCENTRIC_TOLERANCE))
    }
}

fn check_nodes(nodes: &[Point], dim: usize) -> Result<()> {
    if let Some(p) = nodes.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    if let Some(p) = nodes.iter().find(|p| p.coords().iter().any(|c| !c.is_finite())) {
        return Err(Error::invalid(format!("non-finite node {p:?}")));
    }
    if let Some((i, j)) = find_near_duplicate(nodes, NODE_TOLERANCE) {
        return Err(Error::invalid(format!(
            "nodes {i} and {j} coincide within {NODE_TOLERANCE}"
        )));
    }
    Ok(())
}

fn check_indices(e: usize, idx: &[usize], n: usize) -> Result<()> {
    if let Some(&i) = idx.iter().find(|&&i| i >= n) {
        return Err(Error::invalid(format!(
            "element {e} references node {i} but the mesh has {n} nodes"
        )));
    }
    for (k, &i) in idx.iter().enumerate() {
        if idx[k + 1..].contains(&i) {
            return Err(Error::DegenerateGeometry(format!(
                "element {e} repeats node {i}"
            )));
        }
    }
    Ok(())
}

/// Exact orientation sign: positive for counter-clockwise `a, b, c`.
pub(crate) fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

pub(crate) fn coord(p: &Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x(), y: p.y() }
}

pub(crate) fn bbox_of(points: &[Point]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        let xy = p.xy();
        for k in 0..2 {
            lo[k] = lo[k].min(xy[k]);
            hi[k] = hi[k].max(xy[k]);
        }
    }
    (lo, hi)
}

/// Uniform grid of bins over the mesh bounding box. Each bin lists, in
/// ascending order, the elements whose padded bounding box touches it.
#[derive(Clone, Debug, Default)]
struct BinIndex {
    origin: [f64; 2],
    size: [f64; 2],
    counts: [usize; 2],
    pad: f64,
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl BinIndex {
    fn build(mesh: &Mesh) -> BinIndex {
        let m = mesh.num_elements();
        let (lo, hi) = mesh.bounding_box();
        let extent = [(hi[0] - lo[0]).max(0.0), (hi[1] - lo[1]).max(0.0)];
        let pad = 1e-10 * extent[0].max(extent[1]).max(1e-300);
        let counts = if mesh.dim == 1 || extent[1] == 0.0 {
            [m.max(1), 1]
        } else {
            let aspect = extent[0] / extent[1];
            let nx = ((m as f64 * aspect).sqrt().ceil() as usize).max(1);
            let ny = (m.div_ceil(nx)).max(1);
            [nx, ny]
        };
        let size = [
            (extent[0] / counts[0] as f64).max(f64::MIN_POSITIVE),
            (extent[1] / counts[1] as f64).max(f64::MIN_POSITIVE),
        ];
        let mut bins = BinIndex {
            origin: lo,
            size,
            counts,
            pad,
            offsets: vec![0; counts[0] * counts[1] + 1],
            items: Vec::new(),
        };

        let ranges: Vec<_> = (0..m)
            .map(|e| {
                let pts: Vec<Point> = mesh.element(e).iter().map(|&i| mesh.nodes[i]).collect();
                let (elo, ehi) = bbox_of(&pts);
                let (x0, y0) = bins.cell(elo[0] - pad, elo[1] - pad);
                let (x1, y1) = bins.cell(ehi[0] + pad, ehi[1] + pad);
                (x0, x1, y0, y1)
            })
            .collect();
        for &(x0, x1, y0, y1) in &ranges {
            for j in y0..=y1 {
                for i in x0..=x1 {
                    bins.offsets[j * counts[0] + i + 1] += 1;
                }
            }
        }
        for k in 1..bins.offsets.len() {
            bins.offsets[k] += bins.offsets[k - 1];
        }
        let mut fill = bins.offsets.clone();
        bins.items = vec![0; *bins.offsets.last().unwrap()];
        for (e, &(x0, x1, y0, y1)) in ranges.iter().enumerate() {
            for j in y0..=y1 {
                for i in x0..=x1 {
                    let b = j * counts[0] + i;
                    bins.items[fill[b]] = e as u32;
                    fill[b] += 1;
                }
            }
        }
        bins
    }

    fn cell(&self, x: f64, y: f64) -> (usize, usize) {
        let clamp = |v: f64, k: usize| -> usize {
            let c = ((v - self.origin[k]) / self.size[k]).floor();
            if c <= 0.0 {
                0
            } else {
                (c as usize).min(self.counts[k] - 1)
            }
        };
        (clamp(x, 0), clamp(y, 1))
    }

    fn candidates(&self, p: &Point) -> &[u32] {
        let xy = p.xy();
        for k in 0..2 {
            let hi = self.origin[k] + self.size[k] * self.counts[k] as f64;
            if xy[k] < self.origin[k] - self.pad || xy[k] > hi + self.pad {
                return &[];
            }
        }
        let (i, j) = self.cell(xy[0], xy[1]);
        let b = j * self.counts[0] + i;
        &self.items[self.offsets[b]..self.offsets[b + 1]]
    }
}
