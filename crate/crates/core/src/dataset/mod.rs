//! Scattered training data: benchmark fields, nodal sampling, quadrature
//! enrichment and CSV storage.

mod fields;
mod quadrature;

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub use fields::{BenchmarkField, DEFAULT_MOVING_GAUSS_TIME};
pub use quadrature::TriangleRule;

use crate::baseline::NodalField;
use crate::error::{Error, Result};
use crate::geometry::{find_near_duplicate, Mesh, Point, NODE_TOLERANCE};
use crate::textio::{fmt_real, parse_real};

/// Paired sample points and scalar values.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteredDataset {
    dim: usize,
    points: Vec<Point>,
    values: Vec<f64>,
}

impl ScatteredDataset {
    /// Validates lengths, dimensions, finiteness and the 1e-12 no-duplicate rule.
    pub fn new(dim: usize, points: Vec<Point>, values: Vec<f64>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::invalid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if points.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at sample {i}")));
        }
        if let Some((i, j)) = find_near_duplicate(&points, NODE_TOLERANCE) {
            return Err(Error::invalid(format!("samples {i} and {j} coincide")));
        }
        Ok(ScatteredDataset { dim, points, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header = if self.dim == 1 { "x,value" } else { "x,y,value" };
        writeln!(w, "{header}")?;
        for (p, v) in self.points.iter().zip(&self.values) {
            let mut row: Vec<String> = p.coords().iter().map(|&c| fmt_real(c)).collect();
            row.push(fmt_real(*v));
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut lines = BufReader::new(r).lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        let dim = match header.trim() {
            "x,value" => 1,
            "x,y,value" => 2,
            other => {
                return Err(Error::parse(
                    1,
                    format!("expected header `x,value` or `x,y,value`, found `{other}`"),
                ))
            }
        };
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (k, line) in lines.enumerate() {
            let ln = k + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != dim + 1 {
                return Err(Error::parse(
                    ln,
                    format!("expected {} columns, found {}", dim + 1, cols.len()),
                ));
            }
            let nums = cols
                .iter()
                .map(|c| parse_real(c, ln))
                .collect::<Result<Vec<_>>>()?;
            points.push(Point::from_slice(&nums[..dim])?);
            values.push(nums[dim]);
        }
        ScatteredDataset::new(dim, points, values)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(File::open(path)?)
    }
}

/// Samples `field` at every node of `mesh`, in node order.
pub fn sample_at_nodes(mesh: &Mesh, field: &BenchmarkField) -> Result<ScatteredDataset> {
    if mesh.dim() != field.dim() {
        return Err(Error::invalid(format!(
            "{}D mesh cannot sample the {}D field {}",
            mesh.dim(),
            field.dim(),
            field.name()
        )));
    }
    let values = mesh
        .nodes()
        .iter()
        .map(|p| field.eval(p))
        .collect::<Result<Vec<_>>>()?;
    ScatteredDataset::new(mesh.dim(), mesh.nodes().to_vec(), values)
}

/// Where enrichment samples take their values from.
#[derive(Clone, Copy, Debug)]
pub enum EnrichmentSource<'a> {
    Analytic(&'a BenchmarkField),
    /// Piecewise-linear interpolation of a nodal field.
    Nodal(&'a NodalField<'a>),
}

impl EnrichmentSource<'_> {
    fn value(&self, p: &Point) -> Result<f64> {
        match self {
            EnrichmentSource::Analytic(f) => f.eval(p),
            EnrichmentSource::Nodal(f) => f.interpolate(p),
        }
    }
}

/// Appends quadrature points of every triangle whose area exceeds
/// `area_threshold`, skipping points within 1e-12 of an existing sample.
pub fn enrich_with_quadrature(
    mesh: &Mesh,
    base: &ScatteredDataset,
    source: EnrichmentSource<'_>,
    area_threshold: f64,
    points_per_element: usize,
) -> Result<ScatteredDataset> {
    let rule = TriangleRule::with_points(points_per_element).ok_or_else(|| {
        Error::invalid(format!(
            "no quadrature rule with {points_per_element} points (supported: 1, 3, 16)"
        ))
    })?;
    if mesh.dim() != 2 || base.dim() != 2 {
        return Err(Error::invalid("quadrature enrichment needs a 2D mesh and dataset"));
    }
    if !(area_threshold > 0.0) {
        return Err(Error::invalid(format!(
            "area threshold must be positive, got {area_threshold}"
        )));
    }

    let mut seen = PointHash::new(base.points());
    let mut points = base.points.clone();
    let mut values = base.values.clone();
    for e in 0..mesh.num_elements() {
        if mesh.element_measure(e) <= area_threshold {
            continue;
        }
        let v = mesh.element(e);
        let [a, b, c] = [mesh.nodes()[v[0]], mesh.nodes()[v[1]], mesh.nodes()[v[2]]];
        for w in &rule.points {
            let p = Point::new2(
                w[0] * a.x() + w[1] * b.x() + w[2] * c.x(),
                w[0] * a.y() + w[1] * b.y() + w[2] * c.y(),
            );
            if seen.insert(&p, points.len(), &points) {
                values.push(source.value(&p)?);
                points.push(p);
            }
        }
    }
    ScatteredDataset::new(2, points, values)
}

/// Hash grid for near-duplicate rejection.
struct PointHash {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl PointHash {
    const CELL: f64 = 1e-6;

    fn key(p: &Point) -> (i64, i64) {
        ((p.x() / Self::CELL).floor() as i64, (p.y() / Self::CELL).floor() as i64)
    }

    fn new(points: &[Point]) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(p)).or_default().push(i);
        }
        PointHash { cells }
    }

    /// Registers `p` as index `id` unless a stored point is within tolerance.
    fn insert(&mut self, p: &Point, id: usize, points: &[Point]) -> bool {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    if ids.iter().any(|&i| points[i].dist(p) <= NODE_TOLERANCE) {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((kx, ky)).or_default().push(id);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_uniform_triangular, Rect};

    fn quad() -> Mesh {
        generate_uniform_triangular(1, 1, Rect::symmetric_unit()).unwrap()
    }

    #[test]
    fn sampling_follows_node_order() {
        let mesh = quad();
        let d = sample_at_nodes(&mesh, &BenchmarkField::Paraboloid2d).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.values(), &[-2.0, -2.0, -2.0, -2.0]);
        assert!(sample_at_nodes(&mesh, &BenchmarkField::Sine1d).is_err());
    }

    #[test]
    fn enrichment_counts() {
        let mesh = quad();
        let base = sample_at_nodes(&mesh, &BenchmarkField::Osc2d).unwrap();
        let src = EnrichmentSource::Analytic(&BenchmarkField::Osc2d);
        let same = enrich_with_quadrature(&mesh, &base, src, 10.0, 16).unwrap();
        assert_eq!(same, base);
        let more = enrich_with_quadrature(&mesh, &base, src, 1.0, 16).unwrap();
        assert_eq!(more.len(), 4 + 32);
        assert_eq!(&more.points()[..4], base.points());
        assert!(enrich_with_quadrature(&mesh, &base, src, 1.0, 5).is_err());
        assert!(enrich_with_quadrature(&mesh, &base, src, 0.0, 3).is_err());
    }

    #[test]
    fn enrichment_from_nodal_field_uses_interpolation() {
        let mesh = quad();
        let f = |p: &Point| 1.0 + p.x() - 2.0 * p.y();
        let nodal = NodalField::new(&mesh, mesh.nodes().iter().map(f).collect()).unwrap();
        let base = ScatteredDataset::new(2, mesh.nodes().to_vec(), nodal.values().to_vec()).unwrap();
        let out = enrich_with_quadrature(&mesh, &base, EnrichmentSource::Nodal(&nodal), 0.5, 3).unwrap();
        assert_eq!(out.len(), 10);
        for (p, v) in out.points().iter().zip(out.values()) {
            assert!((v - f(p)).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let d = ScatteredDataset::new(
            2,
            vec![Point::new2(0.1, 1.0 / 3.0), Point::new2(-1.0, 7e-300)],
            vec![std::f64::consts::PI, -0.0],
        )
        .unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        assert_eq!(ScatteredDataset::read_csv(&buf[..]).unwrap(), d);

        let empty = ScatteredDataset::new(1, vec![], vec![]).unwrap();
        let mut buf = Vec::new();
        empty.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,value\n");

        let bad = "x,y,value\n0,0,1\n0.5\n";
        match ScatteredDataset::read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_samples_rejected() {
        let r = ScatteredDataset::new(1, vec![Point::new1(0.0), Point::new1(0.0)], vec![1.0, 2.0]);
        assert!(r.is_err());
    }
}
