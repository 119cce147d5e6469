//! Piecewise-linear (P1) finite-element interpolation.
//!
//! A [`NodalField`] attaches one value to each mesh node. Evaluation locates
//! the containing element and blends its vertex values with the barycentric
//! weights, so the interpolant reproduces nodal values and linear functions
//! exactly and never leaves the range of the element's nodal values.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{Mesh, Point};
use crate::textio::{fmt_real, Lines};

pub const FIELD_MAGIC: &str = "FIELDv1";

/// Values attached to the nodes of a borrowed mesh.
#[derive(Clone, Debug)]
pub struct NodalField<'m> {
    mesh: &'m Mesh,
    values: Vec<f64>,
}

impl<'m> NodalField<'m> {
    pub fn new(mesh: &'m Mesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_nodes() {
            return Err(Error::invalid(format!(
                "field has {} values for {} nodes",
                values.len(),
                mesh.num_nodes()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at node {i}")));
        }
        Ok(NodalField { mesh, values })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Interpolated value at `x`; points outside the mesh are an error.
    pub fn interpolate(&self, x: &Point) -> Result<f64> {
        let loc = self.mesh.locate(x)?;
        let verts = self.mesh.element(loc.element_index);
        Ok(verts
            .iter()
            .zip(loc.barycentric())
            .map(|(&v, &w)| w * self.values[v])
            .sum())
    }

    /// Interpolates at every target, preserving order. The first target that
    /// falls outside the mesh aborts the batch with its index.
    pub fn interpolate_batch(&self, targets: &[Point]) -> Result<Vec<f64>> {
        targets
            .iter()
            .enumerate()
            .map(|(i, x)| {
                self.interpolate(x).map_err(|e| match e {
                    Error::PointOutsideDomain { point } => Error::TargetOutsideDomain { index: i, point },
                    other => other,
                })
            })
            .collect()
    }
}

/// Contents of a `FIELDv1` file: a mesh reference and one value per node.
///
/// ```text
/// FIELDv1
/// mesh <path>
/// values <N>
/// <value>            (N lines)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct FieldFile {
    pub mesh_path: PathBuf,
    pub values: Vec<f64>,
}

impl FieldFile {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{FIELD_MAGIC}")?;
        writeln!(w, "mesh {}", self.mesh_path.display())?;
        writeln!(w, "values {}", self.values.len())?;
        for v in &self.values {
            writeln!(w, "{}", fmt_real(*v))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<FieldFile> {
        let mut lines = Lines::new(BufReader::new(r).lines());
        let (ln, magic) = lines.next_required("field header")?;
        if magic.trim() != FIELD_MAGIC {
            return Err(Error::parse(ln, format!("expected `{FIELD_MAGIC}` header")));
        }
        let (ln, mesh_line) = lines.next_required("mesh reference")?;
        let mesh_path = mesh_line
            .strip_prefix("mesh ")
            .map(|p| PathBuf::from(p.trim()))
            .ok_or_else(|| Error::parse(ln, "expected `mesh <path>`"))?;
        let n = lines.section("values")?;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            values.push(lines.reals(1)?.1[0]);
        }
        Ok(FieldFile { mesh_path, values })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FieldFile> {
        FieldFile::read_from(File::open(path)?)
    }

    /// Mesh path resolved against the directory holding the field file.
    pub fn resolve_mesh_path(&self, field_path: &Path) -> PathBuf {
        if self.mesh_path.is_absolute() {
            self.mesh_path.clone()
        } else {
            field_path
                .parent()
                .map(|d| d.join(&self.mesh_path))
                .unwrap_or_else(|| self.mesh_path.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_uniform_1d, generate_uniform_triangular, Interval, Rect};

    #[test]
    fn linear_fields_are_reproduced() {
        let mesh = generate_uniform_triangular(6, 5, Rect::symmetric_unit()).unwrap();
        let f = |p: &Point| 2.0 * p.x() + 3.0 * p.y() - 1.0;
        let field = NodalField::new(&mesh, mesh.nodes().iter().map(f).collect()).unwrap();
        for (i, j) in [(0.13, -0.77), (0.5, 0.5), (-0.999, 0.999), (0.0, 0.0)] {
            let p = Point::new2(i, j);
            assert!((field.interpolate(&p).unwrap() - f(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn hat_in_1d() {
        let mesh = generate_uniform_1d(2, Interval::new(0.0, 1.0)).unwrap();
        let field = NodalField::new(&mesh, vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(field.interpolate(&Point::new1(0.25)).unwrap(), 0.5);
    }

    #[test]
    fn batch_edge_cases() {
        let mesh = generate_uniform_triangular(3, 3, Rect::symmetric_unit()).unwrap();
        let vals: Vec<f64> = (0..mesh.num_nodes()).map(|i| (i as f64).sin()).collect();
        let field = NodalField::new(&mesh, vals.clone()).unwrap();
        assert!(field.interpolate_batch(&[]).unwrap().is_empty());
        assert_eq!(field.interpolate_batch(mesh.nodes()).unwrap(), vals);
        let targets = [Point::new2(0.0, 0.0), Point::new2(1.5, 0.0)];
        assert!(matches!(
            field.interpolate_batch(&targets),
            Err(Error::TargetOutsideDomain { index: 1, .. })
        ));
    }

    #[test]
    fn wrong_value_count() {
        let mesh = generate_uniform_1d(2, Interval::new(0.0, 1.0)).unwrap();
        assert!(NodalField::new(&mesh, vec![0.0; 2]).is_err());
        assert!(NodalField::new(&mesh, vec![0.0, f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn field_file_round_trip() {
        let f = FieldFile {
            mesh_path: PathBuf::from("a.mesh"),
            values: vec![0.1, -2.5e-300, 1.0 / 3.0],
        };
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        assert_eq!(FieldFile::read_from(&buf[..]).unwrap(), f);
        assert_eq!(
            f.resolve_mesh_path(Path::new("/data/run/u.field")),
            PathBuf::from("/data/run/a.mesh")
        );
        assert!(FieldFile::read_from("FIELDv2\n".as_bytes()).is_err());
    }
}
