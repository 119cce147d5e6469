//! `MESHv1` text format.
//!
//! ```text
//! MESHv1 <dim>
//! nodes <N>
//! <x> [<y>]          (N lines)
//! elements <M>
//! <i> <j> [<k>]      (M lines, 0-based)
//! boundary <K>
//! <i>                (K lines)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::mesh::Mesh;
use super::point::Point;
use crate::error::{Error, Result};
use crate::textio::{fmt_real, Lines};

pub const MESH_MAGIC: &str = "MESHv1";

impl Mesh {
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{MESH_MAGIC} {}", self.dim())?;
        writeln!(w, "nodes {}", self.num_nodes())?;
        for p in self.nodes() {
            let row: Vec<String> = p.coords().iter().map(|&c| fmt_real(c)).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        writeln!(w, "elements {}", self.num_elements())?;
        for e in self.elements() {
            let row: Vec<String> = e.iter().map(|i| i.to_string()).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        writeln!(w, "boundary {}", self.boundary_nodes().len())?;
        for b in self.boundary_nodes() {
            writeln!(w, "{b}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<Mesh> {
        let mut lines = Lines::new(BufReader::new(r).lines());
        let (ln, header) = lines.next_required("mesh header")?;
        let dim = match header.split_whitespace().collect::<Vec<_>>()[..] {
            [MESH_MAGIC, d] => d
                .parse::<usize>()
                .ok()
                .filter(|d| *d == 1 || *d == 2)
                .ok_or_else(|| Error::parse(ln, format!("bad mesh dimension `{d}`")))?,
            _ => return Err(Error::parse(ln, format!("expected `{MESH_MAGIC} <dim>` header"))),
        };

        let n = lines.section("nodes")?;
        let mut nodes = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, vals) = lines.reals(dim)?;
            nodes.push(Point::from_slice(&vals).map_err(|e| Error::parse(ln, e.to_string()))?);
        }
        let m = lines.section("elements")?;
        let mut elems = Vec::with_capacity(m);
        for _ in 0..m {
            elems.push(lines.indices(dim + 1)?.1);
        }
        let k = lines.section("boundary")?;
        let mut boundary = Vec::with_capacity(k);
        for _ in 0..k {
            boundary.push(lines.indices(1)?.1[0]);
        }
        if dim == 1 {
            Mesh::from_segments(nodes, elems.into_iter().map(|e| [e[0], e[1]]).collect(), boundary)
        } else {
            Mesh::from_triangles(
                nodes,
                elems.into_iter().map(|e| [e[0], e[1], e[2]]).collect(),
                boundary,
            )
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Mesh> {
        Mesh::read_from(File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate_uniform_1d, generate_uniform_triangular, Interval, Rect};

    #[test]
    fn round_trip_is_exact() {
        let mesh = generate_uniform_triangular(3, 4, Rect::new(-0.7, 1.3, 0.1, 0.9)).unwrap();
        let mut buf = Vec::new();
        mesh.write_to(&mut buf).unwrap();
        let back = Mesh::read_from(&buf[..]).unwrap();
        assert_eq!(back.nodes(), mesh.nodes());
        assert_eq!(back.elements().collect::<Vec<_>>(), mesh.elements().collect::<Vec<_>>());
        assert_eq!(back.boundary_nodes(), mesh.boundary_nodes());

        let line = generate_uniform_1d(3, Interval::new(0.0, 1.0)).unwrap();
        let mut buf = Vec::new();
        line.write_to(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("MESHv1 1\nnodes 4\n"));
        assert_eq!(Mesh::read_from(&buf[..]).unwrap().nodes(), line.nodes());
    }

    #[test]
    fn malformed_files_name_the_line() {
        let bad = "MESHv1 2\nnodes 2\n0 0\n1\n";
        match Mesh::read_from(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Mesh::read_from("MESH 2\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
