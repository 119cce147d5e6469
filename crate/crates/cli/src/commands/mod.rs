pub mod dataset;
pub mod eval;
pub mod fit;
pub mod mesh;
pub mod transfer;

use std::fs;
use std::path::Path;
use std::str::FromStr;

use meshfree_transfer::dataset::ScatteredDataset;
use meshfree_transfer::geometry::{Mesh, Point, MESH_MAGIC};
use meshfree_transfer::Error;

use crate::error::CliError;

pub fn load_mesh(path: &Path) -> Result<Mesh, CliError> {
    Mesh::load(path).map_err(|e| CliError::input(path, e))
}

pub fn load_dataset(path: &Path) -> Result<ScatteredDataset, CliError> {
    ScatteredDataset::load_csv(path).map_err(|e| CliError::input(path, e))
}

/// Comma-separated list, e.g. `2,64,64,1` or `-1,1,-1,1`.
pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{what}: cannot parse `{t}` in `{s}`")))
        })
        .collect()
}

/// Target points from a mesh file (its nodes) or a CSV whose header starts
/// with `x` or `x,y`; further columns are ignored.
pub fn load_targets(path: &Path) -> Result<Vec<Point>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(path, e.into()))?;
    if text.starts_with(MESH_MAGIC) {
        return Ok(load_mesh(path)?.nodes().to_vec());
    }
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').map(str::trim).collect();
    let dim = match header.as_slice() {
        ["x", "y", ..] => 2,
        ["x", ..] => 1,
        _ => {
            return Err(CliError::Usage(format!(
                "{}: line 1: expected a header starting with `x` or `x,y`",
                path.display()
            )))
        }
    };
    let mut points = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| CliError::input(path, Error::Parse { line: k + 2, message: m });
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < dim {
            return Err(bad(format!("expected at least {dim} columns")));
        }
        let coords = cols[..dim]
            .iter()
            .map(|c| c.trim().parse::<f64>().map_err(|_| bad(format!("`{c}` is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        points.push(Point::from_slice(&coords)?);
    }
    Ok(points)
}
