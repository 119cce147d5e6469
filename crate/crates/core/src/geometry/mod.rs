//! Meshes, mesh generators and point location.

mod delaunay;
mod generate;
mod io;
mod mesh;
mod point;

pub use delaunay::delaunay_triangulate;
pub use generate::{
    derive_midpoint_mesh, generate_graded_mesh, generate_uniform_1d, generate_uniform_triangular,
    Interval, Rect,
};
pub use io::MESH_MAGIC;
pub use mesh::{ElementLocation, Mesh, BARYCENTRIC_TOLERANCE, NODE_TOLERANCE};
pub use point::Point;

pub(crate) use point::find_near_duplicate;
