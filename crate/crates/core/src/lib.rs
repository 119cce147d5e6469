//! Mesh-free transfer of scalar fields between non-matching meshes.
//!
//! The crate fits surrogate models ([`surrogate`]) to nodal samples and
//! evaluates them at the nodes of another mesh, alongside classical
//! piecewise-linear interpolation ([`baseline`]) for comparison. Mesh
//! generation and point location live in [`geometry`], benchmark fields and
//! training sets in [`dataset`], and the iterated transfer experiment in
//! [`transfer`].
//!
//! ```
//! use meshfree_transfer::dataset::{sample_at_nodes, BenchmarkField};
//! use meshfree_transfer::geometry::{derive_midpoint_mesh, generate_uniform_1d, Interval};
//! use meshfree_transfer::transfer::{ping_pong, PiecewiseLinear};
//!
//! let a = generate_uniform_1d(100, Interval::new(0.0, 1.0)).unwrap();
//! let b = derive_midpoint_mesh(&a).unwrap();
//! let report = ping_pong(&a, &b, &BenchmarkField::Sine1d, &PiecewiseLinear, 10).unwrap();
//! assert_eq!(report.steps.len(), 20);
//! # let _ = sample_at_nodes(&a, &BenchmarkField::Sine1d).unwrap();
//! ```

pub mod baseline;
pub mod dataset;
mod error;
pub mod geometry;
pub mod surrogate;
pub mod textio;
pub mod transfer;

pub use error::{Error, Result};

/// Compiles and runs the code blocks of the guide in `book/`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    mod overview {}
    #[doc = include_str!("../../../book/src/meshes.md")]
    mod meshes {}
    #[doc = include_str!("../../../book/src/baseline.md")]
    mod baseline {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/surrogates.md")]
    mod surrogates {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
}
