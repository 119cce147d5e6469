use std::fmt;

use crate::error::{Error, Result};

/// A location in a one- or two-dimensional domain.
///
/// Storage is a fixed pair; the unused second coordinate of a 1D point is
/// kept at zero so that equality and distance ignore it.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    xy: [f64; 2],
    dim: u8,
}

impl Point {
    pub fn new1(x: f64) -> Self {
        debug_assert!(x.is_finite());
        Point {
            xy: [x, 0.0],
            dim: 1,
        }
    }

    pub fn new2(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point { xy: [x, y], dim: 2 }
    }

    /// Builds a point from a coordinate slice of length 1 or 2.
    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        match coords {
            [x] => Ok(Point::new1(*x)),
            [x, y] => Ok(Point::new2(*x, *y)),
            _ => Err(Error::invalid(format!(
                "points have 1 or 2 coordinates, got {}",
                coords.len()
            ))),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.xy[..self.dim as usize]
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.xy[0]
    }

    /// Second coordinate; zero for 1D points.
    #[inline]
    pub fn y(&self) -> f64 {
        self.xy[1]
    }

    #[inline]
    pub(crate) fn xy(&self) -> [f64; 2] {
        self.xy
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.xy[0] - other.xy[0];
        let dy = self.xy[1] - other.xy[1];
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords()).finish()
    }
}

/// Returns the index of the first pair of points closer than `tol`, if any.
///
/// Sorts a permutation by first coordinate and sweeps, so typical inputs
/// cost `O(n log n)`.
pub(crate) fn find_near_duplicate(points: &[Point], tol: f64) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x().total_cmp(&points[b].x()));
    let tol2 = tol * tol;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if points[j].x() - points[i].x() > tol {
                break;
            }
            if points[i].dist2(&points[j]) <= tol2 {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}
