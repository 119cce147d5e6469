use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Lloyd iterations run by the k-means strategy.
pub const KMEANS_ITERATIONS: usize = 50;

/// How RBF centers are chosen from the training points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterStrategy {
    /// Distinct training points drawn without replacement.
    Random,
    /// Lattice over the data bounding box, truncated to the requested count.
    UniformGrid,
    /// Lloyd's algorithm from a k-means++ seeding.
    KMeans,
}

impl fmt::Display for CenterStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CenterStrategy::Random => "random",
            CenterStrategy::UniformGrid => "uniform_grid",
            CenterStrategy::KMeans => "kmeans",
        })
    }
}

impl FromStr for CenterStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(CenterStrategy::Random),
            "uniform_grid" | "grid" => Ok(CenterStrategy::UniformGrid),
            "kmeans" => Ok(CenterStrategy::KMeans),
            _ => Err(Error::invalid(format!("unknown center strategy `{s}`"))),
        }
    }
}

/// Picks `count` centers from `points`.
pub fn select_centers(
    points: &[Point],
    count: usize,
    strategy: CenterStrategy,
    seed: u64,
) -> Result<Vec<Point>> {
    if count == 0 {
        return Err(Error::invalid("need at least one center"));
    }
    if points.is_empty() {
        return Err(Error::invalid("no data points to place centers on"));
    }
    if strategy != CenterStrategy::UniformGrid && count > points.len() {
        return Err(Error::invalid(format!(
            "{count} centers requested from {} points",
            points.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match strategy {
        CenterStrategy::Random => Ok(sample(&mut rng, points.len(), count)
            .into_iter()
            .map(|i| points[i])
            .collect()),
        CenterStrategy::UniformGrid => Ok(grid_centers(points, count)),
        CenterStrategy::KMeans => {
            let init = plus_plus_init(points, count, &mut rng);
            Ok(lloyd(points, init, KMEANS_ITERATIONS))
        }
    }
}

fn grid_centers(points: &[Point], count: usize) -> Vec<Point> {
    let dim = points[0].dim();
    let (lo, hi) = bbox(points);
    let at = |k: usize, i: usize, n: usize| {
        if n == 1 {
            0.5 * (lo[k] + hi[k])
        } else {
            lo[k] + (hi[k] - lo[k]) * i as f64 / (n - 1) as f64
        }
    };
    if dim == 1 {
        return (0..count).map(|i| Point::new1(at(0, i, count))).collect();
    }
    let side = (count as f64).sqrt().ceil() as usize;
    let mut out = Vec::with_capacity(side * side);
    for j in 0..side {
        for i in 0..side {
            out.push(Point::new2(at(0, i, side), at(1, j, side)));
        }
    }
    out.truncate(count);
    out
}

fn bbox(points: &[Point]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for (k, &c) in p.coords().iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    (lo, hi)
}

fn nearest(p: &Point, centers: &[Point]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.iter().enumerate() {
        let d = p.dist2(c);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// k-means++ seeding: each further center is a data point drawn with
/// probability proportional to its squared distance to the chosen ones.
fn plus_plus_init(points: &[Point], count: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut centers = vec![points[rng.gen_range(0..points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| p.dist2(&centers[0])).collect();
    while centers.len() < count {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => points[w.sample(rng)],
            // Every point coincides with a center already.
            Err(_) => points[rng.gen_range(0..points.len())],
        };
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(p.dist2(&next));
        }
        centers.push(next);
    }
    centers
}

/// Lloyd iterations. An emptied cluster is reseeded at the point farthest
/// from its current center.
fn lloyd(points: &[Point], mut centers: Vec<Point>, iterations: usize) -> Vec<Point> {
    let dim = points[0].dim();
    let k = centers.len();
    let mut assign = vec![0usize; points.len()];
    for _ in 0..iterations {
        let mut dists = vec![0.0; points.len()];
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centers);
            assign[i] = c;
            dists[i] = d;
        }
        let mut sums = vec![[0.0f64; 2]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assign) {
            sums[c][0] += p.x();
            sums[c][1] += p.y();
            counts[c] += 1;
        }
        let mut next = centers.clone();
        for c in 0..k {
            if counts[c] > 0 {
                let n = counts[c] as f64;
                next[c] = if dim == 1 {
                    Point::new1(sums[c][0] / n)
                } else {
                    Point::new2(sums[c][0] / n, sums[c][1] / n)
                };
            } else {
                let far = (0..points.len())
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]))
                    .unwrap();
                next[c] = points[far];
                dists[far] = 0.0;
            }
        }
        if next == centers {
            break;
        }
        centers = next;
    }
    centers
}
