//! k-means++ clustering of layout points.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::layout::Layout;
use crate::math::dist2;
use crate::sparse::cmp_points;

/// Lloyd rounds used when the caller has no preference.
pub const DEFAULT_LLOYD_ITERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("at least one cluster is required")]
    NoClusters,
    #[error("{m} clusters requested but only {distinct} distinct points exist")]
    TooManyClusters { m: usize, distinct: usize },
    #[error("centers have dimension {got}, points have {expected}")]
    DimMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    centers: Layout,
    assignment: Vec<usize>,
}

impl Clustering {
    pub fn centers(&self) -> &Layout {
        &self.centers
    }

    pub fn num_clusters(&self) -> usize {
        self.centers.len()
    }

    /// Cluster index of every point.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Point indices per cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters()];
        for (i, &j) in self.assignment.iter().enumerate() {
            out[j].push(i);
        }
        out
    }
}

/// Index and squared distance of the nearest center; ties go to the lowest
/// index.
pub fn nearest_center(p: &[f64], centers: &Layout) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, z) in centers.points().enumerate() {
        let d = dist2(p, z);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Sum over points of the squared distance to the nearest center.
pub fn kmeans_objective(points: &Layout, centers: &Layout) -> f64 {
    points.points().map(|p| nearest_center(p, centers).1).sum()
}

pub fn distinct_points(points: &Layout) -> usize {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| cmp_points(points.point(a), points.point(b)));
    idx.dedup_by(|a, b| points.point(*a) == points.point(*b));
    idx.len()
}

fn check(points: &Layout, m: usize) -> Result<(), PartitionError> {
    if m == 0 {
        return Err(PartitionError::NoClusters);
    }
    let distinct = distinct_points(points);
    if m > distinct {
        return Err(PartitionError::TooManyClusters { m, distinct });
    }
    Ok(())
}

/// k-means++ seeding: the first center is a uniformly random point, every
/// further center is point `i` with probability proportional to its squared
/// distance to the nearest center chosen so far.
pub fn seed_centers<R: Rng>(points: &Layout, m: usize, rng: &mut R) -> Result<Layout, PartitionError> {
    check(points, m)?;
    let k = points.len();
    let mut chosen = vec![rng.random_range(0..k)];
    let mut d: Vec<f64> = points.points().map(|p| dist2(p, points.point(chosen[0]))).collect();
    while chosen.len() < m {
        let total: f64 = d.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        // Fall back to the last point with positive weight on round-off.
        let mut pick = d.iter().rposition(|&v| v > 0.0).expect("distinct points remain");
        for (i, &di) in d.iter().enumerate() {
            acc += di;
            if di > 0.0 && acc > target {
                pick = i;
                break;
            }
        }
        chosen.push(pick);
        for (i, di) in d.iter_mut().enumerate() {
            *di = di.min(dist2(points.point(i), points.point(pick)));
        }
    }
    Ok(points.select(&chosen))
}

/// One assignment plus centroid update. An empty cluster is moved to the
/// point farthest from its nearest center.
fn lloyd_round(points: &Layout, centers: &mut Layout) {
    let dim = points.dim();
    let m = centers.len();
    let mut sums = vec![0.0; m * dim];
    let mut counts = vec![0usize; m];
    for p in points.points() {
        let (j, _) = nearest_center(p, centers);
        counts[j] += 1;
        sums[j * dim..(j + 1) * dim]
            .iter_mut()
            .zip(p)
            .for_each(|(s, v)| *s += v);
    }
    for j in 0..m {
        if counts[j] > 0 {
            let inv = 1.0 / counts[j] as f64;
            let z = centers.point_mut(j);
            z.iter_mut()
                .zip(&sums[j * dim..(j + 1) * dim])
                .for_each(|(c, s)| *c = s * inv);
        }
    }
    for (j, &count) in counts.iter().enumerate() {
        if count == 0 {
            let far = (0..points.len())
                .map(|i| (i, nearest_center(points.point(i), centers).1))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            centers.point_mut(j).copy_from_slice(points.point(far.0));
        }
    }
}

/// k-means++ seeding followed by `iters` Lloyd rounds. Also returns the
/// objective after seeding and after every round.
pub fn kmeans_pp_traced(
    points: &Layout,
    m: usize,
    iters: usize,
    seed: u64,
) -> Result<(Clustering, Vec<f64>), PartitionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(points, m, &mut rng)?;
    let mut trace = vec![kmeans_objective(points, &centers)];
    for _ in 0..iters {
        lloyd_round(points, &mut centers);
        trace.push(kmeans_objective(points, &centers));
    }
    let assignment = points.points().map(|p| nearest_center(p, &centers).0).collect();
    Ok((Clustering { centers, assignment }, trace))
}

pub fn kmeans_pp(points: &Layout, m: usize, iters: usize, seed: u64) -> Result<Clustering, PartitionError> {
    kmeans_pp_traced(points, m, iters, seed).map(|(c, _)| c)
}
