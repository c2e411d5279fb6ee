use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tree::{energy_approx, gradient_approx, SpatialTree};
use super::{check_inputs, energy, Layout, LayoutError, LayoutParams};
use crate::hypergraph::Hypergraph;
use crate::math::{dist2, powi, sqrt};

const MAX_HALVINGS: usize = 40;
const EXACT_SPACING_LIMIT: usize = 4096;

fn guard_energy(g: &Hypergraph, x: &Layout, p: &LayoutParams) -> f64 {
    if x.len() <= p.exact_energy_limit {
        energy(g, x).unwrap_or(f64::INFINITY)
    } else {
        let t = SpatialTree::build(x, g.weights(), p.leaf_capacity);
        energy_approx(g, x, &t, p.theta)
    }
}

/// Steepest descent with a tree-approximated gradient.
///
/// Each iteration moves every point by `-s * y_n` with
/// `s = step_decay^iter * 0.1 * bbox_diagonal / max_n |y_n|`, so the
/// fastest point travels a decaying fraction of the layout extent. A step
/// that makes two points coincide or raises the energy is halved until
/// it is accepted; descent stops early once no step helps or the gradient
/// vanishes.
pub fn descend(g: &Hypergraph, x0: &Layout, params: &LayoutParams, iters: usize) -> Result<Layout, LayoutError> {
    params.validate()?;
    check_inputs(g, x0)?;
    if x0.dim() != params.dim {
        return Err(LayoutError::InvalidParams("layout dimension differs from params.dim"));
    }
    if g.num_vertices() == 0 {
        return Err(LayoutError::Empty);
    }
    let labels = g.connected_components();
    if labels.count() > 1 {
        return Err(LayoutError::Disconnected(labels.count()));
    }
    if let Some((a, b)) = x0.find_coincident() {
        return Err(LayoutError::CoincidentPoints(a, b));
    }
    let mut x = x0.clone();
    if x.len() == 1 {
        return Ok(x);
    }

    let d = x.dim();
    let mut f = guard_energy(g, &x, params);
    for iter in 0..iters {
        let tree = SpatialTree::build(&x, g.weights(), params.leaf_capacity);
        let y = gradient_approx(g, &x, &tree, params.theta);
        let gmax = y
            .chunks_exact(d)
            .map(|yn| sqrt(yn.iter().map(|v| v * v).sum()))
            .fold(0.0, f64::max);
        if !(gmax > 0.0) || !gmax.is_finite() {
            break;
        }
        let mut step = powi(params.step_decay, iter) * 0.1 * x.bbox_diagonal() / gmax;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let coords: Vec<f64> = x.coords().iter().zip(&y).map(|(c, v)| c - step * v).collect();
            let cand = Layout::new(d, coords);
            if cand.is_finite() && cand.all_distinct() {
                let fc = guard_energy(g, &cand, params);
                if fc <= f {
                    x = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

/// Mean distance from each point to its nearest neighbour; estimated from
/// the bounding box for large layouts.
fn mean_spacing(x: &Layout) -> f64 {
    let k = x.len();
    if k < 2 {
        return 1.0;
    }
    let s = if k <= EXACT_SPACING_LIMIT {
        let mut total = 0.0;
        for i in 0..k {
            let mut best = f64::INFINITY;
            for j in 0..k {
                if i != j {
                    best = best.min(dist2(x.point(i), x.point(j)));
                }
            }
            total += sqrt(best);
        }
        total / k as f64
    } else {
        x.bbox_diagonal() / libm::pow(k as f64, 1.0 / x.dim() as f64)
    };
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

fn jitter_point(p: &mut [f64], magnitude: f64, rng: &mut ChaCha8Rng) {
    for c in p.iter_mut() {
        *c += magnitude * (2.0 * rng.random::<f64>() - 1.0);
    }
}

/// Multilevel layout of a connected hypergraph.
///
/// The hypergraph is coarsened until it has at most `coarsest_size`
/// vertices or stops shrinking. The coarsest level starts from uniform
/// random points in the unit cube; each finer level starts from
/// `prolong_scale` times the coarse position of its image plus a small
/// uniform jitter, re-jittered until all points are distinct. Every level
/// is refined with [`descend`]. Empty hyperedges are ignored.
pub fn multilevel_layout(g: &Hypergraph, params: &LayoutParams) -> Result<Layout, LayoutError> {
    params.validate()?;
    if g.num_vertices() == 0 {
        return Err(LayoutError::Empty);
    }
    let g = g.without_empty_edges();
    let labels = g.connected_components();
    if labels.count() > 1 {
        return Err(LayoutError::Disconnected(labels.count()));
    }

    let mut levels: Vec<(Hypergraph, Vec<usize>)> = Vec::new();
    let mut coarsest = g;
    while coarsest.num_vertices() > params.coarsest_size {
        let (c, map) = coarsest.coarsen();
        if c.num_vertices() >= coarsest.num_vertices() || c.num_vertices() < 2 {
            break;
        }
        let fine = core::mem::replace(&mut coarsest, c);
        levels.push((fine, map.as_slice().to_vec()));
    }

    let d = params.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = coarsest.num_vertices();
    let mut x = Layout::new(d, (0..k * d).map(|_| rng.random::<f64>()).collect());
    while let Some((_, b)) = x.find_coincident() {
        jitter_point(x.point_mut(b), 1e-3, &mut rng);
    }
    x = descend(&coarsest, &x, params, params.descent_iters)?;

    while let Some((fine, map)) = levels.pop() {
        let coarse = x.scaled(params.prolong_scale);
        let magnitude = params.jitter * mean_spacing(&coarse);
        let mut next = Layout::zeros(d, fine.num_vertices());
        for (v, &c) in map.iter().enumerate() {
            next.point_mut(v).copy_from_slice(coarse.point(c));
            jitter_point(next.point_mut(v), magnitude, &mut rng);
        }
        while let Some((_, b)) = next.find_coincident() {
            jitter_point(next.point_mut(b), magnitude, &mut rng);
        }
        x = descend(&fine, &next, params, params.descent_iters)?;
    }
    Ok(x)
}

/// Lays out every connected component on its own (component `i` uses seed
/// `seed + i`) and places the components side by side along the first
/// axis. Components are taken in order of their smallest vertex.
pub fn layout_components(g: &Hypergraph, params: &LayoutParams) -> Result<Layout, LayoutError> {
    params.validate()?;
    let d = params.dim;
    let g = g.without_empty_edges();
    let mut out = Layout::zeros(d, g.num_vertices());
    let mut cursor = 0.0;
    for (i, comp) in g.connected_components().components().iter().enumerate() {
        let sub = g.restrict(comp);
        let part = if comp.len() == 1 {
            Layout::zeros(d, 1)
        } else {
            let p = LayoutParams {
                seed: params.seed.wrapping_add(i as u64),
                ..params.clone()
            };
            multilevel_layout(&sub, &p)?
        };
        let (lo, hi) = part.bounds();
        let gap = if i == 0 { 0.0 } else { 1.0 + 0.1 * part.bbox_diagonal() };
        let mut offset = vec![0.0; d];
        offset[0] = cursor + gap - lo[0];
        cursor += gap + (hi[0] - lo[0]);
        let placed = part.translated(&offset);
        for (j, &v) in comp.iter().enumerate() {
            out.point_mut(v).copy_from_slice(placed.point(j));
        }
    }
    Ok(out)
}
