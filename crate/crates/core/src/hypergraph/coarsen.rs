use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::Hypergraph;

/// Surjection from fine vertices onto coarse vertices `0..k'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseningMap {
    map: Vec<usize>,
    num_coarse: usize,
}

impl CoarseningMap {
    pub fn coarse_of(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn num_fine(&self) -> usize {
        self.map.len()
    }

    pub fn num_coarse(&self) -> usize {
        self.num_coarse
    }

    /// Every coarse vertex has at least one preimage.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.num_coarse];
        for &c in &self.map {
            if c >= self.num_coarse {
                return false;
            }
            hit[c] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

const NONE: usize = usize::MAX;

/// One coarsening level.
///
/// Vertices with exactly one distinct neighbour are first folded into that
/// neighbour (several leaves may join the same neighbour, which collapses
/// stars). The remaining unmatched vertices are then paired greedily from
/// the heaviest hyperedges down, ties in list order, taking the two
/// lowest-indexed unmatched members of each hyperedge. Hyperedges are mapped
/// through the result; those that shrink to a single vertex are dropped and
/// identical ones are merged with their costs summed.
pub(super) fn coarsen(g: &Hypergraph) -> (Hypergraph, CoarseningMap) {
    let k = g.num_vertices();

    // Single distinct neighbour per vertex, if any.
    let mut only_neighbor = vec![NONE; k];
    let mut many = vec![false; k];
    for e in g.edges() {
        match e.len() {
            0 | 1 => {}
            2 => {
                for (v, u) in [(e[0], e[1]), (e[1], e[0])] {
                    if only_neighbor[v] == NONE {
                        only_neighbor[v] = u;
                    } else if only_neighbor[v] != u {
                        many[v] = true;
                    }
                }
            }
            _ => e.iter().for_each(|&v| many[v] = true),
        }
    }

    let mut group = vec![NONE; k];
    let mut next_group = 0usize;
    for v in 0..k {
        let u = only_neighbor[v];
        if u == NONE || many[v] || group[v] != NONE {
            continue;
        }
        if group[u] == NONE {
            group[u] = next_group;
            next_group += 1;
        }
        group[v] = group[u];
    }

    let mut by_cost: Vec<usize> = (0..g.num_edges()).collect();
    by_cost.sort_by(|&a, &b| g.cost(b).total_cmp(&g.cost(a)));
    for j in by_cost {
        let mut free = g.edge(j).iter().copied().filter(|&v| group[v] == NONE);
        if let (Some(a), Some(b)) = (free.next(), free.next()) {
            group[a] = next_group;
            group[b] = next_group;
            next_group += 1;
        }
    }
    for slot in group.iter_mut().filter(|s| **s == NONE) {
        *slot = next_group;
        next_group += 1;
    }

    // Number coarse vertices by their smallest fine vertex.
    let mut renumber = vec![NONE; next_group];
    let mut num_coarse = 0;
    let mut map = vec![0; k];
    for v in 0..k {
        let gid = group[v];
        if renumber[gid] == NONE {
            renumber[gid] = num_coarse;
            num_coarse += 1;
        }
        map[v] = renumber[gid];
    }

    let mut weights = vec![0.0; num_coarse];
    for v in 0..k {
        weights[map[v]] += g.weight(v);
    }

    let mut slot_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut costs: Vec<f64> = Vec::new();
    for (e, &c) in g.edges().iter().zip(g.costs()) {
        let mut image: Vec<usize> = e.iter().map(|&v| map[v]).collect();
        image.sort_unstable();
        image.dedup();
        if image.len() < 2 {
            continue;
        }
        match slot_of.get(&image) {
            Some(&s) => costs[s] += c,
            None => {
                slot_of.insert(image.clone(), edges.len());
                edges.push(image);
                costs.push(c);
            }
        }
    }

    let coarse = Hypergraph { weights, edges, costs };
    (coarse, CoarseningMap { map, num_coarse })
}
