use std::collections::BTreeSet;

use thiserror::Error;

use super::{Graph, TreeDecomposition, Vertex};
use crate::par::Execution;

pub const DEFAULT_LIMIT: usize = 16;
/// Hard ceiling for the subset table (one byte per subset, twice).
const MAX_LIMIT: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreewidthError {
    #[error("graph has {vertices} vertices, exact treewidth is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Treewidth {
    pub width: usize,
    pub decomposition: TreeDecomposition,
    /// An elimination order achieving `width`.
    pub order: Vec<Vertex>,
}

pub fn exact_treewidth(g: &Graph) -> Result<Treewidth, TreewidthError> {
    exact_treewidth_with(g, DEFAULT_LIMIT, Execution::default())
}

/// Dynamic programming over vertex subsets `S`:
/// `tw(S) = min over v in S of max(tw(S - v), |Q(S - v, v)|)`, where `Q(S, v)`
/// is the set of vertices outside `S + v` reachable from `v` through `S`.
/// Each layer of equal-size subsets depends only on the previous one.
pub fn exact_treewidth_with(g: &Graph, limit: usize, exec: Execution) -> Result<Treewidth, TreewidthError> {
    let ids: Vec<Vertex> = g.vertices().collect();
    let n = ids.len();
    if n > limit.min(MAX_LIMIT) {
        return Err(TreewidthError::TooLarge { vertices: n, limit: limit.min(MAX_LIMIT) });
    }
    if n == 0 {
        let decomposition = TreeDecomposition { bags: vec![BTreeSet::new()], tree_edges: vec![] };
        return Ok(Treewidth { width: 0, decomposition, order: vec![] });
    }
    let adj: Vec<u32> = ids
        .iter()
        .map(|&v| g.neighbors(v).fold(0u32, |m, w| m | 1 << ids.binary_search(&w).unwrap()))
        .collect();

    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut value = vec![0u8; 1usize << n];
    let mut choice = vec![0u8; 1usize << n];
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for s in 1..=full {
        layers[s.count_ones() as usize].push(s);
    }
    for layer in &layers[1..] {
        let results = exec.map(layer, |&s| {
            let mut best = (u8::MAX, 0u8);
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                let without = s & !(1 << v);
                let q = q_set(&adj, without, v).count_ones() as u8;
                let cand = value[without as usize].max(q);
                if cand < best.0 {
                    best = (cand, v as u8);
                }
            }
            best
        });
        for (&s, (val, v)) in layer.iter().zip(results) {
            value[s as usize] = val;
            choice[s as usize] = v;
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize];
        order.push(v as usize);
        s &= !(1 << v);
    }
    order.reverse();
    let (decomposition, width) = from_elimination(&adj, &order, &ids);
    debug_assert_eq!(width, value[full as usize] as usize);
    Ok(Treewidth { width, decomposition, order: order.iter().map(|&i| ids[i]).collect() })
}

fn q_set(adj: &[u32], s: u32, v: u32) -> u32 {
    let mut inside = 0u32;
    let mut frontier = 1u32 << v;
    while frontier != 0 {
        let mut nb = 0u32;
        let mut f = frontier;
        while f != 0 {
            let x = f.trailing_zeros();
            f &= f - 1;
            nb |= adj[x as usize];
        }
        frontier = nb & s & !inside;
        inside |= frontier;
    }
    let mut nb = adj[v as usize];
    let mut f = inside;
    while f != 0 {
        let x = f.trailing_zeros();
        f &= f - 1;
        nb |= adj[x as usize];
    }
    nb & !s & !(1 << v)
}

/// Bag `i` holds the `i`-th eliminated vertex and its neighbours in the fill
/// graph at that moment; it hangs below the bag of the earliest of those
/// neighbours to be eliminated. Roots of different components are chained.
fn from_elimination(adj: &[u32], order: &[usize], ids: &[Vertex]) -> (TreeDecomposition, usize) {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut fill = adj.to_vec();
    let mut removed = 0u32;
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::with_capacity(n.saturating_sub(1));
    let mut roots = Vec::new();
    let mut width = 0;
    for (i, &v) in order.iter().enumerate() {
        let nb = fill[v] & !removed & !(1 << v);
        width = width.max(nb.count_ones() as usize);
        let mut bag = BTreeSet::from([ids[v]]);
        let mut parent = usize::MAX;
        let mut f = nb;
        while f != 0 {
            let w = f.trailing_zeros() as usize;
            f &= f - 1;
            bag.insert(ids[w]);
            parent = parent.min(pos[w]);
            fill[w] |= nb & !(1 << w);
        }
        removed |= 1 << v;
        bags.push(bag);
        if parent == usize::MAX {
            roots.push(i);
        } else {
            tree_edges.push((i, parent));
        }
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0], w[1]));
    }
    (TreeDecomposition { bags, tree_edges }, width)
}
