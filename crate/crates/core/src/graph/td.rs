use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Graph, Vertex};

/// Bags indexed by tree node, with the tree given as an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<Vertex>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; 0 without bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    /// The node graph is not a tree (disconnected, cyclic, or bad node index).
    NotATree,
    UnknownVertex(Vertex),
    UncoveredVertex(Vertex),
    UncoveredEdge(Vertex, Vertex),
    /// The nodes whose bags contain the vertex do not induce a subtree.
    DisconnectedOccurrence(Vertex),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "the decomposition's nodes do not form a tree"),
            TdViolation::UnknownVertex(v) => write!(f, "bag mentions {v}, which is not in the graph"),
            TdViolation::UncoveredVertex(v) => write!(f, "clause (i): vertex {v} is in no bag"),
            TdViolation::UncoveredEdge(u, v) => write!(f, "clause (ii): no bag contains edge {{{u}, {v}}}"),
            TdViolation::DisconnectedOccurrence(v) => {
                write!(f, "clause (iii): bags containing {v} are not connected in the tree")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdCheck {
    pub width: usize,
    pub violation: Option<TdViolation>,
}

impl TdCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn verify_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> TdCheck {
    TdCheck { width: td.width(), violation: first_violation(g, td) }
}

fn first_violation(g: &Graph, td: &TreeDecomposition) -> Option<TdViolation> {
    let n = td.bags.len();
    if n == 0 || td.tree_edges.len() != n - 1 || td.tree_edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
        return Some(TdViolation::NotATree);
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &td.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    if connected_nodes(&adj, &(0..n).collect()) != n {
        return Some(TdViolation::NotATree);
    }
    for bag in &td.bags {
        if let Some(&v) = bag.iter().find(|v| !g.contains(**v)) {
            return Some(TdViolation::UnknownVertex(v));
        }
    }
    let mut occ: BTreeMap<Vertex, BTreeSet<usize>> = BTreeMap::new();
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            occ.entry(v).or_default().insert(t);
        }
    }
    if let Some(v) = g.vertices().find(|v| !occ.contains_key(v)) {
        return Some(TdViolation::UncoveredVertex(v));
    }
    for (u, v) in g.edges() {
        if !occ[&u].iter().any(|t| td.bags[*t].contains(&v)) {
            return Some(TdViolation::UncoveredEdge(u, v));
        }
    }
    for (&v, nodes) in &occ {
        if connected_nodes(&adj, nodes) != nodes.len() {
            return Some(TdViolation::DisconnectedOccurrence(v));
        }
    }
    None
}

/// Size of the component of the first node of `nodes` inside `nodes`.
fn connected_nodes(adj: &[Vec<usize>], nodes: &BTreeSet<usize>) -> usize {
    let Some(&start) = nodes.iter().next() else { return 0 };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if nodes.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bags(bs: &[&[Vertex]]) -> Vec<BTreeSet<Vertex>> {
        bs.iter().map(|b| b.iter().copied().collect()).collect()
    }

    #[test]
    fn path_decomposition() {
        let g = Graph::path(3);
        let td = TreeDecomposition { bags: bags(&[&[0, 1], &[1, 2]]), tree_edges: vec![(0, 1)] };
        assert_eq!(verify_tree_decomposition(&g, &td), TdCheck { width: 1, violation: None });
    }

    #[test]
    fn missing_edge_bag() {
        let g = Graph::cycle(3);
        let td = TreeDecomposition { bags: bags(&[&[0, 1], &[1, 2]]), tree_edges: vec![(0, 1)] };
        assert_eq!(verify_tree_decomposition(&g, &td).violation, Some(TdViolation::UncoveredEdge(0, 2)));
    }

    #[test]
    fn single_bag() {
        let g = Graph::complete(5);
        let td = TreeDecomposition { bags: bags(&[&[0, 1, 2, 3, 4]]), tree_edges: vec![] };
        assert_eq!(verify_tree_decomposition(&g, &td), TdCheck { width: 4, violation: None });
    }

    #[test]
    fn other_clauses() {
        let g = Graph::path(3);
        let not_tree = TreeDecomposition { bags: bags(&[&[0, 1], &[1, 2]]), tree_edges: vec![] };
        assert_eq!(verify_tree_decomposition(&g, &not_tree).violation, Some(TdViolation::NotATree));
        let uncovered = TreeDecomposition { bags: bags(&[&[0, 1]]), tree_edges: vec![] };
        assert_eq!(verify_tree_decomposition(&g, &uncovered).violation, Some(TdViolation::UncoveredVertex(2)));
        let split = TreeDecomposition {
            bags: bags(&[&[0, 1], &[2], &[1, 2]]),
            tree_edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(verify_tree_decomposition(&g, &split).violation, Some(TdViolation::DisconnectedOccurrence(1)));
        let unknown = TreeDecomposition { bags: bags(&[&[0, 1, 2, 9]]), tree_edges: vec![] };
        assert_eq!(verify_tree_decomposition(&g, &unknown).violation, Some(TdViolation::UnknownVertex(9)));
    }
}
