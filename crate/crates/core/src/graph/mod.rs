//! Directed and undirected graphs, minors witnessed by branch sets, tree
//! decompositions and an exact treewidth solver for small graphs.

mod minor;
mod td;
mod treewidth;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::msc::Msc;

pub use minor::{minor_monotonicity_check, verify_minor_model, MinorModel, MinorViolation, MonotonicityError, MonotonicityReport};
pub use td::{verify_tree_decomposition, TdCheck, TdViolation, TreeDecomposition};
pub use treewidth::{exact_treewidth, exact_treewidth_with, Treewidth, TreewidthError, DEFAULT_LIMIT};

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    MissingVertex(Vertex),
    #[error("edge {{{0}, {1}}} does not exist")]
    MissingEdge(Vertex, Vertex),
}

/// A directed graph with optional vertex names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    vertices: BTreeSet<Vertex>,
    arcs: BTreeSet<(Vertex, Vertex)>,
    names: BTreeMap<Vertex, String>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    pub fn add_named(&mut self, v: Vertex, name: impl Into<String>) {
        self.vertices.insert(v);
        self.names.insert(v, name.into());
    }

    /// Adds `(u, v)`; returns false if the arc was already present.
    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(GraphError::MissingVertex(x));
            }
        }
        Ok(self.arcs.insert((u, v)))
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn arcs(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.arcs
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn name(&self, v: Vertex) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn names(&self) -> &BTreeMap<Vertex, String> {
        &self.names
    }

    pub fn vertex_named(&self, name: &str) -> Option<Vertex> {
        self.names.iter().find(|(_, n)| *n == name).map(|(&v, _)| v)
    }

    /// Undirected degree: arcs in either direction, parallel pairs counted once.
    pub fn degree(&self, v: Vertex) -> usize {
        let mut nb = BTreeSet::new();
        for &(x, y) in &self.arcs {
            if x == v && y != v {
                nb.insert(y);
            }
            if y == v && x != v {
                nb.insert(x);
            }
        }
        nb.len()
    }
}

/// A simple undirected graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
    names: BTreeMap<Vertex, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut g = Graph::new();
        for v in vs {
            g.add_vertex(v);
        }
        g
    }

    pub fn from_edges(n: u32, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("endpoints below n");
        }
        g
    }

    pub fn path(n: u32) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: u32) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).unwrap();
        }
        g
    }

    pub fn complete(n: u32) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    pub fn add_named(&mut self, v: Vertex, name: impl Into<String>) {
        self.add_vertex(v);
        self.names.insert(v, name.into());
    }

    /// Adds `{u, v}`. Loops are ignored; returns whether the edge is new.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(GraphError::MissingVertex(x));
            }
        }
        if u == v {
            return Ok(false);
        }
        let new = self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(new)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().flat_map(|(&u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|nb| nb.contains(&v))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn name(&self, v: Vertex) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn names(&self) -> &BTreeMap<Vertex, String> {
        &self.names
    }

    /// Merges `v` into `u`; the merged vertex keeps the id `u`.
    pub fn contract_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        let mut g = self.delete_vertex(v)?;
        for w in self.neighbors(v) {
            if w != u {
                g.add_edge(u, w)?;
            }
        }
        Ok(g)
    }

    pub fn delete_vertex(&self, v: Vertex) -> Result<Graph, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::MissingVertex(v));
        }
        let mut g = self.clone();
        g.adj.remove(&v);
        g.names.remove(&v);
        for nb in g.adj.values_mut() {
            nb.remove(&v);
        }
        Ok(g)
    }

    pub fn delete_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        let mut g = self.clone();
        g.adj.get_mut(&u).unwrap().remove(&v);
        g.adj.get_mut(&v).unwrap().remove(&u);
        Ok(g)
    }

    /// The subgraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let mut g = Graph::new();
        for &v in keep.iter().filter(|v| self.contains(**v)) {
            g.add_vertex(v);
            if let Some(n) = self.names.get(&v) {
                g.names.insert(v, n.clone());
            }
        }
        for (u, v) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn is_connected_set(&self, set: &BTreeSet<Vertex>) -> bool {
        let Some(&start) = set.iter().next() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if set.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// Events become vertices (same ids); timeline successors and message pairs
/// become arcs.
pub fn msc_to_digraph(m: &Msc) -> Digraph {
    let mut d = Digraph::new();
    for e in m.events() {
        d.add_vertex(e.0);
    }
    for line in m.timelines().values() {
        for w in line.windows(2) {
            d.add_arc(w[0].0, w[1].0).unwrap();
        }
    }
    for &(s, r) in m.messages() {
        d.add_arc(s.0, r.0).unwrap();
    }
    d
}

/// Forgets orientation; antiparallel arcs collapse and loops are dropped.
pub fn underlying(d: &Digraph) -> Graph {
    let mut g = Graph::new();
    for &v in d.vertices() {
        g.add_vertex(v);
    }
    g.names = d.names.clone();
    for &(u, v) in d.arcs() {
        g.add_edge(u, v).unwrap();
    }
    g
}

/// `h` rows and `w` columns; vertex `r * w + c` sits at row `r`, column `c`.
pub fn grid(h: u32, w: u32) -> Graph {
    let mut g = Graph::new();
    for r in 0..h {
        for c in 0..w {
            g.add_named(r * w + c, format!("({r},{c})"));
        }
    }
    for r in 0..h {
        for c in 0..w {
            let v = r * w + c;
            if c + 1 < w {
                g.add_edge(v, v + 1).unwrap();
            }
            if r + 1 < h {
                g.add_edge(v, v + w).unwrap();
            }
        }
    }
    g
}
