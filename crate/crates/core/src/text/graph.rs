//! Graphs are written as `vertex NAME` and `U -- V` (undirected) or
//! `U -> V` (directed) lines; a file uses one kind of edge. Vertices are
//! numbered in order of first appearance. Any token is a valid vertex
//! name.
//!
//! A grid model names the branch set of each grid cell in a host graph:
//!
//! ```text
//! grid 2 3
//! cell 1 1 u v
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{lines, missing, ParseError, Token};
use crate::graph::{Digraph, Graph, MinorModel, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphFile {
    pub directed: bool,
    pub names: Vec<String>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        Self::build(false, g.vertices().map(|v| (v, g.name(v))), g.edges())
    }

    pub fn from_digraph(d: &Digraph) -> Self {
        Self::build(true, d.vertices().iter().map(|&v| (v, d.name(v))), d.arcs().iter().copied())
    }

    fn build(
        directed: bool,
        vs: impl Iterator<Item = (Vertex, String)>,
        edges: impl Iterator<Item = (Vertex, Vertex)>,
    ) -> Self {
        let mut index = BTreeMap::new();
        let mut names = Vec::new();
        for (v, n) in vs {
            index.insert(v, names.len() as Vertex);
            names.push(n);
        }
        let edges = edges.map(|(u, v)| (index[&u], index[&v])).collect();
        GraphFile { directed, names, edges }
    }

    /// Directed files give their underlying graph.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(0..self.names.len() as Vertex);
        for (v, n) in self.names.iter().enumerate() {
            g.add_named(v as Vertex, n.clone());
        }
        for &(u, v) in &self.edges {
            g.add_edge(u, v).expect("endpoints exist and differ");
        }
        g
    }

    pub fn digraph(&self) -> Digraph {
        let mut d = Digraph::new();
        for (v, n) in self.names.iter().enumerate() {
            d.add_named(v as Vertex, n.clone());
        }
        for &(u, v) in &self.edges {
            d.add_arc(u, v).expect("endpoints exist and differ");
        }
        d
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.names.iter().position(|n| n == name).map(|i| i as Vertex)
    }
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut f = GraphFile::default();
    let mut ids: HashMap<String, Vertex> = HashMap::new();
    let mut kind: Option<&str> = None;
    let mut intern = |t: &Token<'_>, f: &mut GraphFile| -> Result<Vertex, ParseError> {
        let n = t.text;
        Ok(*ids.entry(n.to_string()).or_insert_with(|| {
            f.names.push(n.to_string());
            f.names.len() as Vertex - 1
        }))
    };
    for line in lines(text) {
        match (line[0].text, line.len()) {
            ("vertex", _) => {
                if line.len() == 1 {
                    return Err(missing(&line, "a vertex name"));
                }
                for t in &line[1..] {
                    intern(t, &mut f)?;
                }
            }
            (_, 3) if line[1].text == "--" || line[1].text == "->" => {
                let op = line[1].text;
                match kind {
                    Some(k) if k != op => return Err(line[1].error("directed and undirected edges are mixed")),
                    _ => kind = Some(op),
                }
                let (u, v) = (intern(&line[0], &mut f)?, intern(&line[2], &mut f)?);
                if u == v {
                    return Err(line[2].error("self-loops are not allowed"));
                }
                let dup = f.edges.iter().any(|&e| e == (u, v) || (op == "--" && e == (v, u)));
                if dup {
                    return Err(line[0].error("edge is listed twice"));
                }
                f.edges.push((u, v));
            }
            _ => return Err(line[0].error("expected `vertex NAME...`, `U -- V` or `U -> V`")),
        }
    }
    f.directed = kind == Some("->");
    Ok(f)
}

/// Lists every vertex first, so isolated vertices survive and numbering is
/// stable under a round trip.
pub fn emit_graph(f: &GraphFile) -> String {
    let mut out = String::new();
    for n in &f.names {
        out.push_str(&format!("vertex {n}\n"));
    }
    let op = if f.directed { "->" } else { "--" };
    for &(u, v) in &f.edges {
        out.push_str(&format!("{} {op} {}\n", f.names[u as usize], f.names[v as usize]));
    }
    out
}

/// A model of the `rows x cols` grid; cell `(i, j)` (from 1) is grid vertex
/// `(i - 1) * cols + (j - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModelFile {
    pub rows: u32,
    pub cols: u32,
    pub model: MinorModel,
}

/// Host vertex names are resolved in `host`. Edge witnesses are filled in
/// from the host graph.
pub fn parse_grid_model(text: &str, host: &GraphFile) -> Result<GridModelFile, ParseError> {
    let ls = lines(text);
    let first = ls.first().ok_or(ParseError { line: 1, column: 1, message: "expected `grid ROWS COLS`".into() })?;
    let num = |t: &Token<'_>| t.text.parse::<u32>().map_err(|_| t.error(format!("expected a number, found {:?}", t.text)));
    if first[0].text != "grid" || first.len() != 3 {
        return Err(first[0].error("expected `grid ROWS COLS`"));
    }
    let (rows, cols) = (num(&first[1])?, num(&first[2])?);
    let mut branch_sets: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for line in &ls[1..] {
        if line[0].text != "cell" || line.len() < 4 {
            return Err(line[0].error("expected `cell ROW COL HOST...`"));
        }
        let (i, j) = (num(&line[1])?, num(&line[2])?);
        if i == 0 || i > rows || j == 0 || j > cols {
            return Err(line[1].error("cell outside the grid"));
        }
        let set = branch_sets.entry((i - 1) * cols + (j - 1)).or_default();
        if !set.is_empty() {
            return Err(line[0].error("cell is listed twice"));
        }
        for t in &line[3..] {
            set.insert(host.vertex(t.text).ok_or_else(|| t.error(format!("unknown host vertex {:?}", t.text)))?);
        }
    }
    let mut model = MinorModel { branch_sets, edge_witness: BTreeMap::new() };
    model.complete_witnesses(&crate::graph::grid(rows, cols), &host.graph());
    Ok(GridModelFile { rows, cols, model })
}

pub fn emit_grid_model(m: &GridModelFile, host: &GraphFile) -> String {
    let mut out = format!("grid {} {}\n", m.rows, m.cols);
    for (&v, set) in &m.model.branch_sets {
        let hosts: Vec<&str> = set.iter().map(|&h| host.names[h as usize].as_str()).collect();
        out.push_str(&format!("cell {} {} {}\n", v / m.cols + 1, v % m.cols + 1, hosts.join(" ")));
    }
    out
}
