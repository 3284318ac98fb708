use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{exact_treewidth, Graph, TreewidthError, Vertex};

/// Witness that `H` is a minor of a host graph: one connected branch set per
/// vertex of `H`, and for each edge `{u, v}` of `H` (keyed with `u < v`) a host
/// edge from the branch set of `u` to the branch set of `v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pub edge_witness: BTreeMap<(Vertex, Vertex), (Vertex, Vertex)>,
}

impl MinorModel {
    pub fn identity(g: &Graph) -> Self {
        MinorModel {
            branch_sets: g.vertices().map(|v| (v, BTreeSet::from([v]))).collect(),
            edge_witness: g.edges().map(|e| (e, e)).collect(),
        }
    }

    /// Fills in missing edge witnesses with the first host edge between the
    /// two branch sets.
    pub fn complete_witnesses(&mut self, h: &Graph, host: &Graph) {
        for (u, v) in h.edges() {
            if self.edge_witness.contains_key(&(u, v)) {
                continue;
            }
            let (Some(bu), Some(bv)) = (self.branch_sets.get(&u), self.branch_sets.get(&v)) else { continue };
            let found = bu.iter().find_map(|&x| host.neighbors(x).find(|y| bv.contains(y)).map(|y| (x, y)));
            if let Some(w) = found {
                self.edge_witness.insert((u, v), w);
            }
        }
    }
}

/// The first clause of the minor definition that a model fails, checked in
/// the order of the variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinorViolation {
    MissingBranchSet(Vertex),
    EmptyBranchSet(Vertex),
    /// A branch set for a vertex that `H` does not have.
    UnknownMinorVertex(Vertex),
    UnknownHostVertex { minor: Vertex, host: Vertex },
    Overlap { host: Vertex, first: Vertex, second: Vertex },
    Disconnected(Vertex),
    MissingEdgeWitness(Vertex, Vertex),
    BadEdgeWitness { edge: (Vertex, Vertex), witness: (Vertex, Vertex) },
}

impl fmt::Display for MinorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorViolation::MissingBranchSet(v) => write!(f, "no branch set for vertex {v}"),
            MinorViolation::EmptyBranchSet(v) => write!(f, "branch set of {v} is empty"),
            MinorViolation::UnknownMinorVertex(v) => write!(f, "branch set given for {v}, which is not in the minor"),
            MinorViolation::UnknownHostVertex { minor, host } => {
                write!(f, "branch set of {minor} uses {host}, which is not in the host")
            }
            MinorViolation::Overlap { host, first, second } => {
                write!(f, "host vertex {host} is in the branch sets of both {first} and {second}")
            }
            MinorViolation::Disconnected(v) => write!(f, "branch set of {v} is not connected"),
            MinorViolation::MissingEdgeWitness(u, v) => write!(f, "no witness for edge {{{u}, {v}}}"),
            MinorViolation::BadEdgeWitness { edge: (u, v), witness: (x, y) } => {
                write!(f, "({x}, {y}) is not a host edge between the branch sets of {u} and {v}")
            }
        }
    }
}

pub fn verify_minor_model(h: &Graph, host: &Graph, model: &MinorModel) -> Result<(), MinorViolation> {
    for v in h.vertices() {
        match model.branch_sets.get(&v) {
            None => return Err(MinorViolation::MissingBranchSet(v)),
            Some(b) if b.is_empty() => return Err(MinorViolation::EmptyBranchSet(v)),
            Some(_) => {}
        }
    }
    if let Some(&v) = model.branch_sets.keys().find(|v| !h.contains(**v)) {
        return Err(MinorViolation::UnknownMinorVertex(v));
    }
    for (&v, b) in &model.branch_sets {
        if let Some(&x) = b.iter().find(|x| !host.contains(**x)) {
            return Err(MinorViolation::UnknownHostVertex { minor: v, host: x });
        }
    }
    let mut owner: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (&v, b) in &model.branch_sets {
        for &x in b {
            if let Some(&first) = owner.get(&x) {
                return Err(MinorViolation::Overlap { host: x, first, second: v });
            }
            owner.insert(x, v);
        }
    }
    for (&v, b) in &model.branch_sets {
        if !host.is_connected_set(b) {
            return Err(MinorViolation::Disconnected(v));
        }
    }
    for (u, v) in h.edges() {
        let Some(&(x, y)) = model.edge_witness.get(&(u, v)) else {
            return Err(MinorViolation::MissingEdgeWitness(u, v));
        };
        let ends = |a: Vertex, b: Vertex| model.branch_sets[&u].contains(&a) && model.branch_sets[&v].contains(&b);
        if !host.has_edge(x, y) || !(ends(x, y) || ends(y, x)) {
            return Err(MinorViolation::BadEdgeWitness { edge: (u, v), witness: (x, y) });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub minor_width: usize,
    pub host_width: usize,
}

impl MonotonicityReport {
    pub fn holds(&self) -> bool {
        self.minor_width <= self.host_width
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonotonicityError {
    #[error("minor model rejected: {0}")]
    Model(String),
    #[error(transparent)]
    Treewidth(#[from] TreewidthError),
}

/// Verifies the model, then compares exact treewidths of both graphs.
pub fn minor_monotonicity_check(
    h: &Graph,
    host: &Graph,
    model: &MinorModel,
) -> Result<MonotonicityReport, MonotonicityError> {
    verify_minor_model(h, host, model).map_err(|v| MonotonicityError::Model(v.to_string()))?;
    Ok(MonotonicityReport { minor_width: exact_treewidth(h)?.width, host_width: exact_treewidth(host)?.width })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::graph::grid;

    fn model(sets: &[(Vertex, &[Vertex])]) -> MinorModel {
        MinorModel {
            branch_sets: sets.iter().map(|&(v, b)| (v, b.iter().copied().collect())).collect(),
            edge_witness: BTreeMap::new(),
        }
    }

    #[test]
    fn identity_model() {
        let g = grid(3, 3);
        assert_eq!(verify_minor_model(&g, &g, &MinorModel::identity(&g)), Ok(()));
    }

    #[test]
    fn overlap_is_reported() {
        let h = Graph::complete(2);
        let host = Graph::path(3);
        let mut m = model(&[(0, &[0, 1]), (1, &[1, 2])]);
        m.complete_witnesses(&h, &host);
        assert_eq!(verify_minor_model(&h, &host, &m), Err(MinorViolation::Overlap { host: 1, first: 0, second: 1 }));
    }

    #[test]
    fn clauses() {
        let h = Graph::complete(3);
        let host = Graph::cycle(4);
        assert_eq!(verify_minor_model(&h, &host, &model(&[(0, &[0])])), Err(MinorViolation::MissingBranchSet(1)));
        assert_eq!(
            verify_minor_model(&h, &host, &model(&[(0, &[0]), (1, &[]), (2, &[2])])),
            Err(MinorViolation::EmptyBranchSet(1))
        );
        assert_eq!(
            verify_minor_model(&h, &host, &model(&[(0, &[0, 2]), (1, &[1]), (2, &[3])])),
            Err(MinorViolation::Disconnected(0))
        );
        let mut ok = model(&[(0, &[0, 1]), (1, &[2]), (2, &[3])]);
        assert_eq!(verify_minor_model(&h, &host, &ok), Err(MinorViolation::MissingEdgeWitness(0, 1)));
        ok.complete_witnesses(&h, &host);
        assert_eq!(verify_minor_model(&h, &host, &ok), Ok(()));
        ok.edge_witness.insert((1, 2), (0, 3));
        assert!(matches!(verify_minor_model(&h, &host, &ok), Err(MinorViolation::BadEdgeWitness { .. })));
    }

    #[test]
    fn monotonicity_examples() {
        let mut k3_in_k4 = model(&[(0, &[0]), (1, &[1]), (2, &[2])]);
        k3_in_k4.complete_witnesses(&Graph::complete(3), &Graph::complete(4));
        let r = minor_monotonicity_check(&Graph::complete(3), &Graph::complete(4), &k3_in_k4).unwrap();
        assert_eq!(r, MonotonicityReport { minor_width: 2, host_width: 3 });

        let mut p3_in_c4 = model(&[(0, &[0]), (1, &[1]), (2, &[2])]);
        p3_in_c4.complete_witnesses(&Graph::path(3), &Graph::cycle(4));
        let r = minor_monotonicity_check(&Graph::path(3), &Graph::cycle(4), &p3_in_c4).unwrap();
        assert_eq!(r, MonotonicityReport { minor_width: 1, host_width: 2 });

        let g = grid(2, 3);
        let r = minor_monotonicity_check(&g, &g, &MinorModel::identity(&g)).unwrap();
        assert_eq!(r.minor_width, r.host_width);
    }

    /// Random contractions and deletions of a random host, tracked as branch
    /// sets, always give a verifying model whose minor has no larger width.
    fn random_minor(host: &Graph, ops: &[(u8, u8)]) -> (Graph, MinorModel) {
        let mut h = host.clone();
        let mut sets: BTreeMap<Vertex, BTreeSet<Vertex>> = host.vertices().map(|v| (v, BTreeSet::from([v]))).collect();
        for &(kind, pick) in ops {
            let edges: Vec<_> = h.edges().collect();
            match kind % 3 {
                0 if !edges.is_empty() => {
                    let (u, v) = edges[pick as usize % edges.len()];
                    h = h.contract_edge(u, v).unwrap();
                    let moved = sets.remove(&v).unwrap();
                    sets.get_mut(&u).unwrap().extend(moved);
                }
                1 if !edges.is_empty() => {
                    let (u, v) = edges[pick as usize % edges.len()];
                    h = h.delete_edge(u, v).unwrap();
                }
                2 if h.num_vertices() > 1 => {
                    let vs: Vec<_> = h.vertices().collect();
                    let v = vs[pick as usize % vs.len()];
                    h = h.delete_vertex(v).unwrap();
                    sets.remove(&v);
                }
                _ => {}
            }
        }
        let mut model = MinorModel { branch_sets: sets, edge_witness: BTreeMap::new() };
        model.complete_witnesses(&h, host);
        (h, model)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn minors_never_have_larger_width(edges in proptest::collection::vec((0u32..9, 0u32..9), 0..24),
                                          ops in proptest::collection::vec((0u8..3, any::<u8>()), 0..8)) {
            let host = Graph::from_edges(9, &edges);
            let (h, model) = random_minor(&host, &ops);
            prop_assert_eq!(verify_minor_model(&h, &host, &model), Ok(()));
            prop_assert!(minor_monotonicity_check(&h, &host, &model).unwrap().holds());
        }
    }
}
