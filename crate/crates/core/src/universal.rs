//! The digraphs `G(h, l)` whose treewidth grows with `min(h, 6l)`, their lift
//! to single-phase weakly synchronous charts over three processes, grid minor
//! witnesses, and the four-process chart containing any given graph as a minor.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{grid, msc_to_digraph, underlying, verify_minor_model, Digraph, Graph, MinorModel, Vertex};
use crate::msc::{ActionLabel, Alphabet, EventId, MessageId, Msc, MscError, ProcessId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniversalError {
    #[error("h and l must be positive (got h = {h}, l = {l})")]
    ZeroParameter { h: u32, l: u32 },
    #[error("the graph to embed has no edges")]
    NoEdges,
    #[error("vertex {0} carries no message arc and cannot become an event")]
    BareVertex(Vertex),
    #[error(transparent)]
    Msc(#[from] MscError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalParams {
    h: u32,
    l: u32,
}

/// Event kind of a vertex: send or receive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    S,
    R,
}

pub const A: ProcessId = ProcessId(0);
pub const B: ProcessId = ProcessId(1);
pub const C: ProcessId = ProcessId(2);
pub const D: ProcessId = ProcessId(3);

/// Column order of one block of six grid columns.
pub const GRID_COLUMNS: [(Side, ProcessId); 6] =
    [(Side::S, A), (Side::R, B), (Side::S, C), (Side::R, A), (Side::S, B), (Side::R, C)];

impl UniversalParams {
    pub fn new(h: u32, l: u32) -> Result<Self, UniversalError> {
        if h == 0 || l == 0 {
            return Err(UniversalError::ZeroParameter { h, l });
        }
        Ok(UniversalParams { h, l })
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn num_vertices(&self) -> u32 {
        6 * self.h * self.l
    }

    /// Vertex `y_x^{i,j}` with `1 <= i <= h`, `1 <= j <= l`.
    pub fn vertex(&self, side: Side, x: ProcessId, i: u32, j: u32) -> Vertex {
        debug_assert!((1..=self.h).contains(&i) && (1..=self.l).contains(&j) && x.0 < 3);
        let y = match side {
            Side::S => 0,
            Side::R => 1,
        };
        ((x.0 * 2 + y) * self.l + (j - 1)) * self.h + (i - 1)
    }

    pub fn vertex_name(side: Side, x: ProcessId, i: u32, j: u32) -> String {
        let y = if side == Side::S { 's' } else { 'r' };
        format!("{y}_{}[{i},{j}]", (b'a' + x.0 as u8) as char)
    }

    /// Timeline of process `x`: sends in `(j, i)` order, then receives.
    pub fn timeline(&self, x: ProcessId) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(2 * (self.h * self.l) as usize);
        for side in [Side::S, Side::R] {
            for j in 1..=self.l {
                for i in 1..=self.h {
                    out.push(self.vertex(side, x, i, j));
                }
            }
        }
        out
    }

    /// Column arcs `Col_{x,y,j}`.
    pub fn column_arcs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for x in [A, B, C] {
            for side in [Side::S, Side::R] {
                for j in 1..=self.l {
                    for i in 1..self.h {
                        out.push((self.vertex(side, x, i, j), self.vertex(side, x, i + 1, j)));
                    }
                }
            }
        }
        out
    }

    pub fn group_arcs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for x in [A, B, C] {
            for side in [Side::S, Side::R] {
                for j in 1..self.l {
                    out.push((self.vertex(side, x, self.h, j), self.vertex(side, x, 1, j + 1)));
                }
            }
        }
        out
    }

    pub fn phase_arcs(&self) -> Vec<(Vertex, Vertex)> {
        [A, B, C]
            .iter()
            .map(|&x| (self.vertex(Side::S, x, self.h, self.l), self.vertex(Side::R, x, 1, 1)))
            .collect()
    }

    /// Message arcs: five per `(i, j)`, plus `a -> c` arcs into the previous
    /// group.
    pub fn message_arcs(&self) -> Vec<(Vertex, Vertex)> {
        let v = |s, x, i, j| self.vertex(s, x, i, j);
        let mut out = Vec::new();
        for j in 1..=self.l {
            for i in 1..=self.h {
                out.push((v(Side::S, A, i, j), v(Side::R, B, i, j)));
                out.push((v(Side::S, C, i, j), v(Side::R, B, i, j)));
                out.push((v(Side::S, C, i, j), v(Side::R, A, i, j)));
                out.push((v(Side::S, B, i, j), v(Side::R, A, i, j)));
                out.push((v(Side::S, B, i, j), v(Side::R, C, i, j)));
            }
        }
        for j in 1..self.l {
            for i in 1..=self.h {
                out.push((v(Side::S, A, i, j + 1), v(Side::R, C, i, j)));
            }
        }
        out
    }

    fn all_vertices(&self) -> impl Iterator<Item = (Vertex, String)> + '_ {
        [A, B, C].into_iter().flat_map(move |x| {
            [Side::S, Side::R].into_iter().flat_map(move |side| {
                (1..=self.l).flat_map(move |j| {
                    (1..=self.h).map(move |i| (self.vertex(side, x, i, j), Self::vertex_name(side, x, i, j)))
                })
            })
        })
    }
}

pub fn build_g(p: &UniversalParams) -> Digraph {
    let mut d = Digraph::new();
    for (v, name) in p.all_vertices() {
        d.add_named(v, name);
    }
    for (u, v) in p.column_arcs().into_iter().chain(p.group_arcs()).chain(p.phase_arcs()).chain(p.message_arcs()) {
        d.add_arc(u, v).unwrap();
    }
    d
}

/// `G(h, l)` restricted to column and message arcs, which is an `h x 6l` grid.
pub fn build_g_prime(p: &UniversalParams) -> Digraph {
    let mut d = Digraph::new();
    for (v, name) in p.all_vertices() {
        d.add_named(v, name);
    }
    for (u, v) in p.column_arcs().into_iter().chain(p.message_arcs()) {
        d.add_arc(u, v).unwrap();
    }
    d
}

/// A chart obtained from a digraph whose timeline arcs and message arcs are
/// given separately, and the events each vertex was split into.
#[derive(Debug, Clone)]
pub struct Lift {
    pub msc: Msc,
    pub alphabet: Alphabet,
    pub events: BTreeMap<Vertex, Vec<EventId>>,
    /// Event pair of each message arc, in the order the arcs were given.
    pub message_events: Vec<(EventId, EventId)>,
}

impl Lift {
    /// Branch sets contracting the events of each vertex back together.
    pub fn model_of(&self, g: &Graph) -> MinorModel {
        let host = underlying(&msc_to_digraph(&self.msc));
        let mut model = MinorModel {
            branch_sets: self.events.iter().map(|(&v, es)| (v, es.iter().map(|e| e.0).collect())).collect(),
            edge_witness: BTreeMap::new(),
        };
        model.complete_witnesses(g, &host);
        model
    }
}

/// Splits every vertex into one event per incident message arc, in arc order,
/// and lays the events out along the given timelines. Every message becomes
/// a send from the arc's source process to its target process, carrying the
/// single letter `u`.
pub fn lift_to_msc(
    timelines: &[(ProcessId, Vec<Vertex>)],
    messages: &[(Vertex, Vertex)],
    process_names: &[&str],
) -> Result<Lift, UniversalError> {
    let owner: BTreeMap<Vertex, ProcessId> =
        timelines.iter().flat_map(|(p, line)| line.iter().map(move |&v| (v, *p))).collect();
    let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (k, &(u, v)) in messages.iter().enumerate() {
        incident.entry(u).or_default().push(k);
        incident.entry(v).or_default().push(k);
    }
    let u = MessageId(0);
    let mut labels = BTreeMap::new();
    let mut lines = BTreeMap::new();
    let mut events: BTreeMap<Vertex, Vec<EventId>> = BTreeMap::new();
    let mut send_of = vec![EventId(0); messages.len()];
    let mut recv_of = vec![EventId(0); messages.len()];
    let mut next = 0u32;
    for (p, line) in timelines {
        let mut out = Vec::new();
        for &v in line {
            let arcs = incident.get(&v).ok_or(UniversalError::BareVertex(v))?;
            for &k in arcs {
                let e = EventId(next);
                next += 1;
                let (src, dst) = messages[k];
                let label = if src == v {
                    send_of[k] = e;
                    ActionLabel::send(*p, owner[&dst], u)
                } else {
                    recv_of[k] = e;
                    ActionLabel::receive(*p, owner[&src], u)
                };
                labels.insert(e, label);
                out.push(e);
                events.entry(v).or_default().push(e);
            }
        }
        lines.insert(*p, out);
    }
    let message_events: Vec<(EventId, EventId)> = send_of.into_iter().zip(recv_of).collect();
    let msc = Msc::new(labels, lines, message_events.iter().copied())?;
    let alphabet = Alphabet::new(process_names.iter().copied(), ["u"]);
    Ok(Lift { msc, alphabet, events, message_events })
}

/// The three-process lift of `G(h, l)` and the model of `G(h, l)` inside its
/// digraph.
pub fn build_gstar(p: &UniversalParams) -> (Lift, MinorModel) {
    let timelines: Vec<(ProcessId, Vec<Vertex>)> = [A, B, C].iter().map(|&x| (x, p.timeline(x))).collect();
    let lift = lift_to_msc(&timelines, &p.message_arcs(), &["a", "b", "c"]).expect("every vertex carries a message");
    let model = lift.model_of(&underlying(&build_g(p)));
    (lift, model)
}

/// Row `i` of the grid follows `s_a, r_b, s_c, r_a, s_b, r_c` through the
/// groups `j = 1..l`; column steps are the column arcs.
pub fn grid_minor_model(p: &UniversalParams) -> MinorModel {
    let w = 6 * p.l;
    let mut branch_sets = BTreeMap::new();
    for r in 0..p.h {
        for c in 0..w {
            let (side, x) = GRID_COLUMNS[(c % 6) as usize];
            let v = p.vertex(side, x, r + 1, c / 6 + 1);
            branch_sets.insert(r * w + c, BTreeSet::from([v]));
        }
    }
    let single = |gv: Vertex| *branch_sets[&gv].iter().next().unwrap();
    let edge_witness = grid(p.h, w).edges().map(|(a, b)| ((a, b), (single(a), single(b)))).collect();
    MinorModel { branch_sets, edge_witness }
}

#[derive(Debug, Clone)]
pub struct UniversalWitness {
    pub params: UniversalParams,
    pub g: Digraph,
    pub gstar: Lift,
    pub model_g_in_gstar: MinorModel,
    pub grid_model: MinorModel,
}

impl UniversalWitness {
    pub fn build(p: UniversalParams) -> Self {
        let (gstar, model_g_in_gstar) = build_gstar(&p);
        UniversalWitness { params: p, g: build_g(&p), gstar, model_g_in_gstar, grid_model: grid_minor_model(&p) }
    }

    /// Re-checks both models: `G` in the digraph of `G*`, and the grid in `G`.
    pub fn verify(&self) -> Result<(), String> {
        let g = underlying(&self.g);
        let host = underlying(&msc_to_digraph(&self.gstar.msc));
        verify_minor_model(&g, &host, &self.model_g_in_gstar).map_err(|v| format!("G in G*: {v}"))?;
        let grid_g = grid(self.params.h, 6 * self.params.l);
        verify_minor_model(&grid_g, &g, &self.grid_model).map_err(|v| format!("grid in G: {v}"))
    }
}

/// The construction containing `H` as a minor.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub params: UniversalParams,
    /// `G(h, l)` plus the path `d_1 ... d_l` and arcs `(r_a^{i,j}, d_j)`.
    pub digraph: Digraph,
    pub model: MinorModel,
    /// A four-process weakly synchronous chart whose digraph contains
    /// `digraph` as a minor; its `d` events send to `a`.
    pub lift: Lift,
    pub lift_model: MinorModel,
}

/// Vertices of `H` are taken in id order as `v_1..v_h`, edges in sorted order
/// as `e_1..e_l`; for `e_j = {v_i, v_k}` with `i < k`, `d_j` joins the branch
/// set of `v_k`.
pub fn embed_arbitrary_minor(h_graph: &Graph) -> Result<Embedding, UniversalError> {
    let hv: Vec<Vertex> = h_graph.vertices().collect();
    let he: Vec<(Vertex, Vertex)> = h_graph.edges().collect();
    if he.is_empty() {
        return Err(UniversalError::NoEdges);
    }
    let p = UniversalParams::new(hv.len() as u32, he.len() as u32)?;
    let row = |v: Vertex| hv.binary_search(&v).unwrap() as u32 + 1;
    let d = |j: u32| p.num_vertices() + j - 1;

    let mut digraph = build_g(&p);
    for j in 1..=p.l {
        digraph.add_named(d(j), format!("d[{j}]"));
    }
    for j in 1..p.l {
        digraph.add_arc(d(j), d(j + 1)).unwrap();
    }
    let mut d_arcs = Vec::new();
    for (j, &(u, v)) in (1..).zip(&he) {
        for end in [u, v] {
            let ra = p.vertex(Side::R, A, row(end), j);
            digraph.add_arc(ra, d(j)).unwrap();
            d_arcs.push((d(j), ra));
        }
    }

    let mut branch_sets: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for &v in &hv {
        let i = row(v);
        let set = branch_sets.entry(v).or_default();
        for j in 1..=p.l {
            for (side, x) in GRID_COLUMNS {
                set.insert(p.vertex(side, x, i, j));
            }
        }
    }
    let mut edge_witness = BTreeMap::new();
    for (j, &(u, v)) in (1..).zip(&he) {
        branch_sets.get_mut(&v).unwrap().insert(d(j));
        edge_witness.insert((u, v), (p.vertex(Side::R, A, row(u), j), d(j)));
    }
    let model = MinorModel { branch_sets, edge_witness };

    let mut timelines: Vec<(ProcessId, Vec<Vertex>)> = [A, B, C].iter().map(|&x| (x, p.timeline(x))).collect();
    timelines.push((D, (1..=p.l).map(d).collect()));
    // d-messages first, so each is received before the grid messages at its vertex.
    let mut messages = d_arcs;
    messages.extend(p.message_arcs());
    let lift = lift_to_msc(&timelines, &messages, &["a", "b", "c", "d"])?;
    let mut lift_model = MinorModel {
        branch_sets: model
            .branch_sets
            .iter()
            .map(|(&hvx, set)| (hvx, set.iter().flat_map(|v| lift.events[v].iter().map(|e| e.0)).collect()))
            .collect(),
        edge_witness: BTreeMap::new(),
    };
    lift_model.complete_witnesses(h_graph, &underlying(&msc_to_digraph(&lift.msc)));
    Ok(Embedding { params: p, digraph, model, lift, lift_model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{exact_treewidth, verify_minor_model};
    use crate::msc::{is_weakly_synchronous, validate_msc};

    fn params(h: u32, l: u32) -> UniversalParams {
        UniversalParams::new(h, l).unwrap()
    }

    #[test]
    fn arc_counts() {
        let g = build_g(&params(1, 1));
        assert_eq!((g.num_vertices(), g.num_arcs()), (6, 8));
        let p = params(4, 2);
        assert_eq!(p.column_arcs().len(), 36);
        assert_eq!(p.group_arcs().len(), 6);
        assert_eq!(p.phase_arcs().len(), 3);
        assert_eq!(p.message_arcs().len(), 44);
        let g = build_g(&p);
        assert_eq!((g.num_vertices(), g.num_arcs()), (48, 89));
        assert_eq!(UniversalParams::new(0, 2), Err(UniversalError::ZeroParameter { h: 0, l: 2 }));
    }

    #[test]
    fn degree_three_boundary_vertices() {
        for (h, l) in [(1, 1), (2, 2), (3, 2), (4, 3)] {
            let p = params(h, l);
            let g = build_g(&p);
            // Only vertices carrying two messages are split into two events.
            let mut carried: BTreeMap<Vertex, usize> = BTreeMap::new();
            for (u, v) in p.message_arcs() {
                *carried.entry(u).or_default() += 1;
                *carried.entry(v).or_default() += 1;
            }
            let two: Vec<Vertex> = carried.iter().filter(|e| *e.1 == 2).map(|e| *e.0).collect();
            let mut three: Vec<String> =
                two.iter().copied().filter(|&v| g.degree(v) == 3).map(|v| g.name(v)).collect();
            three.sort();
            assert!(two.iter().all(|&v| g.degree(v) >= 3));
            let mut expect = vec![
                UniversalParams::vertex_name(Side::S, B, 1, 1),
                UniversalParams::vertex_name(Side::S, C, 1, 1),
                UniversalParams::vertex_name(Side::R, A, h, l),
                UniversalParams::vertex_name(Side::R, B, h, l),
            ];
            expect.sort();
            if h > 1 || l > 1 {
                assert_eq!(three, expect, "h={h} l={l}");
            }
            assert!(g.vertices().iter().all(|&v| g.degree(v) <= 4));
        }
    }

    #[test]
    fn gstar_is_a_single_phase() {
        for h in 1..=4 {
            for l in 1..=3 {
                let p = params(h, l);
                let (lift, model) = build_gstar(&p);
                let m = &lift.msc;
                assert!(validate_msc(m).is_valid(), "h={h} l={l}");
                assert!(m.is_orphan_free());
                assert_eq!(m.processes().count(), 3);
                let v = is_weakly_synchronous(m).unwrap();
                assert_eq!(v.phases().unwrap().len(), 1, "h={h} l={l}");
                for line in m.timelines().values() {
                    let first_recv = line.iter().position(|e| m.labels()[e].is_receive()).unwrap();
                    assert!(line[first_recv..].iter().all(|e| m.labels()[e].is_receive()));
                }
                let host = underlying(&msc_to_digraph(m));
                assert_eq!(verify_minor_model(&underlying(&build_g(&p)), &host, &model), Ok(()));
                assert!(host.vertices().all(|v| host.degree(v) <= 3));
            }
        }
    }

    #[test]
    fn per_channel_arcs_are_parallel() {
        let (lift, _) = build_gstar(&params(2, 2));
        let m = &lift.msc;
        let pos: BTreeMap<EventId, usize> =
            m.timelines().values().flat_map(|l| l.iter().enumerate().map(|(i, &e)| (e, i))).collect();
        let mut by_channel: BTreeMap<(ProcessId, ProcessId), Vec<(usize, usize)>> = BTreeMap::new();
        for &(s, r) in m.messages() {
            by_channel.entry(m.labels()[&s].channel()).or_default().push((pos[&s], pos[&r]));
        }
        assert_eq!(by_channel.len(), 6);
        for arcs in by_channel.values() {
            for x in arcs {
                for y in arcs {
                    assert_eq!(x.0 < y.0, x.1 < y.1);
                }
            }
        }
    }

    #[test]
    fn grid_models() {
        for h in 1..=4 {
            for l in 1..=3 {
                let p = params(h, l);
                let model = grid_minor_model(&p);
                let gr = grid(h, 6 * l);
                assert_eq!(verify_minor_model(&gr, &underlying(&build_g(&p)), &model), Ok(()));
                let gp = underlying(&build_g_prime(&p));
                assert_eq!(verify_minor_model(&gr, &gp, &model), Ok(()));
                // Bijective on vertices with equal edge counts: G' is the grid.
                assert_eq!(gp.num_edges(), gr.num_edges());
            }
        }
    }

    #[test]
    fn treewidth_lower_bound_small() {
        let g = underlying(&build_g(&params(2, 1)));
        assert!(exact_treewidth(&g).unwrap().width >= 2);
    }

    #[test]
    fn witness_verifies() {
        let w = UniversalWitness::build(params(4, 2));
        assert_eq!(w.verify(), Ok(()));
    }

    fn check_embedding(h: &Graph) -> Embedding {
        let e = embed_arbitrary_minor(h).unwrap();
        assert_eq!(verify_minor_model(h, &underlying(&e.digraph), &e.model), Ok(()));
        let m = &e.lift.msc;
        assert!(validate_msc(m).is_valid());
        assert!(m.is_orphan_free());
        assert_eq!(is_weakly_synchronous(m).unwrap().phases().unwrap().len(), 1);
        assert_eq!(m.processes().count(), 4);
        let host = underlying(&msc_to_digraph(m));
        assert_eq!(verify_minor_model(h, &host, &e.lift_model), Ok(()));
        let used: usize = e.model.branch_sets.values().map(BTreeSet::len).sum();
        assert_eq!(used as u32, e.params.num_vertices() + e.params.l());
        e
    }

    #[test]
    fn embeddings() {
        let e = check_embedding(&Graph::complete(2));
        assert_eq!((e.params.h(), e.params.l()), (2, 1));
        let e = check_embedding(&Graph::complete(4));
        assert_eq!((e.params.h(), e.params.l()), (4, 6));
        let e = check_embedding(&Graph::cycle(5));
        assert_eq!((e.params.h(), e.params.l()), (5, 5));
        assert!(matches!(embed_arbitrary_minor(&Graph::with_vertices(0..3)), Err(UniversalError::NoEdges)));
    }
}
