//! Bounded breadth-first exploration of configurations.
//!
//! Layer `k` holds the configurations first reached with `k` events;
//! ε-moves stay inside a layer. Successors are generated per configuration
//! (in parallel when enabled) and merged in a fixed order, so the result does
//! not depend on the execution mode.
//!
//! Configurations that cannot reach acceptance within the step bound are
//! dropped early: every process still has to reach its final state and to
//! receive whatever is queued for it, so the larger of the two counts is a
//! lower bound on its remaining events.
//!
//! Steps of different processes commute and never disable each other, and
//! a process can only enable a step of another one by filling an empty
//! channel it reads or draining a full one it writes. So take a process
//! that must still move and close it under "waits on": whoever could
//! unblock a member joins. Outside steps cannot touch the members' steps,
//! so every accepting run can be reordered to start with a member's step,
//! without changing any process's sequence of events or exceeding the queue
//! bound. Only members are expanded. Each chart within the bounds thus
//! keeps at least one run.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use super::{Automaton, CommSystem, Run, TransitionRef};
use crate::msc::{is_weakly_synchronous, Msc, ProcessId, WsVerdict};
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Longest allowed content of any single channel.
    pub max_queue: usize,
    /// Largest number of events (non-ε transitions) in a run.
    pub max_steps: usize,
    /// Stop once this many distinct configurations have been seen.
    pub max_configurations: usize,
}

impl Bounds {
    pub fn new(max_queue: usize, max_steps: usize) -> Self {
        Bounds { max_queue, max_steps, max_configurations: 4_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Includes the ε-transitions taken.
    pub trace: Vec<TransitionRef>,
    pub msc: Msc,
    pub run: Run,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exploration {
    Found(Witness),
    NoneWithinBounds,
    /// The configuration cap was hit before the bounds were exhausted.
    CapReached,
}

impl Exploration {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Exploration::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// A configuration as `n` states followed by `n * n` channel slots of
/// `1 + max_queue` entries each (length, then contents).
type Packed = Box<[u16]>;

struct Engine<'a> {
    s: &'a CommSystem,
    n: usize,
    slot: usize,
    max_queue: usize,
    accepting: Vec<Vec<bool>>,
    to_final: Vec<Vec<usize>>,
    /// Expand only stubborn processes.
    reduce: bool,
}

impl<'a> Engine<'a> {
    fn new(s: &'a CommSystem, max_queue: usize) -> Self {
        Engine {
            s,
            n: s.num_processes(),
            slot: 1 + max_queue,
            max_queue,
            accepting: s.automata().iter().map(Automaton::accepting_states).collect(),
            to_final: s.automata().iter().map(events_to_final).collect(),
            reduce: true,
        }
    }

    fn root(&self) -> Packed {
        let mut v = vec![0u16; self.n + self.n * self.n * self.slot];
        for (p, a) in self.s.automata().iter().enumerate() {
            v[p] = a.initial() as u16;
        }
        v.into_boxed_slice()
    }

    fn chan(&self, from: usize, to: usize) -> usize {
        self.n + (from * self.n + to) * self.slot
    }

    fn is_accepting(&self, c: &[u16]) -> bool {
        (0..self.n).all(|p| self.accepting[p][c[p] as usize])
            && (0..self.n * self.n).all(|k| c[self.n + k * self.slot] == 0)
    }

    fn lower_bound(&self, c: &[u16]) -> usize {
        let mut total = 0usize;
        for p in 0..self.n {
            let pending: usize = (0..self.n).map(|q| c[self.chan(q, p)] as usize).sum();
            total = total.saturating_add(self.to_final[p][c[p] as usize].max(pending));
        }
        total
    }

    /// Whether `p` has to move again before acceptance: it is outside its
    /// accepting states or has messages to receive.
    fn must_move(&self, c: &[u16], p: usize) -> bool {
        !self.accepting[p][c[p] as usize] || (0..self.n).any(|q| c[self.chan(q, p)] > 0)
    }

    /// Processes to expand in `c`, as a mask. Starting from one that must
    /// move, adds the sender of every empty channel a member waits to
    /// receive from and the receiver of every full channel it waits to send
    /// into. Among all starting points the set with fewest enabled steps is
    /// kept; `None` means every process is expanded.
    fn stubborn(&self, c: &[u16]) -> Option<Vec<bool>> {
        let mut best: Option<(usize, Vec<bool>)> = None;
        for seed in (0..self.n).filter(|&p| self.must_move(c, p)) {
            let mut set = vec![false; self.n];
            set[seed] = true;
            let mut stack = vec![seed];
            let mut enabled = 0;
            while let Some(p) = stack.pop() {
                let a = &self.s.automata()[p];
                for &k in a.outgoing(c[p] as u32) {
                    let waits_on = match a.transitions()[k].label {
                        None => None,
                        Some(l) => {
                            let len = c[self.chan(l.sender.0 as usize, l.receiver.0 as usize)] as usize;
                            if l.is_send() && len >= self.max_queue {
                                Some(l.receiver.0 as usize)
                            } else if !l.is_send() && len == 0 {
                                Some(l.sender.0 as usize)
                            } else {
                                None
                            }
                        }
                    };
                    match waits_on {
                        Some(q) if !set[q] => {
                            set[q] = true;
                            stack.push(q);
                        }
                        Some(_) => {}
                        None => enabled += 1,
                    }
                }
            }
            if best.as_ref().is_none_or(|(e, _)| enabled < *e) {
                best = Some((enabled, set));
            }
        }
        best.map(|(_, set)| set)
    }

    /// The ε (or non-ε) steps enabled in `c` that keep every channel within
    /// `max_queue`, by process id and then transition index. Only the steps
    /// of the [`stubborn`](Self::stubborn) processes are taken.
    fn successors(&self, c: &[u16], epsilon: bool) -> Vec<(TransitionRef, Packed)> {
        let mut out = Vec::new();
        let set = if self.reduce { self.stubborn(c) } else { None };
        for p in (0..self.n).filter(|&p| set.as_ref().is_none_or(|s| s[p])) {
            let a = &self.s.automata()[p];
            for &k in a.outgoing(c[p] as u32) {
                let tr = a.transitions()[k];
                if tr.label.is_none() != epsilon {
                    continue;
                }
                let mut next: Packed = c.into();
                next[p] = tr.target as u16;
                if let Some(l) = tr.label {
                    let ch = self.chan(l.sender.0 as usize, l.receiver.0 as usize);
                    let len = c[ch] as usize;
                    if l.is_send() {
                        if len >= self.max_queue {
                            continue;
                        }
                        next[ch + 1 + len] = l.payload.0 as u16;
                        next[ch] += 1;
                    } else {
                        if len == 0 || c[ch + 1] != l.payload.0 as u16 {
                            continue;
                        }
                        next.copy_within(ch + 2..ch + 1 + len, ch + 1);
                        next[ch + len] = 0;
                        next[ch] -= 1;
                    }
                }
                out.push((TransitionRef::new(ProcessId(p as u32), k), next));
            }
        }
        out
    }
}

/// Fewest labelled transitions from each state to one that ε-reaches the
/// final state, `usize::MAX` if there is none.
fn events_to_final(a: &Automaton) -> Vec<usize> {
    let acc = a.accepting_states();
    let mut rev: Vec<Vec<(bool, usize)>> = vec![Vec::new(); a.num_states()];
    for t in a.transitions() {
        rev[t.target as usize].push((t.label.is_some(), t.source as usize));
    }
    let mut dist = vec![usize::MAX; a.num_states()];
    let mut deque = VecDeque::new();
    for q in 0..a.num_states() {
        if acc[q] {
            dist[q] = 0;
            deque.push_back(q);
        }
    }
    while let Some(y) = deque.pop_front() {
        for &(labelled, x) in &rev[y] {
            let d = dist[y] + usize::from(labelled);
            if d < dist[x] {
                dist[x] = d;
                if labelled {
                    deque.push_back(x);
                } else {
                    deque.push_front(x);
                }
            }
        }
    }
    dist
}

pub fn bounded_explore(s: &CommSystem, bounds: Bounds) -> Exploration {
    bounded_explore_with(s, bounds, Execution::default())
}

/// Returns the first accepting configuration in BFS order, expanding
/// processes by id and transitions by index.
pub fn bounded_explore_with(s: &CommSystem, bounds: Bounds, exec: Execution) -> Exploration {
    assert!(s.num_processes() > 0 && s.automata().iter().all(|a| a.num_states() <= u16::MAX as usize));
    let eng = Engine::new(s, bounds.max_queue);
    let hopeless = |c: &[u16], depth: usize| depth.saturating_add(eng.lower_bound(c)) > bounds.max_steps;
    let root = eng.root();
    if hopeless(&root, 0) {
        return Exploration::NoneWithinBounds;
    }
    // Node 0 is the root; every other node records its parent and the step.
    let mut nodes: Vec<(usize, TransitionRef)> = vec![(usize::MAX, TransitionRef::new(ProcessId(0), 0))];
    let mut visited: FxHashSet<Packed> = FxHashSet::default();
    visited.insert(root.clone());
    let mut layer = vec![(root, 0usize)];
    for depth in 0..=bounds.max_steps {
        let mut i = 0;
        while i < layer.len() {
            let id = layer[i].1;
            for (t, next) in eng.successors(&layer[i].0, true) {
                if !hopeless(&next, depth) && visited.insert(next.clone()) {
                    nodes.push((id, t));
                    layer.push((next, nodes.len() - 1));
                }
            }
            i += 1;
        }
        if let Some((_, id)) = layer.iter().find(|(c, _)| eng.is_accepting(c)) {
            return Exploration::Found(witness(s, &nodes, *id));
        }
        if visited.len() > bounds.max_configurations {
            return Exploration::CapReached;
        }
        if depth == bounds.max_steps {
            break;
        }
        let succ = exec.map(&layer, |(c, _)| {
            let mut list = eng.successors(c, false);
            list.retain(|(_, next)| !hopeless(next, depth + 1));
            list
        });
        let mut next_layer = Vec::new();
        for ((_, id), list) in layer.iter().zip(succ) {
            for (t, next) in list {
                if visited.insert(next.clone()) {
                    nodes.push((*id, t));
                    next_layer.push((next, nodes.len() - 1));
                }
            }
        }
        if next_layer.is_empty() {
            break;
        }
        layer = next_layer;
    }
    Exploration::NoneWithinBounds
}

fn witness(s: &CommSystem, nodes: &[(usize, TransitionRef)], mut id: usize) -> Witness {
    let mut trace = Vec::new();
    while id != 0 {
        trace.push(nodes[id].1);
        id = nodes[id].0;
    }
    trace.reverse();
    let (msc, run) = s.trace_to_msc(&trace).expect("explored traces replay");
    Witness { trace, msc, run }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    /// Accepting runs with pairwise distinct per-process event sequences,
    /// in discovery order.
    pub witnesses: Vec<Witness>,
    /// False if the configuration cap or the result limit cut the search.
    pub complete: bool,
}

/// Enumerates accepting runs within the bounds, up to `limit` of them.
///
/// First the reachable configuration graph is built, together with the least
/// number of events still needed to accept from each configuration. A depth
/// first search then walks runs, keyed by configuration and per-process
/// event history so that interleavings of the same runs are visited once,
/// and drops every branch that cannot accept within `max_steps`.
pub fn enumerate_language(s: &CommSystem, bounds: Bounds, limit: usize) -> LanguageSample {
    enumerate(s, bounds, limit, true)
}

fn enumerate(s: &CommSystem, bounds: Bounds, limit: usize, reduce: bool) -> LanguageSample {
    let g = match ConfigGraph::build(s, bounds, reduce) {
        Some(g) => g,
        None => return LanguageSample { witnesses: vec![], complete: false },
    };
    let mut search = Search {
        s,
        g: &g,
        bounds,
        limit,
        trace: Vec::new(),
        hist: vec![Vec::new(); s.num_processes()],
        seen: FxHashSet::default(),
        emitted: FxHashSet::default(),
        out: Vec::new(),
    };
    let complete = g.remaining[0] == usize::MAX || search.dfs(0, 0);
    LanguageSample { witnesses: search.out, complete }
}

struct ConfigGraph {
    edges: Vec<Vec<(TransitionRef, bool, usize)>>,
    accepting: Vec<bool>,
    /// Least number of further events to reach acceptance, or `usize::MAX`.
    remaining: Vec<usize>,
}

impl ConfigGraph {
    fn build(s: &CommSystem, bounds: Bounds, reduce: bool) -> Option<Self> {
        let eng = Engine { reduce, ..Engine::new(s, bounds.max_queue) };
        let root = eng.root();
        let mut index: FxHashMap<Packed, usize> = FxHashMap::default();
        index.insert(root.clone(), 0);
        let mut confs = vec![root];
        let mut depth = vec![0usize];
        let mut edges: Vec<Vec<(TransitionRef, bool, usize)>> = vec![Vec::new()];
        // 0-1 BFS on event depth.
        let mut deque = VecDeque::from([0usize]);
        let mut done = vec![false];
        while let Some(x) = deque.pop_front() {
            if done[x] {
                continue;
            }
            done[x] = true;
            for eps in [true, false] {
                if !eps && depth[x] == bounds.max_steps {
                    continue;
                }
                for (t, next) in eng.successors(&confs[x], eps) {
                    let d = depth[x] + usize::from(!eps);
                    if d.saturating_add(eng.lower_bound(&next)) > bounds.max_steps {
                        continue;
                    }
                    let y = match index.get(&next) {
                        Some(&y) => y,
                        None => {
                            if confs.len() >= bounds.max_configurations {
                                return None;
                            }
                            index.insert(next.clone(), confs.len());
                            confs.push(next);
                            depth.push(usize::MAX);
                            edges.push(Vec::new());
                            done.push(false);
                            confs.len() - 1
                        }
                    };
                    edges[x].push((t, !eps, y));
                    if d < depth[y] {
                        depth[y] = d;
                        if eps {
                            deque.push_front(y);
                        } else {
                            deque.push_back(y);
                        }
                    }
                }
            }
        }
        let accepting: Vec<bool> = confs.iter().map(|c| eng.is_accepting(c)).collect();
        let mut rev: Vec<Vec<(bool, usize)>> = vec![Vec::new(); confs.len()];
        for (x, es) in edges.iter().enumerate() {
            for &(_, ev, y) in es {
                rev[y].push((ev, x));
            }
        }
        let mut remaining = vec![usize::MAX; confs.len()];
        let mut deque = VecDeque::new();
        for (x, &a) in accepting.iter().enumerate() {
            if a {
                remaining[x] = 0;
                deque.push_back(x);
            }
        }
        while let Some(y) = deque.pop_front() {
            for &(ev, x) in &rev[y] {
                let d = remaining[y] + usize::from(ev);
                if d < remaining[x] {
                    remaining[x] = d;
                    if ev {
                        deque.push_back(x);
                    } else {
                        deque.push_front(x);
                    }
                }
            }
        }
        Some(ConfigGraph { edges, accepting, remaining })
    }
}

struct Search<'a> {
    s: &'a CommSystem,
    g: &'a ConfigGraph,
    bounds: Bounds,
    limit: usize,
    trace: Vec<TransitionRef>,
    hist: Vec<Vec<u32>>,
    seen: FxHashSet<(usize, Vec<Vec<u32>>)>,
    emitted: FxHashSet<Vec<Vec<u32>>>,
    out: Vec<Witness>,
}

impl Search<'_> {
    /// Returns false once the result limit cuts the search.
    fn dfs(&mut self, x: usize, events: usize) -> bool {
        if !self.seen.insert((x, self.hist.clone())) {
            return true;
        }
        if self.g.accepting[x] && self.emitted.insert(self.hist.clone()) {
            if self.out.len() == self.limit {
                return false;
            }
            let (msc, run) = self.s.trace_to_msc(&self.trace).expect("graph edges replay");
            self.out.push(Witness { trace: self.trace.clone(), msc, run });
        }
        let g = self.g;
        for &(t, ev, y) in &g.edges[x] {
            let e = events + usize::from(ev);
            if g.remaining[y] == usize::MAX || e + g.remaining[y] > self.bounds.max_steps {
                continue;
            }
            self.trace.push(t);
            if ev {
                self.hist[t.process.0 as usize].push(t.index as u32);
            }
            let ok = self.dfs(y, e);
            if ev {
                self.hist[t.process.0 as usize].pop();
            }
            self.trace.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsSystemVerdict {
    /// The first explored accepting chart that is not weakly synchronous.
    pub counterexample: Option<Witness>,
    pub explored: usize,
    pub complete: bool,
}

/// Checks the charts of up to `limit` explored accepting runs. Finding no
/// counterexample within the bounds proves nothing about longer runs.
pub fn is_weakly_synchronous_system(s: &CommSystem, bounds: Bounds, limit: usize) -> WsSystemVerdict {
    let sample = enumerate_language(s, bounds, limit);
    let explored = sample.witnesses.len();
    let counterexample = sample
        .witnesses
        .into_iter()
        .find(|w| matches!(is_weakly_synchronous(&w.msc), Ok(WsVerdict::NotWeaklySynchronous(_))));
    WsSystemVerdict { counterexample, explored, complete: sample.complete }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::cfm::fixtures::*;
    use crate::cfm::{check_accepting_run, normalize_epsilon, Automaton, FifoAutomaton, FIFO_PROCESS};
    use crate::msc::{validate_msc, ActionLabel, Alphabet, MessageId};

    #[test]
    fn push_pop_has_a_two_step_witness() {
        let f = push_pop();
        let w = bounded_explore(f.system(), Bounds::new(1, 5)).witness().cloned().unwrap();
        assert_eq!(w.trace, vec![TransitionRef::new(FIFO_PROCESS, 0), TransitionRef::new(FIFO_PROCESS, 1)]);
        assert_eq!(check_accepting_run(f.system(), &w.msc, &w.run), Ok(()));
        assert_eq!(bounded_explore(f.system(), Bounds::new(0, 5)), Exploration::NoneWithinBounds);
        assert_eq!(bounded_explore(f.system(), Bounds::new(1, 1)), Exploration::NoneWithinBounds);
    }

    #[test]
    fn only_sending_has_no_witness() {
        let mut a = Automaton::new(["q0", "q1"], 0, 1).unwrap();
        a.add_transition(0, Some(FifoAutomaton::push(MessageId(0))), 1).unwrap();
        a.add_transition(1, Some(FifoAutomaton::push(MessageId(0))), 1).unwrap();
        let f = FifoAutomaton::new(["x"], a).unwrap();
        assert_eq!(bounded_explore(f.system(), Bounds::new(4, 20)), Exploration::NoneWithinBounds);
        let mut capped = Bounds::new(4, 20);
        capped.max_configurations = 2;
        assert_eq!(bounded_explore(f.system(), capped), Exploration::CapReached);
    }

    #[test]
    fn three_phase_system_accepts_three_phase() {
        let s = three_phase_system();
        let w = bounded_explore(&s, Bounds::new(2, 10));
        let w = w.witness().unwrap();
        let (chart, _) = crate::msc::fixtures::three_phase();
        assert_eq!(w.msc.canonical().unwrap(), chart.canonical().unwrap());
        let sample = enumerate_language(&s, Bounds::new(2, 10), 10);
        assert_eq!(sample.witnesses.len(), 1);
        assert!(sample.complete);
    }

    #[test]
    fn modes_return_the_same_witness() {
        let s = three_phase_system();
        let a = bounded_explore_with(&s, Bounds::new(2, 10), Execution::Sequential);
        let b = bounded_explore_with(&s, Bounds::new(2, 10), Execution::Parallel);
        assert_eq!(a, b);
    }

    fn ping_pong() -> CommSystem {
        let (p, q, m) = (ProcessId(0), ProcessId(1), MessageId(0));
        let mut pa = Automaton::new(["0", "1"], 0, 0).unwrap();
        pa.add_transition(0, Some(ActionLabel::send(p, q, m)), 1).unwrap();
        pa.add_transition(1, Some(ActionLabel::receive(p, q, m)), 0).unwrap();
        let mut qa = Automaton::new(["0", "1"], 0, 0).unwrap();
        qa.add_transition(0, Some(ActionLabel::receive(q, p, m)), 1).unwrap();
        qa.add_transition(1, Some(ActionLabel::send(q, p, m)), 0).unwrap();
        CommSystem::new(Alphabet::new(["p", "q"], ["m"]), vec![pa, qa]).unwrap()
    }

    #[test]
    fn ping_pong_is_weakly_synchronous() {
        let v = is_weakly_synchronous_system(&ping_pong(), Bounds::new(1, 16), 100);
        assert!(v.counterexample.is_none());
        assert_eq!(v.explored, 5);
        assert!(v.complete);
    }

    #[test]
    fn crafted_counterexample() {
        let m = crate::msc::fixtures::not_weakly_synchronous();
        let alphabet = Alphabet::new(["p", "q"], ["1", "2", "3", "4"]);
        let automata = (0..2)
            .map(|p| line(&m.timeline(ProcessId(p)).iter().map(|e| *m.label(*e).unwrap()).collect::<Vec<_>>()))
            .collect();
        let s = CommSystem::new(alphabet, automata).unwrap();
        let v = is_weakly_synchronous_system(&s, Bounds::new(2, 8), 10);
        let w = v.counterexample.unwrap();
        assert_eq!(w.msc.canonical().unwrap(), m.canonical().unwrap());
    }

    fn random_system(spec: &[(u8, u8, u8)], states: u32) -> CommSystem {
        let (p, q) = (ProcessId(0), ProcessId(1));
        let mut autos = vec![];
        for me in [p, q] {
            let other = if me == p { q } else { p };
            let mut a = Automaton::new((0..states).map(|i| format!("s{i}")), 0, states - 1).unwrap();
            for &(src, kind, dst) in spec.iter().filter(|e| (e.1 >> 3 == 0) == (me == p)) {
                let m = MessageId((kind as u32 >> 1) & 1);
                let label = match kind & 7 {
                    0 => None,
                    1..=3 => Some(ActionLabel::send(me, other, m)),
                    _ => Some(ActionLabel::receive(me, other, m)),
                };
                a.add_transition(src as u32 % states, label, dst as u32 % states).unwrap();
            }
            autos.push(a);
        }
        CommSystem::new(Alphabet::new(["p", "q"], ["x", "y"]), autos).unwrap()
    }

    #[test]
    fn reduction_keeps_encoded_charts() {
        // Pushes x or y, then pops x or y.
        let mut a = Automaton::new((0..7).map(|i| format!("q{i}")), 0, 6).unwrap();
        for (m, (push, pop)) in [(MessageId(0), (1, 4)), (MessageId(1), (2, 5))] {
            a.add_transition(0, None, push).unwrap();
            a.add_transition(push, Some(FifoAutomaton::push(m)), 3).unwrap();
            a.add_transition(3, None, pop).unwrap();
            a.add_transition(pop, Some(FifoAutomaton::pop(m)), 6).unwrap();
        }
        let enc = crate::reduction::encode(&FifoAutomaton::new(["x", "y"], a).unwrap()).unwrap();
        let bounds = Bounds::new(2, 24);
        let charts = |reduce| {
            let smp = enumerate(&enc.system, bounds, 10_000, reduce);
            assert!(smp.complete);
            smp.witnesses.iter().map(|w| format!("{:?}", w.msc.canonical().unwrap())).collect::<BTreeSet<_>>()
        };
        let all = charts(false);
        assert!(all.len() > 1);
        assert_eq!(charts(true), all);
    }

    /// Automata accepting the timelines of a random chart, plus extra
    /// transitions (process, source, kind, target): kind 0 is ε, odd kinds
    /// send and even ones receive.
    fn chart_system(seed: u64, extra: &[(u8, u8, u8, u8)]) -> CommSystem {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let params = crate::corpus::ChartParams { max_processes: 3, max_messages: 3, letters: 2, overtaking: false };
        let (al, m) = crate::corpus::random_chart(&mut rng, params);
        let n = al.num_processes() as u32;
        let mut autos: Vec<Automaton> = (0..n)
            .map(|p| {
                let tl = m.timeline(ProcessId(p));
                let mut a = Automaton::new((0..=tl.len()).map(|i| format!("s{i}")), 0, tl.len() as u32).unwrap();
                for (i, &e) in tl.iter().enumerate() {
                    a.add_transition(i as u32, m.label(e).copied(), i as u32 + 1).unwrap();
                }
                a
            })
            .collect();
        for &(p, src, kind, dst) in extra {
            let p = p as u32 % n;
            let a = &mut autos[p as usize];
            let k = a.num_states() as u32;
            let (me, other) = (ProcessId(p), ProcessId((p + 1 + u32::from(kind & 2 > 0)) % n));
            let msg = MessageId(u32::from(kind & 4 > 0));
            let label = match kind {
                0 => None,
                _ if kind % 2 == 1 => Some(ActionLabel::send(me, other, msg)),
                _ => Some(ActionLabel::receive(me, other, msg)),
            };
            if me != other {
                a.add_transition(src as u32 % k, label, dst as u32 % k).unwrap();
            }
        }
        CommSystem::new(al, autos).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn witnesses_are_accepting_runs(spec in proptest::collection::vec((0u8..4, 0u8..16, 0u8..4), 0..12)) {
            let s = random_system(&spec, 4);
            let bounds = Bounds::new(2, 8);
            let seq = bounded_explore_with(&s, bounds, Execution::Sequential);
            prop_assert_eq!(&seq, &bounded_explore_with(&s, bounds, Execution::Parallel));
            let sample = enumerate_language(&s, bounds, 50);
            prop_assert_eq!(seq.witness().is_some(), !sample.witnesses.is_empty());
            for w in seq.witness().into_iter().chain(&sample.witnesses) {
                prop_assert_eq!(check_accepting_run(&s, &w.msc, &w.run), Ok(()));
                prop_assert!(validate_msc(&w.msc).is_valid());
                prop_assert!(w.msc.len() <= bounds.max_steps);
                // Replay is deterministic and channels stay FIFO.
                let confs = s.replay(&w.trace).unwrap();
                prop_assert_eq!(&confs, &s.replay(&w.trace).unwrap());
                prop_assert!(confs.iter().all(|c| c.channels.iter().all(|q| q.len() <= bounds.max_queue)));
            }
        }

        #[test]
        fn normalization_keeps_bounded_emptiness(spec in proptest::collection::vec((0u8..3, 0u8..16, 0u8..3), 0..8)) {
            let s = random_system(&spec, 3);
            let n = CommSystem::new(s.alphabet().clone(), s.automata().iter().map(normalize_epsilon).collect()).unwrap();
            let bounds = Bounds::new(3, 40);
            let a = bounded_explore(&s, bounds).witness().is_some();
            let b = bounded_explore(&n, bounds).witness().is_some();
            prop_assert_eq!(a, b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn reduction_keeps_every_chart(
            seed in any::<u64>(),
            extra in proptest::collection::vec((0u8..3, 0u8..8, 0u8..8, 0u8..8), 0..16),
        ) {
            let s = chart_system(seed, &extra);
            let bounds = Bounds::new(2, 10);
            let charts = |reduce| {
                let smp = enumerate(&s, bounds, 10_000, reduce);
                assert!(smp.complete);
                smp.witnesses.iter().map(|w| format!("{:?}", w.msc.canonical().unwrap())).collect::<BTreeSet<_>>()
            };
            let all = charts(false);
            prop_assert_eq!(charts(true), all);
        }
    }
}
