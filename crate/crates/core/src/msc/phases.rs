use std::collections::{BTreeMap, BTreeSet};

use super::{CausalOrder, Dense, EventId, Msc, MscError};

/// Phases `M_1 ... M_n` of a weakly synchronous chart, in an order compatible
/// with every timeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseDecomposition {
    pub phases: Vec<BTreeSet<EventId>>,
}

impl PhaseDecomposition {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// A block that every decomposition must keep together, and a receive inside
/// it that lies causally below a send of the same block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsRefutation {
    pub block: BTreeSet<EventId>,
    pub receive: EventId,
    pub send: EventId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WsVerdict {
    WeaklySynchronous(PhaseDecomposition),
    NotWeaklySynchronous(WsRefutation),
}

impl WsVerdict {
    pub fn is_weakly_synchronous(&self) -> bool {
        matches!(self, WsVerdict::WeaklySynchronous(_))
    }

    pub fn phases(&self) -> Option<&PhaseDecomposition> {
        match self {
            WsVerdict::WeaklySynchronous(d) => Some(d),
            WsVerdict::NotWeaklySynchronous(_) => None,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Decides weak synchrony and returns the finest decomposition.
///
/// Message pairs seed the blocks. Blocks are closed under timeline intervals,
/// and blocks on a cycle of the timeline precedence are merged, until nothing
/// changes. The chart is weakly synchronous iff no final block has a receive
/// below one of its sends. Only acyclicity is required of the input.
pub fn is_weakly_synchronous(m: &Msc) -> Result<WsVerdict, MscError> {
    let order = CausalOrder::new(m)?;
    let dense = Dense::new(m);
    let n = dense.ids.len();
    let lines: Vec<Vec<usize>> =
        m.timelines().values().map(|line| line.iter().map(|e| dense.index[e]).collect()).collect();

    let mut uf = UnionFind::new(n);
    for &(s, r) in m.messages() {
        uf.union(dense.index[&s], dense.index[&r]);
    }

    loop {
        let mut changed = false;
        // Interval closure: on each timeline, everything between the first
        // and last event of a block joins it.
        for line in &lines {
            let mut first: BTreeMap<usize, usize> = BTreeMap::new();
            let mut last: BTreeMap<usize, usize> = BTreeMap::new();
            for (k, &i) in line.iter().enumerate() {
                let b = uf.find(i);
                first.entry(b).or_insert(k);
                last.insert(b, k);
            }
            for (b, &lo) in &first {
                let hi = last[b];
                for &i in &line[lo..=hi] {
                    changed |= uf.union(*b, i);
                }
            }
        }
        if changed {
            continue;
        }
        // Timeline precedence between blocks; merge strongly connected parts.
        let roots: BTreeSet<usize> = (0..n).map(|i| uf.find(i)).collect();
        let mut succ: BTreeMap<usize, BTreeSet<usize>> = roots.iter().map(|&r| (r, BTreeSet::new())).collect();
        for line in &lines {
            for w in line.windows(2) {
                let (x, y) = (uf.find(w[0]), uf.find(w[1]));
                if x != y {
                    succ.get_mut(&x).unwrap().insert(y);
                }
            }
        }
        for comp in strongly_connected(&succ) {
            for w in comp.windows(2) {
                changed |= uf.union(w[0], w[1]);
            }
        }
        if !changed {
            break;
        }
    }

    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        blocks.entry(uf.find(i)).or_default().push(i);
    }
    for members in blocks.values() {
        let ids: Vec<EventId> = members.iter().map(|&i| dense.ids[i]).collect();
        for &r in ids.iter().filter(|e| m.labels[e].is_receive()) {
            if let Some(&s) = ids.iter().find(|s| m.labels[s].is_send() && order.leq(r, **s).unwrap_or(false)) {
                return Ok(WsVerdict::NotWeaklySynchronous(WsRefutation {
                    block: ids.iter().copied().collect(),
                    receive: r,
                    send: s,
                }));
            }
        }
    }

    // Blocks in topological order of timeline precedence, earliest block first
    // among the ready ones (ordered by smallest member id).
    let root_of: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let mut indeg: BTreeMap<usize, usize> = blocks.keys().map(|&b| (b, 0)).collect();
    let mut succ: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for line in &lines {
        for w in line.windows(2) {
            let (x, y) = (root_of[w[0]], root_of[w[1]]);
            if x != y && succ.entry(x).or_default().insert(y) {
                *indeg.get_mut(&y).unwrap() += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&b, _)| b).collect();
    let mut phases = Vec::with_capacity(blocks.len());
    while let Some(b) = ready.pop_first() {
        phases.push(blocks[&b].iter().map(|&i| dense.ids[i]).collect());
        for &c in succ.get(&b).into_iter().flatten() {
            let d = indeg.get_mut(&c).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(c);
            }
        }
    }
    debug_assert_eq!(phases.len(), blocks.len());
    Ok(WsVerdict::WeaklySynchronous(PhaseDecomposition { phases }))
}

/// Components with more than one node, each listed in ascending order.
fn strongly_connected(succ: &BTreeMap<usize, BTreeSet<usize>>) -> Vec<Vec<usize>> {
    let nodes: Vec<usize> = succ.keys().copied().collect();
    let reach = |from: usize| -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([from]);
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for &y in &succ[&x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    };
    let reachable: BTreeMap<usize, BTreeSet<usize>> = nodes.iter().map(|&v| (v, reach(v))).collect();
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for &v in &nodes {
        if done.contains(&v) {
            continue;
        }
        let comp: Vec<usize> = reachable[&v].iter().copied().filter(|w| reachable[w].contains(&v)).collect();
        done.extend(comp.iter().copied());
        if comp.len() > 1 {
            out.push(comp);
        }
    }
    out
}
