use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::{Dense, EventId, Msc, MscError};

/// The reflexive-transitive closure of timeline and message arcs, stored as
/// one reachability bitset per event.
#[derive(Debug, Clone)]
pub struct CausalOrder {
    index: BTreeMap<EventId, usize>,
    ids: Vec<EventId>,
    words: usize,
    reach: Vec<u64>,
}

impl CausalOrder {
    pub fn new(m: &Msc) -> Result<Self, MscError> {
        let dense = Dense::new(m);
        let order = dense.topological().map_err(|i| MscError::Cyclic(dense.ids[i]))?;
        let n = dense.ids.len();
        let words = n.div_ceil(64).max(1);
        let mut reach = vec![0u64; n * words];
        for &i in order.iter().rev() {
            reach[i * words + i / 64] |= 1 << (i % 64);
            for &j in &dense.succ[i] {
                for w in 0..words {
                    let bit = reach[j * words + w];
                    reach[i * words + w] |= bit;
                }
            }
        }
        Ok(CausalOrder { index: dense.index, ids: dense.ids, words, reach })
    }

    /// `e <= f` in the causal order.
    pub fn leq(&self, e: EventId, f: EventId) -> Result<bool, MscError> {
        let i = *self.index.get(&e).ok_or(MscError::UnknownEvent(e))?;
        let j = *self.index.get(&f).ok_or(MscError::UnknownEvent(f))?;
        Ok(self.reach[i * self.words + j / 64] >> (j % 64) & 1 == 1)
    }

    /// Events `f` with `e <= f`.
    pub fn above(&self, e: EventId) -> impl Iterator<Item = EventId> + '_ {
        let i = self.index.get(&e).copied();
        (0..self.ids.len())
            .filter(move |&j| i.is_some_and(|i| self.reach[i * self.words + j / 64] >> (j % 64) & 1 == 1))
            .map(|j| self.ids[j])
    }
}

pub fn causal_leq(m: &Msc, e: EventId, f: EventId) -> Result<bool, MscError> {
    if !m.contains(e) {
        return Err(MscError::UnknownEvent(e));
    }
    if !m.contains(f) {
        return Err(MscError::UnknownEvent(f));
    }
    CausalOrder::new(m)?.leq(e, f)
}

/// A topological order of the causal relation; among enabled events the one
/// with the smallest `(process, timeline index)` goes first.
pub fn linearize(m: &Msc) -> Result<Vec<EventId>, MscError> {
    let dense = Dense::new(m);
    let mut key = vec![(0u32, 0usize); dense.ids.len()];
    for (p, line) in m.timelines() {
        for (k, e) in line.iter().enumerate() {
            key[dense.index[e]] = (p.0, k);
        }
    }
    let mut indeg = dense.pred_count.clone();
    let mut ready: BinaryHeap<Reverse<((u32, usize), usize)>> =
        (0..dense.ids.len()).filter(|&i| indeg[i] == 0).map(|i| Reverse((key[i], i))).collect();
    let mut out = Vec::with_capacity(dense.ids.len());
    while let Some(Reverse((_, i))) = ready.pop() {
        out.push(dense.ids[i]);
        for &j in &dense.succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(Reverse((key[j], j)));
            }
        }
    }
    if out.len() < dense.ids.len() {
        let stuck = (0..dense.ids.len()).find(|&i| indeg[i] > 0).expect("leftover event");
        return Err(MscError::Cyclic(dense.ids[stuck]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, VecDeque};

    use super::super::fixtures::*;
    use super::super::{MessageId, MscBuilder, ProcessId};
    use super::*;

    /// Breadth-first search over timeline successors and message arcs.
    fn bfs_leq(m: &Msc, e: EventId, f: EventId) -> bool {
        let mut seen = BTreeSet::from([e]);
        let mut queue = VecDeque::from([e]);
        while let Some(x) = queue.pop_front() {
            if x == f {
                return true;
            }
            let next = m.next_on_timeline(x).into_iter().chain(m.receive_of(x));
            for y in next {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        false
    }

    #[test]
    fn reflexive() {
        let (m, s) = three_phase();
        assert!(causal_leq(&m, s[0], s[0]).unwrap());
    }

    #[test]
    fn three_phase_against_bfs() {
        let (m, [s1, _, _, s3, s4]) = three_phase();
        let r4 = m.receive_of(s4).unwrap();
        let r3 = m.receive_of(s3).unwrap();
        assert!(bfs_leq(&m, s1, r4));
        assert!(!bfs_leq(&m, r3, s1));
        assert!(causal_leq(&m, s1, r4).unwrap());
        assert!(!causal_leq(&m, r3, s1).unwrap());
        let order = CausalOrder::new(&m).unwrap();
        for e in m.events() {
            for f in m.events() {
                assert_eq!(order.leq(e, f).unwrap(), bfs_leq(&m, e, f), "{e} {f}");
            }
        }
    }

    #[test]
    fn unknown_event() {
        let (m, _, _) = single_message();
        assert_eq!(causal_leq(&m, EventId(9), EventId(0)), Err(MscError::UnknownEvent(EventId(9))));
    }

    #[test]
    fn linearize_single_message() {
        let (m, s, r) = single_message();
        assert_eq!(linearize(&m).unwrap(), vec![s, r]);
    }

    #[test]
    fn linearize_breaks_ties_by_process() {
        let (p, q, r, t) = (ProcessId(0), ProcessId(1), ProcessId(2), ProcessId(3));
        let mut b = MscBuilder::new();
        let r2 = b.receive(t, r, MessageId(1));
        let s2 = b.send(r, t, MessageId(1));
        let r1 = b.receive(q, p, MessageId(0));
        let s1 = b.send(p, q, MessageId(0));
        b.message(s1, r1).message(s2, r2);
        assert_eq!(linearize(&b.build()).unwrap(), vec![s1, r1, s2, r2]);
    }

    #[test]
    fn linearize_three_phase_respects_every_arc() {
        let (m, _) = three_phase();
        let order = linearize(&m).unwrap();
        assert_eq!(order.len(), 10);
        let pos: BTreeMap<_, _> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        for &(s, r) in m.messages() {
            assert!(pos[&s] < pos[&r]);
        }
        for line in m.timelines().values() {
            for w in line.windows(2) {
                assert!(pos[&w[0]] < pos[&w[1]]);
            }
        }
    }
}
