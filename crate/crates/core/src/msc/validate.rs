use std::collections::BTreeMap;
use std::fmt;

use super::{Dense, EventId, Msc, ProcessId};

/// The four conditions a p2p chart must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Message pairs link `p!q(m)` to the matching receive, with `p != q`.
    Labels,
    /// Every receive has exactly one matching send.
    UniqueSend,
    /// The causal relation is acyclic.
    Acyclic,
    /// Messages on one channel do not overtake each other.
    Fifo,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::Labels => 1,
            Condition::UniqueSend => 2,
            Condition::Acyclic => 3,
            Condition::Fifo => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The pair does not link a send to the receive with the same channel and payload.
    LabelMismatch { send: EventId, receive: EventId },
    /// A message from a process to itself.
    SelfMessage { send: EventId, receive: EventId },
    /// A send linked to more than one receive.
    SendMatchedTwice { send: EventId, receives: (EventId, EventId) },
    UnmatchedReceive { receive: EventId },
    ReceiveMatchedTwice { receive: EventId, sends: (EventId, EventId) },
    /// Events along a cycle of the causal relation.
    Cycle { events: Vec<EventId> },
    /// `earlier` precedes `later` on the same channel but is unmatched or
    /// received after it.
    Overtaking { earlier: EventId, later: EventId },
}

impl Violation {
    pub fn condition(&self) -> Condition {
        match self {
            Violation::LabelMismatch { .. } | Violation::SelfMessage { .. } => Condition::Labels,
            Violation::SendMatchedTwice { .. }
            | Violation::UnmatchedReceive { .. }
            | Violation::ReceiveMatchedTwice { .. } => Condition::UniqueSend,
            Violation::Cycle { .. } => Condition::Acyclic,
            Violation::Overtaking { .. } => Condition::Fifo,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition ({}): ", self.condition().number())?;
        match self {
            Violation::LabelMismatch { send, receive } => {
                write!(f, "({send}, {receive}) does not link a send to its matching receive")
            }
            Violation::SelfMessage { send, receive } => write!(f, "({send}, {receive}) stays on one process"),
            Violation::SendMatchedTwice { send, receives: (r1, r2) } => {
                write!(f, "send {send} is matched by both {r1} and {r2}")
            }
            Violation::UnmatchedReceive { receive } => write!(f, "receive {receive} has no matching send"),
            Violation::ReceiveMatchedTwice { receive, sends: (s1, s2) } => {
                write!(f, "receive {receive} is matched by both {s1} and {s2}")
            }
            Violation::Cycle { events } => {
                let names: Vec<String> = events.iter().map(ToString::to_string).collect();
                write!(f, "causal cycle through {}", names.join(" -> "))
            }
            Violation::Overtaking { earlier, later } => {
                write!(f, "send {later} overtakes the earlier send {earlier} on the same channel")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Accept messages from a process to itself (single-machine FIFO automata).
    pub allow_self_messages: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition() == c)
    }
}

pub fn validate_msc(m: &Msc) -> ValidationReport {
    validate_msc_with(m, ValidateOptions::default())
}

/// Collects every violated condition, each with a witness.
pub fn validate_msc_with(m: &Msc, opts: ValidateOptions) -> ValidationReport {
    let mut violations = Vec::new();

    let mut receive_for_send: BTreeMap<EventId, EventId> = BTreeMap::new();
    let mut send_for_receive: BTreeMap<EventId, EventId> = BTreeMap::new();
    for &(s, r) in m.messages() {
        let (ls, lr) = (m.labels[&s], m.labels[&r]);
        if !ls.is_send() || ls.dual() != lr {
            violations.push(Violation::LabelMismatch { send: s, receive: r });
        } else if ls.sender == ls.receiver && !opts.allow_self_messages {
            violations.push(Violation::SelfMessage { send: s, receive: r });
        }
        if let Some(&r0) = receive_for_send.get(&s) {
            violations.push(Violation::SendMatchedTwice { send: s, receives: (r0, r) });
        } else {
            receive_for_send.insert(s, r);
        }
        if let Some(&s0) = send_for_receive.get(&r) {
            violations.push(Violation::ReceiveMatchedTwice { receive: r, sends: (s0, s) });
        } else {
            send_for_receive.insert(r, s);
        }
    }
    for (&e, l) in m.labels() {
        if l.is_receive() && !send_for_receive.contains_key(&e) {
            violations.push(Violation::UnmatchedReceive { receive: e });
        }
    }

    let dense = Dense::new(m);
    if let Err(start) = dense.topological() {
        violations.push(Violation::Cycle { events: find_cycle(&dense, start) });
    }

    // Per channel, sends in timeline order of the sender.
    let position: BTreeMap<EventId, usize> = m
        .timelines()
        .values()
        .flat_map(|line| line.iter().enumerate().map(|(i, &e)| (e, i)))
        .collect();
    let mut channels: BTreeMap<(ProcessId, ProcessId), Vec<EventId>> = BTreeMap::new();
    for line in m.timelines().values() {
        for &e in line {
            let l = m.labels[&e];
            if l.is_send() {
                channels.entry(l.channel()).or_default().push(e);
            }
        }
    }
    for sends in channels.values() {
        for (j, &later) in sends.iter().enumerate() {
            let Some(&r_later) = receive_for_send.get(&later) else { continue };
            let bad = sends[..j].iter().find(|&&earlier| match receive_for_send.get(&earlier) {
                None => true,
                Some(&r_earlier) => {
                    m.owner(r_earlier) != m.owner(r_later) || position[&r_earlier] >= position[&r_later]
                }
            });
            if let Some(&earlier) = bad {
                violations.push(Violation::Overtaking { earlier, later });
            }
        }
    }

    ValidationReport { violations }
}

/// Events left over by Kahn's algorithm each keep a leftover predecessor, so
/// walking predecessors among them must close a cycle.
fn find_cycle(dense: &Dense, start: usize) -> Vec<EventId> {
    let n = dense.ids.len();
    let mut preds = vec![Vec::new(); n];
    for (i, out) in dense.succ.iter().enumerate() {
        for &j in out {
            preds[j].push(i);
        }
    }
    let mut indeg = dense.pred_count.clone();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = stack.pop() {
        removed[i] = true;
        for &j in &dense.succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                stack.push(j);
            }
        }
    }
    let mut path = vec![start];
    let mut on_path = vec![usize::MAX; n];
    on_path[start] = 0;
    let mut cur = start;
    loop {
        let prev = preds[cur].iter().copied().find(|&j| !removed[j]).expect("leftover predecessor");
        if on_path[prev] != usize::MAX {
            let mut cycle: Vec<EventId> = path[on_path[prev]..].iter().map(|&i| dense.ids[i]).collect();
            cycle.reverse();
            return cycle;
        }
        on_path[prev] = path.len();
        path.push(prev);
        cur = prev;
    }
}
