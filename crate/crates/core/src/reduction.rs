//! Encoding of a FIFO automaton into three communicating machines `a`, `b`,
//! `c`, and the translations between their accepting runs.
//!
//! Process `a` simulates the automaton: a push `!m` becomes `a!b(m)` and a
//! pop `?m` becomes `a!c(m)`. Processes `b` and `c` forward messages to each
//! other and back to `a`, and every process finally receives everything in
//! the order it was sent to `b`. A dummy message `D` pads the sequence of
//! `a`'s sends so that it stays a valid queue history.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::cfm::{
    check_accepting_run, unnormalized_state, Automaton, CommSystem, FifoAutomaton, StateId, TransitionRef, Witness,
    FIFO_PROCESS,
};
use crate::msc::{ActionLabel, Alphabet, MessageId, Msc, ProcessId};

pub const A: ProcessId = ProcessId(0);
pub const B: ProcessId = ProcessId(1);
pub const C: ProcessId = ProcessId(2);

/// An action of a single-queue automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QueueAction {
    Push(MessageId),
    Pop(MessageId),
}

impl QueueAction {
    pub fn from_label(l: &ActionLabel) -> Self {
        if l.is_send() {
            QueueAction::Push(l.payload)
        } else {
            QueueAction::Pop(l.payload)
        }
    }

    pub fn label(self) -> ActionLabel {
        match self {
            QueueAction::Push(m) => FifoAutomaton::push(m),
            QueueAction::Pop(m) => FifoAutomaton::pop(m),
        }
    }
}

impl fmt::Display for QueueAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueueAction::Push(m) => write!(f, "!m{}", m.0),
            QueueAction::Pop(m) => write!(f, "?m{}", m.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("automaton is not normalized: state {0} has a self-loop or a labelled transition next to others")]
    NotNormalized(String),
    #[error("not a queue history: action {position} pops from an empty queue or the wrong head")]
    NotFifo { position: usize },
    #[error("queue history leaves {0} messages in the queue")]
    Incomplete(usize),
    #[error("action {0} of the send sequence is not a send of a to b or c")]
    NotASendOfA(usize),
    #[error("the send sequence cannot be taken by a up to its receiving phase")]
    NotRealizable,
}

/// The three-machine system built from a FIFO automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub system: CommSystem,
    pub dummy: MessageId,
    /// `a`'s state from which it starts receiving.
    pub receive_state: StateId,
}

/// Builds the system over the automaton's messages plus the dummy `D`, whose
/// id is the number of original messages.
pub fn encode(s1: &FifoAutomaton) -> Result<Encoding, ReductionError> {
    let aut = s1.automaton();
    if let Some(q) = unnormalized_state(aut) {
        return Err(ReductionError::NotNormalized(aut.state_name(q).to_string()));
    }
    let alpha = s1.system().alphabet();
    let mut names: Vec<String> = alpha.messages().map(|m| alpha.message_name(m)).collect();
    let dummy = MessageId(names.len() as u32);
    let mut dname = "D".to_string();
    while names.contains(&dname) {
        dname.push('\'');
    }
    names.push(dname);
    let letters: Vec<MessageId> = (0..names.len() as u32).map(MessageId).collect();

    let (a, receive_state) = automaton_a(aut, &letters, &names, dummy);
    let b = forwarder(B, A, C, &letters, &names);
    let c = forwarder(C, B, A, &letters, &names);
    let system = CommSystem::new(Alphabet::new(["a", "b", "c"], names), vec![a, b, c]).expect("well-formed encoding");
    Ok(Encoding { system, dummy, receive_state })
}

fn fresh(names: &[String], base: String) -> String {
    let mut n = base;
    while names.contains(&n) {
        n.push('\'');
    }
    n
}

/// States: the automaton's own, then two per pop transition, then
/// `D_a`, `?_a`, `acc_a`, then one receiving state per letter.
fn automaton_a(aut: &Automaton, letters: &[MessageId], names: &[String], dummy: MessageId) -> (Automaton, StateId) {
    let mut states: Vec<String> = aut.state_names().to_vec();
    let pops: Vec<usize> = (0..aut.transitions().len())
        .filter(|&k| aut.transitions()[k].label.is_some_and(|l| l.is_receive()))
        .collect();
    for &k in &pops {
        for part in 1..=2 {
            let n = fresh(&states, format!("t{k}.{part}"));
            states.push(n);
        }
    }
    let base = states.len() as StateId;
    for n in ["D_a", "?_a", "acc_a"] {
        let n = fresh(&states, n.to_string());
        states.push(n);
    }
    for &m in letters {
        let n = fresh(&states, format!("?{}_a", names[m.0 as usize]));
        states.push(n);
    }
    let (ld, lq, lacc) = (base, base + 1, base + 2);
    let mut a = Automaton::new(states, aut.initial(), lacc).unwrap();
    let n = aut.num_states() as StateId;
    let mut pop_index = 0;
    for t in aut.transitions() {
        match t.label {
            None => {
                a.add_transition(t.source, None, t.target).unwrap();
            }
            Some(l) if l.is_send() => {
                a.add_transition(t.source, Some(ActionLabel::send(A, B, l.payload)), t.target).unwrap();
                a.add_transition(t.source, Some(ActionLabel::send(A, C, dummy)), t.source).unwrap();
            }
            Some(l) => {
                let (t1, t2) = (n + 2 * pop_index, n + 2 * pop_index + 1);
                pop_index += 1;
                a.add_transition(t.source, Some(ActionLabel::send(A, C, l.payload)), t1).unwrap();
                a.add_transition(t1, Some(ActionLabel::send(A, B, dummy)), t2).unwrap();
                a.add_transition(t2, Some(ActionLabel::send(A, C, dummy)), t1).unwrap();
                a.add_transition(t2, None, t.target).unwrap();
            }
        }
    }
    a.add_transition(aut.final_state(), None, ld).unwrap();
    a.add_transition(ld, Some(ActionLabel::send(A, C, dummy)), ld).unwrap();
    a.add_transition(ld, None, lq).unwrap();
    a.add_transition(lq, None, lacc).unwrap();
    for (i, &m) in letters.iter().enumerate() {
        let lm = base + 3 + i as StateId;
        a.add_transition(lq, Some(ActionLabel::receive(A, C, m)), lm).unwrap();
        a.add_transition(lm, Some(ActionLabel::receive(A, B, m)), lq).unwrap();
    }
    (a, lq)
}

/// A forwarder: `me` sends each letter to `first` and then to `second`, and
/// later receives each letter twice, in the order the other two send it.
fn forwarder(me: ProcessId, first: ProcessId, second: ProcessId, letters: &[MessageId], names: &[String]) -> Automaton {
    let suffix = ["a", "b", "c"][me.0 as usize];
    let mut states = vec![format!("0_{suffix}"), format!("?_{suffix}"), format!("acc_{suffix}")];
    for &m in letters {
        let name = &names[m.0 as usize];
        states.push(format!("{name}0_{suffix}"));
        states.push(format!("{name}?_{suffix}"));
    }
    let mut a = Automaton::new(states, 0, 2).unwrap();
    a.add_transition(0, None, 1).unwrap();
    a.add_transition(1, None, 2).unwrap();
    // b receives from a then c; c receives from b then a.
    let (r1, r2) = if me == B { (A, C) } else { (B, A) };
    for (i, &m) in letters.iter().enumerate() {
        let (s0, sq) = (3 + 2 * i as StateId, 4 + 2 * i as StateId);
        a.add_transition(0, Some(ActionLabel::send(me, first, m)), s0).unwrap();
        a.add_transition(s0, Some(ActionLabel::send(me, second, m)), 0).unwrap();
        a.add_transition(1, Some(ActionLabel::receive(me, r1, m)), sq).unwrap();
        a.add_transition(sq, Some(ActionLabel::receive(me, r2, m)), 1).unwrap();
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FifoCheck {
    /// No send to `c` pops an empty queue or a different head.
    pub fifo: bool,
    /// The queue is empty at the end.
    pub complete: bool,
}

/// Reads `a!b(m)` as enqueuing `m` and `a!c(m)` as dequeuing it.
pub fn is_fifo_sequence(seq: &[ActionLabel]) -> FifoCheck {
    let mut q = VecDeque::new();
    for l in seq {
        match (l.is_send() && l.sender == A, l.receiver) {
            (true, B) => q.push_back(l.payload),
            (true, C) if q.front() == Some(&l.payload) => {
                q.pop_front();
            }
            _ => return FifoCheck { fifo: false, complete: false },
        }
    }
    FifoCheck { fifo: true, complete: q.is_empty() }
}

pub fn check_queue_history(alpha: &[QueueAction]) -> Result<(), ReductionError> {
    let mut q = VecDeque::new();
    for (i, act) in alpha.iter().enumerate() {
        match *act {
            QueueAction::Push(m) => q.push_back(m),
            QueueAction::Pop(m) if q.front() == Some(&m) => {
                q.pop_front();
            }
            QueueAction::Pop(_) => return Err(ReductionError::NotFifo { position: i }),
        }
    }
    if q.is_empty() {
        Ok(())
    } else {
        Err(ReductionError::Incomplete(q.len()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub sends: Vec<ActionLabel>,
    /// Most dummies held by the queue at any point.
    pub peak_dummies: usize,
}

/// Pads a queue history with dummy sends so that `a` can take it.
///
/// An empty queue has no dummy in front. After a pop, dummies are rotated
/// to the back only while some real message is still queued.
pub fn complete_dummies(alpha: &[QueueAction], dummy: MessageId) -> Result<Completion, ReductionError> {
    check_queue_history(alpha)?;
    let to_b = |m| ActionLabel::send(A, B, m);
    let to_c = |m| ActionLabel::send(A, C, m);
    let mut out = Vec::new();
    let mut q: VecDeque<MessageId> = VecDeque::new();
    let mut peak = 0;
    let dummies = |q: &VecDeque<MessageId>| q.iter().filter(|m| **m == dummy).count();
    for act in alpha {
        match *act {
            QueueAction::Push(x) => {
                while q.front() == Some(&dummy) {
                    out.push(to_c(dummy));
                    q.pop_front();
                }
                out.push(to_b(x));
                q.push_back(x);
            }
            QueueAction::Pop(x) => {
                out.push(to_c(x));
                let head = q.pop_front();
                debug_assert_eq!(head, Some(x));
                out.push(to_b(dummy));
                q.push_back(dummy);
                if q.iter().any(|m| *m != dummy) {
                    while q.front() == Some(&dummy) {
                        out.push(to_c(dummy));
                        q.pop_front();
                        out.push(to_b(dummy));
                        q.push_back(dummy);
                    }
                }
            }
        }
        peak = peak.max(dummies(&q));
        debug_assert!(peak <= alpha.len());
    }
    while q.front() == Some(&dummy) {
        out.push(to_c(dummy));
        q.pop_front();
    }
    Ok(Completion { sends: out, peak_dummies: peak })
}

/// Drops dummy actions and reads `a!b(x)` as `!x`, `a!c(x)` as `?x`.
pub fn extract_run(sends: &[ActionLabel], dummy: MessageId) -> Vec<QueueAction> {
    sends
        .iter()
        .filter(|l| l.payload != dummy)
        .filter_map(|l| match l.receiver {
            B => Some(QueueAction::Push(l.payload)),
            C => Some(QueueAction::Pop(l.payload)),
            _ => None,
        })
        .collect()
}

/// Payloads sent to `b` and to `c` form the same sequence.
pub fn check_send_order(sends: &[ActionLabel]) -> bool {
    let to = |p| sends.iter().filter(|l| l.receiver == p).map(|l| l.payload).collect::<Vec<_>>();
    to(B) == to(C)
}

/// No prefix has more `a!c(x)` than `a!b(x)` for any `x`.
pub fn check_no_receipt_before_send(sends: &[ActionLabel]) -> bool {
    let mut balance: std::collections::BTreeMap<MessageId, i64> = Default::default();
    for l in sends {
        let e = balance.entry(l.payload).or_default();
        *e += if l.receiver == B { 1 } else { -1 };
        if *e < 0 {
            return false;
        }
    }
    true
}

/// The send actions of `a` in a chart, in timeline order.
pub fn sends_of_a(m: &Msc) -> Vec<ActionLabel> {
    m.timeline(A).iter().map(|e| *m.label(*e).unwrap()).filter(|l| l.is_send()).collect()
}

/// The queue actions of a run of a FIFO automaton.
pub fn queue_actions(m: &Msc) -> Vec<QueueAction> {
    m.timeline(FIFO_PROCESS).iter().map(|e| QueueAction::from_label(m.label(*e).unwrap())).collect()
}

/// A transition path of `aut` from `start` taking exactly `labels`, with
/// ε-moves anywhere, ending in a state for which `end` holds. Returns the
/// transition indices, ε-moves included.
pub(crate) fn label_path(
    aut: &Automaton,
    start: StateId,
    labels: &[ActionLabel],
    end: impl Fn(StateId) -> bool,
) -> Option<Vec<usize>> {
    let n = aut.num_states();
    // parent[i][q]: how q was first reached after i labels.
    let mut parent: Vec<Vec<Option<(StateId, usize)>>> = Vec::with_capacity(labels.len() + 1);
    let mut layer = vec![None; n];
    let mut reached = vec![false; n];
    reached[start as usize] = true;
    let mut frontier = vec![start];
    epsilon_expand(aut, &mut frontier, &mut reached, &mut layer);
    parent.push(layer);
    let mut current = reached;
    for l in labels {
        let mut layer = vec![None; n];
        let mut reached = vec![false; n];
        let mut frontier = Vec::new();
        for q in aut.states().filter(|q| current[*q as usize]) {
            for &k in aut.outgoing(q) {
                let t = aut.transitions()[k];
                if t.label == Some(*l) && !reached[t.target as usize] {
                    reached[t.target as usize] = true;
                    layer[t.target as usize] = Some((q, k));
                    frontier.push(t.target);
                }
            }
        }
        epsilon_expand(aut, &mut frontier, &mut reached, &mut layer);
        parent.push(layer);
        current = reached;
    }
    let last = aut.states().find(|q| current[*q as usize] && end(*q))?;
    let mut path = Vec::new();
    let mut q = last;
    for i in (0..parent.len()).rev() {
        // Walk ε-parents within the layer, then the labelled one.
        loop {
            match parent[i][q as usize] {
                Some((p, k)) if aut.transitions()[k].label.is_none() => {
                    path.push(k);
                    q = p;
                }
                Some((p, k)) => {
                    path.push(k);
                    q = p;
                    break;
                }
                None => break,
            }
        }
    }
    path.reverse();
    Some(path)
}

fn epsilon_expand(
    aut: &Automaton,
    frontier: &mut Vec<StateId>,
    reached: &mut [bool],
    layer: &mut [Option<(StateId, usize)>],
) {
    while let Some(q) = frontier.pop() {
        for &k in aut.outgoing(q) {
            let t = aut.transitions()[k];
            if t.label.is_none() && !reached[t.target as usize] {
                reached[t.target as usize] = true;
                layer[t.target as usize] = Some((q, k));
                frontier.push(t.target);
            }
        }
    }
}

/// Builds the canonical accepting run in which `a` first takes `sends`.
///
/// Payloads are forwarded in the order `X` in which `a` sends them to `b`:
/// `b` sends each to `a` and `c`, `c` sends each to `b` and `a`, and then
/// every process receives in order `X`.
pub fn realize_run(enc: &Encoding, sends: &[ActionLabel]) -> Result<Witness, ReductionError> {
    if let Some(i) = sends.iter().position(|l| !(l.is_send() && l.sender == A && l.receiver != A)) {
        return Err(ReductionError::NotASendOfA(i));
    }
    let check = is_fifo_sequence(sends);
    if !check.fifo {
        return Err(ReductionError::NotFifo { position: fifo_break(sends) });
    }
    let x: Vec<MessageId> = sends.iter().filter(|l| l.receiver == B).map(|l| l.payload).collect();
    if !check.complete {
        return Err(ReductionError::Incomplete(x.len() - (sends.len() - x.len())));
    }
    let s = &enc.system;
    let aa = s.automaton(A);
    let path = label_path(aa, aa.initial(), sends, |q| aa.epsilon_reaches(q, enc.receive_state))
        .ok_or(ReductionError::NotRealizable)?;
    let mut trace: Vec<TransitionRef> = path.iter().map(|&k| TransitionRef::new(A, k)).collect();
    let end = path.last().map_or(aa.initial(), |&k| aa.transitions()[k].target);
    let to_q = label_path(aa, end, &[], |q| q == enc.receive_state).expect("checked above");
    trace.extend(to_q.iter().map(|&k| TransitionRef::new(A, k)));

    let follow = |p: ProcessId, from: StateId, labels: &[ActionLabel]| -> Vec<TransitionRef> {
        let a = s.automaton(p);
        label_path(a, from, labels, |_| true)
            .expect("forwarders take any letter sequence")
            .into_iter()
            .map(|k| TransitionRef::new(p, k))
            .collect()
    };
    let pairs = |p: ProcessId, k1: fn(ProcessId, ProcessId, MessageId) -> ActionLabel, q1: ProcessId, q2: ProcessId| {
        x.iter().flat_map(move |&m| [k1(p, q1, m), k1(p, q2, m)]).collect::<Vec<_>>()
    };
    // Sending phases of b and c.
    trace.extend(follow(B, 0, &pairs(B, ActionLabel::send, A, C)));
    trace.extend(follow(C, 0, &pairs(C, ActionLabel::send, B, A)));
    // Receiving phases, ending in the final state.
    let recv_a = pairs(A, ActionLabel::receive, C, B);
    let tail = label_path(aa, enc.receive_state, &recv_a, |q| q == aa.final_state()).expect("a receives in order X");
    trace.extend(tail.into_iter().map(|k| TransitionRef::new(A, k)));
    for (p, r1, r2) in [(B, A, C), (C, B, A)] {
        let a = s.automaton(p);
        let mut prefix = label_path(a, 0, &[], |q| q == 1).unwrap();
        prefix.extend(label_path(a, 1, &pairs(p, ActionLabel::receive, r1, r2), |q| q == a.final_state()).unwrap());
        trace.extend(prefix.into_iter().map(|k| TransitionRef::new(p, k)));
    }
    let (msc, run) = s.trace_to_msc(&trace).map_err(|_| ReductionError::NotRealizable)?;
    debug_assert_eq!(check_accepting_run(s, &msc, &run), Ok(()));
    Ok(Witness { trace, msc, run })
}

fn fifo_break(sends: &[ActionLabel]) -> usize {
    (1..=sends.len()).find(|&i| !is_fifo_sequence(&sends[..i]).fifo).map_or(0, |i| i - 1)
}

/// Whether `alpha` takes the FIFO automaton from its initial state to one
/// that ε-reaches its final state, with the queue empty at the end. Returns
/// the trace when it does.
pub fn replay_on_fifo(s1: &FifoAutomaton, alpha: &[QueueAction]) -> Option<Vec<TransitionRef>> {
    check_queue_history(alpha).ok()?;
    let a = s1.automaton();
    let labels: Vec<ActionLabel> = alpha.iter().map(|x| x.label()).collect();
    let path = label_path(a, a.initial(), &labels, |q| q == a.final_state())?;
    let trace: Vec<TransitionRef> = path.into_iter().map(|k| TransitionRef::new(FIFO_PROCESS, k)).collect();
    let last = s1.system().replay(&trace).ok()?.pop()?;
    s1.system().is_accepting(&last).then_some(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfm::fixtures::push_pop;
    use crate::cfm::{bounded_explore, enumerate_language, normalize_epsilon, Bounds};
    use crate::msc::{is_weakly_synchronous, validate_msc};

    const X: MessageId = MessageId(0);
    const Y: MessageId = MessageId(1);
    const D: MessageId = MessageId(2);

    fn b(m: MessageId) -> ActionLabel {
        ActionLabel::send(A, B, m)
    }

    fn c(m: MessageId) -> ActionLabel {
        ActionLabel::send(A, C, m)
    }

    use QueueAction::{Pop, Push};

    #[test]
    fn state_counts() {
        let enc = encode(&push_pop()).unwrap();
        let s = &enc.system;
        assert_eq!(s.automaton(A).num_states(), 10);
        assert_eq!(s.automaton(B).num_states(), 7);
        assert_eq!(s.automaton(C).num_states(), 7);
        assert_eq!(enc.dummy, MessageId(1));
        assert_eq!(s.alphabet().message_name(enc.dummy), "D");
    }

    #[test]
    fn send_states_get_dummy_loop() {
        let enc = encode(&push_pop()).unwrap();
        let a = enc.system.automaton(A);
        let q0 = a.state("q0").unwrap();
        assert!(a
            .transitions()
            .iter()
            .any(|t| t.source == q0 && t.target == q0 && t.label == Some(c(enc.dummy))));
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let mut a = Automaton::new(["q0", "q1"], 0, 1).unwrap();
        a.add_transition(0, Some(FifoAutomaton::push(X)), 0).unwrap();
        let f = FifoAutomaton::new(["x"], a).unwrap();
        assert_eq!(encode(&f), Err(ReductionError::NotNormalized("q0".into())));
        let n = FifoAutomaton::new(["x"], normalize_epsilon(f.automaton())).unwrap();
        assert!(encode(&n).is_ok());
    }

    #[test]
    fn empty_language_stays_empty() {
        // The final state is unreachable.
        let mut a = Automaton::new(["q0", "q1", "q2"], 0, 2).unwrap();
        a.add_transition(0, Some(FifoAutomaton::push(X)), 1).unwrap();
        let f = FifoAutomaton::new(["x"], a).unwrap();
        let enc = encode(&f).unwrap();
        assert!(bounded_explore(&enc.system, Bounds::new(3, 30)).witness().is_none());
    }

    #[test]
    fn fifo_sequences() {
        assert_eq!(is_fifo_sequence(&[b(X), c(X)]), FifoCheck { fifo: true, complete: true });
        assert!(!is_fifo_sequence(&[c(X), b(X)]).fifo);
        assert!(!is_fifo_sequence(&[b(X), b(Y), c(Y)]).fifo);
        assert_eq!(is_fifo_sequence(&[b(X)]), FifoCheck { fifo: true, complete: false });
    }

    #[test]
    fn completion_examples() {
        let run = |alpha: &[QueueAction]| complete_dummies(alpha, D).unwrap().sends;
        assert_eq!(run(&[Push(X), Pop(X)]), vec![b(X), c(X), b(D), c(D)]);
        assert_eq!(
            run(&[Push(X), Push(Y), Pop(X), Pop(Y)]),
            vec![b(X), b(Y), c(X), b(D), c(Y), b(D), c(D), c(D)]
        );
        assert_eq!(
            run(&[Push(X), Pop(X), Push(Y), Pop(Y)]),
            vec![b(X), c(X), b(D), c(D), b(Y), c(Y), b(D), c(D)]
        );
        assert_eq!(complete_dummies(&[Pop(X)], D), Err(ReductionError::NotFifo { position: 0 }));
        assert_eq!(complete_dummies(&[Push(X)], D), Err(ReductionError::Incomplete(1)));
    }

    #[test]
    fn extraction_examples() {
        assert_eq!(extract_run(&[b(X), c(X), b(D), c(D)], D), vec![Push(X), Pop(X)]);
        assert!(extract_run(&[b(D), c(D), b(D)], D).is_empty());
    }

    #[test]
    fn order_checks() {
        assert!(check_send_order(&[b(X), c(X)]));
        assert!(!check_send_order(&[b(X), c(Y)]));
        assert!(!check_no_receipt_before_send(&[c(X), b(X)]));
        assert!(check_no_receipt_before_send(&[b(X), c(X)]));
    }

    #[test]
    fn realize_push_pop() {
        let enc = encode(&push_pop()).unwrap();
        let d = enc.dummy;
        let gamma = complete_dummies(&[Push(X), Pop(X)], d).unwrap().sends;
        let w = realize_run(&enc, &gamma).unwrap();
        assert_eq!(w.msc.len(), 24);
        assert_eq!(w.msc.messages().len(), 12);
        assert_eq!(check_accepting_run(&enc.system, &w.msc, &w.run), Ok(()));
        assert_eq!(sends_of_a(&w.msc), gamma);
        assert!(validate_msc(&w.msc).is_valid());
        assert_eq!(is_weakly_synchronous(&w.msc).unwrap().phases().unwrap().len(), 1);

        let empty = realize_run(&enc, &[]);
        // The empty sequence leaves a in q0, which is not final in the automaton.
        assert_eq!(empty, Err(ReductionError::NotRealizable));
        assert!(matches!(realize_run(&enc, &[c(X), b(X)]), Err(ReductionError::NotFifo { position: 0 })));
    }

    #[test]
    fn realize_empty_sequence() {
        let mut a = Automaton::new(["q0", "q1"], 0, 1).unwrap();
        a.add_transition(0, None, 1).unwrap();
        let enc = encode(&FifoAutomaton::new(["x"], a).unwrap()).unwrap();
        let w = realize_run(&enc, &[]).unwrap();
        assert!(w.msc.is_empty());
        assert_eq!(check_accepting_run(&enc.system, &w.msc, &w.run), Ok(()));
    }

    #[test]
    fn explored_runs_of_push_pop() {
        let f = push_pop();
        let enc = encode(&f).unwrap();
        let w = bounded_explore(&enc.system, Bounds::new(4, 24)).witness().cloned().unwrap();
        assert_eq!((w.msc.len(), w.msc.messages().len()), (24, 12));
        let sample = enumerate_language(&enc.system, Bounds::new(2, 36), 200);
        assert!(!sample.witnesses.is_empty());
        for w in &sample.witnesses {
            let gamma = sends_of_a(&w.msc);
            assert!(check_send_order(&gamma) && check_no_receipt_before_send(&gamma));
            assert!(replay_on_fifo(&f, &extract_run(&gamma, enc.dummy)).is_some());
            assert_eq!(is_weakly_synchronous(&w.msc).unwrap().phases().unwrap().len(), 1);
        }
    }
}
