//! Message sequence charts over peer-to-peer FIFO channels.
//!
//! An [`Msc`] records a finite distributed computation: every process owns
//! a totally ordered timeline of events, and a message relation links send
//! events to their matching receive events. Labels fix the owner of each event
//! (the sender executes a send, the receiver executes a receive), so ownership
//! is derived from the label rather than stored separately.

mod causal;
mod ops;
mod order;
mod phases;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use causal::{is_causally_ordered, CoVerdict};
pub use ops::{classify_events, concat, concat_all, prefix, restrict, EventClasses};
pub use order::{causal_leq, linearize, CausalOrder};
pub use phases::{is_weakly_synchronous, PhaseDecomposition, WsRefutation, WsVerdict};
pub use validate::{validate_msc, validate_msc_with, Condition, ValidateOptions, ValidationReport, Violation};

/// Index of a process in an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessId(pub u32);

/// Index of a message letter in an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MessageId(pub u32);

/// Opaque event identifier. Only identity matters; isomorphic charts are
/// compared through [`Msc::canonical`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Send,
    Receive,
}

/// A send `p!q(m)` or a receive `q?p(m)`.
///
/// `sender` and `receiver` always name the two ends of the channel, whatever
/// the kind, so a send and its matching receive carry the same three fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionLabel {
    pub kind: ActionKind,
    pub sender: ProcessId,
    pub receiver: ProcessId,
    pub payload: MessageId,
}

impl ActionLabel {
    pub fn send(sender: ProcessId, receiver: ProcessId, payload: MessageId) -> Self {
        ActionLabel { kind: ActionKind::Send, sender, receiver, payload }
    }

    pub fn receive(receiver: ProcessId, sender: ProcessId, payload: MessageId) -> Self {
        ActionLabel { kind: ActionKind::Receive, sender, receiver, payload }
    }

    /// The process executing the action.
    pub fn actor(&self) -> ProcessId {
        match self.kind {
            ActionKind::Send => self.sender,
            ActionKind::Receive => self.receiver,
        }
    }

    /// The other end of the channel, seen from the actor.
    pub fn peer(&self) -> ProcessId {
        match self.kind {
            ActionKind::Send => self.receiver,
            ActionKind::Receive => self.sender,
        }
    }

    pub fn channel(&self) -> (ProcessId, ProcessId) {
        (self.sender, self.receiver)
    }

    pub fn is_send(&self) -> bool {
        self.kind == ActionKind::Send
    }

    pub fn is_receive(&self) -> bool {
        self.kind == ActionKind::Receive
    }

    /// The receive action matching this send (or the send matching this receive).
    pub fn dual(&self) -> Self {
        let kind = match self.kind {
            ActionKind::Send => ActionKind::Receive,
            ActionKind::Receive => ActionKind::Send,
        };
        ActionLabel { kind, ..*self }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> LabelDisplay<'a> {
        LabelDisplay { label: self, alphabet }
    }
}

/// Renders `p!q(m)` / `q?p(m)` with the actor first.
pub struct LabelDisplay<'a> {
    label: &'a ActionLabel,
    alphabet: &'a Alphabet,
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.label;
        let sym = if l.is_send() { '!' } else { '?' };
        write!(
            f,
            "{}{}{}({})",
            self.alphabet.process_name(l.actor()),
            sym,
            self.alphabet.process_name(l.peer()),
            self.alphabet.message_name(l.payload)
        )
    }
}

/// Names for processes and message letters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    processes: Vec<String>,
    messages: Vec<String>,
}

impl Alphabet {
    pub fn new<P, M>(processes: P, messages: M) -> Self
    where
        P: IntoIterator,
        P::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        Alphabet {
            processes: processes.into_iter().map(Into::into).collect(),
            messages: messages.into_iter().map(Into::into).collect(),
        }
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> + '_ {
        (0..self.processes.len() as u32).map(ProcessId)
    }

    pub fn messages(&self) -> impl Iterator<Item = MessageId> + '_ {
        (0..self.messages.len() as u32).map(MessageId)
    }

    pub fn num_processes(&self) -> usize {
        self.processes.len()
    }

    pub fn num_messages(&self) -> usize {
        self.messages.len()
    }

    pub fn process(&self, name: &str) -> Option<ProcessId> {
        self.processes.iter().position(|p| p == name).map(|i| ProcessId(i as u32))
    }

    pub fn message(&self, name: &str) -> Option<MessageId> {
        self.messages.iter().position(|m| m == name).map(|i| MessageId(i as u32))
    }

    /// Name of `p`, falling back to `p<index>` for ids outside the alphabet.
    pub fn process_name(&self, p: ProcessId) -> String {
        self.processes.get(p.0 as usize).cloned().unwrap_or_else(|| format!("p{}", p.0))
    }

    pub fn message_name(&self, m: MessageId) -> String {
        self.messages.get(m.0 as usize).cloned().unwrap_or_else(|| format!("m{}", m.0))
    }

    pub fn add_process(&mut self, name: impl Into<String>) -> ProcessId {
        let name = name.into();
        if let Some(p) = self.process(&name) {
            return p;
        }
        self.processes.push(name);
        ProcessId(self.processes.len() as u32 - 1)
    }

    pub fn add_message(&mut self, name: impl Into<String>) -> MessageId {
        let name = name.into();
        if let Some(m) = self.message(&name) {
            return m;
        }
        self.messages.push(name);
        MessageId(self.messages.len() as u32 - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MscError {
    #[error("unknown event {0}")]
    UnknownEvent(EventId),
    #[error("event {0} is listed more than once")]
    DuplicateEvent(EventId),
    #[error("event {event} is on the timeline of process {process} but its label belongs to process {owner}")]
    WrongTimeline { event: EventId, process: u32, owner: u32 },
    #[error("event {0} is missing from its owner's timeline")]
    MissingFromTimeline(EventId),
    #[error("message ({0}, {1}) refers to an unknown event")]
    DanglingMessage(EventId, EventId),
    #[error("the causal relation has a cycle through {0}")]
    Cyclic(EventId),
    #[error("event set is not downward closed: {below} <= {above} but only {above} is kept")]
    NotDownwardClosed { below: EventId, above: EventId },
    #[error("concatenation undefined: channel ({}, {}) has an unmatched send before a matched one", .0 .0, .0 .1)]
    ConcatUndefined((u32, u32)),
}

/// A (p2p) message sequence chart.
///
/// Construction checks only structure: every event sits exactly once on the
/// timeline of the process executing it, and message pairs reference known
/// events. Conditions (1)-(4) are checked by [`validate_msc`], which reports
/// violations instead of rejecting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Msc {
    labels: BTreeMap<EventId, ActionLabel>,
    timelines: BTreeMap<ProcessId, Vec<EventId>>,
    messages: BTreeSet<(EventId, EventId)>,
}

impl Msc {
    pub fn new(
        labels: BTreeMap<EventId, ActionLabel>,
        timelines: BTreeMap<ProcessId, Vec<EventId>>,
        messages: impl IntoIterator<Item = (EventId, EventId)>,
    ) -> Result<Self, MscError> {
        let mut seen = BTreeSet::new();
        for (&p, line) in &timelines {
            for &e in line {
                let label = labels.get(&e).ok_or(MscError::UnknownEvent(e))?;
                if label.actor() != p {
                    return Err(MscError::WrongTimeline { event: e, process: p.0, owner: label.actor().0 });
                }
                if !seen.insert(e) {
                    return Err(MscError::DuplicateEvent(e));
                }
            }
        }
        if let Some(&e) = labels.keys().find(|e| !seen.contains(e)) {
            return Err(MscError::MissingFromTimeline(e));
        }
        let messages: BTreeSet<_> = messages.into_iter().collect();
        for &(s, r) in &messages {
            if !labels.contains_key(&s) || !labels.contains_key(&r) {
                return Err(MscError::DanglingMessage(s, r));
            }
        }
        let timelines = timelines.into_iter().filter(|(_, l)| !l.is_empty()).collect();
        Ok(Msc { labels, timelines, messages })
    }

    pub fn empty() -> Self {
        Msc::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        self.labels.keys().copied()
    }

    pub fn contains(&self, e: EventId) -> bool {
        self.labels.contains_key(&e)
    }

    pub fn label(&self, e: EventId) -> Option<&ActionLabel> {
        self.labels.get(&e)
    }

    pub fn owner(&self, e: EventId) -> Option<ProcessId> {
        self.labels.get(&e).map(ActionLabel::actor)
    }

    pub fn labels(&self) -> &BTreeMap<EventId, ActionLabel> {
        &self.labels
    }

    /// Processes with at least one event, in id order.
    pub fn processes(&self) -> impl Iterator<Item = ProcessId> + '_ {
        self.timelines.keys().copied()
    }

    pub fn timeline(&self, p: ProcessId) -> &[EventId] {
        self.timelines.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn timelines(&self) -> &BTreeMap<ProcessId, Vec<EventId>> {
        &self.timelines
    }

    pub fn messages(&self) -> &BTreeSet<(EventId, EventId)> {
        &self.messages
    }

    /// The receive matched to send `s`, if any.
    pub fn receive_of(&self, s: EventId) -> Option<EventId> {
        self.messages.range((s, EventId(0))..).take_while(|(x, _)| *x == s).map(|&(_, r)| r).next()
    }

    pub fn send_of(&self, r: EventId) -> Option<EventId> {
        self.messages.iter().find(|&&(_, x)| x == r).map(|&(s, _)| s)
    }

    /// Direct successor on the owner's timeline.
    pub fn next_on_timeline(&self, e: EventId) -> Option<EventId> {
        let line = self.timeline(self.owner(e)?);
        let i = line.iter().position(|&x| x == e)?;
        line.get(i + 1).copied()
    }

    pub fn max_event_id(&self) -> Option<EventId> {
        self.labels.keys().next_back().copied()
    }

    pub fn is_orphan_free(&self) -> bool {
        classify_events(self).unmatched.is_empty()
    }

    /// Renumbers events `0..n` in [`linearize`] order. Two charts that differ
    /// only in event identities have equal canonical forms.
    pub fn canonical(&self) -> Result<Msc, MscError> {
        let order = linearize(self)?;
        let rename: BTreeMap<EventId, EventId> =
            order.iter().enumerate().map(|(i, &e)| (e, EventId(i as u32))).collect();
        Ok(self.renamed(&rename))
    }

    pub(crate) fn renamed(&self, rename: &BTreeMap<EventId, EventId>) -> Msc {
        Msc {
            labels: self.labels.iter().map(|(e, l)| (rename[e], *l)).collect(),
            timelines: self
                .timelines
                .iter()
                .map(|(p, line)| (*p, line.iter().map(|e| rename[e]).collect()))
                .collect(),
            messages: self.messages.iter().map(|(s, r)| (rename[s], rename[r])).collect(),
        }
    }
}

/// Incremental construction of charts: events are appended to their owner's
/// timeline in call order.
#[derive(Debug, Clone, Default)]
pub struct MscBuilder {
    labels: BTreeMap<EventId, ActionLabel>,
    timelines: BTreeMap<ProcessId, Vec<EventId>>,
    messages: Vec<(EventId, EventId)>,
    next: u32,
}

impl MscBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn event(&mut self, label: ActionLabel) -> EventId {
        let e = EventId(self.next);
        self.next += 1;
        self.labels.insert(e, label);
        self.timelines.entry(label.actor()).or_default().push(e);
        e
    }

    pub fn send(&mut self, from: ProcessId, to: ProcessId, m: MessageId) -> EventId {
        self.event(ActionLabel::send(from, to, m))
    }

    pub fn receive(&mut self, at: ProcessId, from: ProcessId, m: MessageId) -> EventId {
        self.event(ActionLabel::receive(at, from, m))
    }

    pub fn message(&mut self, s: EventId, r: EventId) -> &mut Self {
        self.messages.push((s, r));
        self
    }

    pub fn build(self) -> Msc {
        Msc::new(self.labels, self.timelines, self.messages).expect("builder keeps timelines consistent")
    }
}

/// Dense view of a chart used by the analyses: events sorted by id, with
/// successor lists for the timeline and message arcs.
pub(crate) struct Dense {
    pub ids: Vec<EventId>,
    pub index: BTreeMap<EventId, usize>,
    pub succ: Vec<Vec<usize>>,
    pub pred_count: Vec<usize>,
}

impl Dense {
    pub fn new(m: &Msc) -> Self {
        let ids: Vec<EventId> = m.events().collect();
        let index: BTreeMap<EventId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut succ = vec![Vec::new(); ids.len()];
        for line in m.timelines.values() {
            for w in line.windows(2) {
                succ[index[&w[0]]].push(index[&w[1]]);
            }
        }
        for &(s, r) in &m.messages {
            succ[index[&s]].push(index[&r]);
        }
        let mut pred_count = vec![0; ids.len()];
        for out in &succ {
            for &j in out {
                pred_count[j] += 1;
            }
        }
        Dense { ids, index, succ, pred_count }
    }

    /// Kahn order, or the index of an event on a cycle.
    pub fn topological(&self) -> Result<Vec<usize>, usize> {
        let mut indeg = self.pred_count.clone();
        let mut stack: Vec<usize> = (0..self.ids.len()).rev().filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.ids.len());
        while let Some(i) = stack.pop() {
            order.push(i);
            for &j in &self.succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        if order.len() == self.ids.len() {
            Ok(order)
        } else {
            Err((0..self.ids.len()).find(|&i| indeg[i] > 0).expect("some event left"))
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn structure_errors() {
        let mut labels = BTreeMap::new();
        labels.insert(EventId(0), ActionLabel::send(A, B, MessageId(0)));
        let mut tl = BTreeMap::new();
        tl.insert(B, vec![EventId(0)]);
        assert!(matches!(Msc::new(labels.clone(), tl, []), Err(MscError::WrongTimeline { .. })));
        assert_eq!(Msc::new(labels.clone(), BTreeMap::new(), []), Err(MscError::MissingFromTimeline(EventId(0))));
        let mut tl = BTreeMap::new();
        tl.insert(A, vec![EventId(0)]);
        assert!(matches!(Msc::new(labels, tl, [(EventId(0), EventId(7))]), Err(MscError::DanglingMessage(..))));
    }

    #[test]
    fn canonical_ignores_event_identities() {
        let (m, _) = three_phase();
        let rename: BTreeMap<_, _> = m.events().map(|e| (e, EventId(100 - e.0))).collect();
        let shuffled = m.renamed(&rename);
        assert_ne!(m, shuffled);
        assert_eq!(m.canonical().unwrap(), shuffled.canonical().unwrap());
    }

    #[test]
    fn label_display_is_actor_first() {
        let alpha = Alphabet::new(["a", "b"], ["x"]);
        let l = ActionLabel::receive(ProcessId(1), ProcessId(0), MessageId(0));
        assert_eq!(l.display(&alpha).to_string(), "b?a(x)");
        assert_eq!(l.dual().display(&alpha).to_string(), "a!b(x)");
    }
}
