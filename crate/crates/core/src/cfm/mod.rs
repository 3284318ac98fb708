//! Communicating finite-state machines over p2p FIFO channels.
//!
//! A [`CommSystem`] holds one [`Automaton`] per process of its alphabet.
//! Transition labels are `Option<ActionLabel>`, with `None` for ε.

mod explore;
mod normalize;
mod run;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::msc::{ActionLabel, Alphabet, EventId, MessageId, Msc, MscBuilder, ProcessId};

pub use explore::{
    bounded_explore, bounded_explore_with, enumerate_language, is_weakly_synchronous_system, Bounds, Exploration,
    LanguageSample, WsSystemVerdict,
};
pub use explore::Witness;
pub use normalize::{is_normalized, normalize_epsilon, unnormalized_state};
pub use run::{check_accepting_run, RunViolation};

pub type StateId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: Option<ActionLabel>,
    pub target: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    state_names: Vec<String>,
    transitions: Vec<Transition>,
    out: Vec<Vec<usize>>,
    initial: StateId,
    final_state: StateId,
}

impl Automaton {
    /// An automaton over the named states, with no transitions yet.
    pub fn new<I>(states: I, initial: StateId, final_state: StateId) -> Result<Self, AutomatonError>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let mut a = Automaton { state_names: vec![], transitions: vec![], out: vec![], initial, final_state };
        for s in states {
            a.add_state(s)?;
        }
        for q in [initial, final_state] {
            a.check_state(q)?;
        }
        Ok(a)
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId, AutomatonError> {
        let name = name.into();
        if self.state(&name).is_some() {
            return Err(AutomatonError::DuplicateState(name));
        }
        self.state_names.push(name);
        self.out.push(Vec::new());
        Ok(self.state_names.len() as StateId - 1)
    }

    /// Adds a transition and returns its index. Duplicates are kept, so
    /// parallel transitions stay distinguishable in runs.
    pub fn add_transition(
        &mut self,
        source: StateId,
        label: Option<ActionLabel>,
        target: StateId,
    ) -> Result<usize, AutomatonError> {
        self.check_state(source)?;
        self.check_state(target)?;
        self.transitions.push(Transition { source, label, target });
        self.out[source as usize].push(self.transitions.len() - 1);
        Ok(self.transitions.len() - 1)
    }

    fn check_state(&self, q: StateId) -> Result<(), AutomatonError> {
        if (q as usize) < self.state_names.len() {
            Ok(())
        } else {
            Err(AutomatonError::UnknownState(q))
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.state_names.len() as StateId
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q as usize]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name).map(|i| i as StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, index: usize) -> Option<&Transition> {
        self.transitions.get(index)
    }

    /// Indices of the transitions leaving `q`, in insertion order.
    pub fn outgoing(&self, q: StateId) -> &[usize] {
        &self.out[q as usize]
    }

    /// States reachable from `q` by ε-transitions, `q` included.
    pub fn epsilon_closure(&self, q: StateId) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[q as usize] = true;
        let mut stack = vec![q];
        while let Some(x) = stack.pop() {
            for &t in self.outgoing(x) {
                let t = &self.transitions[t];
                if t.label.is_none() && !seen[t.target as usize] {
                    seen[t.target as usize] = true;
                    stack.push(t.target);
                }
            }
        }
        seen
    }

    pub fn epsilon_reaches(&self, from: StateId, to: StateId) -> bool {
        self.epsilon_closure(from)[to as usize]
    }

    /// For every state, whether it ε-reaches the final state.
    pub fn accepting_states(&self) -> Vec<bool> {
        let mut acc = vec![false; self.num_states()];
        acc[self.final_state as usize] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for t in &self.transitions {
                if t.label.is_none() && acc[t.target as usize] && !acc[t.source as usize] {
                    acc[t.source as usize] = true;
                    changed = true;
                }
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("{automata} automata for {processes} processes")]
    ProcessCount { processes: usize, automata: usize },
    #[error("transition {transition} of process {process} is not an action of that process")]
    ForeignAction { process: u32, transition: usize },
    #[error("transition {transition} of process {process} names an unknown process or message")]
    UnknownName { process: u32, transition: usize },
    #[error("transition {transition} of process {process} uses a channel from a process to itself")]
    SelfChannel { process: u32, transition: usize },
}

/// One automaton per process, indexed by process id.
///
/// With a single process the channel from that process to itself is allowed,
/// which is how FIFO automata are expressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommSystem {
    alphabet: Alphabet,
    automata: Vec<Automaton>,
}

impl CommSystem {
    pub fn new(alphabet: Alphabet, automata: Vec<Automaton>) -> Result<Self, SystemError> {
        let n = alphabet.num_processes();
        if automata.len() != n {
            return Err(SystemError::ProcessCount { processes: n, automata: automata.len() });
        }
        for (p, a) in automata.iter().enumerate() {
            let process = p as u32;
            for (k, t) in a.transitions().iter().enumerate() {
                let Some(l) = t.label else { continue };
                if l.actor() != ProcessId(process) {
                    return Err(SystemError::ForeignAction { process, transition: k });
                }
                if l.peer().0 as usize >= n || l.payload.0 as usize >= alphabet.num_messages() {
                    return Err(SystemError::UnknownName { process, transition: k });
                }
                if n > 1 && l.peer() == l.actor() {
                    return Err(SystemError::SelfChannel { process, transition: k });
                }
            }
        }
        Ok(CommSystem { alphabet, automata })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn automata(&self) -> &[Automaton] {
        &self.automata
    }

    pub fn automaton(&self, p: ProcessId) -> &Automaton {
        &self.automata[p.0 as usize]
    }

    pub fn num_processes(&self) -> usize {
        self.automata.len()
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> {
        (0..self.automata.len() as u32).map(ProcessId)
    }

    pub fn transition(&self, t: TransitionRef) -> Option<&Transition> {
        self.automata.get(t.process.0 as usize)?.transition(t.index)
    }

    pub fn initial_configuration(&self) -> Configuration {
        let n = self.num_processes();
        Configuration {
            states: self.automata.iter().map(Automaton::initial).collect(),
            channels: vec![VecDeque::new(); n * n],
        }
    }

    /// Fires `t` from `c`.
    pub fn step(&self, c: &Configuration, t: TransitionRef) -> Result<Configuration, StepError> {
        let tr = *self.transition(t).ok_or(StepError::UnknownTransition(t))?;
        let p = t.process.0 as usize;
        if c.states[p] != tr.source {
            return Err(StepError::WrongState { process: t.process, expected: tr.source, actual: c.states[p] });
        }
        let mut next = c.clone();
        next.states[p] = tr.target;
        if let Some(l) = tr.label {
            let ch = c.channel_index(l.sender, l.receiver);
            if l.is_send() {
                next.channels[ch].push_back(l.payload);
            } else {
                match next.channels[ch].pop_front() {
                    None => return Err(StepError::EmptyChannel { from: l.sender, to: l.receiver }),
                    Some(m) if m != l.payload => return Err(StepError::HeadMismatch { expected: l.payload, found: m }),
                    Some(_) => {}
                }
            }
        }
        Ok(next)
    }

    /// Replays `trace` from the initial configuration, returning every
    /// configuration visited (the initial one first).
    pub fn replay(&self, trace: &[TransitionRef]) -> Result<Vec<Configuration>, StepError> {
        let mut confs = vec![self.initial_configuration()];
        for &t in trace {
            let next = self.step(confs.last().unwrap(), t)?;
            confs.push(next);
        }
        Ok(confs)
    }

    /// All processes ε-reach their final state and every channel is empty.
    pub fn is_accepting(&self, c: &Configuration) -> bool {
        c.channels.iter().all(VecDeque::is_empty)
            && self.automata.iter().zip(&c.states).all(|(a, &q)| a.epsilon_reaches(q, a.final_state()))
    }

    /// The chart and run induced by a trace: one event per non-ε transition,
    /// sends matched to receives per channel in FIFO order.
    pub fn trace_to_msc(&self, trace: &[TransitionRef]) -> Result<(Msc, Run), StepError> {
        self.replay(trace)?;
        let mut b = MscBuilder::new();
        let mut run = Run::new();
        let mut pending: BTreeMap<(ProcessId, ProcessId), VecDeque<EventId>> = BTreeMap::new();
        for &t in trace {
            let Some(l) = self.transition(t).unwrap().label else { continue };
            let e = b.event(l);
            run.insert(e, t);
            let queue = pending.entry(l.channel()).or_default();
            if l.is_send() {
                queue.push_back(e);
            } else {
                let s = queue.pop_front().expect("replay checked the channel");
                b.message(s, e);
            }
        }
        Ok((b.build(), run))
    }
}

/// A transition of one process, by index into its automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionRef {
    pub process: ProcessId,
    pub index: usize,
}

impl TransitionRef {
    pub fn new(process: ProcessId, index: usize) -> Self {
        TransitionRef { process, index }
    }
}

/// The transition executed at each event.
pub type Run = BTreeMap<EventId, TransitionRef>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("no transition {} for process {}", .0.index, .0.process.0)]
    UnknownTransition(TransitionRef),
    #[error("process {} is in state {actual}, transition starts in {expected}", .process.0)]
    WrongState { process: ProcessId, expected: StateId, actual: StateId },
    #[error("channel ({}, {}) is empty", .from.0, .to.0)]
    EmptyChannel { from: ProcessId, to: ProcessId },
    #[error("head mismatch: expected m{}, found m{}", .expected.0, .found.0)]
    HeadMismatch { expected: MessageId, found: MessageId },
}

/// Local states and channel contents. Channel `(p, q)` is stored at
/// `p * n + q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub states: Vec<StateId>,
    pub channels: Vec<VecDeque<MessageId>>,
}

impl Configuration {
    fn channel_index(&self, from: ProcessId, to: ProcessId) -> usize {
        from.0 as usize * self.states.len() + to.0 as usize
    }

    pub fn channel(&self, from: ProcessId, to: ProcessId) -> &VecDeque<MessageId> {
        &self.channels[self.channel_index(from, to)]
    }
}

/// A single-process system whose actions push to and pop from the process's
/// own queue: `p!p(m)` enqueues `m`, `p?p(m)` dequeues it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FifoAutomaton {
    system: CommSystem,
}

pub const FIFO_PROCESS: ProcessId = ProcessId(0);

impl FifoAutomaton {
    pub fn new<M>(messages: M, automaton: Automaton) -> Result<Self, SystemError>
    where
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let alphabet = Alphabet::new(["p"], messages);
        Ok(FifoAutomaton { system: CommSystem::new(alphabet, vec![automaton])? })
    }

    pub fn push(m: MessageId) -> ActionLabel {
        ActionLabel::send(FIFO_PROCESS, FIFO_PROCESS, m)
    }

    pub fn pop(m: MessageId) -> ActionLabel {
        ActionLabel::receive(FIFO_PROCESS, FIFO_PROCESS, m)
    }

    pub fn automaton(&self) -> &Automaton {
        &self.system.automata[0]
    }

    pub fn system(&self) -> &CommSystem {
        &self.system
    }

    pub fn messages(&self) -> impl Iterator<Item = MessageId> + '_ {
        self.system.alphabet.messages()
    }
}

impl From<FifoAutomaton> for CommSystem {
    fn from(f: FifoAutomaton) -> Self {
        f.system
    }
}

impl fmt::Display for TransitionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:t{}", self.process.0, self.index)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `q0 -!x-> q1 -?x-> q2`, final `q2`.
    pub fn push_pop() -> FifoAutomaton {
        let x = MessageId(0);
        let mut a = Automaton::new(["q0", "q1", "q2"], 0, 2).unwrap();
        a.add_transition(0, Some(FifoAutomaton::push(x)), 1).unwrap();
        a.add_transition(1, Some(FifoAutomaton::pop(x)), 2).unwrap();
        FifoAutomaton::new(["x"], a).unwrap()
    }

    /// Straight-line automaton executing `labels` in order.
    pub fn line(labels: &[ActionLabel]) -> Automaton {
        let mut a = Automaton::new((0..=labels.len()).map(|i| format!("l{i}")), 0, labels.len() as StateId).unwrap();
        for (i, l) in labels.iter().enumerate() {
            a.add_transition(i as StateId, Some(*l), i as StateId + 1).unwrap();
        }
        a
    }

    /// The system of the three-phase example, with one straight line per
    /// process mirroring the chart's timelines.
    pub fn three_phase_system() -> CommSystem {
        let (m, _) = crate::msc::fixtures::three_phase();
        let alphabet = Alphabet::new(["a", "b", "c"], ["m1", "m2", "m3", "m4"]);
        let automata = (0..3)
            .map(|p| line(&m.timeline(ProcessId(p)).iter().map(|e| *m.label(*e).unwrap()).collect::<Vec<_>>()))
            .collect();
        CommSystem::new(alphabet, automata).unwrap()
    }
}
