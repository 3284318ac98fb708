use std::fmt;

use super::{CommSystem, Run, Transition};
use crate::msc::{classify_events, EventId, Msc, ProcessId};

/// The first failed clause of an accepting run, in clause order. Each
/// clause is checked over all events before the next clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunViolation {
    /// Clause (i): the event has no transition.
    Unmapped(EventId),
    /// Clause (i): the run maps an event the chart does not have.
    UnknownEvent(EventId),
    /// Clause (i): the transition does not belong to the event's process.
    ForeignTransition(EventId),
    /// Clause (i).
    LabelMismatch(EventId),
    /// Clause (ii): no ε-path from the target of the first to the source of
    /// the second.
    Disconnected(EventId, EventId),
    /// Clause (iii).
    PayloadMismatch(EventId, EventId),
    /// Clause (iv).
    BadStart(EventId),
    /// Clause (v).
    BadEnd(EventId),
    /// Clause (v) for a process without events: its initial state does not
    /// ε-reach its final state.
    IdleNotFinal(ProcessId),
    /// Clause (vi).
    Unmatched(EventId),
}

impl RunViolation {
    pub fn clause(&self) -> u8 {
        match self {
            RunViolation::Unmapped(_)
            | RunViolation::UnknownEvent(_)
            | RunViolation::ForeignTransition(_)
            | RunViolation::LabelMismatch(_) => 1,
            RunViolation::Disconnected(..) => 2,
            RunViolation::PayloadMismatch(..) => 3,
            RunViolation::BadStart(_) => 4,
            RunViolation::BadEnd(_) | RunViolation::IdleNotFinal(_) => 5,
            RunViolation::Unmatched(_) => 6,
        }
    }
}

impl fmt::Display for RunViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.clause();
        match self {
            RunViolation::Unmapped(e) => write!(f, "clause {c}: event {e} has no transition"),
            RunViolation::UnknownEvent(e) => write!(f, "clause {c}: run maps unknown event {e}"),
            RunViolation::ForeignTransition(e) => write!(f, "clause {c}: transition of {e} is not in its process"),
            RunViolation::LabelMismatch(e) => write!(f, "clause {c}: label of {e} differs from its transition"),
            RunViolation::Disconnected(e, g) => write!(f, "clause {c}: no epsilon path from {e} to {g}"),
            RunViolation::PayloadMismatch(s, r) => write!(f, "clause {c}: message ({s}, {r}) changes payload"),
            RunViolation::BadStart(e) => write!(f, "clause {c}: first event {e} does not leave the initial state"),
            RunViolation::BadEnd(e) => write!(f, "clause {c}: last event {e} does not reach the final state"),
            RunViolation::IdleNotFinal(p) => write!(f, "clause {c}: idle process {} is not final", p.0),
            RunViolation::Unmatched(e) => write!(f, "clause {c}: send {e} is unmatched"),
        }
    }
}

/// Checks the six clauses of an accepting run. Both the initial and the final
/// anchoring allow ε-moves, like consecutive events do.
pub fn check_accepting_run(s: &CommSystem, m: &Msc, run: &Run) -> Result<(), RunViolation> {
    let mut tr: std::collections::BTreeMap<EventId, Transition> = Default::default();
    if let Some(&e) = run.keys().find(|e| !m.contains(**e)) {
        return Err(RunViolation::UnknownEvent(e));
    }
    for e in m.events() {
        let label = *m.label(e).unwrap();
        let t = *run.get(&e).ok_or(RunViolation::Unmapped(e))?;
        let Some(&t_) = s.transition(t).filter(|_| t.process == label.actor()) else {
            return Err(RunViolation::ForeignTransition(e));
        };
        if t_.label != Some(label) {
            return Err(RunViolation::LabelMismatch(e));
        }
        tr.insert(e, t_);
    }
    for (&p, line) in m.timelines() {
        let a = s.automaton(p);
        for w in line.windows(2) {
            if !a.epsilon_reaches(tr[&w[0]].target, tr[&w[1]].source) {
                return Err(RunViolation::Disconnected(w[0], w[1]));
            }
        }
    }
    for &(snd, rcv) in m.messages() {
        if tr[&snd].label.map(|l| l.payload) != tr[&rcv].label.map(|l| l.payload) {
            return Err(RunViolation::PayloadMismatch(snd, rcv));
        }
    }
    for (&p, line) in m.timelines() {
        let a = s.automaton(p);
        if let Some(first) = line.first() {
            if !a.epsilon_reaches(a.initial(), tr[first].source) {
                return Err(RunViolation::BadStart(*first));
            }
        }
    }
    for p in s.processes() {
        let a = s.automaton(p);
        match m.timeline(p).last() {
            Some(last) if !a.epsilon_reaches(tr[last].target, a.final_state()) => {
                return Err(RunViolation::BadEnd(*last));
            }
            None if !a.epsilon_reaches(a.initial(), a.final_state()) => return Err(RunViolation::IdleNotFinal(p)),
            _ => {}
        }
    }
    if let Some(&e) = classify_events(m).unmatched.iter().next() {
        return Err(RunViolation::Unmatched(e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfm::fixtures::*;
    use crate::cfm::{Automaton, FifoAutomaton, TransitionRef, FIFO_PROCESS};
    use crate::msc::{ActionLabel, Alphabet, MessageId, MscBuilder};

    fn three_phase_run() -> (CommSystem, Msc, Run) {
        let s = three_phase_system();
        let (m, _) = crate::msc::fixtures::three_phase();
        let run = m
            .timelines()
            .iter()
            .flat_map(|(p, line)| line.iter().enumerate().map(|(i, e)| (*e, TransitionRef::new(*p, i))))
            .collect();
        (s, m, run)
    }

    #[test]
    fn three_phase_run_is_accepting() {
        let (s, m, run) = three_phase_run();
        assert_eq!(check_accepting_run(&s, &m, &run), Ok(()));
    }

    #[test]
    fn violations_by_clause() {
        let (s, m, run) = three_phase_run();
        let e0 = *m.timeline(ProcessId(0)).first().unwrap();
        let mut r = run.clone();
        r.remove(&e0);
        assert_eq!(check_accepting_run(&s, &m, &r), Err(RunViolation::Unmapped(e0)));
        let mut r = run.clone();
        r.insert(e0, TransitionRef::new(ProcessId(0), 1));
        assert_eq!(check_accepting_run(&s, &m, &r), Err(RunViolation::LabelMismatch(e0)));
        let mut r = run.clone();
        r.insert(EventId(99), TransitionRef::new(ProcessId(0), 0));
        assert_eq!(check_accepting_run(&s, &m, &r).unwrap_err().clause(), 1);
    }

    #[test]
    fn empty_chart() {
        let mut a = Automaton::new(["q0", "q1"], 0, 1).unwrap();
        a.add_transition(0, None, 1).unwrap();
        let f = FifoAutomaton::new(["x"], a).unwrap();
        assert_eq!(check_accepting_run(f.system(), &Msc::empty(), &Run::new()), Ok(()));
        let stuck = FifoAutomaton::new(["x"], Automaton::new(["q0", "q1"], 0, 1).unwrap()).unwrap();
        assert_eq!(
            check_accepting_run(stuck.system(), &Msc::empty(), &Run::new()),
            Err(RunViolation::IdleNotFinal(FIFO_PROCESS))
        );
    }

    #[test]
    fn unmatched_send_fails_last_clause() {
        let x = MessageId(0);
        let a = line(&[FifoAutomaton::push(x)]);
        let f = FifoAutomaton::new(["x"], a).unwrap();
        let mut b = MscBuilder::new();
        let e = b.send(FIFO_PROCESS, FIFO_PROCESS, x);
        let m = b.build();
        let run = Run::from([(e, TransitionRef::new(FIFO_PROCESS, 0))]);
        let err = check_accepting_run(f.system(), &m, &run).unwrap_err();
        assert_eq!((err.clone(), err.clause()), (RunViolation::Unmatched(e), 6));
    }

    #[test]
    fn epsilon_gaps_and_anchors() {
        // q0 -e-> q1 -!m-> q2 -e-> q3 -?m-> q4 -e-> q5 on one process talking to itself.
        let m_ = MessageId(0);
        let mut a = Automaton::new((0..6).map(|i| format!("q{i}")), 0, 5).unwrap();
        a.add_transition(0, None, 1).unwrap();
        let send = a.add_transition(1, Some(FifoAutomaton::push(m_)), 2).unwrap();
        a.add_transition(2, None, 3).unwrap();
        let recv = a.add_transition(3, Some(FifoAutomaton::pop(m_)), 4).unwrap();
        a.add_transition(4, None, 5).unwrap();
        let f = FifoAutomaton::new(["m"], a).unwrap();
        let mut b = MscBuilder::new();
        let s_ = b.send(FIFO_PROCESS, FIFO_PROCESS, m_);
        let r_ = b.receive(FIFO_PROCESS, FIFO_PROCESS, m_);
        b.message(s_, r_);
        let m = b.build();
        let run = Run::from([(s_, TransitionRef::new(FIFO_PROCESS, send)), (r_, TransitionRef::new(FIFO_PROCESS, recv))]);
        assert_eq!(check_accepting_run(f.system(), &m, &run), Ok(()));

        // Two processes, where q's receive comes from a state it cannot reach.
        let alphabet = Alphabet::new(["p", "q"], ["m"]);
        let (p, q) = (ProcessId(0), ProcessId(1));
        let pa = line(&[ActionLabel::send(p, q, m_)]);
        let mut qa = Automaton::new(["0", "1", "2"], 0, 2).unwrap();
        qa.add_transition(1, Some(ActionLabel::receive(q, p, m_)), 2).unwrap();
        let sys = CommSystem::new(alphabet, vec![pa, qa]).unwrap();
        let (single, s1, r1) = crate::msc::fixtures::single_message();
        let run = Run::from([(s1, TransitionRef::new(p, 0)), (r1, TransitionRef::new(q, 0))]);
        assert_eq!(check_accepting_run(&sys, &single, &run), Err(RunViolation::BadStart(r1)));
    }
}
