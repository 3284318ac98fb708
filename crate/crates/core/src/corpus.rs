//! Seeded random generators for charts and automata.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cfm::{bounded_explore, enumerate_language, is_normalized, Automaton, Bounds, FifoAutomaton, StateId, Witness};
use crate::msc::{ActionLabel, Alphabet, EventId, MessageId, Msc, MscBuilder, ProcessId};

#[derive(Debug, Clone, Copy)]
pub struct ChartParams {
    pub max_processes: u32,
    pub max_messages: u32,
    pub letters: u32,
    /// Receives may take any pending message of their channel, not only the
    /// oldest one, so charts can break the FIFO condition.
    pub overtaking: bool,
}

impl Default for ChartParams {
    fn default() -> Self {
        ChartParams { max_processes: 4, max_messages: 10, letters: 2, overtaking: false }
    }
}

/// Runs a random orphan-free execution: at each step either a fresh message
/// is sent on a random channel or a pending one is received.
pub fn random_chart<R: Rng>(rng: &mut R, params: ChartParams) -> (Alphabet, Msc) {
    let n = rng.gen_range(2..=params.max_processes.max(2));
    let total = rng.gen_range(1..=params.max_messages.max(1));
    let alphabet = Alphabet::new((0..n).map(|i| format!("p{i}")), (0..params.letters).map(|i| format!("m{i}")));
    let mut b = MscBuilder::new();
    let mut pending: Vec<Vec<(EventId, ActionLabel)>> = vec![Vec::new(); (n * n) as usize];
    let (mut sent, mut open) = (0, 0);
    while sent < total || open > 0 {
        let send = sent < total && (open == 0 || rng.gen_bool(0.5));
        if send {
            let p = rng.gen_range(0..n);
            let q = (p + rng.gen_range(1..n)) % n;
            let m = MessageId(rng.gen_range(0..params.letters.max(1)));
            let e = b.send(ProcessId(p), ProcessId(q), m);
            pending[(p * n + q) as usize].push((e, ActionLabel::send(ProcessId(p), ProcessId(q), m)));
            sent += 1;
            open += 1;
        } else {
            let busy: Vec<usize> = (0..pending.len()).filter(|&c| !pending[c].is_empty()).collect();
            let c = *busy.choose(rng).expect("some message is pending");
            let k = if params.overtaking { rng.gen_range(0..pending[c].len()) } else { 0 };
            let (s, l) = pending[c].remove(k);
            let r = b.event(l.dual());
            b.message(s, r);
            open -= 1;
        }
    }
    (alphabet, b.build())
}

/// A random normalized automaton over push and pop actions: each
/// non-final state, and the final one with probability one half, gets a
/// single labelled transition or one or two ε transitions, never a
/// self-loop. Targets lean towards higher states,
/// which makes long accepting paths common.
pub fn random_normalized_fifo<R: Rng>(rng: &mut R, max_states: u32, max_letters: u32) -> FifoAutomaton {
    let n = rng.gen_range(2..=max_states.max(2));
    let k = rng.gen_range(1..=max_letters.max(1));
    let mut a = Automaton::new((0..n).map(|i| format!("q{i}")), 0, n - 1).expect("distinct names");
    let last = if rng.gen_bool(0.5) { n } else { n - 1 };
    for q in 0..last {
        let other = |rng: &mut R| -> StateId {
            if q + 1 < n && rng.gen_bool(0.75) {
                rng.gen_range(q + 1..n)
            } else {
                (q + rng.gen_range(1..n)) % n
            }
        };
        if rng.gen_bool(0.7) {
            let m = MessageId(rng.gen_range(0..k));
            let label = if rng.gen_bool(0.5) { FifoAutomaton::push(m) } else { FifoAutomaton::pop(m) };
            a.add_transition(q, Some(label), other(rng)).expect("states exist");
        } else {
            let first = other(rng);
            a.add_transition(q, None, first).expect("states exist");
            let second = other(rng);
            if second != first && rng.gen_bool(0.5) {
                a.add_transition(q, None, second).expect("states exist");
            }
        }
    }
    debug_assert!(is_normalized(&a));
    FifoAutomaton::new((0..k).map(|i| format!("x{i}")), a).expect("actions use the own channel")
}

/// Random normalized FIFO automata having an accepting run within `bounds`
/// with at least `min_actions` actions, each with the first such run in
/// enumeration order.
pub fn fifo_corpus<R: Rng>(
    rng: &mut R,
    count: usize,
    max_states: u32,
    max_letters: u32,
    min_actions: usize,
    bounds: Bounds,
) -> Vec<(FifoAutomaton, Witness)> {
    let mut out: Vec<(FifoAutomaton, Witness)> = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 1000 * count {
        tries += 1;
        let f = random_normalized_fifo(rng, max_states, max_letters);
        if out.iter().any(|(g, _)| g == &f) {
            continue;
        }
        if bounded_explore(f.system(), bounds).witness().is_none() {
            continue;
        }
        let sample = enumerate_language(f.system(), bounds, 64);
        if let Some(w) = sample.witnesses.into_iter().find(|w| w.msc.len() >= min_actions.max(1)) {
            out.push((f, w));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;
    use crate::cfm::check_accepting_run;
    use crate::msc::{validate_msc, Condition};

    #[test]
    fn fifo_charts_are_valid() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..100 {
            let (al, m) = random_chart(&mut rng, ChartParams::default());
            assert!(validate_msc(&m).is_valid() && m.is_orphan_free());
            assert!(al.num_processes() <= 4 && m.messages().len() <= 10);
        }
    }

    #[test]
    fn overtaking_charts_break_fifo_sometimes() {
        let mut rng = StdRng::seed_from_u64(2);
        let params = ChartParams { overtaking: true, letters: 1, ..ChartParams::default() };
        let broken = (0..200)
            .filter(|_| validate_msc(&random_chart(&mut rng, params).1).violates(Condition::Fifo))
            .count();
        assert!(broken > 0);
    }

    #[test]
    fn fifo_corpus_runs_accept() {
        let mut rng = StdRng::seed_from_u64(3);
        let corpus = fifo_corpus(&mut rng, 5, 5, 2, 4, Bounds::new(4, 30));
        assert_eq!(corpus.len(), 5);
        for (f, w) in &corpus {
            assert!(is_normalized(f.automaton()));
            check_accepting_run(f.system(), &w.msc, &w.run).unwrap();
            assert!(w.msc.len() >= 4);
        }
    }
}
