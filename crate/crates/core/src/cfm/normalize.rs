use super::{Automaton, StateId};

/// Splits every transition `t = (l, a, l')` into `(l, ε, l_t)` and
/// `(l_t, a, l')` through a fresh state `l_t`. Original states keep their
/// ids; `l_t` gets id `n + index(t)`.
pub fn normalize_epsilon(a: &Automaton) -> Automaton {
    let mut out = Automaton::new(a.state_names().iter().cloned(), a.initial(), a.final_state()).unwrap();
    for (k, t) in a.transitions().iter().enumerate() {
        let name = fresh_name(&out, &format!("{}#{k}", a.state_name(t.source)));
        let mid = out.add_state(name).unwrap();
        out.add_transition(t.source, None, mid).unwrap();
        out.add_transition(mid, t.label, t.target).unwrap();
    }
    out
}

/// Every state has either only ε-transitions or exactly one transition,
/// which is labelled, and no transition is a self-loop.
pub fn is_normalized(a: &Automaton) -> bool {
    unnormalized_state(a).is_none()
}

/// The first state breaking the shape checked by [`is_normalized`].
pub fn unnormalized_state(a: &Automaton) -> Option<StateId> {
    a.states().find(|&q| {
        let out: Vec<_> = a.outgoing(q).iter().map(|&t| a.transitions()[t]).collect();
        let labelled = out.iter().filter(|t| t.label.is_some()).count();
        let shape = labelled == 0 || out.len() == 1;
        !(shape && out.iter().all(|t| t.target != q))
    })
}

pub(crate) fn fresh_name(a: &Automaton, base: &str) -> String {
    let mut name = base.to_string();
    while a.state(&name).is_some() {
        name.push('\'');
    }
    name
}
