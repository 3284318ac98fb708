use std::collections::BTreeSet;

use super::{CausalOrder, EventId, Msc, MscError, ProcessId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventClasses {
    pub send: BTreeSet<EventId>,
    pub receive: BTreeSet<EventId>,
    pub matched: BTreeSet<EventId>,
    pub unmatched: BTreeSet<EventId>,
}

pub fn classify_events(m: &Msc) -> EventClasses {
    let mut c = EventClasses::default();
    let matched: BTreeSet<EventId> = m.messages().iter().map(|&(s, _)| s).collect();
    for (&e, l) in m.labels() {
        if l.is_send() {
            c.send.insert(e);
            if !matched.contains(&e) {
                c.unmatched.insert(e);
            }
        } else {
            c.receive.insert(e);
        }
    }
    c.matched = matched;
    c
}

/// Restriction of all components to `keep`. Message pairs survive only
/// when both ends are kept.
pub fn restrict(m: &Msc, keep: &BTreeSet<EventId>) -> Msc {
    Msc {
        labels: m.labels.iter().filter(|(e, _)| keep.contains(e)).map(|(e, l)| (*e, *l)).collect(),
        timelines: m
            .timelines
            .iter()
            .map(|(p, line)| (*p, line.iter().copied().filter(|e| keep.contains(e)).collect::<Vec<_>>()))
            .filter(|(_, line)| !line.is_empty())
            .collect(),
        messages: m.messages.iter().filter(|(s, r)| keep.contains(s) && keep.contains(r)).copied().collect(),
    }
}

/// The prefix of `m` on a downward-closed event set.
pub fn prefix(m: &Msc, keep: &BTreeSet<EventId>) -> Result<Msc, MscError> {
    if let Some(&e) = keep.iter().find(|e| !m.contains(**e)) {
        return Err(MscError::UnknownEvent(e));
    }
    let order = CausalOrder::new(m)?;
    for e in m.events().filter(|e| !keep.contains(e)) {
        if let Some(f) = order.above(e).find(|f| keep.contains(f)) {
            return Err(MscError::NotDownwardClosed { below: e, above: f });
        }
    }
    Ok(restrict(m, keep))
}

/// `m1 . m2`, with the events of `m2` renumbered past those of `m1`.
///
/// Defined unless some channel carries an unmatched send in `m1` and a
/// matched send in `m2`.
pub fn concat(m1: &Msc, m2: &Msc) -> Result<Msc, MscError> {
    let unmatched_channels: BTreeSet<(ProcessId, ProcessId)> =
        super::classify_events(m1).unmatched.iter().map(|e| m1.labels[e].channel()).collect();
    for &(s, _) in m2.messages() {
        let ch = m2.labels[&s].channel();
        if unmatched_channels.contains(&ch) {
            return Err(MscError::ConcatUndefined((ch.0 .0, ch.1 .0)));
        }
    }
    let offset = m1.max_event_id().map_or(0, |e| e.0 + 1);
    let shift = |e: &EventId| EventId(e.0 + offset);
    let mut out = m1.clone();
    for (e, l) in &m2.labels {
        out.labels.insert(shift(e), *l);
    }
    for (p, line) in &m2.timelines {
        out.timelines.entry(*p).or_default().extend(line.iter().map(shift));
    }
    out.messages.extend(m2.messages.iter().map(|(s, r)| (shift(s), shift(r))));
    Ok(out)
}

/// Concatenates a sequence of charts, left to right.
pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Msc>) -> Result<Msc, MscError> {
    parts.into_iter().try_fold(Msc::empty(), |acc, m| concat(&acc, m))
}
