use std::collections::BTreeMap;

use super::{CausalOrder, EventId, Msc, MscError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoVerdict {
    CausallyOrdered,
    /// `first <= second`, both addressed to the same process, but `second` is
    /// matched while `first` is unmatched or received later.
    Violation { first: EventId, second: EventId },
}

impl CoVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CoVerdict::CausallyOrdered)
    }
}

/// Sends to a common destination must be received in causal order.
/// Requires an acyclic chart; FIFO violations show up as CO violations.
pub fn is_causally_ordered(m: &Msc) -> Result<CoVerdict, MscError> {
    let order = CausalOrder::new(m)?;
    let position: BTreeMap<EventId, usize> =
        m.timelines().values().flat_map(|line| line.iter().enumerate().map(|(i, &e)| (e, i))).collect();
    let sends: Vec<EventId> = m.labels().iter().filter(|(_, l)| l.is_send()).map(|(&e, _)| e).collect();
    for &s in &sends {
        for &t in &sends {
            if s == t || m.labels()[&s].receiver != m.labels()[&t].receiver || !order.leq(s, t)? {
                continue;
            }
            let Some(rt) = m.receive_of(t) else { continue };
            let in_order = m.receive_of(s).is_some_and(|rs| position[&rs] <= position[&rt]);
            if !in_order {
                return Ok(CoVerdict::Violation { first: s, second: t });
            }
        }
    }
    Ok(CoVerdict::CausallyOrdered)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{is_weakly_synchronous, MessageId, MscBuilder, ProcessId};
    use super::*;

    #[test]
    fn three_phase_is_co() {
        assert_eq!(is_causally_ordered(&three_phase().0).unwrap(), CoVerdict::CausallyOrdered);
    }

    #[test]
    fn single_message_is_co() {
        assert!(is_causally_ordered(&single_message().0).unwrap().holds());
    }

    #[test]
    fn forwarded_message_overtakes() {
        let m = not_causally_ordered();
        let s1 = m.timeline(A)[0];
        let s3 = m.timeline(B)[1];
        assert_eq!(is_causally_ordered(&m).unwrap(), CoVerdict::Violation { first: s1, second: s3 });
    }

    /// An unmatched send followed causally by a matched one to the same
    /// destination: p2p valid and weakly synchronous, yet not CO. The
    /// equivalence between the two classes therefore needs orphan-free charts.
    #[test]
    fn orphan_breaks_the_equivalence() {
        let (p, q, t) = (ProcessId(0), ProcessId(1), ProcessId(2));
        let mut b = MscBuilder::new();
        let orphan = b.send(p, q, MessageId(0));
        let s = b.send(p, t, MessageId(1));
        let r = b.receive(t, p, MessageId(1));
        let s2 = b.send(t, q, MessageId(2));
        let r2 = b.receive(q, t, MessageId(2));
        b.message(s, r).message(s2, r2);
        let m = b.build();
        assert!(super::super::validate_msc(&m).is_valid());
        assert!(is_weakly_synchronous(&m).unwrap().is_weakly_synchronous());
        assert_eq!(is_causally_ordered(&m).unwrap(), CoVerdict::Violation { first: orphan, second: s2 });
    }
}
