//! ```text
//! processes a b
//! messages m
//! s1 a!b(m)
//! r1 b?a(m)
//! s1 -> r1
//! ```
//!
//! Event lines give a name and a label; the events of each process are put
//! on its timeline in file order. Message lines pair a send with a receive.
//! Headers must precede the lines that use their names.

use std::collections::{BTreeMap, HashMap};

use super::{emit_header, header, lines, missing, name, parse_label, ParseError};
use crate::msc::{Alphabet, EventId, Msc, ProcessId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MscFile {
    pub alphabet: Alphabet,
    pub msc: Msc,
    /// Event names; events without one are written as `e<id>`.
    pub names: BTreeMap<EventId, String>,
}

impl MscFile {
    pub fn new(alphabet: Alphabet, msc: Msc) -> Self {
        MscFile { alphabet, msc, names: BTreeMap::new() }
    }

    pub fn event_name(&self, e: EventId) -> String {
        self.names.get(&e).cloned().unwrap_or_else(|| e.to_string())
    }
}

/// Events get ids `0, 1, ...` in file order.
pub fn parse_msc(text: &str) -> Result<MscFile, ParseError> {
    let mut alphabet = Alphabet::default();
    let mut ids: HashMap<&str, EventId> = HashMap::new();
    let mut names = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut timelines: BTreeMap<ProcessId, Vec<EventId>> = BTreeMap::new();
    let mut messages = Vec::new();
    for line in lines(text) {
        if header(&line, &mut alphabet)? {
            continue;
        }
        match line.len() {
            2 => {
                let n = name(&line[0])?;
                if ids.contains_key(n) {
                    return Err(line[0].error(format!("event {n:?} is defined twice")));
                }
                let label = parse_label(&line[1], &alphabet, None)?;
                let e = EventId(ids.len() as u32);
                ids.insert(n, e);
                names.insert(e, n.to_string());
                labels.insert(e, label);
                timelines.entry(label.actor()).or_default().push(e);
            }
            3 if line[1].text == "->" => {
                let event = |t: &super::Token<'_>| {
                    ids.get(t.text).copied().ok_or_else(|| t.error(format!("unknown event {:?}", t.text)))
                };
                messages.push((event(&line[0])?, event(&line[2])?));
            }
            1 => return Err(missing(&line, "an action or `->`")),
            _ => return Err(line[1].error("expected `NAME ACTION` or `SEND -> RECEIVE`")),
        }
    }
    let msc = Msc::new(labels, timelines, messages).expect("parser keeps timelines consistent");
    Ok(MscFile { alphabet, msc, names })
}

/// Writes headers, then events process by process along their timelines,
/// then messages in the order their sends were written.
pub fn emit_msc(f: &MscFile) -> String {
    let mut out = String::new();
    emit_header(&mut out, &f.alphabet);
    let mut pos = BTreeMap::new();
    for p in f.msc.processes() {
        for &e in f.msc.timeline(p) {
            pos.insert(e, pos.len());
            let label = f.msc.label(e).expect("timeline events have labels");
            out.push_str(&format!("{} {}\n", f.event_name(e), label.display(&f.alphabet)));
        }
    }
    let mut msgs: Vec<(EventId, EventId)> = f.msc.messages().iter().copied().collect();
    msgs.sort_by_key(|&(s, r)| (pos[&s], pos[&r]));
    for (s, r) in msgs {
        out.push_str(&format!("{} -> {}\n", f.event_name(s), f.event_name(r)));
    }
    out
}
