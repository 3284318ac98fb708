//! ```text
//! processes a b
//! messages m
//! automaton a
//! states q0 q1
//! initial q0
//! final q1
//! q0 -> q1 a!b(m)
//! automaton b
//! ...
//! ```
//!
//! Every process has one `automaton` block. Transition labels are actions,
//! optionally without the leading process name, or `eps`. A FIFO automaton
//! is a system with a single process whose actions use its own channel.

use super::{emit_header, header, lines, missing, name, parse_label, words, ParseError, Token};
use crate::cfm::{Automaton, CommSystem, FifoAutomaton, StateId};
use crate::msc::{Alphabet, ProcessId};

struct Block<'a> {
    process: ProcessId,
    at: Token<'a>,
    states: Vec<&'a str>,
    initial: Option<&'a str>,
    final_state: Option<&'a str>,
    transitions: Vec<(Token<'a>, Token<'a>, Option<crate::msc::ActionLabel>)>,
}

/// Any token except the keywords that start lines and the arrow.
fn state_name<'a>(t: &Token<'a>) -> Result<&'a str, ParseError> {
    match t.text {
        "automaton" | "states" | "initial" | "final" | "processes" | "messages" | "->" => {
            Err(t.error(format!("{:?} cannot name a state", t.text)))
        }
        n => Ok(n),
    }
}

pub fn parse_system(text: &str) -> Result<CommSystem, ParseError> {
    let mut alphabet = Alphabet::default();
    let mut blocks: Vec<Block<'_>> = Vec::new();
    for line in lines(text) {
        if blocks.is_empty() && header(&line, &mut alphabet)? {
            continue;
        }
        let head = line[0];
        match head.text {
            "automaton" => {
                let t = line.get(1).ok_or_else(|| missing(&line, "a process name"))?;
                let p = alphabet.process(name(t)?).ok_or_else(|| t.error(format!("unknown process {:?}", t.text)))?;
                if blocks.iter().any(|b| b.process == p) {
                    return Err(t.error(format!("second automaton for {:?}", t.text)));
                }
                if let Some(extra) = line.get(2) {
                    return Err(extra.error("unexpected token"));
                }
                blocks.push(Block { process: p, at: *t, states: vec![], initial: None, final_state: None, transitions: vec![] });
            }
            _ if blocks.is_empty() => return Err(head.error("expected a header or `automaton`")),
            "states" => {
                let b = blocks.last_mut().unwrap();
                for t in &line[1..] {
                    let n = state_name(t)?;
                    if b.states.contains(&n) {
                        return Err(t.error(format!("state {n:?} is declared twice")));
                    }
                    b.states.push(n);
                }
            }
            "initial" | "final" => {
                let t = line.get(1).ok_or_else(|| missing(&line, "a state"))?;
                let b = blocks.last_mut().unwrap();
                let slot = if head.text == "initial" { &mut b.initial } else { &mut b.final_state };
                if slot.is_some() {
                    return Err(head.error(format!("second `{}` line", head.text)));
                }
                *slot = Some(state_name(t)?);
            }
            _ => {
                if line.len() < 3 || line[1].text != "->" {
                    return Err(head.error("expected `SOURCE -> TARGET LABEL`"));
                }
                let label_tok = line.get(3).ok_or_else(|| missing(&line, "a label or `eps`"))?;
                if let Some(extra) = line.get(4) {
                    return Err(extra.error("unexpected token"));
                }
                let b = blocks.last_mut().unwrap();
                let label = match label_tok.text {
                    "eps" => None,
                    _ => Some(parse_label(label_tok, &alphabet, Some(b.process))?),
                };
                b.transitions.push((head, line[2], label));
            }
        }
    }
    let end = Token { text: "", line: text.lines().count().max(1), column: 1 };
    let mut automata: Vec<Option<Automaton>> = vec![None; alphabet.num_processes()];
    for b in blocks {
        let state = |n: &str, t: &Token<'_>| {
            b.states.iter().position(|s| *s == n).map(|i| i as StateId).ok_or_else(|| t.error(format!("undeclared state {n:?}")))
        };
        let init = state(b.initial.ok_or_else(|| b.at.error("automaton has no `initial` line"))?, &b.at)?;
        let fin = state(b.final_state.ok_or_else(|| b.at.error("automaton has no `final` line"))?, &b.at)?;
        let mut a = Automaton::new(b.states.iter().copied(), init, fin).expect("states are distinct");
        for (src, dst, label) in &b.transitions {
            let (s, d) = (state(src.text, src)?, state(dst.text, dst)?);
            a.add_transition(s, *label, d).expect("states exist");
        }
        automata[b.process.0 as usize] = Some(a);
    }
    let automata = automata
        .into_iter()
        .enumerate()
        .map(|(p, a)| a.ok_or_else(|| end.error(format!("no automaton for {:?}", alphabet.process_name(ProcessId(p as u32))))))
        .collect::<Result<Vec<_>, _>>()?;
    CommSystem::new(alphabet, automata).map_err(|e| end.error(e.to_string()))
}

pub fn emit_system(s: &CommSystem) -> String {
    let al = s.alphabet();
    let mut out = String::new();
    emit_header(&mut out, al);
    for (p, a) in s.automata().iter().enumerate() {
        out.push_str(&format!("automaton {}\n", al.process_name(ProcessId(p as u32))));
        words(&mut out, "states", a.state_names().iter().cloned());
        out.push_str(&format!("initial {}\nfinal {}\n", a.state_name(a.initial()), a.state_name(a.final_state())));
        for t in a.transitions() {
            let label = t.label.map_or("eps".to_string(), |l| l.display(al).to_string());
            out.push_str(&format!("{} -> {} {label}\n", a.state_name(t.source), a.state_name(t.target)));
        }
    }
    out
}

/// A single-process system file read as a FIFO automaton. The process is
/// renamed to `p`.
pub fn parse_fifo(text: &str) -> Result<FifoAutomaton, ParseError> {
    let s = parse_system(text)?;
    let err = |m: &str| ParseError { line: 1, column: 1, message: m.to_string() };
    if s.num_processes() != 1 {
        return Err(err("a FIFO automaton has exactly one process"));
    }
    let al = s.alphabet();
    FifoAutomaton::new(al.messages().map(|m| al.message_name(m)), s.automata()[0].clone()).map_err(|e| err(&e.to_string()))
}

pub fn emit_fifo(f: &FifoAutomaton) -> String {
    emit_system(f.system())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfm::fixtures::{three_phase_system, push_pop};

    #[test]
    fn round_trips() {
        let encoded = crate::reduction::encode(&push_pop()).unwrap().system;
        for s in [three_phase_system(), push_pop().system().clone(), encoded] {
            let text = emit_system(&s);
            let back = parse_system(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(emit_system(&back), text);
        }
        let f = push_pop();
        assert_eq!(parse_fifo(&emit_fifo(&f)).unwrap(), f);
    }

    #[test]
    fn keywords_cannot_name_states() {
        let text = "processes a\nautomaton a\nstates q final\ninitial q\nfinal q\n";
        let e = parse_system(text).unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));
    }

    #[test]
    fn short_labels_and_errors() {
        let text = "processes a b\nmessages m\nautomaton a\nstates 0 1\ninitial 0\nfinal 1\n0 -> 1 !b(m)\n\
                    automaton b\nstates 0 1\ninitial 0\nfinal 1\n0 -> 1 ?a(m)\n";
        let s = parse_system(text).unwrap();
        assert!(emit_system(&s).contains("0 -> 1 a!b(m)"));
        let e = parse_system(&text.replace("0 -> 1 ?a(m)", "0 -> 2 ?a(m)")).unwrap_err();
        assert_eq!((e.line, e.column), (12, 6));
        let e = parse_system(&text.replace("?a(m)", "?z(m)")).unwrap_err();
        assert!(e.message.contains("unknown process") && e.line == 12);
        let e = parse_system("processes a b\nmessages m\nautomaton a\nstates 0\ninitial 0\nfinal 0\n").unwrap_err();
        assert!(e.message.contains("no automaton for \"b\""));
    }
}
