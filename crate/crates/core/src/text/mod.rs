//! Line-oriented text formats for charts, systems, graphs, minor models and
//! action sequences, plus DOT export.
//!
//! All formats share the same lexical rules: one statement per line, tokens
//! separated by whitespace, `#` at the start of a token begins a comment
//! running to the end of the line. Names may contain any characters except
//! whitespace and `!?(),`.

mod dot;
mod graph;
mod msc;
mod seq;
mod system;

use thiserror::Error;

use crate::msc::{ActionLabel, Alphabet, ProcessId};

pub use dot::{graph_to_dot, msc_to_dot};
pub use graph::{emit_graph, emit_grid_model, parse_graph, parse_grid_model, GraphFile, GridModelFile};
pub use msc::{emit_msc, parse_msc, MscFile};
pub use seq::{emit_queue_actions, emit_sends, parse_queue_actions, parse_sends, QueueSequence, SendSequence};
pub use system::{emit_fifo, emit_system, parse_fifo, parse_system};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

/// Non-empty lines as token lists, comments removed. Columns count chars
/// from 1.
pub(crate) fn lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut toks = Vec::new();
        let mut start = None;
        let mut col = 0;
        for (pos, ch) in raw.char_indices().chain([(raw.len(), ' ')]) {
            col += 1;
            if ch.is_whitespace() {
                if let Some((s, c)) = start.take() {
                    toks.push(Token { text: &raw[s..pos], line: i + 1, column: c });
                }
            } else if start.is_none() {
                if ch == '#' {
                    break;
                }
                start = Some((pos, col));
            }
        }
        if let Some((s, c)) = start {
            toks.push(Token { text: &raw[s..], line: i + 1, column: c });
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('#') && !s.chars().any(|c| c.is_whitespace() || "!?(),".contains(c))
}

pub(crate) fn name<'a>(t: &Token<'a>) -> Result<&'a str, ParseError> {
    if valid_name(t.text) {
        Ok(t.text)
    } else {
        Err(t.error(format!("invalid name {:?}", t.text)))
    }
}

/// Error anchored just past the last token of a line.
pub(crate) fn missing(line: &[Token<'_>], what: &str) -> ParseError {
    let last = line.last().expect("lines are non-empty");
    ParseError { line: last.line, column: last.column + last.text.chars().count(), message: format!("expected {what}") }
}

/// Parses `p!q(m)` or `q?p(m)`. With `actor` set, the leading process name
/// may be omitted and, if present, must equal it.
pub(crate) fn parse_label(t: &Token<'_>, alphabet: &Alphabet, actor: Option<ProcessId>) -> Result<ActionLabel, ParseError> {
    let s = t.text;
    let bad = || t.error(format!("expected an action like a!b(m) or b?a(m), found {s:?}"));
    let op = s.find(['!', '?']).ok_or_else(bad)?;
    let open = s.find('(').ok_or_else(bad)?;
    if open < op || !s.ends_with(')') {
        return Err(bad());
    }
    let (who, peer, msg) = (&s[..op], &s[op + 1..open], &s[open + 1..s.len() - 1]);
    let lookup = |n: &str, offset: usize| {
        let at = Token { text: n, line: t.line, column: t.column + s[..offset].chars().count() };
        let n = name(&at)?;
        alphabet.process(n).ok_or_else(|| at.error(format!("unknown process {n:?}")))
    };
    let me = match (who.is_empty(), actor) {
        (true, Some(a)) => a,
        _ => lookup(who, 0)?,
    };
    if let Some(a) = actor {
        if a != me {
            return Err(t.error(format!("action of {who:?} in the automaton of {:?}", alphabet.process_name(a))));
        }
    }
    let other = lookup(peer, op + 1)?;
    let mt = Token { text: msg, line: t.line, column: t.column + s[..open + 1].chars().count() };
    let m = alphabet.message(name(&mt)?).ok_or_else(|| mt.error(format!("unknown message {msg:?}")))?;
    Ok(if s.as_bytes()[op] == b'!' { ActionLabel::send(me, other, m) } else { ActionLabel::receive(me, other, m) })
}

/// Reads `processes ...` and `messages ...` header lines into `alphabet`.
/// Returns false if the line is not a header.
pub(crate) fn header(line: &[Token<'_>], alphabet: &mut Alphabet) -> Result<bool, ParseError> {
    let kind = line[0].text;
    if kind != "processes" && kind != "messages" {
        return Ok(false);
    }
    for t in &line[1..] {
        let n = name(t)?;
        let known = if kind == "processes" { alphabet.process(n).is_some() } else { alphabet.message(n).is_some() };
        if known {
            return Err(t.error(format!("{n:?} is declared twice")));
        }
        if kind == "processes" {
            alphabet.add_process(n);
        } else {
            alphabet.add_message(n);
        }
    }
    Ok(true)
}

pub(crate) fn emit_header(out: &mut String, alphabet: &Alphabet) {
    words(out, "processes", alphabet.processes().map(|p| alphabet.process_name(p)));
    words(out, "messages", alphabet.messages().map(|m| alphabet.message_name(m)));
}

pub(crate) fn words(out: &mut String, keyword: &str, items: impl IntoIterator<Item = String>) {
    out.push_str(keyword);
    for w in items {
        out.push(' ');
        out.push_str(&w);
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_columns() {
        let ls = lines("  a  b # c\n\n# only\nx\t y#z");
        assert_eq!(ls.len(), 2);
        assert_eq!((ls[0][1].text, ls[0][1].column), ("b", 6));
        assert_eq!(ls[1][1].text, "y#z");
        assert_eq!(ls[1][0].line, 4);
    }

    #[test]
    fn labels() {
        let al = Alphabet::new(["a", "b"], ["m"]);
        let t = Token { text: "a!b(m)", line: 1, column: 1 };
        assert_eq!(parse_label(&t, &al, None).unwrap(), ActionLabel::send(ProcessId(0), ProcessId(1), crate::msc::MessageId(0)));
        let t = Token { text: "?a(m)", line: 1, column: 1 };
        assert!(parse_label(&t, &al, Some(ProcessId(1))).unwrap().is_receive());
        let t = Token { text: "a!z(m)", line: 3, column: 5 };
        let e = parse_label(&t, &al, None).unwrap_err();
        assert_eq!((e.line, e.column), (3, 7));
        let t = Token { text: "a!b(m)", line: 1, column: 1 };
        assert!(parse_label(&t, &al, Some(ProcessId(1))).is_err());
    }
}
