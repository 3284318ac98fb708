//! One action per line. Queue actions are `!x` (push) and `?x` (pop); send
//! sequences use actions of the three-machine encoding such as `a!b(x)`.
//! An optional `messages` header fixes the letter order, otherwise letters
//! are numbered in order of first use.

use super::{header, lines, name, parse_label, words, ParseError, Token};
use crate::msc::{ActionLabel, Alphabet, MessageId};
use crate::reduction::QueueAction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueSequence {
    pub letters: Vec<String>,
    pub actions: Vec<QueueAction>,
}

fn letter(t: &Token<'_>, text: &str, al: &mut Alphabet, fixed: bool) -> Result<MessageId, ParseError> {
    let at = Token { text, line: t.line, column: t.column + 1 };
    let n = name(&at)?;
    match al.message(n) {
        Some(m) => Ok(m),
        None if fixed => Err(at.error(format!("unknown message {n:?}"))),
        None => Ok(al.add_message(n)),
    }
}

pub fn parse_queue_actions(text: &str) -> Result<QueueSequence, ParseError> {
    let mut al = Alphabet::default();
    let mut fixed = false;
    let mut actions = Vec::new();
    for line in lines(text) {
        if actions.is_empty() && line[0].text == "messages" {
            header(&line, &mut al)?;
            fixed = true;
            continue;
        }
        if let Some(extra) = line.get(1) {
            return Err(extra.error("one action per line"));
        }
        let t = &line[0];
        let (op, rest) = t.text.split_at(t.text.chars().next().map_or(0, char::len_utf8));
        let m = match op {
            "!" | "?" => letter(t, rest, &mut al, fixed)?,
            _ => return Err(t.error(format!("expected !LETTER or ?LETTER, found {:?}", t.text))),
        };
        actions.push(if op == "!" { QueueAction::Push(m) } else { QueueAction::Pop(m) });
    }
    let letters = al.messages().map(|m| al.message_name(m)).collect();
    Ok(QueueSequence { letters, actions })
}

pub fn emit_queue_actions(q: &QueueSequence) -> String {
    let mut out = String::new();
    words(&mut out, "messages", q.letters.iter().cloned());
    for a in &q.actions {
        let (op, m) = match a {
            QueueAction::Push(m) => ('!', m),
            QueueAction::Pop(m) => ('?', m),
        };
        out.push_str(&format!("{op}{}\n", q.letters[m.0 as usize]));
    }
    out
}

/// Sends over processes `a`, `b`, `c`; the dummy letter always gets the id
/// after the ordinary letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SendSequence {
    pub letters: Vec<String>,
    pub dummy_name: String,
    pub sends: Vec<ActionLabel>,
}

impl SendSequence {
    pub fn dummy(&self) -> MessageId {
        MessageId(self.letters.len() as u32)
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(["a", "b", "c"], self.letters.iter().cloned().chain([self.dummy_name.clone()]))
    }
}

pub fn parse_sends(text: &str, dummy_name: &str) -> Result<SendSequence, ParseError> {
    let mut al = Alphabet::new(["a", "b", "c"], Vec::<String>::new());
    let mut fixed = false;
    let mut raw = Vec::new();
    let ls = lines(text);
    for line in &ls {
        if raw.is_empty() && !fixed && line[0].text == "messages" {
            header(line, &mut al)?;
            fixed = true;
            continue;
        }
        if let Some(extra) = line.get(1) {
            return Err(extra.error("one action per line"));
        }
        let t = &line[0];
        if !fixed {
            // Letters are only known once used; register this one first.
            if let (Some(open), true) = (t.text.find('('), t.text.ends_with(')')) {
                let inner = &t.text[open + 1..t.text.len() - 1];
                if super::valid_name(inner) && al.message(inner).is_none() {
                    al.add_message(inner);
                }
            }
        }
        let l = parse_label(t, &al, None)?;
        if !l.is_send() {
            return Err(t.error("expected a send"));
        }
        raw.push(l);
    }
    let dummy_old = al.message(dummy_name);
    let letters: Vec<String> = al.messages().filter(|&m| Some(m) != dummy_old).map(|m| al.message_name(m)).collect();
    let remap = |m: MessageId| {
        if Some(m) == dummy_old {
            MessageId(letters.len() as u32)
        } else {
            MessageId(m.0 - u32::from(dummy_old.is_some_and(|d| d < m)))
        }
    };
    let sends = raw.into_iter().map(|l| ActionLabel { payload: remap(l.payload), ..l }).collect();
    Ok(SendSequence { letters, dummy_name: dummy_name.to_string(), sends })
}

pub fn emit_sends(s: &SendSequence) -> String {
    let al = s.alphabet();
    let mut out = String::new();
    words(&mut out, "messages", al.messages().map(|m| al.message_name(m)));
    for l in &s.sends {
        out.push_str(&format!("{}\n", l.display(&al)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{complete_dummies, extract_run, A, B, C};

    #[test]
    fn queue_round_trip() {
        let q = parse_queue_actions("!x\n?x\n!y\n").unwrap();
        assert_eq!(q.letters, ["x", "y"]);
        assert_eq!(q.actions[1], QueueAction::Pop(MessageId(0)));
        let text = emit_queue_actions(&q);
        assert_eq!(text, "messages x y\n!x\n?x\n!y\n");
        assert_eq!(parse_queue_actions(&text).unwrap(), q);
        let e = parse_queue_actions("messages x\n!x\n?z\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 2));
    }

    #[test]
    fn sends_translate_both_ways() {
        let q = parse_queue_actions("!x\n?x\n").unwrap();
        let c = complete_dummies(&q.actions, MessageId(1)).unwrap();
        let s = SendSequence { letters: q.letters.clone(), dummy_name: "D".into(), sends: c.sends.clone() };
        let text = emit_sends(&s);
        assert_eq!(text.lines().count(), 5);
        let back = parse_sends(&text, "D").unwrap();
        assert_eq!(back, s);
        assert_eq!(extract_run(&back.sends, back.dummy()), q.actions);
    }

    #[test]
    fn dummy_goes_last_without_header() {
        let s = parse_sends("a!c(D)\na!b(x)\n", "D").unwrap();
        assert_eq!(s.letters, ["x"]);
        assert_eq!(s.sends, [ActionLabel::send(A, C, MessageId(1)), ActionLabel::send(A, B, MessageId(0))]);
        assert!(parse_sends("b?a(x)\n", "D").is_err());
    }
}
