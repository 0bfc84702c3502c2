//! Line-oriented text formats. Blank lines and lines starting with `#` are ignored.
//!
//! Grammars: `T <id> <byte>`, `B <id> <left> <right>`, `R <id> <base> <k>`
//! and one `S <start>`; bytes are decimal.
//!
//! Parses: `E <literal>` or `C <src> <len>` in phrase order. The literal is
//! the rest of the line after one space, with `\\`, `\n`, `\r`, `\t` and
//! `\xHH` escapes.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use crate::parse::{Parse, Phrase};
use crate::rlslp::{Rlslp, Rule, SymbolId};
use crate::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn field<T: FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

pub fn read_grammar(src: &str) -> Result<Rlslp> {
    let mut rules: BTreeMap<SymbolId, Rule> = BTreeMap::new();
    let mut start = None;
    for (ln, l) in lines(src) {
        let mut it = l.split_whitespace();
        let tag = it.next().unwrap();
        if tag == "S" {
            if start.is_some() {
                return Err(err(ln, "second start line"));
            }
            start = Some(field(ln, it.next(), "start symbol")?);
        } else {
            let id: SymbolId = field(ln, it.next(), "symbol id")?;
            let rule = match tag {
                "T" => Rule::Terminal(field(ln, it.next(), "byte")?),
                "B" => Rule::Binary(field(ln, it.next(), "left child")?, field(ln, it.next(), "right child")?),
                "R" => Rule::Run(field(ln, it.next(), "base")?, field(ln, it.next(), "exponent")?),
                _ => return Err(err(ln, format!("unknown rule tag {tag:?}"))),
            };
            if rules.insert(id, rule).is_some() {
                return Err(Error::DuplicateRule(id));
            }
        }
        if it.next().is_some() {
            return Err(err(ln, "trailing fields"));
        }
    }
    Rlslp::new(rules, start.ok_or(Error::MissingStart)?)
}

pub fn write_grammar(g: &Rlslp) -> String {
    let mut out = String::new();
    for (&id, rule) in g.rules() {
        match *rule {
            Rule::Terminal(c) => writeln!(out, "T {id} {c}"),
            Rule::Binary(l, r) => writeln!(out, "B {id} {l} {r}"),
            Rule::Run(b, k) => writeln!(out, "R {id} {b} {k}"),
        }
        .unwrap();
    }
    writeln!(out, "S {}", g.start()).unwrap();
    out
}

pub fn escape(bytes: &[u8]) -> String {
    let mut out = String::new();
    for &b in bytes {
        match b {
            b'\\' => out.push_str("\\\\"),
            b'\n' => out.push_str("\\n"),
            b'\r' => out.push_str("\\r"),
            b'\t' => out.push_str("\\t"),
            0x20..=0x7e => out.push(b as char),
            _ => write!(out, "\\x{b:02x}").unwrap(),
        }
    }
    out
}

pub fn unescape(s: &str) -> std::result::Result<Vec<u8>, String> {
    let b = s.as_bytes();
    let mut out = Vec::with_capacity(b.len());
    let mut i = 0;
    while i < b.len() {
        if b[i] != b'\\' {
            out.push(b[i]);
            i += 1;
            continue;
        }
        match b.get(i + 1) {
            Some(b'\\') => out.push(b'\\'),
            Some(b'n') => out.push(b'\n'),
            Some(b'r') => out.push(b'\r'),
            Some(b't') => out.push(b'\t'),
            Some(b'x') => {
                let hex = s.get(i + 2..i + 4).ok_or("truncated \\x escape")?;
                out.push(u8::from_str_radix(hex, 16).map_err(|_| format!("bad \\x escape {hex:?}"))?);
                i += 2;
            }
            _ => return Err(format!("bad escape at byte {i}")),
        }
        i += 2;
    }
    Ok(out)
}

pub fn read_parse(src: &str) -> Result<Parse> {
    let mut phrases = Vec::new();
    for (ln, l) in lines(src) {
        if let Some(lit) = l.strip_prefix("E ") {
            let bytes = unescape(lit).map_err(|m| err(ln, m))?;
            if bytes.is_empty() {
                return Err(err(ln, "empty literal"));
            }
            phrases.push(Phrase::Explicit(bytes));
        } else if let Some(rest) = l.strip_prefix("C ") {
            let mut it = rest.split_whitespace();
            let src = field(ln, it.next(), "source")?;
            let len = field(ln, it.next(), "length")?;
            if it.next().is_some() {
                return Err(err(ln, "trailing fields"));
            }
            phrases.push(Phrase::Copy { src, len });
        } else {
            return Err(err(ln, format!("expected `E <literal>` or `C <src> <len>`, got {l:?}")));
        }
    }
    Parse::new(phrases)
}

pub fn write_parse(p: &Parse) -> String {
    let mut out = String::new();
    for ph in p.phrases() {
        match ph {
            Phrase::Explicit(b) => writeln!(out, "E {}", escape(b)),
            Phrase::Copy { src, len } => writeln!(out, "C {src} {len}"),
        }
        .unwrap();
    }
    out
}

/// One unsigned integer per line.
pub fn read_keys(src: &str) -> Result<Vec<u64>> {
    lines(src).map(|(ln, l)| field(ln, Some(l.trim()), "key")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::rlslp::tests::abracadabra;

    #[test]
    fn grammar_round_trip() {
        let g = abracadabra();
        let back = read_grammar(&write_grammar(&g)).unwrap();
        assert_eq!(back.expand(), g.expand());
        assert_eq!(back.rules(), g.rules());
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(read_grammar("T 1 97\nT 1 98\nS 1"), Err(Error::DuplicateRule(1))));
        assert!(matches!(read_grammar("T 1 97"), Err(Error::MissingStart)));
        assert!(matches!(read_grammar("T 1 300\nS 1"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(read_grammar("# c\nX 1\nS 1"), Err(Error::Format { line: 2, .. })));
        assert!(read_grammar("B 2 1 1\nS 2").is_err());
    }

    #[test]
    fn parse_round_trip() {
        let t = gen::random_text(300, 3, 5);
        let p = gen::random_bidirectional(&t, 5);
        assert_eq!(read_parse(&write_parse(&p)).unwrap(), p);
        let odd = Parse::new(vec![Phrase::Explicit(vec![0, b'\\', b'\n', b' ', 200])]).unwrap();
        assert_eq!(read_parse(&write_parse(&odd)).unwrap(), odd);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(read_parse("E ab\nQ 1 2"), Err(Error::Format { line: 2, .. })));
        assert!(matches!(read_parse("E \\q"), Err(Error::Format { line: 1, .. })));
        assert!(read_parse("E ab\nC 4 2").is_err());
    }

    #[test]
    fn keys() {
        assert_eq!(read_keys("3\n# x\n\n 7 \n").unwrap(), vec![3, 7]);
        assert!(read_keys("3\n-1").is_err());
    }
}
