//! Streaming N-Triples reader.
//!
//! Terms are returned as text: IRIs without their angle brackets, blank
//! nodes as `_:label`, literals as `"lexical"` followed by `@lang` or
//! `^^<datatype>` when present. Escape sequences are decoded, so the
//! lexical form between the outer quotes is the literal value itself.
//! [`format_term`] turns such text back into N-Triples syntax.
//!
//! Malformed lines are reported with their line number and skipped; the
//! reader keeps going.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};

/// One statement as three term texts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawTriple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl RawTriple {
    pub fn new(s: impl Into<String>, p: impl Into<String>, o: impl Into<String>) -> Self {
        RawTriple {
            subject: s.into(),
            predicate: p.into(),
            object: o.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    Iri,
    BlankNode,
    Literal,
}

pub fn term_kind(term: &str) -> TermKind {
    if term.starts_with('"') {
        TermKind::Literal
    } else if term.starts_with("_:") {
        TermKind::BlankNode
    } else {
        TermKind::Iri
    }
}

/// Iterator over the statements of an N-Triples stream.
pub struct NTriplesReader<R> {
    reader: R,
    line_no: u64,
    buf: String,
}

impl<R: BufRead> NTriplesReader<R> {
    pub fn new(reader: R) -> Self {
        NTriplesReader {
            reader,
            line_no: 0,
            buf: String::new(),
        }
    }

    /// Line number of the most recently read line (1-based).
    pub fn line_number(&self) -> u64 {
        self.line_no
    }
}

impl<R: BufRead> Iterator for NTriplesReader<R> {
    type Item = Result<RawTriple>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) if e.kind() == io::ErrorKind::InvalidData => {
                    self.line_no += 1;
                    return Some(Err(Error::Parse {
                        line: self.line_no,
                        message: "invalid UTF-8".into(),
                    }));
                }
                Err(e) => return Some(Err(e.into())),
            }
            self.line_no += 1;
            match parse_line(&self.buf) {
                Ok(Some(t)) => return Some(Ok(t)),
                Ok(None) => continue,
                Err(message) => {
                    return Some(Err(Error::Parse {
                        line: self.line_no,
                        message,
                    }))
                }
            }
        }
    }
}

/// Opens an N-Triples file, decompressing it when `gzip` is set. A path of
/// `-` reads standard input.
pub fn open(path: &Path, gzip: bool) -> Result<NTriplesReader<Box<dyn BufRead>>> {
    let raw: Box<dyn io::Read> = if path.as_os_str() == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(path)?)
    };
    let reader: Box<dyn BufRead> = if gzip {
        Box::new(BufReader::new(MultiGzDecoder::new(raw)))
    } else {
        Box::new(BufReader::new(raw))
    };
    Ok(NTriplesReader::new(reader))
}

/// Parses every statement of `text`, returning triples and diagnostics.
pub fn parse_str(text: &str) -> (Vec<RawTriple>, Vec<Error>) {
    let mut triples = Vec::new();
    let mut errors = Vec::new();
    for item in NTriplesReader::new(text.as_bytes()) {
        match item {
            Ok(t) => triples.push(t),
            Err(e) => errors.push(e),
        }
    }
    (triples, errors)
}

/// Parses one line. Blank and comment-only lines give `Ok(None)`.
pub fn parse_line(line: &str) -> std::result::Result<Option<RawTriple>, String> {
    let mut cur = Cursor::new(line);
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let (subject, kind) = cur.term()?;
    if kind == TermKind::Literal {
        return Err("subject must be an IRI or blank node".into());
    }
    cur.expect_ws()?;
    let (predicate, kind) = cur.term()?;
    if kind != TermKind::Iri {
        return Err("predicate must be an IRI".into());
    }
    cur.expect_ws()?;
    let (object, _) = cur.term()?;
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(format!("expected '.' at column {}", cur.pos + 1));
    }
    cur.bump();
    cur.skip_ws();
    if !cur.at_end() && cur.peek() != Some('#') {
        return Err(format!("trailing content at column {}", cur.pos + 1));
    }
    Ok(Some(RawTriple {
        subject,
        predicate,
        object,
    }))
}

/// Parses a single term in N-Triples syntax, e.g. `<http://x>` or
/// `"chat"@fr`, into its stored text form.
pub fn parse_term(text: &str) -> std::result::Result<String, String> {
    let mut cur = Cursor::new(text.trim());
    let (term, _) = cur.term()?;
    if !cur.at_end() {
        return Err(format!("unexpected content after term at column {}", cur.pos + 1));
    }
    Ok(term)
}

/// One position of a pattern line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    /// `?`, unbound.
    Any,
    /// `#<id>`, a numeric id that skips the dictionary.
    Id(u32),
    /// A term in N-Triples syntax, as stored text.
    Term(String),
}

/// Parses three whitespace-separated pattern terms, optionally followed by
/// `.`. Blank and comment lines give `Ok(None)`.
pub fn parse_pattern_line(line: &str) -> std::result::Result<Option<[PatternTerm; 3]>, String> {
    let mut cur = Cursor::new(line);
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') && !cur.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        if i > 0 {
            cur.expect_ws_before(&['<', '"', '?'])?;
        }
        out.push(cur.pattern_term()?);
    }
    cur.skip_ws();
    if cur.peek() == Some('.') {
        cur.bump();
        cur.skip_ws();
    }
    if !cur.at_end() {
        return Err(format!("trailing content at column {}", cur.pos + 1));
    }
    Ok(Some(out.try_into().expect("three terms")))
}

/// Renders stored term text as N-Triples syntax.
pub fn format_term(term: &str) -> String {
    match term_kind(term) {
        TermKind::BlankNode => term.to_string(),
        TermKind::Iri => format!("<{}>", escape_iri(term)),
        TermKind::Literal => {
            let close = term.rfind('"').unwrap_or(0);
            let (lexical, suffix) = if close > 0 {
                (&term[1..close], &term[close + 1..])
            } else {
                (&term[1..], "")
            };
            let mut out = String::with_capacity(term.len() + 2);
            out.push('"');
            for ch in lexical.chars() {
                match ch {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    c => out.push(c),
                }
            }
            out.push('"');
            match suffix.strip_prefix("^^") {
                Some(dt) => {
                    out.push_str("^^<");
                    out.push_str(&escape_iri(dt));
                    out.push('>');
                }
                None => out.push_str(suffix),
            }
            out
        }
    }
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for ch in iri.chars() {
        if iri_char_forbidden(ch) {
            out.push_str(&format!("\\u{:04X}", ch as u32));
        } else {
            out.push(ch);
        }
    }
    out
}

pub fn format_triple(t: &RawTriple) -> String {
    format!(
        "{} {} {} .",
        format_term(&t.subject),
        format_term(&t.predicate),
        format_term(&t.object)
    )
}

fn iri_char_forbidden(ch: char) -> bool {
    ch <= ' ' || matches!(ch, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        matches!(self.rest().trim_end_matches(['\r', '\n']), "")
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn expect_ws(&mut self) -> std::result::Result<(), String> {
        self.expect_ws_before(&['<', '"'])
    }

    /// Terms may abut only when the next one starts with a delimiter.
    fn expect_ws_before(&mut self, delimiters: &[char]) -> std::result::Result<(), String> {
        let before = self.pos;
        self.skip_ws();
        if before == self.pos && !self.peek().is_some_and(|c| delimiters.contains(&c)) {
            return Err(format!("expected whitespace at column {}", self.pos + 1));
        }
        Ok(())
    }

    fn pattern_term(&mut self) -> std::result::Result<PatternTerm, String> {
        match self.peek() {
            Some('?') => {
                self.bump();
                Ok(PatternTerm::Any)
            }
            Some('#') => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                match self.s[start..self.pos].parse::<u32>() {
                    Ok(id) if id > 0 => Ok(PatternTerm::Id(id)),
                    _ => Err(format!("bad numeric id at column {}", start)),
                }
            }
            _ => Ok(PatternTerm::Term(self.term()?.0)),
        }
    }

    fn term(&mut self) -> std::result::Result<(String, TermKind), String> {
        match self.peek() {
            Some('<') => Ok((self.iri()?, TermKind::Iri)),
            Some('_') => Ok((self.blank()?, TermKind::BlankNode)),
            Some('"') => Ok((self.literal()?, TermKind::Literal)),
            Some(c) => Err(format!("unexpected '{c}' at column {}", self.pos + 1)),
            None => Err("unexpected end of line".into()),
        }
    }

    fn iri(&mut self) -> std::result::Result<String, String> {
        let start = self.pos;
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => {
                    let c = self.uchar()?;
                    if iri_char_forbidden(c) {
                        return Err(format!("escaped character U+{:04X} not allowed in IRI", c as u32));
                    }
                    out.push(c);
                }
                Some(c) if iri_char_forbidden(c) => {
                    return Err(format!("character {c:?} not allowed in IRI starting at column {}", start + 1))
                }
                Some(c) => out.push(c),
                None => return Err(format!("unterminated IRI starting at column {}", start + 1)),
            }
        }
        if out.is_empty() {
            return Err(format!("empty IRI at column {}", start + 1));
        }
        Ok(out)
    }

    fn uchar(&mut self) -> std::result::Result<char, String> {
        let digits = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            other => return Err(format!("invalid escape {other:?} at column {}", self.pos)),
        };
        self.hex(digits)
    }

    fn hex(&mut self, digits: usize) -> std::result::Result<char, String> {
        let rest = self.rest();
        if rest.len() < digits || !rest.is_char_boundary(digits) {
            return Err("truncated \\u escape".into());
        }
        let code = u32::from_str_radix(&rest[..digits], 16).map_err(|_| format!("bad hex in escape at column {}", self.pos + 1))?;
        self.pos += digits;
        char::from_u32(code).ok_or_else(|| format!("escape U+{code:X} is not a scalar value"))
    }

    fn blank(&mut self) -> std::result::Result<String, String> {
        let start = self.pos;
        if !self.rest().starts_with("_:") {
            return Err(format!("expected blank node at column {}", start + 1));
        }
        self.pos += 2;
        let label_start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphanumeric() || c == '_' => {}
            _ => return Err(format!("empty blank node label at column {}", start + 1)),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{00B7}') {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        // a label cannot end with '.'
        while self.s[label_start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        Ok(self.s[start..self.pos].to_string())
    }

    fn literal(&mut self) -> std::result::Result<String, String> {
        let start = self.pos;
        self.bump();
        let mut out = String::from("\"");
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            out.push(self.uchar()?);
                            continue;
                        }
                        other => return Err(format!("invalid escape {other:?} at column {}", self.pos + 1)),
                    };
                    self.bump();
                    out.push(c);
                }
                Some('\n' | '\r') | None => {
                    return Err(format!("unterminated literal starting at column {}", start + 1))
                }
                Some(c) => out.push(c),
            }
        }
        out.push('"');
        if self.rest().starts_with("^^") {
            self.pos += 2;
            if self.peek() != Some('<') {
                return Err(format!("expected datatype IRI at column {}", self.pos + 1));
            }
            let dt = self.iri()?;
            out.push_str("^^");
            out.push_str(&dt);
        } else if self.peek() == Some('@') {
            self.bump();
            let tag_start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '-' {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            let tag = &self.s[tag_start..self.pos];
            let mut parts = tag.split('-');
            let first_ok = parts.next().is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
            if !first_ok || parts.any(|p| p.is_empty()) {
                return Err(format!("malformed language tag at column {}", tag_start + 1));
            }
            out.push('@');
            out.push_str(tag);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one(line: &str) -> RawTriple {
        parse_line(line).unwrap().unwrap()
    }

    #[test]
    fn minimal_statement() {
        assert_eq!(one("<a> <p> <b> ."), RawTriple::new("a", "p", "b"));
    }

    #[test]
    fn language_literal() {
        assert_eq!(one("<a> <p> \"x\"@en ."), RawTriple::new("a", "p", "\"x\"@en"));
        assert_eq!(one("<a> <p> \"x\"@en-GB ."), RawTriple::new("a", "p", "\"x\"@en-GB"));
    }

    #[test]
    fn typed_literal_and_blank_nodes() {
        let t = one("_:b1 <http://ex/p> \"42\"^^<http://www.w3.org/2001/XMLSchema#integer> .");
        assert_eq!(t.subject, "_:b1");
        assert_eq!(t.object, "\"42\"^^http://www.w3.org/2001/XMLSchema#integer");
        assert_eq!(one("_:x.y <p> _:z.").object, "_:z");
        assert_eq!(one("_:x.y <p> _:z.").subject, "_:x.y");
    }

    #[test]
    fn comments_and_blank_lines() {
        assert_eq!(parse_line("# comment"), Ok(None));
        assert_eq!(parse_line("   \t "), Ok(None));
        assert_eq!(parse_line("\r\n"), Ok(None));
        assert_eq!(one("<a> <p> <b> . # trailing").object, "b");
        assert_eq!(one("<a><p><b>.").predicate, "p");
    }

    #[test]
    fn escapes_are_decoded() {
        let t = one(r#"<a> <p> "tab\there \"q\" é\U0001F600 back\\slash" ."#);
        assert_eq!(t.object, "\"tab\there \"q\" é😀 back\\slash\"");
        assert_eq!(one(r"<http://ex/é> <p> <b> .").subject, "http://ex/é");
    }

    #[test]
    fn malformed_lines() {
        for bad in [
            "<a> <p> <b>",
            "<a> <p> .",
            "\"lit\" <p> <b> .",
            "<a> _:p <b> .",
            "<a> <p> \"open .",
            "<a b> <p> <c> .",
            "<a> <p> <b> . extra",
            "<a> <p> \"x\"@ .",
            "<a> <p> \"x\\q\" .",
            "<a> <p> <b\\u0020c> .",
            "<> <p> <b> .",
        ] {
            assert!(parse_line(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn skip_and_report() {
        let text = "<a> <p> <b> .\nbroken\n# c\n<b> <p> <a> .\n<a> <p> <b> .\n";
        let (triples, errors) = parse_str(text);
        // duplicates survive parsing
        assert_eq!(triples.len(), 3);
        assert_eq!(errors.len(), 1);
        assert!(matches!(errors[0], Error::Parse { line: 2, .. }));
    }

    #[test]
    fn gzip_input() {
        use flate2::{write::GzEncoder, Compression};
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("in.nt.gz");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), Compression::default());
        enc.write_all(b"<a> <p> <b> .\n<b> <p> \"c\" .\n").unwrap();
        enc.finish().unwrap();
        let triples: Vec<_> = open(&path, true).unwrap().collect::<Result<_>>().unwrap();
        assert_eq!(triples.len(), 2);
        assert_eq!(triples[1].object, "\"c\"");
    }

    #[test]
    fn pattern_lines() {
        use PatternTerm::*;
        let got = parse_pattern_line("? <http://p> \"a b\"@en .").unwrap().unwrap();
        assert_eq!(got, [Any, Term("http://p".into()), Term("\"a b\"@en".into())]);
        let got = parse_pattern_line("  #3 ? #12").unwrap().unwrap();
        assert_eq!(got, [Id(3), Any, Id(12)]);
        assert_eq!(parse_pattern_line("# comment").unwrap(), None);
        assert_eq!(parse_pattern_line("").unwrap(), None);
        assert!(parse_pattern_line("? ?").is_err());
        assert!(parse_pattern_line("#0 ? ?").is_err());
        assert!(parse_pattern_line("? ? ? ?").is_err());
    }

    #[test]
    fn single_terms() {
        assert_eq!(parse_term("<x>").unwrap(), "x");
        assert_eq!(parse_term(" \"a b\"@de ").unwrap(), "\"a b\"@de");
        assert!(parse_term("<x> <y>").is_err());
        assert!(parse_term("x").is_err());
    }

    fn term_strategy() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-z][a-z0-9/:#._-]{0,12}".prop_map(|s| s),
            "_:[a-zA-Z][a-zA-Z0-9]{0,6}",
            (any::<String>(), prop::option::of("[a-z]{2}(-[A-Z]{2})?")).prop_map(|(lex, tag)| {
                let lex: String = lex.chars().filter(|c| *c != '\0').collect();
                match tag {
                    Some(t) => format!("\"{lex}\"@{t}"),
                    None => format!("\"{lex}\""),
                }
            }),
            (any::<String>(), "[a-z]{1,8}").prop_map(|(lex, dt)| format!("\"{lex}\"^^http://dt/{dt}")),
        ]
    }

    proptest! {
        #[test]
        fn format_then_parse_is_identity(
            s in "[a-z][a-z0-9]{0,8}",
            p in "[a-z][a-z0-9/#]{0,8}",
            o in term_strategy(),
        ) {
            let t = RawTriple::new(s, p, o);
            let line = format_triple(&t);
            prop_assert_eq!(parse_line(&line).unwrap(), Some(t));
        }
    }
}
