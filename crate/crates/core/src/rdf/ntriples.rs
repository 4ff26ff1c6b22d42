//! Canonical N-Triples writer and a line parser.
//!
//! The writer output is the canonical text of a triple used for ordering,
//! persistence and dumps, so it must stay bit-stable.

use std::fmt::Write as _;

use super::term::{BlankNode, Datatype, Iri, Literal, Term, Triple};
use super::ParseError;

pub fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => {
            out.push('<');
            out.push_str(iri.as_str());
            out.push('>');
        }
        Term::Blank(b) => {
            out.push_str("_:");
            out.push_str(b.label());
        }
        Term::Literal(lit) => {
            out.push('"');
            escape_string(out, lit.lexical());
            out.push('"');
            if lit.datatype() != Datatype::String {
                out.push_str("^^<");
                out.push_str(lit.datatype().iri());
                out.push('>');
            }
        }
    }
}

fn escape_string(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

/// Writes `s p o .` without a line terminator.
pub fn write_triple(out: &mut String, t: &Triple) {
    write_term(out, &t.subject);
    out.push(' ');
    out.push('<');
    out.push_str(t.predicate.as_str());
    out.push('>');
    out.push(' ');
    write_term(out, &t.object);
    out.push_str(" .");
}

/// Parses a whole N-Triples document.
pub fn parse_ntriples(text: &str) -> Result<Vec<Triple>, ParseError> {
    let mut triples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(t) = parse_line(line, i + 1)? {
            triples.push(t);
        }
    }
    Ok(triples)
}

/// Parses one N-Triples line. Blank lines and comments yield `None`.
pub fn parse_line(line: &str, line_no: usize) -> Result<Option<Triple>, ParseError> {
    let mut p = LineParser {
        chars: line.chars().collect(),
        pos: 0,
        line: line_no,
    };
    p.skip_ws();
    if p.at_end() || p.peek() == Some('#') {
        return Ok(None);
    }
    let subject = p.term()?;
    p.skip_ws();
    let pred_col = p.pos;
    let predicate = p.term()?;
    p.skip_ws();
    let object = p.term()?;
    p.skip_ws();
    p.expect('.')?;
    p.skip_ws();
    if !p.at_end() && p.peek() != Some('#') {
        return Err(p.error("trailing characters after '.'"));
    }
    Triple::new(subject, predicate, object)
        .map(Some)
        .map_err(|e| ParseError::new(line_no, pred_col + 1, e.to_string()))
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') => {
                let start = self.pos;
                self.pos += 1;
                self.expect(':')?;
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                        label.push(c);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                // a trailing '.' belongs to the statement terminator
                while label.ends_with('.') {
                    label.pop();
                    self.pos -= 1;
                }
                BlankNode::new(label)
                    .map(Term::Blank)
                    .map_err(|e| ParseError::new(self.line, start + 1, e.to_string()))
            }
            Some('"') => self.literal(),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of line")),
        }
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        let start = self.pos;
        self.expect('<')?;
        let mut text = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => text.push(self.unicode_escape()?),
                Some(c) => text.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
        Iri::new(text).map_err(|e| ParseError::new(self.line, start + 1, e.to_string()))
    }

    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("invalid escape")),
        };
        let mut code = 0u32;
        for _ in 0..width {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error("invalid hex digit in escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.error("escape is not a scalar value"))
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        self.expect('"')?;
        let mut lexical = String::new();
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
                            lexical.push(self.unicode_escape()?);
                            continue;
                        }
                        _ => return Err(self.error("invalid escape")),
                    };
                    self.pos += 1;
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
                None => return Err(self.error("unterminated literal")),
            }
        }
        let lit = if self.peek() == Some('^') {
            self.pos += 1;
            self.expect('^')?;
            let dt = self.iri()?;
            Literal::with_datatype_iri(lexical, dt.as_str())
        } else if self.peek() == Some('@') {
            return Err(self.error("language-tagged literals are not supported"));
        } else {
            Ok(Literal::string(lexical))
        };
        lit.map(Term::Literal)
            .map_err(|e| ParseError::new(self.line, start + 1, e.to_string()))
    }
}
