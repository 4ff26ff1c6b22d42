//! Parser for the Turtle subset used by ontology files.
//!
//! Supported: `@prefix`/`PREFIX`, `@base`/`BASE`, IRIs and prefixed names,
//! the `a` keyword, predicate-object lists (`;` and `,`), blank node labels,
//! `[ ... ]` property lists, `( ... )` collections, quoted strings (short and
//! long forms), numbers and booleans. N-Triples documents are valid input.
//!
//! Blank nodes are relabelled `<blank_prefix><n>` in order of first
//! appearance so that parsing the same text twice yields the same triples.

use std::collections::HashMap;

use super::vocab::{rdf, xsd};
use super::{BlankNode, Datatype, Iri, Literal, ParseError, Term, TermError, Triple};

#[derive(Debug, Clone)]
pub struct TurtleOptions {
    pub blank_prefix: String,
    /// Skip triples whose literal has an unsupported datatype or a language
    /// tag instead of failing.
    pub lenient_literals: bool,
}

impl Default for TurtleOptions {
    fn default() -> Self {
        TurtleOptions {
            blank_prefix: "b".into(),
            lenient_literals: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TurtleDoc {
    pub triples: Vec<Triple>,
    /// Triples dropped because of unsupported literals (lenient mode only).
    pub skipped: usize,
}

pub fn parse_turtle(text: &str, options: &TurtleOptions) -> Result<TurtleDoc, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        prefixes: HashMap::new(),
        base: None,
        blanks: HashMap::new(),
        next_blank: 0,
        options,
        out: TurtleDoc::default(),
    };
    p.document()?;
    Ok(p.out)
}

/// An object position value; `None` marks a skipped literal.
type Object = Option<Term>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    prefixes: HashMap<String, String>,
    base: Option<String>,
    blanks: HashMap<String, BlankNode>,
    next_blank: usize,
    options: &'a TurtleOptions,
    out: TurtleDoc,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col, msg)
    }

    fn term_error(&self, e: TermError) -> ParseError {
        self.error(e.to_string())
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn starts_with_keyword(&self, kw: &str, case_insensitive: bool) -> bool {
        let n = kw.chars().count();
        let word: String = self.chars[self.pos..].iter().take(n).collect();
        let matches = if case_insensitive {
            word.eq_ignore_ascii_case(kw)
        } else {
            word == kw
        };
        matches && !self.peek_at(n).is_some_and(is_name_char)
    }

    fn advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn fresh_blank(&mut self) -> BlankNode {
        self.next_blank += 1;
        BlankNode::new(format!("{}{}", self.options.blank_prefix, self.next_blank))
            .expect("generated blank labels are valid")
    }

    fn emit(&mut self, s: &Term, p: &Iri, o: Object) {
        match o {
            Some(o) => self.out.triples.push(Triple {
                subject: s.clone(),
                predicate: p.clone(),
                object: o,
            }),
            None => self.out.skipped += 1,
        }
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with_keyword("@prefix", false) {
                self.advance(7);
                self.prefix_decl()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("PREFIX", true) {
                self.advance(6);
                self.prefix_decl()?;
            } else if self.starts_with_keyword("@base", false) {
                self.advance(5);
                self.base_decl()?;
                self.expect('.')?;
            } else if self.starts_with_keyword("BASE", true) {
                self.advance(4);
                self.base_decl()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) {
                return Err(self.error("invalid prefix name"));
            }
            name.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.prefixes.insert(name, iri.as_str().to_string());
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri.as_str().to_string());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = match self.node()? {
            Some(Term::Literal(_)) | None => return Err(self.error("literal in subject position")),
            Some(t) => t,
        };
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.emit(subject, &predicate, object);
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.starts_with_keyword("a", false) {
            self.bump();
            return Ok(Iri::new(rdf::TYPE).expect("valid"));
        }
        match self.node()? {
            Some(Term::Iri(iri)) => Ok(iri),
            _ => Err(self.error("predicate must be an IRI")),
        }
    }

    fn object(&mut self) -> Result<Object, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => self.blank_property_list().map(Some),
            _ => self.node(),
        }
    }

    fn blank_property_list(&mut self) -> Result<Term, ParseError> {
        self.expect('[')?;
        let node = Term::Blank(self.fresh_blank());
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, ParseError> {
        self.expect('(')?;
        let first = Iri::new(rdf::FIRST).expect("valid");
        let rest = Iri::new(rdf::REST).expect("valid");
        let nil = Term::iri(rdf::NIL).expect("valid");
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(')') {
                self.bump();
                break;
            }
            if self.peek().is_none() {
                return Err(self.error("unterminated collection"));
            }
            items.push(self.object()?);
        }
        if items.is_empty() {
            return Ok(nil);
        }
        let cells: Vec<Term> = items.iter().map(|_| Term::Blank(self.fresh_blank())).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.emit(&cells[i], &first, item);
            let next = cells.get(i + 1).cloned().unwrap_or_else(|| nil.clone());
            self.emit(&cells[i], &rest, Some(next));
        }
        Ok(cells[0].clone())
    }

    /// IRI, prefixed name, blank node, collection or literal.
    fn node(&mut self) -> Result<Object, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => self.iri_ref().map(|i| Some(Term::Iri(i))),
            Some('(') => self.collection().map(Some),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label().map(Some),
            Some('"' | '\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.number(),
            Some(_) if self.starts_with_keyword("true", false) => {
                self.advance(4);
                Ok(Some(Term::Literal(
                    Literal::new("true", Datatype::Boolean).expect("valid"),
                )))
            }
            Some(_) if self.starts_with_keyword("false", false) => {
                self.advance(5);
                Ok(Some(Term::Literal(
                    Literal::new("false", Datatype::Boolean).expect("valid"),
                )))
            }
            Some(c) if is_name_char(c) || c == ':' => self.prefixed_name().map(|i| Some(Term::Iri(i))),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn blank_label(&mut self) -> Result<Term, ParseError> {
        self.advance(2);
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        if let Some(b) = self.blanks.get(&label) {
            return Ok(Term::Blank(b.clone()));
        }
        let b = self.fresh_blank();
        self.blanks.insert(label, b.clone());
        Ok(Term::Blank(b))
    }

    fn resolve(&self, iri: String) -> String {
        let has_scheme = iri
            .split_once(':')
            .is_some_and(|(s, _)| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "+-.".contains(c)));
        match &self.base {
            Some(base) if !has_scheme => {
                if iri.starts_with('#') {
                    let stem = base.split('#').next().unwrap_or(base);
                    format!("{stem}{iri}")
                } else if iri.is_empty() {
                    base.clone()
                } else {
                    let dir = base.rfind('/').map_or(base.as_str(), |i| &base[..=i]);
                    format!("{dir}{iri}")
                }
            }
            _ => iri,
        }
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
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
        let resolved = self.resolve(text);
        Iri::new(resolved).map_err(|e| self.term_error(e))
    }

    fn prefixed_name(&mut self) -> Result<Iri, ParseError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) && c != '.' {
                return Err(self.error(format!("unexpected character '{c}'")));
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(self.error(format!("unknown keyword '{prefix}'")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return Err(self.error("invalid local name escape")),
                }
            } else if c == '%' {
                let h1 = self.peek_at(1).filter(char::is_ascii_hexdigit);
                let h2 = self.peek_at(2).filter(char::is_ascii_hexdigit);
                if h1.is_none() || h2.is_none() {
                    return Err(self.error("invalid percent escape"));
                }
                for _ in 0..3 {
                    local.push(self.bump().expect("checked"));
                }
            } else if is_name_char(c)
                || c == ':'
                // a dot belongs to the name only when more name follows
                || (c == '.' && self.peek_at(1).is_some_and(|n| is_name_char(n) || n == ':' || n == '%'))
            {
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let ns = self
            .prefixes
            .get(&prefix)
            .ok_or_else(|| self.error(format!("unknown prefix '{prefix}:'")))?;
        Iri::new(format!("{ns}{local}")).map_err(|e| self.term_error(e))
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

    fn string_body(&mut self) -> Result<String, ParseError> {
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.advance(2);
        }
        let mut s = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.error("unterminated string"));
            };
            if c == quote {
                if !long {
                    self.bump();
                    return Ok(s);
                }
                if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                    self.advance(3);
                    return Ok(s);
                }
            }
            if !long && matches!(c, '\n' | '\r') {
                return Err(self.error("newline in short string"));
            }
            self.bump();
            if c == '\\' {
                let e = match self.peek() {
                    Some('t') => '\t',
                    Some('b') => '\u{8}',
                    Some('n') => '\n',
                    Some('r') => '\r',
                    Some('f') => '\u{c}',
                    Some('"') => '"',
                    Some('\'') => '\'',
                    Some('\\') => '\\',
                    Some('u' | 'U') => {
                        s.push(self.unicode_escape()?);
                        continue;
                    }
                    _ => return Err(self.error("invalid escape")),
                };
                self.bump();
                s.push(e);
            } else {
                s.push(c);
            }
        }
    }

    fn literal(&mut self) -> Result<Object, ParseError> {
        let lexical = self.string_body()?;
        let result = match self.peek() {
            Some('@') => {
                self.bump();
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                    self.bump();
                }
                Err("language-tagged literals are not supported".to_string())
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.advance(2);
                let dt = if self.peek() == Some('<') {
                    self.iri_ref()?
                } else {
                    self.prefixed_name()?
                };
                Literal::with_datatype_iri(lexical, dt.as_str()).map_err(|e| e.to_string())
            }
            _ => Ok(Literal::string(lexical)),
        };
        self.finish_literal(result)
    }

    fn finish_literal(&mut self, result: Result<Literal, String>) -> Result<Object, ParseError> {
        match result {
            Ok(lit) => Ok(Some(Term::Literal(lit))),
            Err(_) if self.options.lenient_literals => Ok(None),
            Err(msg) => Err(self.error(msg)),
        }
    }

    fn number(&mut self) -> Result<Object, ParseError> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        let digits = |p: &mut Self, text: &mut String| {
            while let Some(c) = p.peek().filter(char::is_ascii_digit) {
                text.push(c);
                p.bump();
            }
        };
        digits(self, &mut text);
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.bump();
            digits(self, &mut text);
            datatype = xsd::DECIMAL;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            text.push('e');
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                text.push(c);
                self.bump();
            }
            digits(self, &mut text);
            let result = Err(format!("double literal {text} is not supported"));
            return self.finish_literal(result);
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.error("malformed number"));
        }
        let result = Literal::with_datatype_iri(text, datatype).map_err(|e| e.to_string());
        self.finish_literal(result)
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\u{b7}')
}
