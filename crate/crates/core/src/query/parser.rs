use std::collections::HashMap;

use super::{CmpOp, Comparison, Constant, PatternTerm, Query, QueryError, TriplePattern};
use crate::rdf::vocab::{cg, cgs, owl, rdf, rdfs, xsd};
use crate::rdf::{BlankNode, Datatype, Iri, Literal, Term};

/// Prefixes available without a `PREFIX` declaration.
pub const BUILTIN_PREFIXES: [(&str, &str); 6] = [
    ("cg", cg::NS),
    ("cgs", cgs::NS),
    ("rdf", rdf::NS),
    ("rdfs", rdfs::NS),
    ("owl", owl::NS),
    ("xsd", xsd::NS),
];

pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        prefixes: BUILTIN_PREFIXES
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    };
    let q = p.query()?;
    q.check_variables()?;
    Ok(q)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    prefixes: HashMap<String, String>,
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
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

    fn ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), QueryError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'{}", self.found())))
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(c) => format!(", found '{c}'"),
            None => ", found end of input".into(),
        }
    }

    /// Case-insensitive keyword followed by a non-name character.
    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let n = kw.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n]
                .iter()
                .zip(kw.chars())
                .all(|(a, b)| a.eq_ignore_ascii_case(&b))
            && !self
                .peek_at(n)
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':');
        if matches {
            for _ in 0..n {
                self.bump();
            }
        }
        matches
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        while self.keyword("PREFIX") {
            self.ws();
            let (line, column) = (self.line, self.col);
            let prefix = self.name_chars();
            if !self.eat(':') {
                return Err(QueryError::Syntax {
                    line,
                    column,
                    message: "expected prefix name followed by ':'".into(),
                });
            }
            self.ws();
            let iri = self.iri_ref()?;
            self.prefixes.insert(prefix, iri.as_str().to_string());
        }
        if !self.keyword("SELECT") {
            return Err(self.err(format!("expected SELECT{}", self.found())));
        }
        // results are always deduplicated, so DISTINCT is accepted and implied
        self.keyword("DISTINCT");
        let mut select = Vec::new();
        let mut star = false;
        loop {
            self.ws();
            match self.peek() {
                Some('?' | '$') => select.push(self.variable()?),
                Some('*') if select.is_empty() && !star => {
                    self.bump();
                    star = true;
                }
                _ => break,
            }
        }
        if select.is_empty() && !star {
            return Err(self.err(format!("expected a variable or '*' after SELECT{}", self.found())));
        }
        // WHERE is optional in SPARQL
        self.keyword("WHERE");
        self.expect('{')?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            self.ws();
            if self.peek() == Some('}') {
                if patterns.is_empty() {
                    return Err(self.err("empty group pattern"));
                }
                self.bump();
                break;
            }
            if self.keyword("FILTER") {
                self.expect('(')?;
                filters.push(self.comparison()?);
                self.expect(')')?;
                self.eat('.');
                continue;
            }
            if self.peek().is_none() {
                return Err(self.err("unterminated group pattern, expected '}'"));
            }
            self.triples_block(&mut patterns)?;
            if !self.eat('.') {
                self.ws();
                if !matches!(self.peek(), Some('}')) && !self.at_keyword("FILTER") {
                    return Err(self.err(format!("expected '.', FILTER or '}}'{}", self.found())));
                }
            }
        }
        let mut limit = None;
        if self.keyword("LIMIT") {
            self.ws();
            let mut digits = String::new();
            while let Some(d) = self.peek().filter(char::is_ascii_digit) {
                digits.push(d);
                self.bump();
            }
            let n: usize = digits
                .parse()
                .map_err(|_| self.err("LIMIT expects a positive integer"))?;
            if n == 0 {
                return Err(self.err("LIMIT expects a positive integer"));
            }
            limit = Some(n);
        }
        self.ws();
        if self.peek().is_some() {
            return Err(self.err(format!("unexpected trailing input{}", self.found())));
        }
        if star {
            for pat in &patterns {
                for v in pat.variables() {
                    if !select.iter().any(|s| s == v) {
                        select.push(v.to_string());
                    }
                }
            }
        }
        Ok(Query {
            select,
            patterns,
            filters,
            limit,
        })
    }

    fn at_keyword(&mut self, kw: &str) -> bool {
        let saved = (self.pos, self.line, self.col);
        let hit = self.keyword(kw);
        (self.pos, self.line, self.col) = saved;
        hit
    }

    /// `s p o (',' o)* (';' p o ...)*`
    fn triples_block(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.pattern_term(Position::Subject)?;
        loop {
            let predicate = self.pattern_term(Position::Predicate)?;
            loop {
                let object = self.pattern_term(Position::Object)?;
                out.push(TriplePattern {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                if !self.eat(',') {
                    break;
                }
            }
            if !self.eat(';') {
                return Ok(());
            }
            self.ws();
            if matches!(self.peek(), Some('.' | '}')) {
                return Ok(());
            }
        }
    }

    fn pattern_term(&mut self, at: Position) -> Result<PatternTerm, QueryError> {
        self.ws();
        let (line, column) = (self.line, self.col);
        let term = match self.peek() {
            Some('?' | '$') => return Ok(PatternTerm::Var(self.variable()?)),
            Some('<') => Term::Iri(self.iri_ref()?),
            Some('"' | '\'') => Term::Literal(self.literal()?),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.name_chars();
                Term::Blank(BlankNode::new(label).map_err(|e| self.err(e.to_string()))?)
            }
            Some(c) if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => Term::Literal(self.number()?),
            Some(_) => {
                if at == Position::Predicate && self.keyword("a") {
                    Term::Iri(crate::rdf::known(rdf::TYPE))
                } else if self.keyword("true") {
                    Term::Literal(Literal::new("true", Datatype::Boolean).expect("boolean"))
                } else if self.keyword("false") {
                    Term::Literal(Literal::new("false", Datatype::Boolean).expect("boolean"))
                } else {
                    Term::Iri(self.prefixed_name()?)
                }
            }
            None => return Err(self.err("unexpected end of input, expected a term")),
        };
        let ok = match at {
            Position::Subject => !matches!(term, Term::Literal(_)),
            Position::Predicate => matches!(term, Term::Iri(_)),
            Position::Object => true,
        };
        if !ok {
            return Err(QueryError::Syntax {
                line,
                column,
                message: format!("{} not allowed as {}", term.canonical(), at.label()),
            });
        }
        Ok(PatternTerm::Term(term))
    }

    fn variable(&mut self) -> Result<String, QueryError> {
        self.ws();
        self.bump();
        let name = self.name_chars();
        if name.is_empty() {
            return Err(self.err("empty variable name"));
        }
        Ok(name)
    }

    fn name_chars(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || (c == '-' && !s.is_empty()) {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn iri_ref(&mut self) -> Result<Iri, QueryError> {
        self.expect('<')?;
        let (line, column) = (self.line, self.col);
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() => return Err(self.err("whitespace inside IRI")),
                Some(c) => s.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
        Iri::new(s).map_err(|e| QueryError::Syntax {
            line,
            column,
            message: e.to_string(),
        })
    }

    fn prefixed_name(&mut self) -> Result<Iri, QueryError> {
        let (line, column) = (self.line, self.col);
        let prefix = self.name_chars();
        if self.peek() != Some(':') {
            return Err(QueryError::Syntax {
                line,
                column,
                message: format!("expected a term{}", self.found()),
            });
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let escape = c == '%'
                && self.peek_at(1).is_some_and(|h| h.is_ascii_hexdigit())
                && self.peek_at(2).is_some_and(|h| h.is_ascii_hexdigit());
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '~') || escape {
                local.push(c);
                self.bump();
            } else if c == '.'
                && self
                    .peek_at(1)
                    .is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-' | '%'))
            {
                // a dot is part of the name only when more name follows
                local.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let ns = self.prefixes.get(&prefix).ok_or_else(|| QueryError::UnknownPrefix {
            prefix: prefix.clone(),
            line,
            column,
        })?;
        Iri::new(format!("{ns}{local}")).map_err(|e| QueryError::Syntax {
            line,
            column,
            message: e.to_string(),
        })
    }

    fn string_body(&mut self) -> Result<String, QueryError> {
        let quote = self.bump().expect("caller saw a quote");
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err("unterminated string")),
                Some(c) if c == quote => return Ok(s),
                Some('\\') => {
                    let esc = self.bump().ok_or_else(|| self.err("unterminated escape"))?;
                    s.push(match esc {
                        'n' => '\n',
                        't' => '\t',
                        'r' => '\r',
                        '"' | '\'' | '\\' => esc,
                        other => return Err(self.err(format!("unknown escape \\{other}"))),
                    });
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn literal(&mut self) -> Result<Literal, QueryError> {
        let body = self.string_body()?;
        match self.peek() {
            Some('@') => Err(self.err("language-tagged literals are not supported")),
            Some('^') if self.peek_at(1) == Some('^') => {
                self.bump();
                self.bump();
                let (line, column) = (self.line, self.col);
                let dt = if self.peek() == Some('<') {
                    self.iri_ref()?
                } else {
                    self.prefixed_name()?
                };
                Literal::with_datatype_iri(body, dt.as_str()).map_err(|e| QueryError::Syntax {
                    line,
                    column,
                    message: e.to_string(),
                })
            }
            _ => Ok(Literal::string(body)),
        }
    }

    fn number(&mut self) -> Result<Literal, QueryError> {
        let (line, column) = (self.line, self.col);
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        while let Some(c) = self.peek() {
            let dot_in_number = c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) && !s.contains('.');
            if c.is_ascii_digit() || dot_in_number {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let dt = if s.contains('.') {
            Datatype::Decimal
        } else {
            Datatype::Integer
        };
        Literal::new(s.clone(), dt).map_err(|_| QueryError::Syntax {
            line,
            column,
            message: format!("invalid number {s:?}"),
        })
    }

    fn comparison(&mut self) -> Result<Comparison, QueryError> {
        self.ws();
        if matches!(self.peek(), Some('?' | '$')) {
            let var = self.variable()?;
            let op = self.operator()?;
            let value = self.constant()?;
            Ok(Comparison { var, op, value })
        } else {
            let value = self.constant()?;
            let op = self.operator()?.flipped();
            self.ws();
            if !matches!(self.peek(), Some('?' | '$')) {
                return Err(self.err(format!("expected a variable{}", self.found())));
            }
            let var = self.variable()?;
            Ok(Comparison { var, op, value })
        }
    }

    fn operator(&mut self) -> Result<CmpOp, QueryError> {
        self.ws();
        let two: String = [self.peek(), self.peek_at(1)].iter().flatten().collect();
        let (op, len) = match two.as_str() {
            "<=" => (CmpOp::Le, 2),
            ">=" => (CmpOp::Ge, 2),
            "!=" => (CmpOp::Ne, 2),
            _ => match self.peek() {
                Some('<') => (CmpOp::Lt, 1),
                Some('>') => (CmpOp::Gt, 1),
                Some('=') => (CmpOp::Eq, 1),
                _ => return Err(self.err(format!("expected a comparison operator{}", self.found()))),
            },
        };
        for _ in 0..len {
            self.bump();
        }
        Ok(op)
    }

    fn constant(&mut self) -> Result<Constant, QueryError> {
        self.ws();
        match self.peek() {
            Some('"' | '\'') => {
                let lit = self.literal()?;
                Ok(match lit.as_f64() {
                    Some(v) => Constant::Number(v),
                    None => Constant::Text(lit.lexical().to_string()),
                })
            }
            Some(c) if c.is_ascii_digit() || matches!(c, '-' | '+' | '.') => {
                let lit = self.number()?;
                Ok(Constant::Number(lit.as_f64().expect("numeric literal")))
            }
            _ => Err(self.err(format!("expected a number or string constant{}", self.found()))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Subject,
    Predicate,
    Object,
}

impl Position {
    fn label(self) -> &'static str {
        match self {
            Position::Subject => "subject",
            Position::Predicate => "predicate",
            Position::Object => "object",
        }
    }
}
