//! RDF terms and triples.
//!
//! A [`Term`] is an IRI, a typed literal or a blank node. Literal datatypes are
//! restricted to string, decimal, integer and boolean; anything else is
//! rejected when the term is built.

use std::fmt;

use thiserror::Error;

use super::ntriples;
use super::vocab::xsd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI {0:?} contains a forbidden character")]
    InvalidIri(String),
    #[error("blank node label {0:?} is invalid")]
    InvalidBlank(String),
    #[error("unsupported literal datatype <{0}>")]
    UnsupportedDatatype(String),
    #[error("{lexical:?} is not a valid {datatype} lexical form")]
    InvalidLexical { lexical: String, datatype: &'static str },
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
    #[error("the predicate of a triple must be an IRI")]
    NonIriPredicate,
}

/// An absolute IRI without whitespace or characters that N-Triples would
/// need to escape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, TermError> {
        let text = text.into();
        if text.is_empty() {
            return Err(TermError::EmptyIri);
        }
        let bad = |c: char| {
            c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        };
        if text.chars().any(bad) {
            return Err(TermError::InvalidIri(text));
        }
        Ok(Iri(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits the IRI into namespace and local name at the last `#`, or the
    /// last `/` when there is no fragment.
    pub fn split(&self) -> (&str, &str) {
        let s = self.0.as_str();
        match s.rfind('#').or_else(|| s.rfind('/')) {
            Some(i) => (&s[..=i], &s[i + 1..]),
            None => ("", s),
        }
    }

    pub fn local_name(&self) -> &str {
        self.split().1
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// The literal datatypes the store understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Decimal,
    Integer,
    Boolean,
}

impl Datatype {
    pub fn iri(self) -> &'static str {
        match self {
            Datatype::String => xsd::STRING,
            Datatype::Decimal => xsd::DECIMAL,
            Datatype::Integer => xsd::INTEGER,
            Datatype::Boolean => xsd::BOOLEAN,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        match iri {
            xsd::STRING => Some(Datatype::String),
            xsd::DECIMAL => Some(Datatype::Decimal),
            xsd::INTEGER => Some(Datatype::Integer),
            xsd::BOOLEAN => Some(Datatype::Boolean),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Decimal => "decimal",
            Datatype::Integer => "integer",
            Datatype::Boolean => "boolean",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Datatype::Decimal | Datatype::Integer)
    }

    fn accepts(self, lexical: &str) -> bool {
        match self {
            Datatype::String => true,
            Datatype::Boolean => matches!(lexical, "true" | "false" | "1" | "0"),
            Datatype::Integer => {
                let digits = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
                !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
            }
            Datatype::Decimal => {
                let body = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
                let (int, frac) = match body.split_once('.') {
                    Some((i, f)) => (i, Some(f)),
                    None => (body, None),
                };
                let digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
                digits(int) && frac.is_none_or(digits) && (!int.is_empty() || frac.is_some_and(|f| !f.is_empty()))
            }
        }
    }
}

/// A typed literal keeping its lexical form verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Result<Self, TermError> {
        let lexical = lexical.into();
        if !datatype.accepts(&lexical) {
            return Err(TermError::InvalidLexical {
                lexical,
                datatype: datatype.name(),
            });
        }
        Ok(Literal { lexical, datatype })
    }

    pub fn with_datatype_iri(lexical: impl Into<String>, datatype: &str) -> Result<Self, TermError> {
        let dt = Datatype::from_iri(datatype).ok_or_else(|| TermError::UnsupportedDatatype(datatype.to_string()))?;
        Literal::new(lexical, dt)
    }

    pub fn string(text: impl Into<String>) -> Self {
        Literal {
            lexical: text.into(),
            datatype: Datatype::String,
        }
    }

    /// Decimal literal for a finite value, written in shortest round-trip
    /// form with at least one fractional digit (`2.0`, `0.9`).
    pub fn decimal(value: f64) -> Self {
        assert!(value.is_finite(), "decimal literal must be finite");
        Literal {
            lexical: format_decimal(value),
            datatype: Datatype::Decimal,
        }
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Datatype::Integer,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    /// Numeric value of decimal and integer literals.
    pub fn as_f64(&self) -> Option<f64> {
        if self.datatype.is_numeric() {
            self.lexical.parse().ok()
        } else {
            None
        }
    }
}

pub fn format_decimal(value: f64) -> String {
    let s = format!("{value}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        let ok = !label.is_empty()
            && label
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !label.ends_with('.');
        if ok {
            Ok(BlankNode(label))
        } else {
            Err(TermError::InvalidBlank(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Blank(BlankNode),
}

impl Term {
    pub fn iri(text: impl Into<String>) -> Result<Self, TermError> {
        Iri::new(text).map(Term::Iri)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    /// Canonical N-Triples form of the term.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        ntriples::write_term(&mut out, self);
        out
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    /// Builds a triple from arbitrary terms, rejecting literal subjects and
    /// non-IRI predicates.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        if matches!(subject, Term::Literal(_)) {
            return Err(TermError::LiteralSubject);
        }
        let Term::Iri(predicate) = predicate else {
            return Err(TermError::NonIriPredicate);
        };
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    /// Infallible constructor for an IRI subject.
    pub fn from_iri(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: Term::Iri(subject),
            predicate,
            object: object.into(),
        }
    }

    /// The canonical N-Triples line without the trailing newline.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        ntriples::write_triple(&mut out, self);
        out
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
