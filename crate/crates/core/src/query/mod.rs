//! A SPARQL subset: `SELECT` over a conjunctive basic graph pattern with
//! numeric/text `FILTER` comparisons and `LIMIT`.
//!
//! Results are always deduplicated and sorted by the canonical text of the
//! projected terms, so evaluation order never shows in the output.

mod eval;
mod parser;

use std::cmp::Ordering;

use thiserror::Error;

pub use eval::{evaluate, evaluate_with, EvalPlan, QueryResult};
pub use parser::{parse_query, BUILTIN_PREFIXES};

use crate::error::Result;
use crate::graph::Graph;
use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown prefix {prefix:?} at line {line}, column {column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
    #[error("variable ?{0} does not occur in any triple pattern")]
    UnboundVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    /// The operator with its operands swapped (`1 < ?x` is `?x > 1`).
    pub fn flipped(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Le,
            CmpOp::Gt => CmpOp::Lt,
            other => other,
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
            CmpOp::Ge => ord != Ordering::Less,
            CmpOp::Gt => ord == Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Number(f64),
    Text(String),
}

/// `?var op constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub var: String,
    pub op: CmpOp,
    pub value: Constant,
}

impl Comparison {
    /// Numbers compare with decimal/integer literals, text with string
    /// literals by code point; any other pairing is false.
    pub fn test(&self, term: &Term) -> bool {
        let Term::Literal(lit) = term else { return false };
        match &self.value {
            Constant::Number(x) => lit
                .as_f64()
                .and_then(|v| v.partial_cmp(x))
                .is_some_and(|ord| self.op.holds(ord)),
            Constant::Text(t) => {
                lit.datatype() == crate::rdf::Datatype::String && self.op.holds(lit.lexical().cmp(t.as_str()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub select: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Comparison>,
    pub limit: Option<usize>,
}

impl Query {
    fn check_variables(&self) -> Result<(), QueryError> {
        let bound = |v: &str| self.patterns.iter().any(|p| p.variables().any(|x| x == v));
        for v in self.select.iter().chain(self.filters.iter().map(|f| &f.var)) {
            if !bound(v) {
                return Err(QueryError::UnboundVariable(v.clone()));
            }
        }
        Ok(())
    }
}

impl Graph {
    /// Parses and evaluates a query against the graph's store.
    pub fn query(&self, text: &str) -> Result<QueryResult> {
        let q = parse_query(text)?;
        Ok(evaluate(self.store(), &q))
    }
}
