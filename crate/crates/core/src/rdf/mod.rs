//! RDF data model, syntaxes and the indexed in-memory triple store.

mod ntriples;
mod store;
mod term;
pub mod turtle;

use thiserror::Error;

pub use ntriples::{parse_line, parse_ntriples, write_term, write_triple};
pub use store::TripleStore;
pub use term::{format_decimal, BlankNode, Datatype, Iri, Literal, Term, TermError, Triple};

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub mod vocab {
    pub mod rdf {
        pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
        pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
        pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
        pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
        pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    }

    pub mod rdfs {
        pub const NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
        pub const SUB_CLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
        pub const DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
        pub const RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
        pub const COMMENT: &str = "http://www.w3.org/2000/01/rdf-schema#comment";
        pub const CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
    }

    pub mod owl {
        pub const NS: &str = "http://www.w3.org/2002/07/owl#";
        pub const CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
        pub const OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
        pub const DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";
        pub const THING: &str = "http://www.w3.org/2002/07/owl#Thing";
    }

    pub mod xsd {
        pub const NS: &str = "http://www.w3.org/2001/XMLSchema#";
        pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
        pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
        pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
        pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    }

    /// The causal graph ontology.
    pub mod cg {
        pub const NS: &str = "http://causalgraph.org/causalgraph#";
        pub const CAUSAL_NODE: &str = "http://causalgraph.org/causalgraph#CausalNode";
        pub const CAUSAL_EDGE: &str = "http://causalgraph.org/causalgraph#CausalEdge";
        pub const CREATOR: &str = "http://causalgraph.org/causalgraph#Creator";
        pub const STATE: &str = "http://causalgraph.org/causalgraph#State";
        pub const EVENT: &str = "http://causalgraph.org/causalgraph#Event";
        pub const VARIABLE: &str = "http://causalgraph.org/causalgraph#Variable";
        pub const HAS_CAUSE: &str = "http://causalgraph.org/causalgraph#hasCause";
        pub const HAS_EFFECT: &str = "http://causalgraph.org/causalgraph#hasEffect";
        pub const IS_CAUSING: &str = "http://causalgraph.org/causalgraph#isCausing";
        pub const IS_AFFECTED_BY: &str = "http://causalgraph.org/causalgraph#isAffectedBy";
        pub const HAS_CREATOR: &str = "http://causalgraph.org/causalgraph#hasCreator";
        pub const CREATED: &str = "http://causalgraph.org/causalgraph#created";
        pub const HAS_CONFIDENCE: &str = "http://causalgraph.org/causalgraph#hasConfidence";
        pub const HAS_TIME_LAG: &str = "http://causalgraph.org/causalgraph#hasTimeLag";
    }

    /// Namespace of individuals created in a store.
    pub mod cgs {
        pub const NS: &str = "http://causalgraph.org/store#";
    }
}

/// Builds an [`Iri`] from one of the vocabulary constants.
pub(crate) fn known(iri: &str) -> Iri {
    Iri::new(iri).expect("vocabulary IRIs are valid")
}
