//! The built-in causal graph ontology, imported third-party ontologies and
//! typed individuals.

mod individuals;
mod model;
mod names;

use std::path::PathBuf;

use thiserror::Error;

pub use individuals::PropValue;
pub use model::{
    display_entity, namespace_label, ImportReport, OntologyClass, OntologyModel, PropertyDef, PropertyKind,
    PropertyRange,
};
pub use names::{decode_name, encode_name, individual_iri, individual_name};

use crate::rdf::vocab::cgs;
use crate::rdf::{Iri, ParseError, Term, Triple, TripleStore};

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
    #[error("{name:?} is ambiguous: {}", candidates.join(", "))]
    Ambiguous { name: String, candidates: Vec<String> },
    #[error("imports may not redefine built-in entity {0}")]
    BuiltinRedefinition(String),
    #[error("imports may not describe store individual {0}")]
    StoreNamespace(String),
    #[error("subclass cycle: {}", .0.join(" -> "))]
    SubclassCycle(Vec<String>),
    #[error("{property} expects a subject of class {domain}, {individual} is not one")]
    DomainViolation {
        property: String,
        domain: String,
        individual: String,
    },
    #[error("{property} expects a value in {range}, got {value}")]
    RangeViolation {
        property: String,
        range: String,
        value: String,
    },
    #[error("{0} is maintained by the causal graph operations and cannot be set directly")]
    Reserved(String),
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("cannot read ontology {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A named entity of the store with its class memberships.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub name: String,
    pub iri: Iri,
    /// Class IRIs in the order they were asserted.
    pub types: Vec<Iri>,
}

impl Individual {
    /// Display names of the classes, e.g. `["pizza.Margherita", "causalgraph.CausalNode"]`.
    pub fn type_names(&self) -> Vec<String> {
        self.types.iter().map(display_entity).collect()
    }
}

/// Ontology triples kept in a store: everything not about a store individual.
pub fn ontology_triples(store: &TripleStore) -> Vec<Triple> {
    store
        .triples()
        .into_iter()
        .filter(|t| !matches!(&t.subject, Term::Iri(s) if s.as_str().starts_with(cgs::NS)))
        .collect()
}

/// Rebuilds the merged model from the ontology triples persisted in `store`.
pub fn model_from_store(store: &TripleStore) -> Result<OntologyModel, OntologyError> {
    let extras = ontology_triples(store);
    if extras.is_empty() {
        return Ok(OntologyModel::builtin());
    }
    Ok(OntologyModel::builtin().merged_with(&extras)?.0)
}
