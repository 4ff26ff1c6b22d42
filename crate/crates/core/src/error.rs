use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::ontology::OntologyError;
use crate::persist::PersistError;
use crate::query::QueryError;
use crate::rdf::{ParseError, TermError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("individual names must be non-empty")]
    EmptyName,
    #[error("unknown causal node {0:?} (pass force_create to create it)")]
    UnknownNode(String),
    #[error("unknown causal edge {0:?}")]
    UnknownEdge(String),
    #[error("unknown individual {0:?}")]
    UnknownIndividual(String),
    #[error("name {name:?} is already used by an individual of type {existing}")]
    NameCollision { name: String, existing: String },
    #[error("edge {0:?} cannot be used as a causal node")]
    EdgeAsNode(String),
    #[error("self-loop on {0:?}: cause and effect must differ")]
    SelfLoop(String),
    #[error("confidence {0} is outside the range (0,1]")]
    ConfidenceOutOfRange(f64),
    #[error("time lag {0} s must be a finite value >= 0")]
    InvalidTimeLag(f64),
    #[error("step size {0} s must be a finite value > 0")]
    InvalidStep(f64),
    #[error("edge {name:?} already connects {cause:?} -> {effect:?}")]
    EdgeRewire {
        name: String,
        cause: String,
        effect: String,
    },
    #[error("store {0} is read-only (opened in shared mode)")]
    ReadOnly(PathBuf),
    #[error("refusing to overwrite existing store {0}")]
    StoreExists(PathBuf),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
