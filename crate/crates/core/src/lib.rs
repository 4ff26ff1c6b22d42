//! Causal graphs stored inside a knowledge graph.
//!
//! Every causal edge is an individual of its own (`CausalEdge`) linked to
//! its cause and effect, so confidence, time lag, creator and comments can
//! be attached to it. Graphs persist to a single append-only file, can be
//! queried with a SPARQL subset, exchanged as property-graph or link-tuple
//! documents, GML and GraphML, and rendered as DOT or HTML.

pub mod error;
pub mod graph;
pub mod interchange;
pub mod logging;
pub mod ontology;
pub mod persist;
pub mod query;
pub mod rdf;
pub mod viz;

pub use error::{Error, Result};
pub use graph::{CausalEdgeRecord, EdgeOptions, ExternalGraph, Graph, GraphConfig, NodeOptions, ValidationReport};
pub use interchange::{load_link_tuple, load_property_graph, LinkTupleDoc, PropertyGraphDoc};
pub use ontology::{ImportReport, Individual, OntologyModel, PropValue};
pub use viz::RenderOptions;
