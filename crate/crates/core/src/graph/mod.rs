//! The [`Graph`] handle: a triple store, its optional backing file and the
//! merged ontology model, plus the causal-level operations on top of them.
//!
//! A causal edge is a named individual typed `CausalEdge` carrying
//! `hasCause`/`hasEffect`; the nodes mirror it with `isCausing` and
//! `isAffectedBy`. Metadata (confidence, time lag, creator, comments) hangs
//! off the edge individual.

mod causal;
mod validate;

use std::path::{Path, PathBuf};

use indexmap::IndexMap;

pub(crate) use causal::{check_confidence, check_time_lag};
pub use causal::{CausalEdgeRecord, EdgeOptions, NodeOptions};
pub use validate::{simple_cycles, ValidationReport};

use crate::error::{Error, Result};
use crate::interchange::{LinkTupleDoc, PropertyGraphDoc};
use crate::ontology::{display_entity, individual_iri, individual_name, Individual, OntologyModel};
use crate::persist::{open_store, OpenMode, StoreFile};
use crate::rdf::vocab::{cg, cgs, rdf};
use crate::rdf::{known, Iri, Term, Triple, TripleStore};

/// A graph document to pre-fill a new graph with.
#[derive(Debug, Clone)]
pub enum ExternalGraph {
    PropertyGraph(PropertyGraphDoc),
    LinkTuple(LinkTupleDoc),
}

#[derive(Debug, Clone)]
pub struct GraphConfig {
    /// Backing store file; `None` keeps the graph in memory only.
    pub store_path: Option<PathBuf>,
    /// Exclusive writer (locks the store) or shared read-only view.
    pub exclusive: bool,
    /// Skip the per-commit fsync; data is synced on compaction and drop.
    pub batch: bool,
    pub log_file_dir: Option<PathBuf>,
    /// 10 = debug, 20 = info, 30 = warning, 40 = error.
    pub logger_level: u32,
    /// Ontology files imported, in order, after the built-in ontology.
    pub external_ontos: Vec<PathBuf>,
    pub external_graph: Option<ExternalGraph>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            store_path: None,
            exclusive: true,
            batch: false,
            log_file_dir: None,
            logger_level: 30,
            external_ontos: Vec::new(),
            external_graph: None,
        }
    }
}

impl GraphConfig {
    pub fn at(path: impl Into<PathBuf>) -> Self {
        GraphConfig {
            store_path: Some(path.into()),
            ..Default::default()
        }
    }
}

#[derive(Debug)]
pub struct Graph {
    store: TripleStore,
    file: Option<StoreFile>,
    model: OntologyModel,
    /// Triples touched by the running operation, mapped to whether they were
    /// present before it started.
    journal: IndexMap<Triple, bool>,
}

impl Graph {
    /// An empty graph that lives in memory only.
    pub fn in_memory() -> Self {
        Graph {
            store: TripleStore::new(),
            file: None,
            model: OntologyModel::builtin(),
            journal: IndexMap::new(),
        }
    }

    /// Opens an existing store (or creates an empty one) for exclusive use.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        Graph::new(GraphConfig::at(path))
    }

    /// Creates the graph described by `config`: opens the store, loads the
    /// built-in ontology, imports `external_ontos` in order, then loads
    /// `external_graph`.
    pub fn new(config: GraphConfig) -> Result<Self> {
        if let Some(dir) = &config.log_file_dir {
            crate::logging::init(dir, config.logger_level)?;
        }
        let mut graph = match &config.store_path {
            None => Graph::in_memory(),
            Some(path) => {
                let mode = if config.exclusive {
                    OpenMode::Exclusive
                } else {
                    OpenMode::Shared
                };
                let (mut file, store) = open_store(path, mode)?;
                if config.batch && mode == OpenMode::Exclusive {
                    file.set_batch(true)?;
                }
                let model = crate::ontology::model_from_store(&store)?;
                Graph {
                    store,
                    file: Some(file),
                    model,
                    journal: IndexMap::new(),
                }
            }
        };
        for onto in &config.external_ontos {
            graph.import_ontology(onto)?;
        }
        match &config.external_graph {
            None => {}
            Some(ExternalGraph::PropertyGraph(doc)) => crate::interchange::fill_property_graph(&mut graph, doc)?,
            Some(ExternalGraph::LinkTuple(doc)) => crate::interchange::fill_link_tuple(&mut graph, doc)?,
        }
        Ok(graph)
    }

    pub fn store(&self) -> &TripleStore {
        &self.store
    }

    pub fn model(&self) -> &OntologyModel {
        &self.model
    }

    pub fn store_file(&self) -> Option<&StoreFile> {
        self.file.as_ref()
    }

    pub fn path(&self) -> Option<&Path> {
        self.file.as_ref().map(|f| f.path())
    }

    /// Canonical N-Triples dump of every stored triple.
    pub fn to_ntriples(&self) -> String {
        self.store.to_ntriples()
    }

    /// Folds the log of the backing file into a sorted snapshot.
    pub fn compact(&mut self) -> Result<()> {
        if let Some(file) = &mut self.file {
            file.compact(&self.store)?;
        }
        Ok(())
    }

    /// Runs `f` with per-commit syncing switched off, syncing once at the end.
    pub(crate) fn batched<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let restore = match &mut self.file {
            Some(file) if file.mode() == OpenMode::Exclusive && !file.is_batch() => {
                file.set_batch(true)?;
                true
            }
            _ => false,
        };
        let out = f(self);
        if restore {
            if let Some(file) = &mut self.file {
                file.set_batch(false)?;
            }
        }
        out
    }

    pub(crate) fn set_model(&mut self, model: OntologyModel) {
        self.model = model;
    }

    pub(crate) fn check_writable(&self) -> Result<()> {
        match &self.file {
            Some(f) if f.mode() == OpenMode::Shared => Err(Error::ReadOnly(f.path().to_path_buf())),
            _ => Ok(()),
        }
    }

    pub(crate) fn assert_triple(&mut self, t: Triple) {
        if self.store.insert(&t) {
            self.journal.entry(t).or_insert(false);
        }
    }

    pub(crate) fn retract_triple(&mut self, t: &Triple) {
        if self.store.remove(t) && !self.journal.contains_key(t) {
            self.journal.insert(t.clone(), true);
        }
    }

    /// Removes every triple mentioning `iri` as subject or object.
    pub(crate) fn retract_mentions(&mut self, iri: &Iri) {
        let term = Term::Iri(iri.clone());
        let mut doomed = self.store.find(Some(&term), None, None);
        doomed.extend(self.store.find(None, None, Some(&term)));
        for t in &doomed {
            self.retract_triple(t);
        }
    }

    /// Writes the net effect of the running operation to the backing file.
    /// On failure the journal is kept so the next flush retries.
    pub(crate) fn flush(&mut self) -> Result<()> {
        let mut asserts = Vec::new();
        let mut retracts = Vec::new();
        for (t, was_present) in &self.journal {
            match (was_present, self.store.contains(t)) {
                (false, true) => asserts.push(t.clone()),
                (true, false) => retracts.push(t.clone()),
                _ => {}
            }
        }
        if let Some(file) = &mut self.file {
            file.commit(&asserts, &retracts)?;
        }
        self.journal.clear();
        Ok(())
    }

    pub(crate) fn objects(&self, subject: &Iri, predicate: &str) -> Vec<Term> {
        self.store
            .find_in_insertion_order(Some(&Term::Iri(subject.clone())), Some(&known(predicate)), None)
            .into_iter()
            .map(|t| t.object)
            .collect()
    }

    pub(crate) fn subjects(&self, predicate: &str, object: &Iri) -> Vec<Iri> {
        self.store
            .find_in_insertion_order(None, Some(&known(predicate)), Some(&Term::Iri(object.clone())))
            .into_iter()
            .filter_map(|t| t.subject.as_iri().cloned())
            .collect()
    }

    /// Class memberships of an individual, in the order they were asserted.
    pub(crate) fn types_of(&self, iri: &Iri) -> Vec<Iri> {
        self.objects(iri, rdf::TYPE)
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .filter(|c| self.model.has_class(c))
            .collect()
    }

    pub(crate) fn has_type(&self, iri: &Iri, class: &str) -> bool {
        self.model.any_is_a(&self.types_of(iri), &known(class))
    }

    pub(crate) fn exists(&self, name: &str) -> bool {
        !name.is_empty() && !self.types_of(&individual_iri(name)).is_empty()
    }

    pub fn is_causal_node(&self, name: &str) -> bool {
        !name.is_empty() && self.has_type(&individual_iri(name), cg::CAUSAL_NODE)
    }

    pub fn is_causal_edge(&self, name: &str) -> bool {
        !name.is_empty() && self.has_type(&individual_iri(name), cg::CAUSAL_EDGE)
    }

    pub(crate) fn describe_types(&self, name: &str) -> String {
        let types: Vec<String> = self
            .types_of(&individual_iri(name))
            .iter()
            .map(display_entity)
            .collect();
        types.join(", ")
    }

    /// All individuals of the store, in the order they were first typed.
    pub fn individuals(&self) -> Vec<Individual> {
        let mut seen = IndexMap::new();
        for t in self.store.find_in_insertion_order(None, Some(&known(rdf::TYPE)), None) {
            let Term::Iri(s) = &t.subject else { continue };
            if !s.as_str().starts_with(cgs::NS) || seen.contains_key(s) {
                continue;
            }
            if let Some(name) = individual_name(s) {
                seen.insert(s.clone(), name);
            }
        }
        seen.into_iter()
            .filter_map(|(iri, name)| {
                let types = self.types_of(&iri);
                (!types.is_empty()).then_some(Individual { name, iri, types })
            })
            .collect()
    }

    pub fn individual_names(&self) -> Vec<String> {
        self.individuals().into_iter().map(|i| i.name).collect()
    }

    /// Display names of every known class, built-ins first.
    pub fn classes(&self) -> Vec<String> {
        self.model.classes().map(|c| display_entity(&c.iri)).collect()
    }

    /// Names of causal nodes in insertion order.
    pub fn causal_nodes(&self) -> Vec<String> {
        self.individuals()
            .into_iter()
            .filter(|i| self.model.any_is_a(&i.types, &known(cg::CAUSAL_NODE)))
            .map(|i| i.name)
            .collect()
    }

    /// Names of causal edges in insertion order.
    pub fn causal_edges(&self) -> Vec<String> {
        self.individuals()
            .into_iter()
            .filter(|i| self.model.any_is_a(&i.types, &known(cg::CAUSAL_EDGE)))
            .map(|i| i.name)
            .collect()
    }

    /// Smallest `<prefix>_<k>` (k >= 1) not used by any individual nor
    /// listed in `reserved`.
    pub(crate) fn fresh_name(&self, prefix: &str, reserved: &[&str]) -> String {
        (1..)
            .map(|k| format!("{prefix}_{k}"))
            .find(|n| !self.exists(n) && !reserved.contains(&n.as_str()))
            .expect("unbounded range")
    }
}

/// Shorthand for `(individual) p (object)`.
pub(crate) fn fact(subject: &Iri, predicate: &str, object: impl Into<Term>) -> Triple {
    Triple::from_iri(subject.clone(), known(predicate), object)
}
