use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{to_html_safe_json, write_file};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphConfig};
use crate::ontology::{individual_iri, individual_name, ontology_triples, Individual, OntologyModel};
use crate::rdf::vocab::{cg, rdf, rdfs};
use crate::rdf::{format_decimal, known, parse_line, Datatype, Iri, Literal, Term, Triple};

/// Lossless document form of a graph. Keys serialize in alphabetical order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyGraphDoc {
    #[serde(default)]
    pub edges: Vec<PgEdge>,
    #[serde(default)]
    pub nodes: Vec<PgNode>,
    /// Imported ontology triples as canonical N-Triples lines.
    #[serde(default)]
    pub ontology_extras: Vec<String>,
}

/// Any individual that is not a causal edge: causal nodes, creators and
/// individuals of imported classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgNode {
    pub name: String,
    #[serde(default)]
    pub props: PgNodeProps,
    /// Class IRIs; empty means `CausalNode`.
    #[serde(default)]
    pub types: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PgNodeProps {
    #[serde(default)]
    pub assertions: Vec<PgAssertion>,
    #[serde(default)]
    pub comments: Vec<String>,
    #[serde(default)]
    pub creator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgEdge {
    pub cause: String,
    pub effect: String,
    pub name: String,
    #[serde(default)]
    pub props: PgEdgeProps,
    /// Class IRIs; empty means `CausalEdge`.
    #[serde(default)]
    pub types: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PgEdgeProps {
    #[serde(default)]
    pub assertions: Vec<PgAssertion>,
    #[serde(default)]
    pub comments: Vec<String>,
    #[serde(default)]
    pub confidence: Option<f64>,
    #[serde(default)]
    pub creator: Option<String>,
    #[serde(default)]
    pub time_lag_s: Option<f64>,
}

/// Any other property value, with the object in canonical N-Triples form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PgAssertion {
    pub object: String,
    pub predicate: String,
}

impl PropertyGraphDoc {
    pub fn to_json(&self) -> String {
        to_html_safe_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&std::fs::read_to_string(path).map_err(Error::io(path))?)
    }
}

/// Values derived from other triples and rebuilt on load.
const MIRRORS: [&str; 3] = [cg::IS_CAUSING, cg::IS_AFFECTED_BY, cg::CREATED];

/// A decimal stored in the canonical form `Literal::decimal` produces.
fn canonical_decimal(t: &Term) -> Option<f64> {
    let l = t.as_literal()?;
    let v = l.as_f64()?;
    (l.datatype() == Datatype::Decimal && v.is_finite() && format_decimal(v) == l.lexical()).then_some(v)
}

fn assertion(t: &Triple) -> PgAssertion {
    PgAssertion {
        object: t.object.canonical(),
        predicate: t.predicate.as_str().to_string(),
    }
}

impl Graph {
    /// The whole graph as a lossless document.
    pub fn export_property_graph(&self) -> PropertyGraphDoc {
        let mut doc = PropertyGraphDoc::default();
        for ind in self.individuals() {
            if self.is_causal_edge(&ind.name) {
                doc.edges.push(self.pg_edge(&ind));
            } else {
                doc.nodes.push(self.pg_node(&ind));
            }
        }
        doc.ontology_extras = ontology_triples(self.store()).iter().map(Triple::canonical).collect();
        doc
    }

    pub fn export_property_graph_to(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.export_property_graph().to_json())
    }

    fn statements(&self, ind: &Individual) -> Vec<Triple> {
        self.store()
            .find_in_insertion_order(Some(&Term::Iri(ind.iri.clone())), None, None)
    }

    fn single_creator(&self, ind: &Individual) -> Option<(Term, String)> {
        let s = Term::Iri(ind.iri.clone());
        let found = self.store().find(Some(&s), Some(&known(cg::HAS_CREATOR)), None);
        match found.as_slice() {
            [t] => {
                let name = t.object.as_iri().and_then(individual_name)?;
                Some((t.object.clone(), name))
            }
            _ => None,
        }
    }

    fn pg_node(&self, ind: &Individual) -> PgNode {
        let creator = self.single_creator(ind);
        let mut node = PgNode {
            name: ind.name.clone(),
            props: PgNodeProps {
                creator: creator.as_ref().map(|c| c.1.clone()),
                ..Default::default()
            },
            types: Vec::new(),
        };
        for t in self.statements(ind) {
            match (t.predicate.as_str(), &t.object) {
                (rdf::TYPE, Term::Iri(c)) => node.types.push(c.as_str().to_string()),
                (rdfs::COMMENT, Term::Literal(l)) if l.datatype() == Datatype::String => {
                    node.props.comments.push(l.lexical().to_string())
                }
                (cg::HAS_CREATOR, o) if creator.as_ref().is_some_and(|c| &c.0 == o) => {}
                (p, _) if MIRRORS.contains(&p) => {}
                _ => node.props.assertions.push(assertion(&t)),
            }
        }
        node
    }

    fn pg_edge(&self, ind: &Individual) -> PgEdge {
        let s = Term::Iri(ind.iri.clone());
        let single = |p: &str| -> Option<Term> {
            let found = self.store().find(Some(&s), Some(&known(p)), None);
            (found.len() == 1).then(|| found[0].object.clone())
        };
        let cause = single(cg::HAS_CAUSE);
        let effect = single(cg::HAS_EFFECT);
        let confidence = single(cg::HAS_CONFIDENCE).filter(|t| canonical_decimal(t).is_some());
        let lag = single(cg::HAS_TIME_LAG).filter(|t| canonical_decimal(t).is_some());
        let creator = self.single_creator(ind);
        let name_of = |t: &Option<Term>| {
            t.as_ref()
                .and_then(Term::as_iri)
                .and_then(individual_name)
                .unwrap_or_default()
        };
        let mut edge = PgEdge {
            cause: name_of(&cause),
            effect: name_of(&effect),
            name: ind.name.clone(),
            props: PgEdgeProps {
                confidence: confidence.as_ref().and_then(canonical_decimal),
                creator: creator.as_ref().map(|c| c.1.clone()),
                time_lag_s: lag.as_ref().and_then(canonical_decimal),
                ..Default::default()
            },
            types: Vec::new(),
        };
        for t in self.statements(ind) {
            let o = Some(t.object.clone());
            match (t.predicate.as_str(), &t.object) {
                (rdf::TYPE, Term::Iri(c)) => edge.types.push(c.as_str().to_string()),
                (rdfs::COMMENT, Term::Literal(l)) if l.datatype() == Datatype::String => {
                    edge.props.comments.push(l.lexical().to_string())
                }
                (cg::HAS_CAUSE, _) if o == cause => {}
                (cg::HAS_EFFECT, _) if o == effect => {}
                (cg::HAS_CONFIDENCE, _) if o == confidence => {}
                (cg::HAS_TIME_LAG, _) if o == lag => {}
                (cg::HAS_CREATOR, _) if creator.as_ref().is_some_and(|c| Some(&c.0) == o.as_ref()) => {}
                (p, _) if MIRRORS.contains(&p) => {}
                _ => edge.props.assertions.push(assertion(&t)),
            }
        }
        edge
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDocument(msg.into())
}

fn fact(subject: &str, predicate: &'static str, object: impl Into<Term>) -> Triple {
    Triple::from_iri(individual_iri(subject), known(predicate), object)
}

/// Checks a document against `graph` and computes every triple it adds,
/// without touching the graph.
struct Planner<'a> {
    graph: &'a Graph,
    model: OntologyModel,
    extras: Vec<Triple>,
    triples: Vec<Triple>,
}

impl<'a> Planner<'a> {
    fn new(graph: &'a Graph, doc: &PropertyGraphDoc) -> Result<Self> {
        let mut extras = Vec::new();
        for (i, line) in doc.ontology_extras.iter().enumerate() {
            match parse_line(line, i + 1) {
                Ok(Some(t)) => extras.push(t),
                Ok(None) => {}
                Err(e) => return Err(invalid(format!("ontology_extras[{i}]: {e}"))),
            }
        }
        let model = graph.model().merged_with(&extras)?.0;
        Ok(Planner {
            graph,
            model,
            extras,
            triples: Vec::new(),
        })
    }

    fn types(&self, what: &str, types: &[String], default: &'static str) -> Result<Vec<Iri>> {
        if types.is_empty() {
            return Ok(vec![known(default)]);
        }
        types
            .iter()
            .map(|t| {
                let iri = Iri::new(t.as_str()).map_err(|e| invalid(format!("{what}: {e}")))?;
                if self.model.has_class(&iri) {
                    Ok(iri)
                } else {
                    Err(invalid(format!("{what}: unknown class {t}")))
                }
            })
            .collect()
    }

    fn assertions(&mut self, subject: &str, list: &[PgAssertion]) -> Result<()> {
        for a in list {
            let p = Iri::new(a.predicate.as_str()).map_err(|e| invalid(format!("{subject}: {e}")))?;
            let reserved = MIRRORS.contains(&p.as_str()) || [cg::HAS_CAUSE, cg::HAS_EFFECT].contains(&p.as_str());
            if reserved || (p.as_str() != rdf::TYPE && self.model.property(&p).is_none()) {
                return Err(invalid(format!(
                    "{subject}: property {} cannot be asserted here",
                    a.predicate
                )));
            }
            let line = format!("<urn:x:s> <urn:x:p> {} .", a.object);
            let object = match parse_line(&line, 1) {
                Ok(Some(t)) => t.object,
                _ => return Err(invalid(format!("{subject}: malformed object {}", a.object))),
            };
            self.triples.push(Triple::from_iri(individual_iri(subject), p, object));
        }
        Ok(())
    }

    /// `creators` maps usable creator names to whether they still need a
    /// `Creator` type triple (those not listed as nodes).
    fn creator(&mut self, subject: &str, creator: &Option<String>, creators: &HashMap<&str, bool>) -> Result<()> {
        let Some(c) = creator else { return Ok(()) };
        let Some(&needs_type) = creators.get(c.as_str()) else {
            return Err(invalid(format!("{subject}: creator {c:?} is not a Creator")));
        };
        if c == subject {
            return Err(invalid(format!("{subject} cannot be its own creator")));
        }
        if needs_type {
            self.triples.push(fact(c, rdf::TYPE, known(cg::CREATOR)));
        }
        self.triples.push(fact(subject, cg::HAS_CREATOR, individual_iri(c)));
        self.triples.push(fact(c, cg::CREATED, individual_iri(subject)));
        Ok(())
    }

    fn plan(mut self, doc: &PropertyGraphDoc) -> Result<Self> {
        let mut names = HashSet::new();
        for name in doc
            .nodes
            .iter()
            .map(|n| &n.name)
            .chain(doc.edges.iter().map(|e| &e.name))
        {
            if name.is_empty() {
                return Err(invalid("empty individual name"));
            }
            if !names.insert(name.as_str()) {
                return Err(invalid(format!("duplicate name {name:?}")));
            }
            if self.graph.get_entity_by_name(name).is_some() {
                return Err(Error::NameCollision {
                    name: name.clone(),
                    existing: self.graph.get_entity_by_name(name).unwrap().type_names().join(", "),
                });
            }
        }

        let causal = known(cg::CAUSAL_NODE);
        let creator_class = known(cg::CREATOR);
        let mut node_types: HashMap<&str, Vec<Iri>> = HashMap::new();
        for n in &doc.nodes {
            let types = self.types(&n.name, &n.types, cg::CAUSAL_NODE)?;
            if self.model.any_is_a(&types, &known(cg::CAUSAL_EDGE)) {
                return Err(invalid(format!("node {:?} is typed as a causal edge", n.name)));
            }
            for t in &types {
                self.triples.push(fact(&n.name, rdf::TYPE, t.clone()));
            }
            node_types.insert(&n.name, types);
        }
        // creators may be listed as nodes or created on the fly
        let mut creators_ok: HashMap<&str, bool> = HashMap::new();
        let named_creators = doc
            .nodes
            .iter()
            .map(|n| n.props.creator.as_ref())
            .chain(doc.edges.iter().map(|e| e.props.creator.as_ref()))
            .flatten();
        for c in named_creators {
            match node_types.get(c.as_str()) {
                Some(types) if self.model.any_is_a(types, &creator_class) => {
                    creators_ok.insert(c, false);
                }
                Some(_) => {}
                None if !c.is_empty() && !names.contains(c.as_str()) && self.graph.get_entity_by_name(c).is_none() => {
                    creators_ok.insert(c, true);
                }
                None => {}
            }
        }
        for e in &doc.edges {
            let types = self.types(&e.name, &e.types, cg::CAUSAL_EDGE)?;
            if !self.model.any_is_a(&types, &known(cg::CAUSAL_EDGE)) {
                return Err(invalid(format!("edge {:?} is not typed as a causal edge", e.name)));
            }
            for t in &types {
                self.triples.push(fact(&e.name, rdf::TYPE, t.clone()));
            }
        }
        for n in &doc.nodes {
            for c in &n.props.comments {
                self.triples
                    .push(fact(&n.name, rdfs::COMMENT, Literal::string(c.as_str())));
            }
            self.creator(&n.name, &n.props.creator, &creators_ok)?;
            self.assertions(&n.name, &n.props.assertions)?;
        }
        for e in &doc.edges {
            for end in [&e.cause, &e.effect] {
                let types = node_types
                    .get(end.as_str())
                    .ok_or_else(|| invalid(format!("edge {:?} refers to unknown node {end:?}", e.name)))?;
                if !self.model.any_is_a(types, &causal) {
                    return Err(invalid(format!("edge {:?} refers to non-causal node {end:?}", e.name)));
                }
            }
            if e.cause == e.effect {
                return Err(Error::SelfLoop(e.cause.clone()));
            }
            let edge = individual_iri(&e.name);
            self.triples
                .push(fact(&e.name, cg::HAS_CAUSE, individual_iri(&e.cause)));
            self.triples
                .push(fact(&e.name, cg::HAS_EFFECT, individual_iri(&e.effect)));
            self.triples.push(fact(&e.cause, cg::IS_CAUSING, edge.clone()));
            self.triples.push(fact(&e.effect, cg::IS_AFFECTED_BY, edge));
            if let Some(c) = e.props.confidence {
                crate::graph::check_confidence(c)?;
                self.triples
                    .push(fact(&e.name, cg::HAS_CONFIDENCE, Literal::decimal(c)));
            }
            if let Some(lag) = e.props.time_lag_s {
                crate::graph::check_time_lag(lag)?;
                self.triples
                    .push(fact(&e.name, cg::HAS_TIME_LAG, Literal::decimal(lag)));
            }
            for c in &e.props.comments {
                self.triples
                    .push(fact(&e.name, rdfs::COMMENT, Literal::string(c.as_str())));
            }
            self.creator(&e.name, &e.props.creator, &creators_ok)?;
            self.assertions(&e.name, &e.props.assertions)?;
        }
        Ok(self)
    }
}

/// Adds the content of `doc` to `graph`, failing before any change when
/// the document is inconsistent or clashes with existing individuals.
pub fn fill_property_graph(graph: &mut Graph, doc: &PropertyGraphDoc) -> Result<()> {
    graph.check_writable()?;
    let plan = Planner::new(graph, doc)?.plan(doc)?;
    let (extras, triples) = (plan.extras, plan.triples);
    graph.batched(|g| {
        if !extras.is_empty() {
            g.import_triples(&extras)?;
        }
        for t in triples {
            g.assert_triple(t);
        }
        g.flush()
    })
}

/// Creates the graph of `doc` in a new store file. An existing file is
/// replaced only with `overwrite`.
pub fn load_property_graph(doc: &PropertyGraphDoc, path: impl AsRef<Path>, overwrite: bool) -> Result<Graph> {
    let path = path.as_ref();
    prepare_new_store(path, overwrite)?;
    let mut g = Graph::new(GraphConfig::at(path))?;
    fill_property_graph(&mut g, doc)?;
    Ok(g)
}

pub(crate) fn prepare_new_store(path: &Path, overwrite: bool) -> Result<()> {
    if path.exists() {
        if !overwrite {
            return Err(Error::StoreExists(path.to_path_buf()));
        }
        std::fs::remove_file(path).map_err(Error::io(path))?;
    }
    Ok(())
}
