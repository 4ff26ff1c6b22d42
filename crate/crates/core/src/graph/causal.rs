use crate::error::{Error, Result};
use crate::ontology::individual_iri;
use crate::rdf::vocab::{cg, rdf, rdfs};
use crate::rdf::{known, Iri, Literal, Term};

use super::{fact, Graph};

#[derive(Debug, Clone, Default)]
pub struct NodeOptions {
    pub comments: Vec<String>,
    pub creator: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct EdgeOptions {
    /// Edge name; `CausalEdge_<k>` is generated when absent.
    pub name: Option<String>,
    /// Degree of belief in (0, 1].
    pub confidence: Option<f64>,
    /// Delay between cause and effect in seconds, >= 0.
    pub time_lag_s: Option<f64>,
    pub comments: Vec<String>,
    pub creator: Option<String>,
    /// Create missing endpoint nodes instead of failing.
    pub force_create: bool,
}

impl EdgeOptions {
    pub fn named(name: impl Into<String>) -> Self {
        EdgeOptions {
            name: Some(name.into()),
            ..Default::default()
        }
    }
}

/// Materialized view of a reified causal edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalEdgeRecord {
    pub name: String,
    pub cause: String,
    pub effect: String,
    pub confidence: Option<f64>,
    pub time_lag_s: Option<f64>,
    pub creator: Option<String>,
    pub comments: Vec<String>,
}

pub(crate) fn check_confidence(c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 && c <= 1.0 {
        Ok(())
    } else {
        Err(Error::ConfidenceOutOfRange(c))
    }
}

pub(crate) fn check_time_lag(lag: f64) -> Result<()> {
    if lag.is_finite() && lag >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTimeLag(lag))
    }
}

enum Endpoint {
    Ready,
    Promote,
    Create,
}

impl Graph {
    /// Adds a causal node and returns its name. An existing node of the same
    /// name is returned as is.
    pub fn add_causal_node(&mut self, name: Option<&str>, options: NodeOptions) -> Result<String> {
        self.check_writable()?;
        let name = match name {
            Some("") => return Err(Error::EmptyName),
            Some(n) => n.to_string(),
            None => self.fresh_name("CausalNode", &[]),
        };
        if self.is_causal_node(&name) {
            return Ok(name);
        }
        if self.exists(&name) {
            return Err(Error::NameCollision {
                existing: self.describe_types(&name),
                name,
            });
        }
        if let Some(creator) = &options.creator {
            self.check_creator(creator, &[&name])?;
        }
        let iri = individual_iri(&name);
        self.assert_triple(fact(&iri, rdf::TYPE, known(cg::CAUSAL_NODE)));
        for c in &options.comments {
            self.assert_triple(fact(&iri, rdfs::COMMENT, Literal::string(c.as_str())));
        }
        if let Some(creator) = &options.creator {
            self.set_creator(&iri, creator);
        }
        self.flush()?;
        log::debug!("added causal node {name}");
        Ok(name)
    }

    /// Adds (or updates) a causal edge from `cause` to `effect` and returns
    /// its name.
    ///
    /// Re-adding an existing edge name with the same endpoints replaces the
    /// supplied confidence, lag and creator and appends comments; different
    /// endpoints are an error. Endpoints that are existing non-causal
    /// individuals are promoted to causal nodes.
    pub fn add_causal_edge(&mut self, cause: &str, effect: &str, options: EdgeOptions) -> Result<String> {
        self.check_writable()?;
        if cause.is_empty() || effect.is_empty() || options.name.as_deref() == Some("") {
            return Err(Error::EmptyName);
        }
        if cause == effect {
            return Err(Error::SelfLoop(cause.to_string()));
        }
        if let Some(c) = options.confidence {
            check_confidence(c)?;
        }
        if let Some(lag) = options.time_lag_s {
            check_time_lag(lag)?;
        }
        let cause_plan = self.plan_endpoint(cause, options.force_create)?;
        let effect_plan = self.plan_endpoint(effect, options.force_create)?;

        let name = match &options.name {
            Some(n) => n.clone(),
            None => self.fresh_name("CausalEdge", &[cause, effect]),
        };
        if name == cause || name == effect {
            return Err(Error::NameCollision {
                name,
                existing: "causalgraph.CausalNode".into(),
            });
        }
        let upsert = if self.is_causal_edge(&name) {
            let rec = self.get_edge_record(&name)?;
            if rec.cause != cause || rec.effect != effect {
                return Err(Error::EdgeRewire {
                    name,
                    cause: rec.cause,
                    effect: rec.effect,
                });
            }
            true
        } else if self.exists(&name) {
            return Err(Error::NameCollision {
                existing: self.describe_types(&name),
                name,
            });
        } else {
            false
        };
        if let Some(creator) = &options.creator {
            self.check_creator(creator, &[&name, cause, effect])?;
        }

        for (node, plan) in [(cause, cause_plan), (effect, effect_plan)] {
            let iri = individual_iri(node);
            match plan {
                Endpoint::Ready => {}
                Endpoint::Promote | Endpoint::Create => {
                    self.assert_triple(fact(&iri, rdf::TYPE, known(cg::CAUSAL_NODE)));
                }
            }
        }
        let edge = individual_iri(&name);
        let cause_iri = individual_iri(cause);
        let effect_iri = individual_iri(effect);
        if !upsert {
            self.assert_triple(fact(&edge, rdf::TYPE, known(cg::CAUSAL_EDGE)));
            self.assert_triple(fact(&edge, cg::HAS_CAUSE, cause_iri.clone()));
            self.assert_triple(fact(&edge, cg::HAS_EFFECT, effect_iri.clone()));
            self.assert_triple(fact(&cause_iri, cg::IS_CAUSING, edge.clone()));
            self.assert_triple(fact(&effect_iri, cg::IS_AFFECTED_BY, edge.clone()));
        }
        if let Some(c) = options.confidence {
            self.replace_value(&edge, cg::HAS_CONFIDENCE, Literal::decimal(c));
        }
        if let Some(lag) = options.time_lag_s {
            self.replace_value(&edge, cg::HAS_TIME_LAG, Literal::decimal(lag));
        }
        for c in &options.comments {
            self.assert_triple(fact(&edge, rdfs::COMMENT, Literal::string(c.as_str())));
        }
        if let Some(creator) = &options.creator {
            self.set_creator(&edge, creator);
        }
        self.flush()?;
        log::debug!("added causal edge {name}: {cause} -> {effect}");
        Ok(name)
    }

    fn plan_endpoint(&self, node: &str, force_create: bool) -> Result<Endpoint> {
        if self.is_causal_edge(node) {
            return Err(Error::EdgeAsNode(node.to_string()));
        }
        if self.is_causal_node(node) {
            Ok(Endpoint::Ready)
        } else if self.exists(node) {
            Ok(Endpoint::Promote)
        } else if force_create {
            Ok(Endpoint::Create)
        } else {
            Err(Error::UnknownNode(node.to_string()))
        }
    }

    fn replace_value(&mut self, subject: &Iri, predicate: &'static str, value: Literal) {
        for old in self.objects(subject, predicate) {
            self.retract_triple(&fact(subject, predicate, old));
        }
        self.assert_triple(fact(subject, predicate, value));
    }

    /// Fails when `creator` names an existing individual that is not a
    /// `Creator`, or one of the names being created in the same call.
    pub(crate) fn check_creator(&self, creator: &str, in_flight: &[&str]) -> Result<()> {
        if creator.is_empty() {
            return Err(Error::EmptyName);
        }
        let clash = in_flight.contains(&creator)
            || (self.exists(creator) && !self.has_type(&individual_iri(creator), cg::CREATOR));
        if clash {
            let existing = if self.exists(creator) {
                self.describe_types(creator)
            } else {
                "causal individual".into()
            };
            return Err(Error::NameCollision {
                name: creator.to_string(),
                existing,
            });
        }
        Ok(())
    }

    /// Points `subject` at `creator` (creating the Creator individual on
    /// first use), replacing any previous creator.
    pub(crate) fn set_creator(&mut self, subject: &Iri, creator: &str) {
        let creator_iri = individual_iri(creator);
        if !self.exists(creator) {
            self.assert_triple(fact(&creator_iri, rdf::TYPE, known(cg::CREATOR)));
        }
        for old in self.objects(subject, cg::HAS_CREATOR) {
            if let Term::Iri(old_iri) = &old {
                self.retract_triple(&fact(old_iri, cg::CREATED, subject.clone()));
            }
            self.retract_triple(&fact(subject, cg::HAS_CREATOR, old));
        }
        self.assert_triple(fact(subject, cg::HAS_CREATOR, creator_iri.clone()));
        self.assert_triple(fact(&creator_iri, cg::CREATED, subject.clone()));
    }

    /// Removes a causal node together with every edge referencing it.
    /// Returns `false` when no such node exists.
    pub fn remove_causal_node(&mut self, name: &str) -> Result<bool> {
        self.check_writable()?;
        if !self.is_causal_node(name) {
            return Ok(false);
        }
        let iri = individual_iri(name);
        for edge in self.edges_touching(&iri) {
            self.retract_mentions(&edge);
        }
        self.retract_mentions(&iri);
        self.flush()?;
        log::debug!("removed causal node {name}");
        Ok(true)
    }

    /// Removes an edge and its mirrored `isCausing`/`isAffectedBy` values.
    pub fn remove_causal_edge_by_name(&mut self, name: &str) -> Result<bool> {
        self.check_writable()?;
        if !self.is_causal_edge(name) {
            return Ok(false);
        }
        self.retract_mentions(&individual_iri(name));
        self.flush()?;
        log::debug!("removed causal edge {name}");
        Ok(true)
    }

    /// Removes every edge directed from `cause` to `effect`.
    pub fn remove_causal_edges_between(&mut self, cause: &str, effect: &str) -> Result<usize> {
        self.check_writable()?;
        if cause.is_empty() || effect.is_empty() {
            return Ok(0);
        }
        let effect_term = Term::Iri(individual_iri(effect));
        let doomed: Vec<Iri> = self
            .subjects(cg::HAS_CAUSE, &individual_iri(cause))
            .into_iter()
            .filter(|e| self.objects(e, cg::HAS_EFFECT).contains(&effect_term))
            .collect();
        for e in &doomed {
            self.retract_mentions(e);
        }
        self.flush()?;
        Ok(doomed.len())
    }

    /// Removes all incoming and outgoing edges of a node, keeping the node.
    pub fn remove_causal_edges_of_node(&mut self, name: &str) -> Result<usize> {
        self.check_writable()?;
        if name.is_empty() {
            return Ok(0);
        }
        let doomed = self.edges_touching(&individual_iri(name));
        for e in &doomed {
            self.retract_mentions(e);
        }
        self.flush()?;
        Ok(doomed.len())
    }

    fn edges_touching(&self, node: &Iri) -> Vec<Iri> {
        let mut edges = self.subjects(cg::HAS_CAUSE, node);
        for e in self.subjects(cg::HAS_EFFECT, node) {
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        edges
    }

    pub fn get_edge_record(&self, name: &str) -> Result<CausalEdgeRecord> {
        if !self.is_causal_edge(name) {
            return Err(Error::UnknownEdge(name.to_string()));
        }
        let iri = individual_iri(name);
        let node_name = |p: &str| -> Result<String> {
            self.objects(&iri, p)
                .first()
                .and_then(Term::as_iri)
                .and_then(crate::ontology::individual_name)
                .ok_or_else(|| Error::UnknownEdge(name.to_string()))
        };
        let number = |p: &str| {
            self.objects(&iri, p)
                .first()
                .and_then(Term::as_literal)
                .and_then(Literal::as_f64)
        };
        Ok(CausalEdgeRecord {
            name: name.to_string(),
            cause: node_name(cg::HAS_CAUSE)?,
            effect: node_name(cg::HAS_EFFECT)?,
            confidence: number(cg::HAS_CONFIDENCE),
            time_lag_s: number(cg::HAS_TIME_LAG),
            creator: self
                .objects(&iri, cg::HAS_CREATOR)
                .first()
                .and_then(Term::as_iri)
                .and_then(crate::ontology::individual_name),
            comments: self.comments_of(&iri),
        })
    }

    pub(crate) fn comments_of(&self, iri: &Iri) -> Vec<String> {
        self.objects(iri, rdfs::COMMENT)
            .iter()
            .filter_map(Term::as_literal)
            .map(|l| l.lexical().to_string())
            .collect()
    }

    /// Comments attached to any individual.
    pub fn comments(&self, name: &str) -> Vec<String> {
        if name.is_empty() {
            return Vec::new();
        }
        self.comments_of(&individual_iri(name))
    }

    /// Records of all edges, in insertion order.
    pub fn edge_records(&self) -> Vec<CausalEdgeRecord> {
        self.causal_edges()
            .iter()
            .filter_map(|e| self.get_edge_record(e).ok())
            .collect()
    }

    /// Edge names listed in a node's `isCausing` property.
    pub fn causing_edges(&self, node: &str) -> Vec<String> {
        self.mirror_values(node, cg::IS_CAUSING)
    }

    /// Edge names listed in a node's `isAffectedBy` property.
    pub fn affecting_edges(&self, node: &str) -> Vec<String> {
        self.mirror_values(node, cg::IS_AFFECTED_BY)
    }

    fn mirror_values(&self, node: &str, predicate: &str) -> Vec<String> {
        if node.is_empty() {
            return Vec::new();
        }
        self.objects(&individual_iri(node), predicate)
            .iter()
            .filter_map(Term::as_iri)
            .filter_map(crate::ontology::individual_name)
            .collect()
    }
}
