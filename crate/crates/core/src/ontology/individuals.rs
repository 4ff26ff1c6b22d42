use std::path::Path;

use sha2::{Digest, Sha256};

use super::{display_entity, individual_iri, ImportReport, Individual, OntologyError, PropertyKind, PropertyRange};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rdf::turtle::{parse_turtle, TurtleOptions};
use crate::rdf::vocab::{cg, rdf};
use crate::rdf::{known, parse_ntriples, Datatype, Iri, Literal, Term, Triple};

/// Value of a property assertion made through [`Graph::add_individual_of_type`].
#[derive(Debug, Clone, PartialEq)]
pub enum PropValue {
    /// Another individual, by name.
    Individual(String),
    Literal(Literal),
}

impl From<Literal> for PropValue {
    fn from(l: Literal) -> Self {
        PropValue::Literal(l)
    }
}

/// Properties whose values the causal operations keep in sync; setting them
/// by hand would break the edge reification.
const RESERVED_PROPERTIES: [&str; 7] = [
    cg::HAS_CAUSE,
    cg::HAS_EFFECT,
    cg::IS_CAUSING,
    cg::IS_AFFECTED_BY,
    cg::CREATED,
    cg::HAS_CONFIDENCE,
    cg::HAS_TIME_LAG,
];

impl Graph {
    /// Imports a Turtle (`.ttl`) or N-Triples (`.nt`) ontology file.
    ///
    /// Its triples are stored alongside the individuals so the merged model
    /// survives a reopen. Blank nodes are labelled from a hash of the file
    /// content, which makes importing the same file twice a no-op.
    pub fn import_ontology(&mut self, path: impl AsRef<Path>) -> Result<ImportReport> {
        let path = path.as_ref();
        self.check_writable()?;
        let text = std::fs::read_to_string(path).map_err(|source| OntologyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let parse_err = |source| OntologyError::Parse {
            path: path.to_path_buf(),
            source,
        };
        let (triples, skipped) = if path.extension().is_some_and(|e| e == "nt") {
            (parse_ntriples(&text).map_err(parse_err)?, 0)
        } else {
            let digest = Sha256::digest(text.as_bytes());
            let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
            let options = TurtleOptions {
                blank_prefix: format!("o{hex}b"),
                lenient_literals: true,
            };
            let doc = parse_turtle(&text, &options).map_err(parse_err)?;
            (doc.triples, doc.skipped)
        };
        let report = self.import_triples(&triples)?;
        let report = ImportReport {
            literals_skipped: skipped,
            ..report
        };
        log::info!("{}: {report}", path.display());
        Ok(report)
    }

    pub(crate) fn import_triples(&mut self, triples: &[Triple]) -> Result<ImportReport> {
        self.check_writable()?;
        let (model, mut report) = self.model().merged_with(triples)?;
        for t in triples {
            if !self.store().contains(t) {
                report.triples_added += 1;
                self.assert_triple(t.clone());
            }
        }
        self.flush()?;
        self.set_model(model);
        Ok(report)
    }

    /// Creates an individual of an ontology class, with optional property
    /// assertions checked against the declared domains and ranges.
    ///
    /// An existing individual that already has the class is returned
    /// unchanged.
    pub fn add_individual_of_type(&mut self, class: &str, name: &str, props: &[(String, PropValue)]) -> Result<String> {
        self.check_writable()?;
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        let class_iri = self.model().resolve_class(class)?;
        if self.model().is_subclass_of(&class_iri, &known(cg::CAUSAL_EDGE)) {
            return Err(OntologyError::Reserved(display_entity(&class_iri)).into());
        }
        let iri = individual_iri(name);
        if self.exists(name) {
            if self.types_of(&iri).contains(&class_iri) {
                return Ok(name.to_string());
            }
            return Err(Error::NameCollision {
                name: name.to_string(),
                existing: self.describe_types(name),
            });
        }

        let mut planned = Vec::new();
        let mut creator = None;
        for (prop, value) in props {
            let p = self.model().resolve_property(prop)?;
            if RESERVED_PROPERTIES.contains(&p.as_str()) {
                return Err(OntologyError::Reserved(display_entity(&p)).into());
            }
            self.check_assertion(&class_iri, name, &p, value)?;
            if p.as_str() == cg::HAS_CREATOR {
                let PropValue::Individual(c) = value else {
                    unreachable!("range checked")
                };
                self.check_creator(c, &[name])?;
                creator = Some(c.clone());
                continue;
            }
            let object: Term = match value {
                PropValue::Individual(n) => individual_iri(n).into(),
                PropValue::Literal(l) => l.clone().into(),
            };
            planned.push(Triple::from_iri(iri.clone(), p, object));
        }

        self.assert_triple(Triple::from_iri(iri.clone(), known(rdf::TYPE), class_iri));
        for t in planned {
            self.assert_triple(t);
        }
        if let Some(c) = creator {
            self.set_creator(&iri, &c);
        }
        self.flush()?;
        Ok(name.to_string())
    }

    fn check_assertion(&self, class: &Iri, name: &str, property: &Iri, value: &PropValue) -> Result<()> {
        let def = self
            .model()
            .property(property)
            .ok_or_else(|| OntologyError::UnknownProperty(property.as_str().into()))?;
        if let Some(domain) = &def.domain {
            if !self.model().is_subclass_of(class, domain) {
                return Err(OntologyError::DomainViolation {
                    property: display_entity(property),
                    domain: display_entity(domain),
                    individual: name.to_string(),
                }
                .into());
            }
        }
        let range_err = |range: String, value: String| -> Error {
            OntologyError::RangeViolation {
                property: display_entity(property),
                range,
                value,
            }
            .into()
        };
        match (def.kind, value) {
            (PropertyKind::Object, PropValue::Literal(l)) => {
                Err(range_err("individuals".into(), format!("literal {:?}", l.lexical())))
            }
            (PropertyKind::Data, PropValue::Individual(n)) => {
                Err(range_err("literals".into(), format!("individual {n:?}")))
            }
            (PropertyKind::Object, PropValue::Individual(n)) => {
                if n.is_empty() {
                    return Err(Error::EmptyName);
                }
                match &def.range {
                    // creators are created on first use
                    Some(PropertyRange::Class(_)) if property.as_str() == cg::HAS_CREATOR => Ok(()),
                    Some(PropertyRange::Class(range)) => {
                        if !self.exists(n) {
                            return Err(Error::UnknownIndividual(n.clone()));
                        }
                        if self.has_type(&individual_iri(n), range.as_str()) {
                            Ok(())
                        } else {
                            Err(range_err(display_entity(range), n.clone()))
                        }
                    }
                    _ if !self.exists(n) => Err(Error::UnknownIndividual(n.clone())),
                    _ => Ok(()),
                }
            }
            (PropertyKind::Data, PropValue::Literal(l)) => match &def.range {
                Some(PropertyRange::Datatype(dt)) if !literal_fits(l, *dt) => {
                    Err(range_err(dt.iri().to_string(), l.lexical().to_string()))
                }
                _ => Ok(()),
            },
        }
    }

    /// Looks up an individual by its exact name.
    pub fn get_entity_by_name(&self, name: &str) -> Option<Individual> {
        if name.is_empty() {
            return None;
        }
        let iri = individual_iri(name);
        let types = self.types_of(&iri);
        (!types.is_empty()).then(|| Individual {
            name: name.to_string(),
            iri,
            types,
        })
    }

    /// Adds `CausalNode` to the types of an existing individual, keeping the
    /// ones it already has.
    pub fn promote_to_causal_node(&mut self, name: &str) -> Result<()> {
        self.check_writable()?;
        if !self.exists(name) {
            return Err(Error::UnknownIndividual(name.to_string()));
        }
        if self.is_causal_edge(name) {
            return Err(Error::EdgeAsNode(name.to_string()));
        }
        if !self.is_causal_node(name) {
            let iri = individual_iri(name);
            self.assert_triple(Triple::from_iri(iri, known(rdf::TYPE), known(cg::CAUSAL_NODE)));
            self.flush()?;
            log::debug!("promoted {name} to a causal node");
        }
        Ok(())
    }
}

/// Decimal ranges accept integer literals; everything else must match.
fn literal_fits(l: &Literal, range: Datatype) -> bool {
    l.datatype() == range || (range == Datatype::Decimal && l.datatype() == Datatype::Integer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeOptions;
    use std::io::Write;

    const PIZZA: &str = r#"
@prefix : <http://www.co-ode.org/ontologies/pizza/pizza.owl#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

:Food a owl:Class .
:Pizza a owl:Class ; rdfs:subClassOf :Food ; rdfs:label "Pizza"@en .
:NamedPizza a owl:Class ; rdfs:subClassOf :Pizza .
:Margherita a owl:Class ; rdfs:subClassOf :NamedPizza ;
    rdfs:subClassOf [ a owl:Restriction ; owl:onProperty :hasTopping ; owl:someValuesFrom :MozzarellaTopping ] .
:PizzaTopping a owl:Class ; rdfs:subClassOf :Food .
:MozzarellaTopping a owl:Class ; rdfs:subClassOf :PizzaTopping .
:hasTopping a owl:ObjectProperty ; rdfs:domain :Pizza ; rdfs:range :PizzaTopping .
:hasCalories a owl:DatatypeProperty ; rdfs:domain :Food ; rdfs:range xsd:integer .
"#;

    fn pizza_file() -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".ttl").tempfile().unwrap();
        f.write_all(PIZZA.as_bytes()).unwrap();
        f
    }

    #[test]
    fn import_is_idempotent() {
        let f = pizza_file();
        let mut g = Graph::in_memory();
        let first = g.import_ontology(f.path()).unwrap();
        assert_eq!(first.classes_added, 6);
        assert_eq!(first.properties_added, 2);
        assert_eq!(first.literals_skipped, 1);
        let model = g.model().clone();
        let dump = g.to_ntriples();
        let second = g.import_ontology(f.path()).unwrap();
        assert!(
            second.is_empty()
                || second
                    == ImportReport {
                        literals_skipped: 1,
                        ..Default::default()
                    }
        );
        assert_eq!(g.model(), &model);
        assert_eq!(g.to_ntriples(), dump);
        assert!(g.classes().contains(&"pizza.Margherita".to_string()));
        assert!(g.classes().contains(&"causalgraph.CausalEdge".to_string()));
    }

    #[test]
    fn empty_import() {
        let f = tempfile::Builder::new().suffix(".ttl").tempfile().unwrap();
        let mut g = Graph::in_memory();
        assert!(g.import_ontology(f.path()).unwrap().is_empty());
        assert_eq!(g.model(), &crate::ontology::OntologyModel::builtin());
    }

    #[test]
    fn parse_errors_carry_position() {
        let mut f = tempfile::Builder::new().suffix(".ttl").tempfile().unwrap();
        f.write_all(b"@prefix : <http://x/> .\n:a :b \n").unwrap();
        let mut g = Graph::in_memory();
        let err = g.import_ontology(f.path()).unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn promotion_keeps_types() {
        let f = pizza_file();
        let mut g = Graph::in_memory();
        g.import_ontology(f.path()).unwrap();
        g.add_individual_of_type("Margherita", "my_margharita", &[]).unwrap();
        assert_eq!(
            g.get_entity_by_name("my_margharita").unwrap().type_names(),
            vec!["pizza.Margherita"]
        );
        g.add_causal_node(Some("happiness"), Default::default()).unwrap();
        g.add_causal_edge("my_margharita", "happiness", EdgeOptions::default())
            .unwrap();
        assert_eq!(
            g.get_entity_by_name("my_margharita").unwrap().type_names(),
            vec!["pizza.Margherita", "causalgraph.CausalNode"]
        );
        g.promote_to_causal_node("my_margharita").unwrap();
        assert_eq!(g.get_entity_by_name("my_margharita").unwrap().types.len(), 2);
        assert!(matches!(
            g.promote_to_causal_node("CausalEdge_1"),
            Err(Error::EdgeAsNode(_))
        ));
        // same name, same class: unchanged
        g.add_individual_of_type("pizza.Margherita", "my_margharita", &[])
            .unwrap();
        assert!(matches!(
            g.add_individual_of_type("Pizza", "my_margharita", &[]),
            Err(Error::NameCollision { .. })
        ));
    }

    #[test]
    fn domain_and_range_checks() {
        let f = pizza_file();
        let mut g = Graph::in_memory();
        g.import_ontology(f.path()).unwrap();
        g.add_individual_of_type("MozzarellaTopping", "mozz", &[]).unwrap();
        let topping = vec![("hasTopping".to_string(), PropValue::Individual("mozz".into()))];
        g.add_individual_of_type("Margherita", "m1", &topping).unwrap();
        assert!(g.store().contains(&Triple::from_iri(
            individual_iri("m1"),
            Iri::new("http://www.co-ode.org/ontologies/pizza/pizza.owl#hasTopping").unwrap(),
            individual_iri("mozz"),
        )));
        // mozz is not a pizza
        assert!(matches!(
            g.add_individual_of_type("MozzarellaTopping", "m2", &topping),
            Err(Error::Ontology(OntologyError::DomainViolation { .. }))
        ));
        let bad_range = vec![("hasTopping".to_string(), PropValue::Individual("m1".into()))];
        assert!(matches!(
            g.add_individual_of_type("Margherita", "m3", &bad_range),
            Err(Error::Ontology(OntologyError::RangeViolation { .. }))
        ));
        let cal = vec![("hasCalories".to_string(), PropValue::Literal(Literal::string("many")))];
        assert!(matches!(
            g.add_individual_of_type("Margherita", "m4", &cal),
            Err(Error::Ontology(OntologyError::RangeViolation { .. }))
        ));
        let cal = vec![("hasCalories".to_string(), PropValue::Literal(Literal::integer(800)))];
        g.add_individual_of_type("Margherita", "m4", &cal).unwrap();
        assert!(g.get_entity_by_name("m3").is_none());
    }

    #[test]
    fn creators_and_unknown_classes() {
        let mut g = Graph::in_memory();
        g.add_individual_of_type("Creator", "Alice", &[]).unwrap();
        assert_eq!(
            g.get_entity_by_name("Alice").unwrap().type_names(),
            vec!["causalgraph.Creator"]
        );
        assert!(matches!(
            g.add_individual_of_type("Nonexistent", "x", &[]),
            Err(Error::Ontology(OntologyError::UnknownClass(_)))
        ));
        assert!(matches!(
            g.add_individual_of_type("CausalEdge", "x", &[]),
            Err(Error::Ontology(OntologyError::Reserved(_)))
        ));
        let by = vec![("hasCreator".to_string(), PropValue::Individual("Alice".into()))];
        g.add_individual_of_type("Event", "Storm", &by).unwrap();
        assert!(g.is_causal_node("Storm"));
        assert!(g.get_entity_by_name("nope").is_none());
    }

    #[test]
    fn shared_store_refuses_imports() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.store");
        drop(Graph::open(&path).unwrap());
        let mut g = Graph::new(crate::graph::GraphConfig {
            exclusive: false,
            ..crate::graph::GraphConfig::at(&path)
        })
        .unwrap();
        let f = pizza_file();
        assert!(matches!(g.import_ontology(f.path()), Err(Error::ReadOnly(_))));
    }
}
