use std::collections::{BTreeSet, HashSet};

use indexmap::IndexMap;
use serde::Serialize;

use super::OntologyError;
use crate::rdf::vocab::{cg, cgs, owl, rdf, rdfs, xsd};
use crate::rdf::{Datatype, Iri, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyClass {
    pub iri: Iri,
    pub parents: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyRange {
    Class(Iri),
    Datatype(Datatype),
    /// A datatype outside the supported set; not checked.
    Unchecked(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: Option<Iri>,
    pub range: Option<PropertyRange>,
}

/// Counts of what an import added to the model and the store.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ImportReport {
    pub classes_added: usize,
    pub properties_added: usize,
    pub subclass_axioms_added: usize,
    pub triples_added: usize,
    pub literals_skipped: usize,
}

impl ImportReport {
    pub fn is_empty(&self) -> bool {
        *self == ImportReport::default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl std::fmt::Display for ImportReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "imported {} classes, {} properties, {} subclass axioms, {} triples ({} literals skipped)",
            self.classes_added,
            self.properties_added,
            self.subclass_axioms_added,
            self.triples_added,
            self.literals_skipped
        )
    }
}

/// Merged class hierarchy and property declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyModel {
    classes: IndexMap<Iri, OntologyClass>,
    properties: IndexMap<Iri, PropertyDef>,
}

fn iri(s: &str) -> Iri {
    crate::rdf::known(s)
}

impl Default for OntologyModel {
    fn default() -> Self {
        Self::builtin()
    }
}

impl OntologyModel {
    /// The causal graph ontology on its own.
    pub fn builtin() -> Self {
        let mut model = OntologyModel {
            classes: IndexMap::new(),
            properties: IndexMap::new(),
        };
        for c in [cg::CAUSAL_EDGE, cg::CAUSAL_NODE, cg::CREATOR] {
            model.add_class(iri(c), None);
        }
        for c in [cg::EVENT, cg::STATE, cg::VARIABLE] {
            model.add_class(iri(c), Some(iri(cg::CAUSAL_NODE)));
        }
        let object = |p: &str, domain: Option<&str>, range: &str| PropertyDef {
            iri: iri(p),
            kind: PropertyKind::Object,
            domain: domain.map(iri),
            range: Some(PropertyRange::Class(iri(range))),
        };
        let data = |p: &str, domain: Option<&str>, range: Datatype| PropertyDef {
            iri: iri(p),
            kind: PropertyKind::Data,
            domain: domain.map(iri),
            range: Some(PropertyRange::Datatype(range)),
        };
        let defs = [
            object(cg::HAS_CAUSE, Some(cg::CAUSAL_EDGE), cg::CAUSAL_NODE),
            object(cg::HAS_EFFECT, Some(cg::CAUSAL_EDGE), cg::CAUSAL_NODE),
            object(cg::IS_CAUSING, Some(cg::CAUSAL_NODE), cg::CAUSAL_EDGE),
            object(cg::IS_AFFECTED_BY, Some(cg::CAUSAL_NODE), cg::CAUSAL_EDGE),
            object(cg::HAS_CREATOR, None, cg::CREATOR),
            PropertyDef {
                iri: iri(cg::CREATED),
                kind: PropertyKind::Object,
                domain: Some(iri(cg::CREATOR)),
                range: None,
            },
            data(cg::HAS_CONFIDENCE, Some(cg::CAUSAL_EDGE), Datatype::Decimal),
            data(cg::HAS_TIME_LAG, Some(cg::CAUSAL_EDGE), Datatype::Decimal),
            data(rdfs::COMMENT, None, Datatype::String),
        ];
        for d in defs {
            model.properties.insert(d.iri.clone(), d);
        }
        model
    }

    fn add_class(&mut self, class: Iri, parent: Option<Iri>) {
        let entry = self.classes.entry(class.clone()).or_insert_with(|| OntologyClass {
            iri: class,
            parents: BTreeSet::new(),
        });
        entry.parents.extend(parent);
    }

    pub fn class(&self, iri: &Iri) -> Option<&OntologyClass> {
        self.classes.get(iri)
    }

    pub fn has_class(&self, iri: &Iri) -> bool {
        self.classes.contains_key(iri)
    }

    pub fn property(&self, iri: &Iri) -> Option<&PropertyDef> {
        self.properties.get(iri)
    }

    /// Classes in declaration order, built-ins first.
    pub fn classes(&self) -> impl Iterator<Item = &OntologyClass> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    /// Reflexive, transitive subclass test. Everything is an `owl:Thing`.
    pub fn is_subclass_of(&self, class: &Iri, ancestor: &Iri) -> bool {
        if class == ancestor || ancestor.as_str() == owl::THING {
            return true;
        }
        let mut seen = HashSet::new();
        let mut stack = vec![class];
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            if let Some(def) = self.classes.get(c) {
                for p in &def.parents {
                    if p == ancestor {
                        return true;
                    }
                    stack.push(p);
                }
            }
        }
        false
    }

    /// True when any of `types` is `class` or one of its subclasses.
    pub fn any_is_a<'a>(&self, types: impl IntoIterator<Item = &'a Iri>, class: &Iri) -> bool {
        types.into_iter().any(|t| self.is_subclass_of(t, class))
    }

    /// Resolves a class reference given as a full IRI, a display name such
    /// as `pizza.Margherita`, or a bare local name.
    pub fn resolve_class(&self, name: &str) -> Result<Iri, OntologyError> {
        resolve(name, self.classes.keys(), |n| OntologyError::UnknownClass(n.into()))
    }

    pub fn resolve_property(&self, name: &str) -> Result<Iri, OntologyError> {
        resolve(name, self.properties.keys(), |n| {
            OntologyError::UnknownProperty(n.into())
        })
    }

    /// Builds the model that results from merging ontology `triples`,
    /// together with counts of what is new. `self` is left untouched.
    pub fn merged_with(&self, triples: &[Triple]) -> Result<(OntologyModel, ImportReport), OntologyError> {
        let mut next = self.clone();
        let mut report = ImportReport::default();
        let ty = iri(rdf::TYPE);
        let sub = iri(rdfs::SUB_CLASS_OF);
        let domain = iri(rdfs::DOMAIN);
        let range = iri(rdfs::RANGE);

        for t in triples {
            if let Term::Iri(s) = &t.subject {
                if s.as_str().starts_with(cg::NS) {
                    return Err(OntologyError::BuiltinRedefinition(s.as_str().into()));
                }
                if s.as_str().starts_with(cgs::NS) {
                    return Err(OntologyError::StoreNamespace(s.as_str().into()));
                }
            }
        }

        // declarations first so that domain/range statements find them
        for t in triples {
            let (Term::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) else {
                continue;
            };
            if t.predicate == ty {
                match o.as_str() {
                    owl::CLASS | rdfs::CLASS => next.add_class(s.clone(), None),
                    owl::OBJECT_PROPERTY => next.declare_property(s, PropertyKind::Object),
                    owl::DATATYPE_PROPERTY => next.declare_property(s, PropertyKind::Data),
                    _ => {}
                }
            } else if t.predicate == sub {
                next.add_class(o.clone(), None);
                next.add_class(s.clone(), Some(o.clone()));
            }
        }
        for t in triples {
            let (Term::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) else {
                continue;
            };
            let Some(def) = next.properties.get_mut(s) else {
                continue;
            };
            if t.predicate == domain {
                def.domain = Some(o.clone());
            } else if t.predicate == range {
                def.range = Some(match (def.kind, Datatype::from_iri(o.as_str())) {
                    (PropertyKind::Data, Some(dt)) => PropertyRange::Datatype(dt),
                    (PropertyKind::Data, None) => PropertyRange::Unchecked(o.clone()),
                    (PropertyKind::Object, _) if o.as_str().starts_with(xsd::NS) => PropertyRange::Unchecked(o.clone()),
                    (PropertyKind::Object, _) => PropertyRange::Class(o.clone()),
                });
            }
        }

        if let Some(cycle) = next.find_cycle() {
            return Err(OntologyError::SubclassCycle(cycle));
        }
        report.classes_added = next.classes.len() - self.classes.len();
        report.properties_added = next.properties.len() - self.properties.len();
        let edges = |m: &OntologyModel| m.classes.values().map(|c| c.parents.len()).sum::<usize>();
        report.subclass_axioms_added = edges(&next) - edges(self);
        Ok((next, report))
    }

    fn declare_property(&mut self, p: &Iri, kind: PropertyKind) {
        self.properties.entry(p.clone()).or_insert_with(|| PropertyDef {
            iri: p.clone(),
            kind,
            domain: None,
            range: None,
        });
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: IndexMap<&Iri, Mark> = IndexMap::new();
        for start in self.classes.keys() {
            if marks.contains_key(start) {
                continue;
            }
            // iterative DFS keeping the current path
            let mut path: Vec<(&Iri, Vec<&Iri>)> = Vec::new();
            marks.insert(start, Mark::Open);
            path.push((start, self.parents_of(start)));
            while let Some((node, pending)) = path.last_mut() {
                let node = *node;
                match pending.pop() {
                    Some(next) => match marks.get(next) {
                        Some(Mark::Open) => {
                            let from = path.iter().position(|(n, _)| *n == next).unwrap_or(0);
                            let mut cycle: Vec<String> =
                                path[from..].iter().map(|(n, _)| n.as_str().to_string()).collect();
                            cycle.push(next.as_str().to_string());
                            return Some(cycle);
                        }
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(next, Mark::Open);
                            path.push((next, self.parents_of(next)));
                        }
                    },
                    None => {
                        marks.insert(node, Mark::Done);
                        path.pop();
                    }
                }
            }
        }
        None
    }

    fn parents_of(&self, class: &Iri) -> Vec<&Iri> {
        self.classes
            .get(class)
            .map(|c| c.parents.iter().collect())
            .unwrap_or_default()
    }
}

fn resolve<'a>(
    name: &str,
    candidates: impl Iterator<Item = &'a Iri>,
    unknown: impl Fn(&str) -> OntologyError,
) -> Result<Iri, OntologyError> {
    let mut by_display = Vec::new();
    let mut by_local = Vec::new();
    for c in candidates {
        if c.as_str() == name {
            return Ok(c.clone());
        }
        if display_entity(c) == name {
            by_display.push(c);
        }
        if c.local_name() == name {
            by_local.push(c);
        }
    }
    let hits = if by_display.is_empty() { by_local } else { by_display };
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(unknown(name)),
        many => Err(OntologyError::Ambiguous {
            name: name.to_string(),
            candidates: many.iter().map(|i| display_entity(i)).collect(),
        }),
    }
}

/// Short label of an ontology namespace: the last path segment of the
/// namespace IRI with any file extension removed (`.../pizza.owl#` gives
/// `pizza`).
pub fn namespace_label(ns: &str) -> String {
    let trimmed = ns.trim_end_matches(['#', '/']);
    let last = trimmed.rsplit('/').next().unwrap_or(trimmed);
    let stem = match last.rsplit_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem,
        _ => last,
    };
    stem.to_string()
}

/// Display form of a class or property IRI, e.g. `causalgraph.CausalNode`
/// or `pizza.Margherita`.
pub fn display_entity(iri: &Iri) -> String {
    let (ns, local) = iri.split();
    if ns.is_empty() {
        return local.to_string();
    }
    format!("{}.{}", namespace_label(ns), local)
}
