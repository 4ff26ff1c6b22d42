use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ontology::{display_entity, individual_name, PropertyKind, PropertyRange};
use crate::rdf::vocab::{cg, cgs, rdf};
use crate::rdf::{known, Term, Triple};

use super::Graph;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Broken invariants, one message each. Empty for any graph built
    /// through the public operations.
    pub violations: Vec<String>,
    /// Simple cycles among causal nodes, each starting at its smallest name.
    pub cycles: Vec<Vec<String>>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.cycles.is_empty()
    }
}

fn name_of(t: &Term) -> String {
    match t {
        Term::Iri(i) => individual_name(i).unwrap_or_else(|| i.as_str().to_string()),
        other => other.canonical(),
    }
}

impl Graph {
    /// Full sweep of the store: edge reification, mirrored properties,
    /// metadata bounds, ontology typing, and cycle detection.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let store = self.store();
        let edges = self.causal_edges();
        let edge_set: BTreeSet<&str> = edges.iter().map(String::as_str).collect();

        for name in &edges {
            let e = Term::Iri(crate::ontology::individual_iri(name));
            for (p, mirror) in [(cg::HAS_CAUSE, cg::IS_CAUSING), (cg::HAS_EFFECT, cg::IS_AFFECTED_BY)] {
                let ends = store.find(Some(&e), Some(&known(p)), None);
                if ends.len() != 1 {
                    violations.push(format!(
                        "edge {name} has {} {} values",
                        ends.len(),
                        display_entity(&known(p))
                    ));
                }
                for t in ends {
                    let end = name_of(&t.object);
                    if !self.is_causal_node(&end) {
                        violations.push(format!("edge {name} points at {end}, which is not a causal node"));
                    }
                    if let Term::Iri(n) = &t.object {
                        let back = Triple::from_iri(n.clone(), known(mirror), e.clone());
                        if !store.contains(&back) {
                            violations.push(format!("{end} lacks {} {name}", display_entity(&known(mirror))));
                        }
                    }
                }
            }
            let ends: Vec<_> = [cg::HAS_CAUSE, cg::HAS_EFFECT]
                .iter()
                .filter_map(|p| store.find(Some(&e), Some(&known(p)), None).into_iter().next())
                .map(|t| t.object)
                .collect();
            if ends.len() == 2 && ends[0] == ends[1] {
                violations.push(format!("edge {name} is a self-loop"));
            }
            for (p, check) in [
                (cg::HAS_CONFIDENCE, (|v: f64| v > 0.0 && v <= 1.0) as fn(f64) -> bool),
                (cg::HAS_TIME_LAG, |v: f64| v >= 0.0),
            ] {
                let values = store.find(Some(&e), Some(&known(p)), None);
                if values.len() > 1 {
                    violations.push(format!(
                        "edge {name} has {} {} values",
                        values.len(),
                        display_entity(&known(p))
                    ));
                }
                for t in values {
                    let ok = t
                        .object
                        .as_literal()
                        .and_then(|l| l.as_f64())
                        .is_some_and(|v| v.is_finite() && check(v));
                    if !ok {
                        violations.push(format!(
                            "edge {name} has out-of-range {} {}",
                            display_entity(&known(p)),
                            t.object.canonical()
                        ));
                    }
                }
            }
        }

        // every mirrored value must be backed by the edge
        for (mirror, p) in [(cg::IS_CAUSING, cg::HAS_CAUSE), (cg::IS_AFFECTED_BY, cg::HAS_EFFECT)] {
            for t in store.find(None, Some(&known(mirror)), None) {
                let back = Triple::new(t.object.clone(), Term::Iri(known(p)), t.subject.clone());
                if !back.is_ok_and(|b| store.contains(&b)) {
                    violations.push(format!(
                        "{} has {} {} without the matching {}",
                        name_of(&t.subject),
                        display_entity(&known(mirror)),
                        name_of(&t.object),
                        display_entity(&known(p))
                    ));
                }
            }
        }
        for t in store.find(None, Some(&known(cg::HAS_CAUSE)), None) {
            if !edge_set.contains(name_of(&t.subject).as_str()) {
                violations.push(format!("{} has a cause but is not a causal edge", name_of(&t.subject)));
            }
        }
        for t in store.find(None, Some(&known(cg::HAS_CREATOR)), None) {
            let back = Triple::new(t.object.clone(), Term::Iri(known(cg::CREATED)), t.subject.clone());
            if !back.is_ok_and(|b| store.contains(&b)) {
                violations.push(format!(
                    "creator of {} does not list it as created",
                    name_of(&t.subject)
                ));
            }
        }
        for t in store.find(None, Some(&known(cg::CREATED)), None) {
            let back = Triple::new(t.object.clone(), Term::Iri(known(cg::HAS_CREATOR)), t.subject.clone());
            if !back.is_ok_and(|b| store.contains(&b)) {
                violations.push(format!(
                    "{} created {} without a matching hasCreator",
                    name_of(&t.subject),
                    name_of(&t.object)
                ));
            }
        }

        self.check_typing(&mut violations);

        ValidationReport {
            violations,
            cycles: self.cycles(),
        }
    }

    /// Types, declared properties, domains and ranges of store individuals.
    fn check_typing(&self, violations: &mut Vec<String>) {
        let model = self.model();
        for t in self.store().triples() {
            let Term::Iri(s) = &t.subject else { continue };
            if !s.as_str().starts_with(cgs::NS) {
                continue;
            }
            let subject = name_of(&t.subject);
            if t.predicate.as_str() == rdf::TYPE {
                match &t.object {
                    Term::Iri(c) if model.has_class(c) => {}
                    other => violations.push(format!("{subject} is typed with unknown class {}", other.canonical())),
                }
                continue;
            }
            let Some(def) = model.property(&t.predicate) else {
                violations.push(format!("{subject} uses undeclared property {}", t.predicate.as_str()));
                continue;
            };
            let types = self.types_of(s);
            if let Some(domain) = &def.domain {
                if !model.any_is_a(&types, domain) {
                    violations.push(format!(
                        "{subject} uses {} outside its domain {}",
                        display_entity(&t.predicate),
                        display_entity(domain)
                    ));
                }
            }
            match (def.kind, &t.object) {
                (PropertyKind::Object, Term::Iri(o)) => {
                    if let Some(PropertyRange::Class(range)) = &def.range {
                        if !model.any_is_a(&self.types_of(o), range) {
                            violations.push(format!(
                                "{subject} {} {} is outside the range {}",
                                display_entity(&t.predicate),
                                name_of(&t.object),
                                display_entity(range)
                            ));
                        }
                    }
                }
                (PropertyKind::Data, Term::Literal(l)) => {
                    if let Some(PropertyRange::Datatype(dt)) = &def.range {
                        let fits = l.datatype() == *dt || (dt.is_numeric() && l.datatype().is_numeric());
                        if !fits {
                            violations.push(format!(
                                "{subject} {} {} is outside the range {}",
                                display_entity(&t.predicate),
                                t.object.canonical(),
                                dt.iri()
                            ));
                        }
                    }
                }
                (kind, o) => violations.push(format!(
                    "{subject} {} has a {} value {}",
                    display_entity(&t.predicate),
                    if kind == PropertyKind::Object {
                        "literal"
                    } else {
                        "non-literal"
                    },
                    o.canonical()
                )),
            }
        }
    }

    /// Cause to effect adjacency over causal nodes; parallel edges collapse.
    pub fn causal_adjacency(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut adj: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for n in self.causal_nodes() {
            adj.entry(n).or_default();
        }
        for rec in self.edge_records() {
            adj.entry(rec.cause).or_default().insert(rec.effect);
        }
        adj
    }

    pub fn cycles(&self) -> Vec<Vec<String>> {
        simple_cycles(&self.causal_adjacency())
    }
}

/// All simple cycles of a directed graph. Each cycle is rotated to start at
/// its smallest vertex; the list is sorted.
pub fn simple_cycles(adj: &BTreeMap<String, BTreeSet<String>>) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for start in adj.keys() {
        // only visit vertices greater than `start` so each cycle is found
        // once, from its smallest member
        let mut path = vec![start.as_str()];
        let mut on_path = BTreeSet::from([start.as_str()]);
        let mut stack: Vec<Vec<&str>> = vec![successors(adj, start)];
        while let Some(frame) = stack.last_mut() {
            match frame.pop() {
                Some(next) if next == start => {
                    out.push(path.iter().map(|s| s.to_string()).collect());
                }
                Some(next) if next > start.as_str() && !on_path.contains(next) => {
                    path.push(next);
                    on_path.insert(next);
                    stack.push(successors(adj, next));
                }
                Some(_) => {}
                None => {
                    stack.pop();
                    if let Some(v) = path.pop() {
                        on_path.remove(v);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn successors<'a>(adj: &'a BTreeMap<String, BTreeSet<String>>, v: &str) -> Vec<&'a str> {
    adj.get(v)
        .map(|s| s.iter().rev().map(String::as_str).collect())
        .unwrap_or_default()
}
