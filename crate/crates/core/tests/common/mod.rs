//! Shared helpers for the integration tests: random graph generation and
//! reference implementations that share no code with the library.

#![allow(dead_code)]

pub mod crash;
pub mod formats;
pub mod oracle;

use std::collections::{HashMap, HashSet};

use causalkg::graph::{EdgeOptions, Graph, NodeOptions};
use causalkg::rdf::vocab::{cg, rdf};
use causalkg::rdf::{Iri, Term, Triple};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Characters that stress every escaping layer.
const AWKWARD: &[&str] = &[
    "->", " ", "\"", "<", ">", "&", "'", "\\", "é", "日本", "\n", "%", "#", "\t", "}",
];

pub fn awkward_text(r: &mut StdRng, stem: &str) -> String {
    let mut s = stem.to_string();
    for _ in 0..r.gen_range(0..3) {
        s.push_str(AWKWARD.choose(r).unwrap());
    }
    s
}

pub fn random_confidence(r: &mut StdRng) -> f64 {
    if r.gen_bool(0.2) {
        1.0
    } else {
        r.gen_range(1..=1000) as f64 / 1000.0
    }
}

/// Arbitrary non-negative lag, usually not a whole number of steps.
pub fn random_lag(r: &mut StdRng) -> f64 {
    match r.gen_range(0..4) {
        0 => 0.0,
        1 => r.gen_range(0..20) as f64,
        _ => r.gen_range(0.0..100.0),
    }
}

/// One generated mutation; applying the list in order rebuilds the graph.
#[derive(Debug, Clone)]
pub enum Step {
    Node {
        name: String,
        options: NodeOptions,
    },
    Edge {
        cause: String,
        effect: String,
        options: EdgeOptions,
    },
}

impl Step {
    pub fn apply(&self, g: &mut Graph) {
        match self {
            Step::Node { name, options } => {
                g.add_causal_node(Some(name), options.clone()).unwrap();
            }
            Step::Edge { cause, effect, options } => {
                g.add_causal_edge(cause, effect, options.clone()).unwrap();
            }
        }
    }
}

/// A random causal graph script with at most `max_nodes` nodes and
/// `max_edges` edges, random metadata, creators and awkward names.
pub fn random_steps(r: &mut StdRng, max_nodes: usize, max_edges: usize) -> Vec<Step> {
    let n_nodes = r.gen_range(2..=max_nodes);
    let n_edges = r.gen_range(0..=max_edges);
    let nodes: Vec<String> = (0..n_nodes).map(|i| awkward_text(r, &format!("N{i}"))).collect();
    let creators: Vec<String> = (0..3).map(|i| awkward_text(r, &format!("C{i}"))).collect();
    let mut steps = Vec::new();
    for name in &nodes {
        // some nodes only appear as edge endpoints
        if r.gen_bool(0.7) {
            let comments = (0..r.gen_range(0..3))
                .map(|k| awkward_text(r, &format!("note{k}")))
                .collect();
            let creator = r.gen_bool(0.3).then(|| creators.choose(r).unwrap().clone());
            steps.push(Step::Node {
                name: name.clone(),
                options: NodeOptions { comments, creator },
            });
        }
    }
    for k in 0..n_edges {
        let cause = nodes.choose(r).unwrap().clone();
        let effect = loop {
            let e = nodes.choose(r).unwrap();
            if *e != cause {
                break e.clone();
            }
        };
        let options = EdgeOptions {
            name: r.gen_bool(0.5).then(|| awkward_text(r, &format!("E{k}"))),
            confidence: r.gen_bool(0.7).then(|| random_confidence(r)),
            time_lag_s: r.gen_bool(0.6).then(|| random_lag(r)),
            comments: (0..r.gen_range(0..2))
                .map(|j| awkward_text(r, &format!("why{j}")))
                .collect(),
            creator: r.gen_bool(0.4).then(|| creators.choose(r).unwrap().clone()),
            force_create: true,
        };
        steps.push(Step::Edge { cause, effect, options });
    }
    steps
}

pub fn build(steps: &[Step]) -> Graph {
    let mut g = Graph::in_memory();
    for s in steps {
        s.apply(&mut g);
    }
    g
}

pub fn random_graph(seed: u64, max_nodes: usize, max_edges: usize) -> Graph {
    build(&random_steps(&mut rng(seed), max_nodes, max_edges))
}

fn iri(s: &str) -> Term {
    Term::Iri(Iri::new(s).unwrap())
}

/// Checks the reified edge invariant straight from the triples: every
/// CausalEdge has exactly one cause and one effect, distinct, and the
/// `isCausing`/`isAffectedBy` mirrors hold in both directions.
pub fn reification_violations(g: &Graph) -> Vec<String> {
    let triples: Vec<Triple> = g.store().triples();
    let set: HashSet<(&Term, &str, &Term)> = triples
        .iter()
        .map(|t| (&t.subject, t.predicate.as_str(), &t.object))
        .collect();
    let mut by_subject: HashMap<(&Term, &str), Vec<&Term>> = HashMap::new();
    for t in &triples {
        by_subject
            .entry((&t.subject, t.predicate.as_str()))
            .or_default()
            .push(&t.object);
    }
    let objects = |s: &Term, p: &'static str| by_subject.get(&(s, p)).cloned().unwrap_or_default();
    let edge_type = iri(cg::CAUSAL_EDGE);
    let mut out = Vec::new();
    for t in triples
        .iter()
        .filter(|t| t.predicate.as_str() == rdf::TYPE && t.object == edge_type)
    {
        let e = &t.subject;
        let causes = objects(e, cg::HAS_CAUSE);
        let effects = objects(e, cg::HAS_EFFECT);
        if causes.len() != 1 || effects.len() != 1 {
            out.push(format!("{e}: {} causes, {} effects", causes.len(), effects.len()));
            continue;
        }
        if causes[0] == effects[0] {
            out.push(format!("{e}: self-loop"));
        }
        if !set.contains(&(causes[0], cg::IS_CAUSING, e)) {
            out.push(format!("{e}: missing isCausing mirror"));
        }
        if !set.contains(&(effects[0], cg::IS_AFFECTED_BY, e)) {
            out.push(format!("{e}: missing isAffectedBy mirror"));
        }
    }
    for t in &triples {
        let back = match t.predicate.as_str() {
            cg::IS_CAUSING => cg::HAS_CAUSE,
            cg::IS_AFFECTED_BY => cg::HAS_EFFECT,
            _ => continue,
        };
        if !set.contains(&(&t.object, back, &t.subject)) {
            out.push(format!("dangling {t}"));
        }
    }
    out
}

/// One random mutation on an existing graph: upsert, new edge, or one of
/// the removal operations. Errors that the API documents (for example an
/// unknown node) are allowed; anything else panics.
pub fn random_mutation(r: &mut StdRng, g: &mut Graph) -> &'static str {
    let nodes = g.causal_nodes();
    let edges = g.causal_edges();
    let pick = |r: &mut StdRng, v: &[String]| v.choose(r).cloned();
    match r.gen_range(0..7) {
        0 => {
            let stem = format!("M{}", r.gen_range(0..1000));
            let name = awkward_text(r, &stem);
            g.add_causal_node(Some(&name), NodeOptions::default()).unwrap();
            "add node"
        }
        1 | 2 => {
            let (Some(c), Some(e)) = (pick(r, &nodes), pick(r, &nodes)) else {
                return "noop";
            };
            if c == e {
                return "noop";
            }
            let options = EdgeOptions {
                confidence: r.gen_bool(0.5).then(|| random_confidence(r)),
                time_lag_s: r.gen_bool(0.5).then(|| random_lag(r)),
                comments: vec![awkward_text(r, "m")],
                ..Default::default()
            };
            g.add_causal_edge(&c, &e, options).unwrap();
            "add edge"
        }
        3 => {
            // upsert an existing edge's metadata
            let Some(name) = pick(r, &edges) else { return "noop" };
            let rec = g.get_edge_record(&name).unwrap();
            let options = EdgeOptions {
                confidence: Some(random_confidence(r)),
                time_lag_s: Some(random_lag(r)),
                ..EdgeOptions::named(name)
            };
            g.add_causal_edge(&rec.cause, &rec.effect, options).unwrap();
            "upsert edge"
        }
        4 => {
            let Some(n) = pick(r, &nodes) else { return "noop" };
            assert!(g.remove_causal_node(&n).unwrap());
            "remove node"
        }
        5 => {
            let Some(e) = pick(r, &edges) else { return "noop" };
            assert!(g.remove_causal_edge_by_name(&e).unwrap());
            "remove edge"
        }
        _ => {
            let (Some(c), Some(e)) = (pick(r, &nodes), pick(r, &nodes)) else {
                return "noop";
            };
            if r.gen_bool(0.5) {
                g.remove_causal_edges_between(&c, &e).unwrap();
            } else {
                g.remove_causal_edges_of_node(&c).unwrap();
            }
            "remove edges"
        }
    }
}

/// Builds a random graph and then mutates it, checking the reification
/// invariant after every single step and the full validation report every
/// tenth step and at the end. Returns the number of steps checked.
pub fn sweep_reification(seed: u64, mutations: usize) -> Result<usize, String> {
    let mut r = rng(seed);
    let steps = random_steps(&mut r, 30, 60);
    let mut g = Graph::in_memory();
    let mut checked = 0;
    let mut check = |g: &Graph, what: &str| -> Result<(), String> {
        checked += 1;
        let v = reification_violations(g);
        if !v.is_empty() {
            return Err(format!("seed {seed}, after {what}: {v:?}"));
        }
        if checked % 10 == 0 {
            let report = g.validate();
            if !report.violations.is_empty() {
                return Err(format!("seed {seed}, after {what}: {:?}", report.violations));
            }
        }
        Ok(())
    };
    for s in &steps {
        s.apply(&mut g);
        check(&g, "build step")?;
    }
    for _ in 0..mutations {
        let what = random_mutation(&mut r, &mut g);
        check(&g, what)?;
    }
    let report = g.validate();
    if !report.violations.is_empty() {
        return Err(format!("seed {seed}, at the end: {:?}", report.violations));
    }
    Ok(checked)
}

/// Changes only comments and creators: every edge gets an extra comment and
/// half of them a new creator, with confidence and lag passed through.
pub fn touch_annotations(r: &mut StdRng, g: &mut Graph) {
    for name in g.causal_edges() {
        let rec = g.get_edge_record(&name).unwrap();
        let options = EdgeOptions {
            confidence: rec.confidence,
            time_lag_s: rec.time_lag_s,
            comments: vec![awkward_text(r, "later")],
            creator: r.gen_bool(0.5).then(|| awkward_text(r, "Reviewer")),
            ..EdgeOptions::named(name)
        };
        g.add_causal_edge(&rec.cause, &rec.effect, options).unwrap();
    }
}
