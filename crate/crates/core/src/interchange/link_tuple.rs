use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::property_graph::prepare_new_store;
use super::{to_html_safe_json, write_file};
use crate::error::{Error, Result};
use crate::graph::{EdgeOptions, Graph, GraphConfig, NodeOptions};
use crate::rdf::vocab::cg;

pub const DEFAULT_STEP_S: f64 = 1.0;

/// Lossy causal-discovery view of a graph: structure, confidences and lags
/// in whole time steps. Keys serialize in alphabetical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkTupleDoc {
    /// Confidence written for edges that have none.
    pub absent_confidence: f64,
    /// Lag written for edges that have none.
    pub absent_lag_steps: u64,
    pub links: Vec<Link>,
    /// Length of one lag step in seconds.
    pub step_s: f64,
    /// Node names in lexicographic order; links refer to them by index.
    pub variables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub cause: usize,
    pub confidence: f64,
    pub effect: usize,
    pub lag_steps: u64,
}

impl Default for LinkTupleDoc {
    fn default() -> Self {
        LinkTupleDoc {
            absent_confidence: 1.0,
            absent_lag_steps: 0,
            links: Vec::new(),
            step_s: DEFAULT_STEP_S,
            variables: Vec::new(),
        }
    }
}

impl LinkTupleDoc {
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

    fn check(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidDocument(m));
        if !(self.step_s.is_finite() && self.step_s > 0.0) {
            return Err(Error::InvalidStep(self.step_s));
        }
        crate::graph::check_confidence(self.absent_confidence)?;
        let mut seen = HashSet::new();
        for v in &self.variables {
            if v.is_empty() {
                return invalid("empty variable name".into());
            }
            if !seen.insert(v) {
                return invalid(format!("duplicate variable {v:?}"));
            }
        }
        for (i, l) in self.links.iter().enumerate() {
            let n = self.variables.len();
            if l.cause >= n || l.effect >= n {
                return invalid(format!("link {i} refers to a variable index outside 0..{n}"));
            }
            if l.cause == l.effect {
                return Err(Error::SelfLoop(self.variables[l.cause].clone()));
            }
            crate::graph::check_confidence(l.confidence)?;
            crate::graph::check_time_lag(l.lag_steps as f64 * self.step_s)?;
        }
        Ok(())
    }
}

/// An exported link-tuple document plus rounding and skipping notes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTupleExport {
    pub doc: LinkTupleDoc,
    pub warnings: Vec<String>,
}

impl Graph {
    /// Projects the graph onto causal nodes and edges. Lags are rounded to
    /// the nearest whole step (halves away from zero); comments, creators
    /// and extra types are dropped.
    pub fn export_link_tuple(&self, step_s: Option<f64>) -> Result<LinkTupleExport> {
        let step_s = step_s.unwrap_or(DEFAULT_STEP_S);
        if !(step_s.is_finite() && step_s > 0.0) {
            return Err(Error::InvalidStep(step_s));
        }
        let mut warnings = Vec::new();
        for ind in self.individuals() {
            let kept = self.is_causal_node(&ind.name)
                || self.is_causal_edge(&ind.name)
                || self.model().any_is_a(&ind.types, &crate::rdf::known(cg::CREATOR));
            if !kept {
                warnings.push(format!("skipped non-causal individual {:?}", ind.name));
            }
        }
        let variables: Vec<String> = self
            .causal_nodes()
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |n: &str| variables.binary_search_by(|v| v.as_str().cmp(n)).ok();
        let mut links = Vec::new();
        let mut records = self.edge_records();
        records.sort_by(|a, b| a.name.cmp(&b.name));
        for rec in records {
            let (Some(cause), Some(effect)) = (index(&rec.cause), index(&rec.effect)) else {
                warnings.push(format!("skipped edge {:?} with a non-causal endpoint", rec.name));
                continue;
            };
            let lag_steps = match rec.time_lag_s {
                None => 0,
                Some(lag) => {
                    let steps = (lag / step_s).round();
                    let residual = (steps * step_s - lag).abs();
                    if residual > 1e-9 * lag.max(step_s) {
                        warnings.push(format!(
                            "edge {:?}: lag {lag} s is not a whole number of {step_s} s steps, rounded to {steps}",
                            rec.name
                        ));
                    }
                    steps as u64
                }
            };
            links.push(Link {
                cause,
                confidence: rec.confidence.unwrap_or(1.0),
                effect,
                lag_steps,
            });
        }
        links.sort_by(|a, b| {
            (a.cause, a.effect, a.lag_steps)
                .cmp(&(b.cause, b.effect, b.lag_steps))
                .then(a.confidence.total_cmp(&b.confidence))
        });
        Ok(LinkTupleExport {
            doc: LinkTupleDoc {
                links,
                step_s,
                variables,
                ..LinkTupleDoc::default()
            },
            warnings,
        })
    }

    pub fn export_link_tuple_to(&self, path: impl AsRef<Path>, step_s: Option<f64>) -> Result<Vec<String>> {
        let export = self.export_link_tuple(step_s)?;
        write_file(path.as_ref(), &export.doc.to_json())?;
        Ok(export.warnings)
    }
}

/// Adds the variables and links of `doc` to `graph`. Edges are named
/// `<cause>-><effect>_<k>` with the smallest free `k`.
pub fn fill_link_tuple(graph: &mut Graph, doc: &LinkTupleDoc) -> Result<()> {
    graph.check_writable()?;
    doc.check()?;
    for v in &doc.variables {
        if graph.get_entity_by_name(v).is_some() && !graph.is_causal_node(v) {
            return Err(Error::NameCollision {
                name: v.clone(),
                existing: graph.get_entity_by_name(v).unwrap().type_names().join(", "),
            });
        }
    }
    graph.batched(|g| {
        for v in &doc.variables {
            g.add_causal_node(Some(v), NodeOptions::default())?;
        }
        for l in &doc.links {
            let (cause, effect) = (&doc.variables[l.cause], &doc.variables[l.effect]);
            let name = (1..)
                .map(|k| format!("{cause}->{effect}_{k}"))
                .find(|n| g.get_entity_by_name(n).is_none())
                .expect("unbounded range");
            let opts = EdgeOptions {
                confidence: Some(l.confidence),
                time_lag_s: Some(l.lag_steps as f64 * doc.step_s),
                ..EdgeOptions::named(name)
            };
            g.add_causal_edge(cause, effect, opts)?;
        }
        Ok(())
    })
}

/// Creates the graph of `doc` in a new store file.
pub fn load_link_tuple(doc: &LinkTupleDoc, path: impl AsRef<Path>, overwrite: bool) -> Result<Graph> {
    doc.check()?;
    let path = path.as_ref();
    prepare_new_store(path, overwrite)?;
    let mut g = Graph::new(GraphConfig::at(path))?;
    fill_link_tuple(&mut g, doc)?;
    Ok(g)
}
