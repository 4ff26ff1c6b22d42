//! Renderings for people: Graphviz DOT text and a self-contained HTML page.

mod html;

use std::fmt::Write as _;
use std::path::PathBuf;

pub use html::{extract_data_island, VIEWER_ASSET};

use crate::error::Result;
use crate::graph::Graph;
use crate::interchange::write_file;
use crate::rdf::format_decimal;

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Output directory; `None` renders to a string only (DOT) or to the
    /// current directory (HTML).
    pub destination: Option<PathBuf>,
    /// File name; the format's extension is appended when missing.
    pub filename: String,
    /// Edge labels and hover tooltips.
    pub include_metadata: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            destination: None,
            filename: "causal_graph".into(),
            include_metadata: true,
        }
    }
}

impl RenderOptions {
    pub fn to_file(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let filename = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_else(|| "causal_graph".into());
        let destination = Some(match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        });
        RenderOptions {
            destination,
            filename,
            ..Default::default()
        }
    }

    pub(crate) fn path_with_extension(&self, ext: &str) -> PathBuf {
        let dir = self.destination.clone().unwrap_or_else(|| PathBuf::from("."));
        let suffix = format!(".{ext}");
        if self.filename.ends_with(&suffix) {
            dir.join(&self.filename)
        } else {
            dir.join(format!("{}{suffix}", self.filename))
        }
    }
}

/// A DOT quoted string.
pub fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// `c=0.9, lag=2.0s`, either half alone, or `None` without metadata.
pub fn edge_label(confidence: Option<f64>, time_lag_s: Option<f64>) -> Option<String> {
    match (confidence, time_lag_s) {
        (Some(c), Some(l)) => Some(format!("c={}, lag={}s", format_decimal(c), format_decimal(l))),
        (Some(c), None) => Some(format!("c={}", format_decimal(c))),
        (None, Some(l)) => Some(format!("lag={}s", format_decimal(l))),
        (None, None) => None,
    }
}

impl Graph {
    /// The causal structure as a `digraph`, nodes and edges in lexicographic
    /// order. Written to the destination when one is set.
    pub fn emit_dot(&self, options: &RenderOptions) -> Result<String> {
        let mut nodes = self.causal_nodes();
        nodes.sort();
        let mut edges = self.edge_records();
        edges.sort_by(|a, b| (&a.cause, &a.effect, &a.name).cmp(&(&b.cause, &b.effect, &b.name)));

        let mut out = String::from("digraph causal_graph {\n  node [shape=ellipse];\n");
        for n in &nodes {
            let _ = write!(out, "  {} [label={}", dot_quote(n), dot_quote(n));
            if options.include_metadata {
                let types = self.get_entity_by_name(n).map(|i| i.type_names()).unwrap_or_default();
                let mut tip = types.join(", ");
                for c in self.comments(n) {
                    tip.push('\n');
                    tip.push_str(&c);
                }
                let _ = write!(out, ", tooltip={}", dot_quote(&tip));
            }
            out.push_str("];\n");
        }
        for e in &edges {
            let _ = write!(out, "  {} -> {}", dot_quote(&e.cause), dot_quote(&e.effect));
            if options.include_metadata {
                let mut attrs = Vec::new();
                if let Some(label) = edge_label(e.confidence, e.time_lag_s) {
                    attrs.push(format!("label={}", dot_quote(&label)));
                }
                let mut tip = e.name.clone();
                for c in &e.comments {
                    tip.push('\n');
                    tip.push_str(c);
                }
                attrs.push(format!("tooltip={}", dot_quote(&tip)));
                let _ = write!(out, " [{}]", attrs.join(", "));
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
        if options.destination.is_some() {
            write_file(&options.path_with_extension("dot"), &out)?;
        }
        Ok(out)
    }
}
