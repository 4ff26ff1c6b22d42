use std::fmt::Write as _;
use std::path::Path;

use super::write_file;
use crate::error::Result;
use crate::graph::{CausalEdgeRecord, Graph};
use crate::rdf::format_decimal;

/// GML string content: `&` and `"` become named entities, anything outside
/// printable ASCII a numeric character reference.
pub fn gml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            ' '..='~' => out.push(c),
            _ => {
                let _ = write!(out, "&#{};", c as u32);
            }
        }
    }
    out
}

/// XML text and attribute content. Control characters are written as
/// character references so they survive a parse-back.
pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 || c == '\u{7f}' => {
                let _ = write!(out, "&#x{:X};", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// Causal nodes and edges in lexicographic order, with node indices.
fn structure(g: &Graph) -> (Vec<String>, Vec<(usize, usize, CausalEdgeRecord)>) {
    let mut nodes = g.causal_nodes();
    nodes.sort();
    let mut records = g.edge_records();
    records.sort_by(|a, b| a.name.cmp(&b.name));
    let index = |n: &str| nodes.binary_search_by(|v| v.as_str().cmp(n)).ok();
    let edges = records
        .into_iter()
        .filter_map(|r| Some((index(&r.cause)?, index(&r.effect)?, r)))
        .collect();
    (nodes, edges)
}

impl Graph {
    /// Directed multigraph in GML. Node and edge attributes: `name`,
    /// `confidence`, `time_lag_s` and the first `comment`, when present.
    pub fn to_gml(&self) -> String {
        let (nodes, edges) = structure(self);
        let mut out = String::from("graph [\n  directed 1\n  multigraph 1\n");
        for (i, n) in nodes.iter().enumerate() {
            let _ = writeln!(out, "  node [\n    id {i}\n    label \"{}\"", gml_escape(n));
            if let Some(c) = self.comments(n).first() {
                let _ = writeln!(out, "    comment \"{}\"", gml_escape(c));
            }
            out.push_str("  ]\n");
        }
        for (s, t, r) in &edges {
            let _ = writeln!(
                out,
                "  edge [\n    source {s}\n    target {t}\n    name \"{}\"",
                gml_escape(&r.name)
            );
            if let Some(c) = r.confidence {
                let _ = writeln!(out, "    confidence {}", format_decimal(c));
            }
            if let Some(l) = r.time_lag_s {
                let _ = writeln!(out, "    time_lag_s {}", format_decimal(l));
            }
            if let Some(c) = r.comments.first() {
                let _ = writeln!(out, "    comment \"{}\"", gml_escape(c));
            }
            out.push_str("  ]\n");
        }
        out.push_str("]\n");
        out
    }

    /// Directed multigraph in GraphML, with all attribute keys declared
    /// ahead of the graph.
    pub fn to_graphml(&self) -> String {
        let (nodes, edges) = structure(self);
        let mut out = String::from(concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" ",
            "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" ",
            "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
            "  <key id=\"d0\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n",
            "  <key id=\"d1\" for=\"node\" attr.name=\"comment\" attr.type=\"string\"/>\n",
            "  <key id=\"d2\" for=\"edge\" attr.name=\"name\" attr.type=\"string\"/>\n",
            "  <key id=\"d3\" for=\"edge\" attr.name=\"confidence\" attr.type=\"double\"/>\n",
            "  <key id=\"d4\" for=\"edge\" attr.name=\"time_lag_s\" attr.type=\"double\"/>\n",
            "  <key id=\"d5\" for=\"edge\" attr.name=\"comment\" attr.type=\"string\"/>\n",
            "  <graph id=\"G\" edgedefault=\"directed\" parse.nodeids=\"canonical\" parse.edgeids=\"canonical\">\n",
        ));
        for (i, n) in nodes.iter().enumerate() {
            let _ = write!(
                out,
                "    <node id=\"n{i}\">\n      <data key=\"d0\">{}</data>\n",
                xml_escape(n)
            );
            if let Some(c) = self.comments(n).first() {
                let _ = writeln!(out, "      <data key=\"d1\">{}</data>", xml_escape(c));
            }
            out.push_str("    </node>\n");
        }
        for (k, (s, t, r)) in edges.iter().enumerate() {
            let _ = write!(
                out,
                "    <edge id=\"e{k}\" source=\"n{s}\" target=\"n{t}\">\n      <data key=\"d2\">{}</data>\n",
                xml_escape(&r.name)
            );
            if let Some(c) = r.confidence {
                let _ = writeln!(out, "      <data key=\"d3\">{}</data>", format_decimal(c));
            }
            if let Some(l) = r.time_lag_s {
                let _ = writeln!(out, "      <data key=\"d4\">{}</data>", format_decimal(l));
            }
            if let Some(c) = r.comments.first() {
                let _ = writeln!(out, "      <data key=\"d5\">{}</data>", xml_escape(c));
            }
            out.push_str("    </edge>\n");
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }

    pub fn export_gml(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_gml())
    }

    pub fn export_graphml(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_graphml())
    }
}
