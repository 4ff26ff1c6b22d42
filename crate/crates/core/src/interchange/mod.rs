//! Graph interchange: a lossless property-graph document, a lossy
//! link-tuple document for causal discovery tools, GML, GraphML and the
//! canonical N-Triples dump.

mod formats;
mod link_tuple;
mod property_graph;

use std::path::Path;

pub use formats::{gml_escape, xml_escape};
pub use link_tuple::{fill_link_tuple, load_link_tuple, Link, LinkTupleDoc, LinkTupleExport, DEFAULT_STEP_S};
pub use property_graph::{
    fill_property_graph, load_property_graph, PgAssertion, PgEdge, PgEdgeProps, PgNode, PgNodeProps, PropertyGraphDoc,
};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Pretty JSON with `<`, `>` and `&` escaped, so the text can be embedded in
/// an HTML `<script>` element verbatim. These characters only occur inside
/// JSON strings, where `\u00XX` escapes are equivalent.
pub(crate) fn to_html_safe_json<T: serde::Serialize>(value: &T) -> String {
    let raw = serde_json::to_string_pretty(value).expect("documents serialize");
    let mut out = String::with_capacity(raw.len() + 16);
    for c in raw.chars() {
        match c {
            '<' => out.push_str("\\u003c"),
            '>' => out.push_str("\\u003e"),
            '&' => out.push_str("\\u0026"),
            c => out.push(c),
        }
    }
    out.push('\n');
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(Error::io(path))
}

impl Graph {
    /// Writes the canonical N-Triples dump of the whole store.
    pub fn export_ntriples(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_ntriples())
    }
}
