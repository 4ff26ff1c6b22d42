use std::fmt::Write as _;
use std::path::PathBuf;

use super::{edge_label, RenderOptions};
use crate::error::Result;
use crate::graph::Graph;
use crate::interchange::write_file;

/// The interactive viewer, when its built asset was present at compile time.
#[cfg(has_viewer_asset)]
pub const VIEWER_ASSET: Option<&str> = Some(include_str!("../../assets/viewer.min.js"));
#[cfg(not(has_viewer_asset))]
pub const VIEWER_ASSET: Option<&str> = None;

/// Draws the data island as an SVG circle layout in the browser.
const FALLBACK_SCRIPT: &str = include_str!("fallback.js");

const ISLAND_OPEN: &str = "<script type=\"application/json\" id=\"cg-data\">";

/// Escapes text for HTML element content. `>` is legal there and kept, so
/// names such as `Rain->Wet` stay readable in the source.
fn html_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;")
}

/// Returns the JSON text embedded in a page written by `emit_html`.
pub fn extract_data_island(html: &str) -> Option<&str> {
    let start = html.find(ISLAND_OPEN)? + ISLAND_OPEN.len();
    let len = html[start..].find("</script>")?;
    Some(&html[start..start + len])
}

impl Graph {
    /// Renders a self-contained HTML page holding the property-graph
    /// document and a viewer script, and returns its path.
    pub fn emit_html(&self, options: &RenderOptions) -> Result<PathBuf> {
        let path = options.path_with_extension("html");
        write_file(&path, &self.html_page(options))?;
        Ok(path)
    }

    pub fn html_page(&self, options: &RenderOptions) -> String {
        let doc = self.export_property_graph();
        let mut out = String::from(concat!(
            "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n",
            "<title>Causal graph</title>\n<style>\n",
            "body { font-family: sans-serif; margin: 1.5em; }\n",
            "table { border-collapse: collapse; margin-top: 1em; }\n",
            "td, th { border: 1px solid #bbb; padding: 0.2em 0.6em; text-align: left; }\n",
            "#cg-view svg { border: 1px solid #ddd; max-width: 100%; }\n",
            "</style>\n</head>\n<body>\n<h1>Causal graph</h1>\n<div id=\"cg-view\"></div>\n",
        ));
        let _ = writeln!(out, "<p>{} nodes, {} edges</p>", doc.nodes.len(), doc.edges.len());
        out.push_str("<table id=\"cg-edges\">\n<thead><tr><th>edge</th><th>cause</th><th>effect</th>");
        if options.include_metadata {
            out.push_str("<th>metadata</th><th>comments</th>");
        }
        out.push_str("</tr></thead>\n<tbody>\n");
        for e in &doc.edges {
            let _ = write!(
                out,
                "<tr><td>{}</td><td>{}</td><td>{}</td>",
                html_text(&e.name),
                html_text(&e.cause),
                html_text(&e.effect)
            );
            if options.include_metadata {
                let label = edge_label(e.props.confidence, e.props.time_lag_s).unwrap_or_default();
                let _ = write!(
                    out,
                    "<td>{}</td><td>{}</td>",
                    html_text(&label),
                    html_text(&e.props.comments.join("; "))
                );
            }
            out.push_str("</tr>\n");
        }
        out.push_str("</tbody>\n</table>\n");
        out.push_str(ISLAND_OPEN);
        out.push_str(&doc.to_json());
        out.push_str("</script>\n<script>\n");
        let script = VIEWER_ASSET.unwrap_or(FALLBACK_SCRIPT);
        out.push_str(&script.replace("</script", "<\\/script"));
        out.push_str("\n</script>\n</body>\n</html>\n");
        out
    }
}
