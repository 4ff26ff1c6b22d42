//! Minimal, independent readers for the exported graph formats.

use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ParsedGraph {
    /// Node labels in file order.
    pub nodes: Vec<String>,
    /// (source label, target label, edge name) in file order.
    pub edges: Vec<(String, String, String)>,
}

fn decode_entities(s: &str) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = s;
    while let Some(i) = rest.find('&') {
        out.push_str(&rest[..i]);
        let end = rest[i..]
            .find(';')
            .ok_or_else(|| format!("unterminated entity in {s:?}"))?
            + i;
        let name = &rest[i + 1..end];
        let c = match name {
            "amp" => '&',
            "lt" => '<',
            "gt" => '>',
            "quot" => '"',
            "apos" => '\'',
            _ => {
                let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                    u32::from_str_radix(hex, 16)
                } else if let Some(dec) = name.strip_prefix('#') {
                    dec.parse()
                } else {
                    return Err(format!("unknown entity &{name};"));
                };
                char::from_u32(code.map_err(|e| e.to_string())?).ok_or("bad code point")?
            }
        };
        out.push(c);
        rest = &rest[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

// ---------------------------------------------------------------- GML

#[derive(Debug)]
enum GmlValue {
    Int(i64),
    Real,
    Str(String),
    List(Vec<(String, GmlValue)>),
}

struct Gml<'a> {
    s: &'a [u8],
    i: usize,
}

impl Gml<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn key(&mut self) -> Result<String, String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if start == self.i || !self.s[start].is_ascii_alphabetic() {
            return Err(format!("expected a key at byte {start}"));
        }
        Ok(String::from_utf8(self.s[start..self.i].to_vec()).unwrap())
    }

    fn value(&mut self) -> Result<GmlValue, String> {
        self.ws();
        match self.s.get(self.i) {
            Some(b'[') => {
                self.i += 1;
                self.list(true).map(GmlValue::List)
            }
            Some(b'"') => {
                self.i += 1;
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i] != b'"' {
                    if !(0x20..0x7f).contains(&self.s[self.i]) {
                        return Err(format!("non-ASCII or control byte in string at {}", self.i));
                    }
                    self.i += 1;
                }
                if self.i == self.s.len() {
                    return Err("unterminated string".into());
                }
                let raw = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                self.i += 1;
                decode_entities(raw).map(GmlValue::Str)
            }
            Some(c) if c.is_ascii_digit() || *c == b'-' || *c == b'+' => {
                let start = self.i;
                self.i += 1;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || b".eE+-".contains(&self.s[self.i])) {
                    self.i += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                if let Ok(n) = text.parse::<i64>() {
                    Ok(GmlValue::Int(n))
                } else if text.parse::<f64>().is_ok() {
                    Ok(GmlValue::Real)
                } else {
                    Err(format!("bad number {text:?}"))
                }
            }
            _ => Err(format!("expected a value at byte {}", self.i)),
        }
    }

    fn list(&mut self, nested: bool) -> Result<Vec<(String, GmlValue)>, String> {
        let mut out = Vec::new();
        loop {
            self.ws();
            match self.s.get(self.i) {
                Some(b']') if nested => {
                    self.i += 1;
                    return Ok(out);
                }
                None if !nested => return Ok(out),
                None => return Err("unterminated list".into()),
                _ => {
                    let k = self.key()?;
                    let v = self.value()?;
                    out.push((k, v));
                }
            }
        }
    }
}

pub fn read_gml(text: &str) -> Result<ParsedGraph, String> {
    let top = Gml {
        s: text.as_bytes(),
        i: 0,
    }
    .list(false)?;
    let [(key, GmlValue::List(items))] = top.as_slice() else {
        return Err("expected a single top-level graph".into());
    };
    if key != "graph" {
        return Err(format!("top-level key {key:?}"));
    }
    let mut ids = BTreeMap::new();
    let mut out = ParsedGraph::default();
    fn get<'a>(l: &'a [(String, GmlValue)], k: &str) -> Option<&'a GmlValue> {
        l.iter().find(|(x, _)| x == k).map(|(_, v)| v)
    }
    let int = |l: &[(String, GmlValue)], k: &str| match get(l, k) {
        Some(GmlValue::Int(n)) => Ok(*n),
        _ => Err(format!("missing integer {k}")),
    };
    let mut endpoints = Vec::new();
    for (k, v) in items {
        match (k.as_str(), v) {
            ("node", GmlValue::List(l)) => {
                let Some(GmlValue::Str(label)) = get(l, "label") else {
                    return Err("node without label".into());
                };
                let id = int(l, "id")?;
                if ids.insert(id, label.clone()).is_some() {
                    return Err(format!("duplicate node id {id}"));
                }
                out.nodes.push(label.clone());
            }
            ("edge", GmlValue::List(l)) => {
                let Some(GmlValue::Str(name)) = get(l, "name") else {
                    return Err("edge without name".into());
                };
                for k in ["confidence", "time_lag_s"] {
                    if let Some(v) = get(l, k) {
                        if !matches!(v, GmlValue::Real | GmlValue::Int(_)) {
                            return Err(format!("{k} is not numeric"));
                        }
                    }
                }
                endpoints.push((int(l, "source")?, int(l, "target")?, name.clone()));
            }
            ("directed" | "multigraph", GmlValue::Int(_)) => {}
            (other, _) => return Err(format!("unexpected graph key {other:?}")),
        }
    }
    for (s, t, name) in endpoints {
        let s = ids.get(&s).ok_or(format!("edge source {s} is not a node"))?;
        let t = ids.get(&t).ok_or(format!("edge target {t} is not a node"))?;
        out.edges.push((s.clone(), t.clone(), name));
    }
    Ok(out)
}

// ------------------------------------------------------------ GraphML

#[derive(Debug, Clone)]
struct Element {
    name: String,
    attrs: BTreeMap<String, String>,
    children: Vec<Element>,
    text: String,
}

struct Xml<'a> {
    s: &'a str,
    i: usize,
}

impl Xml<'_> {
    fn rest(&self) -> &str {
        &self.s[self.i..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(|c: char| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn name(&mut self) -> Result<String, String> {
        let len = self
            .rest()
            .find(|c: char| !(c.is_alphanumeric() || ":_.-".contains(c)))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(format!("expected a name at byte {}", self.i));
        }
        let n = self.rest()[..len].to_string();
        self.i += len;
        Ok(n)
    }

    fn element(&mut self) -> Result<Element, String> {
        if !self.rest().starts_with('<') {
            return Err(format!("expected '<' at byte {}", self.i));
        }
        self.i += 1;
        let name = self.name()?;
        let mut attrs = BTreeMap::new();
        loop {
            self.skip_ws();
            if self.rest().starts_with("/>") {
                self.i += 2;
                return Ok(Element {
                    name,
                    attrs,
                    children: Vec::new(),
                    text: String::new(),
                });
            }
            if self.rest().starts_with('>') {
                self.i += 1;
                break;
            }
            let k = self.name()?;
            self.skip_ws();
            if !self.rest().starts_with("=\"") {
                return Err(format!("attribute {k} without a quoted value"));
            }
            self.i += 2;
            let end = self.rest().find('"').ok_or("unterminated attribute")?;
            let raw = &self.rest()[..end];
            if raw.contains('<') {
                return Err("'<' in attribute value".into());
            }
            let v = decode_entities(raw)?;
            self.i += end + 1;
            if attrs.insert(k.clone(), v).is_some() {
                return Err(format!("duplicate attribute {k}"));
            }
        }
        let mut children = Vec::new();
        let mut text = String::new();
        loop {
            let lt = self.rest().find('<').ok_or(format!("unclosed <{name}>"))?;
            let chunk = &self.rest()[..lt];
            if chunk.contains('>') {
                // a bare '>' is legal XML but the writer always escapes it
                return Err(format!("unescaped '>' in <{name}> text"));
            }
            text.push_str(&decode_entities(chunk)?);
            self.i += lt;
            if self.rest().starts_with("</") {
                self.i += 2;
                let close = self.name()?;
                if close != name {
                    return Err(format!("</{close}> closes <{name}>"));
                }
                self.skip_ws();
                if !self.rest().starts_with('>') {
                    return Err("malformed end tag".into());
                }
                self.i += 1;
                return Ok(Element {
                    name,
                    attrs,
                    children,
                    text,
                });
            }
            children.push(self.element()?);
        }
    }
}

pub fn read_graphml(text: &str) -> Result<ParsedGraph, String> {
    let mut x = Xml { s: text, i: 0 };
    if x.rest().starts_with("<?xml") {
        let end = x.rest().find("?>").ok_or("unterminated declaration")?;
        x.i += end + 2;
    }
    x.skip_ws();
    let root = x.element()?;
    x.skip_ws();
    if !x.rest().is_empty() {
        return Err("content after the root element".into());
    }
    if root.name != "graphml" {
        return Err(format!("root element <{}>", root.name));
    }
    let mut keys: BTreeMap<String, String> = BTreeMap::new();
    let mut graph = None;
    for c in &root.children {
        match c.name.as_str() {
            "key" => {
                if graph.is_some() {
                    return Err("key declared after the graph".into());
                }
                let id = c.attrs.get("id").ok_or("key without id")?;
                let domain = c.attrs.get("for").ok_or("key without for")?;
                keys.insert(id.clone(), domain.clone());
            }
            "graph" => graph = Some(c),
            other => return Err(format!("unexpected <{other}>")),
        }
    }
    let graph = graph.ok_or("no <graph>")?;
    if graph.attrs.get("edgedefault").map(String::as_str) != Some("directed") {
        return Err("graph is not directed".into());
    }
    let data = |e: &Element, domain: &str| -> Result<BTreeMap<String, String>, String> {
        let mut out = BTreeMap::new();
        for d in &e.children {
            if d.name != "data" {
                return Err(format!("unexpected <{}> in <{}>", d.name, e.name));
            }
            let key = d.attrs.get("key").ok_or("data without key")?;
            match keys.get(key) {
                Some(f) if f == domain => {}
                _ => return Err(format!("data key {key} is not declared for {domain}")),
            }
            out.insert(key.clone(), d.text.clone());
        }
        Ok(out)
    };
    let mut out = ParsedGraph::default();
    let mut ids = BTreeMap::new();
    let mut edge_ids = BTreeSet::new();
    for c in &graph.children {
        match c.name.as_str() {
            "node" => {
                let id = c.attrs.get("id").ok_or("node without id")?;
                let d = data(c, "node")?;
                let label = d.get("d0").ok_or("node without name")?.clone();
                if ids.insert(id.clone(), label.clone()).is_some() {
                    return Err(format!("duplicate node id {id}"));
                }
                out.nodes.push(label);
            }
            "edge" => {
                let id = c.attrs.get("id").ok_or("edge without id")?;
                if !edge_ids.insert(id.clone()) {
                    return Err(format!("duplicate edge id {id}"));
                }
                let end = |k: &str| -> Result<String, String> {
                    let r = c.attrs.get(k).ok_or(format!("edge without {k}"))?;
                    ids.get(r)
                        .cloned()
                        .ok_or(format!("edge {k} {r} is not a declared node"))
                };
                let d = data(c, "edge")?;
                for k in ["d3", "d4"] {
                    if let Some(v) = d.get(k) {
                        v.parse::<f64>().map_err(|e| format!("{k}: {e}"))?;
                    }
                }
                out.edges.push((
                    end("source")?,
                    end("target")?,
                    d.get("d2").ok_or("edge without name")?.clone(),
                ));
            }
            other => return Err(format!("unexpected <{other}> in graph")),
        }
    }
    Ok(out)
}

// ----------------------------------------------------------------- DOT

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    /// Identifier text and whether it was quoted (quoted keywords are IDs).
    Id(String, bool),
    Punct(&'static str),
}

fn dot_tokens(text: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                // same escapes as the reference lexer: \" and \\ pair up,
                // backslash-newline continues the line
                match cs.get(i) {
                    None => return Err("unterminated quoted ID".into()),
                    Some('"') => break,
                    Some('\\') if cs.get(i + 1) == Some(&'"') => {
                        s.push('"');
                        i += 2;
                    }
                    Some('\\') if cs.get(i + 1) == Some(&'\\') => {
                        s.push_str("\\\\");
                        i += 2;
                    }
                    Some('\\') if cs.get(i + 1) == Some(&'\n') => i += 2,
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s, true));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(cs[start..i].iter().collect(), false));
        } else if c.is_ascii_digit()
            || c == '.'
            || c == '-' && cs.get(i + 1).is_some_and(|d| d.is_ascii_digit() || *d == '.')
        {
            let start = i;
            i += 1;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Id(cs[start..i].iter().collect(), false));
        } else if c == '-' && matches!(cs.get(i + 1), Some('>' | '-')) {
            out.push(Tok::Punct(if cs[i + 1] == '>' { "->" } else { "--" }));
            i += 2;
        } else {
            let p = match c {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                ';' => ";",
                ',' => ",",
                '=' => "=",
                ':' => ":",
                _ => return Err(format!("unexpected character {c:?}")),
            };
            out.push(Tok::Punct(p));
            i += 1;
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["strict", "graph", "digraph", "node", "edge", "subgraph"];

fn is_kw(t: &Tok, kw: &str) -> bool {
    matches!(t, Tok::Id(s, false) if s.eq_ignore_ascii_case(kw))
}

struct Dot {
    toks: Vec<Tok>,
    i: usize,
    directed: bool,
    nodes: BTreeSet<String>,
    edges: usize,
}

impl Dot {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }

    fn punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Id(s, quoted)) if *quoted || !KEYWORDS.iter().any(|k| s.eq_ignore_ascii_case(k)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            other => Err(format!("expected an ID, found {other:?}")),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| is_kw(t, "strict")) {
            self.i += 1;
        }
        match self.peek() {
            Some(t) if is_kw(t, "digraph") => self.directed = true,
            Some(t) if is_kw(t, "graph") => self.directed = false,
            other => return Err(format!("expected graph or digraph, found {other:?}")),
        }
        self.i += 1;
        if matches!(self.peek(), Some(Tok::Id(..))) {
            self.id()?;
        }
        if !self.punct("{") {
            return Err("expected '{'".into());
        }
        self.stmt_list()?;
        if self.i != self.toks.len() {
            return Err("tokens after the closing brace".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        loop {
            if self.punct("}") {
                return Ok(());
            }
            if self.peek().is_none() {
                return Err("missing '}'".into());
            }
            self.stmt()?;
            self.punct(";");
        }
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.punct("[") {
            loop {
                if self.punct("]") {
                    break;
                }
                self.id()?;
                if !self.punct("=") {
                    return Err("expected '=' in attribute list".into());
                }
                self.id()?;
                if !self.punct(",") {
                    self.punct(";");
                }
            }
        }
        Ok(())
    }

    fn node_id(&mut self) -> Result<String, String> {
        let id = self.id()?;
        if self.punct(":") {
            self.id()?;
            if self.punct(":") {
                self.id()?;
            }
        }
        Ok(id)
    }

    fn stmt(&mut self) -> Result<(), String> {
        let t = self.peek().cloned().ok_or("unexpected end")?;
        if ["graph", "node", "edge"].iter().any(|k| is_kw(&t, k)) {
            self.i += 1;
            if !matches!(self.peek(), Some(Tok::Punct("["))) {
                return Err("attribute statement without '['".into());
            }
            return self.attr_list();
        }
        if is_kw(&t, "subgraph") || t == Tok::Punct("{") {
            return Err("subgraphs are not expected in emitted files".into());
        }
        let first = self.node_id()?;
        if self.punct("=") {
            self.id()?;
            return Ok(());
        }
        self.nodes.insert(first);
        loop {
            let op = if self.punct("->") {
                "->"
            } else if self.punct("--") {
                "--"
            } else {
                break;
            };
            if (op == "->") != self.directed {
                return Err(format!("edge operator {op} in the wrong graph kind"));
            }
            let next = self.node_id()?;
            self.nodes.insert(next);
            self.edges += 1;
        }
        self.attr_list()
    }
}

/// Checks `text` against the DOT language grammar (without subgraphs or
/// HTML strings) and returns the distinct node IDs and the edge count.
pub fn check_dot(text: &str) -> Result<(BTreeSet<String>, usize), String> {
    let mut d = Dot {
        toks: dot_tokens(text)?,
        i: 0,
        directed: false,
        nodes: BTreeSet::new(),
        edges: 0,
    };
    d.graph()?;
    Ok((d.nodes, d.edges))
}
