//! Reference implementations: a list-scan triple store and a nested-loop
//! conjunctive query evaluator, plus random stores and queries for them.

use std::cmp::Ordering;

use causalkg::rdf::vocab::xsd;
use causalkg::rdf::{BlankNode, Datatype, Iri, Literal, Term, Triple};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Triples kept in a plain vector; every lookup scans the whole list.
#[derive(Debug, Default, Clone)]
pub struct NaiveStore {
    pub triples: Vec<Triple>,
}

impl NaiveStore {
    pub fn insert(&mut self, t: &Triple) -> bool {
        if self.triples.contains(t) {
            return false;
        }
        self.triples.push(t.clone());
        true
    }

    pub fn remove(&mut self, t: &Triple) -> bool {
        let before = self.triples.len();
        self.triples.retain(|x| x != t);
        before != self.triples.len()
    }

    pub fn find(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out: Vec<Triple> = self
            .triples
            .iter()
            .filter(|t| s.is_none_or(|s| &t.subject == s))
            .filter(|t| p.is_none_or(|p| &t.predicate == p))
            .filter(|t| o.is_none_or(|o| &t.object == o))
            .cloned()
            .collect();
        out.sort_by_key(Triple::canonical);
        out
    }

    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self.triples.iter().map(|t| t.canonical() + "\n").collect();
        lines.sort();
        lines.concat()
    }
}

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("http://ex.org/{local}")).unwrap()
}

pub fn subject_pool() -> Vec<Term> {
    let mut v: Vec<Term> = (0..8).map(|i| Term::Iri(ex(&format!("s{i}")))).collect();
    v.push(Term::Blank(BlankNode::new("b0").unwrap()));
    v
}

pub fn predicate_pool() -> Vec<Iri> {
    (0..4).map(|i| ex(&format!("p{i}"))).collect()
}

pub fn object_pool() -> Vec<Term> {
    let mut v = subject_pool();
    v.extend((0..6).map(|i| Term::Literal(Literal::integer(i))));
    v.extend([0.25, 1.5, 2.0, 3.75].map(|x| Term::Literal(Literal::decimal(x))));
    v.extend(
        ["a", "b", "c d", "quote\"", "back\\slash", "line\nbreak", "é"].map(|s| Term::Literal(Literal::string(s))),
    );
    v.push(Term::Literal(Literal::new("true", Datatype::Boolean).unwrap()));
    v
}

pub fn random_triple(r: &mut StdRng) -> Triple {
    Triple {
        subject: subject_pool().choose(r).unwrap().clone(),
        predicate: predicate_pool().choose(r).unwrap().clone(),
        object: object_pool().choose(r).unwrap().clone(),
    }
}

pub fn random_triples(r: &mut StdRng, n: usize) -> Vec<Triple> {
    (0..n).map(|_| random_triple(r)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    Var(&'static str),
    Fixed(Term),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone)]
pub struct Filter {
    pub var: &'static str,
    pub op: &'static str,
    pub bound: Bound,
}

/// A conjunctive query kept apart from the library's own AST.
#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub select: Vec<&'static str>,
    pub patterns: Vec<[Slot; 3]>,
    pub filters: Vec<Filter>,
    pub limit: Option<usize>,
}

const VARS: [&str; 4] = ["a", "b", "c", "d"];
const OPS: [&str; 6] = ["<", "<=", "=", "!=", ">=", ">"];

/// A random query whose constants are mostly drawn from `triples`, so that
/// answers are usually non-empty.
pub fn random_query(r: &mut StdRng, triples: &[Triple]) -> QuerySpec {
    let mut patterns = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let seed = if triples.is_empty() || r.gen_bool(0.15) {
            random_triple(r)
        } else {
            triples.choose(r).unwrap().clone()
        };
        let slot = |r: &mut StdRng, fixed: Term, var_p: f64| {
            if r.gen_bool(var_p) {
                Slot::Var(VARS.choose(r).unwrap())
            } else {
                Slot::Fixed(fixed)
            }
        };
        let p = Term::Iri(seed.predicate);
        patterns.push([slot(r, seed.subject, 0.7), slot(r, p, 0.25), slot(r, seed.object, 0.6)]);
    }
    let mut used: Vec<&'static str> = patterns
        .iter()
        .flat_map(|p| {
            p.iter()
                .filter_map(|s| if let Slot::Var(v) = s { Some(*v) } else { None })
        })
        .collect();
    used.sort();
    used.dedup();
    if used.is_empty() {
        // at least one variable so there is something to select
        patterns[0][0] = Slot::Var("a");
        used.push("a");
    }
    let mut select: Vec<&'static str> = used.iter().copied().filter(|_| r.gen_bool(0.6)).collect();
    if select.is_empty() {
        select.push(used[0]);
    }
    let filters = (0..if r.gen_bool(0.4) { r.gen_range(1..=2) } else { 0 })
        .map(|_| Filter {
            var: used.choose(r).unwrap(),
            op: OPS.choose(r).unwrap(),
            bound: if r.gen_bool(0.6) {
                Bound::Number(r.gen_range(-1..=12) as f64 / 2.0)
            } else {
                Bound::Text(["a", "b", "c", "é"].choose(r).unwrap().to_string())
            },
        })
        .collect();
    let limit = r.gen_bool(0.3).then(|| r.gen_range(1..6));
    QuerySpec {
        select,
        patterns,
        filters,
        limit,
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Iri(i) => format!("<{}>", i.as_str()),
        Term::Blank(b) => format!("_:{}", b.label()),
        Term::Literal(l) => match l.datatype() {
            Datatype::String => quote(l.lexical()),
            Datatype::Integer => format!("{}^^<{}>", quote(l.lexical()), xsd::INTEGER),
            Datatype::Decimal => format!("{}^^<{}>", quote(l.lexical()), xsd::DECIMAL),
            Datatype::Boolean => format!("{}^^<{}>", quote(l.lexical()), xsd::BOOLEAN),
        },
    }
}

impl QuerySpec {
    /// Query text; when `reversed`, filter comparisons are written with the
    /// constant on the left.
    pub fn to_text(&self, reversed: bool) -> String {
        let mut out = String::from("SELECT");
        for v in &self.select {
            out.push_str(&format!(" ?{v}"));
        }
        out.push_str(" WHERE {\n");
        for p in &self.patterns {
            let cells: Vec<String> = p
                .iter()
                .map(|s| match s {
                    Slot::Var(v) => format!("?{v}"),
                    Slot::Fixed(t) => term_text(t),
                })
                .collect();
            out.push_str(&format!("  {} .\n", cells.join(" ")));
        }
        for f in &self.filters {
            let c = match &f.bound {
                Bound::Number(x) => format!("{x}"),
                Bound::Text(s) => quote(s),
            };
            if reversed {
                let flipped = match f.op {
                    "<" => ">",
                    "<=" => ">=",
                    ">=" => "<=",
                    ">" => "<",
                    other => other,
                };
                out.push_str(&format!("  FILTER({c} {flipped} ?{})\n", f.var));
            } else {
                out.push_str(&format!("  FILTER(?{} {} {c})\n", f.var, f.op));
            }
        }
        out.push('}');
        if let Some(n) = self.limit {
            out.push_str(&format!(" LIMIT {n}"));
        }
        out
    }
}

fn holds(op: &str, ord: Ordering) -> bool {
    match op {
        "<" => ord.is_lt(),
        "<=" => ord.is_le(),
        "=" => ord.is_eq(),
        "!=" => ord.is_ne(),
        ">=" => ord.is_ge(),
        ">" => ord.is_gt(),
        _ => unreachable!(),
    }
}

fn passes(f: &Filter, t: &Term) -> bool {
    let Term::Literal(l) = t else { return false };
    match (&f.bound, l.datatype()) {
        (Bound::Number(x), Datatype::Integer | Datatype::Decimal) => {
            let v: f64 = l.lexical().parse().unwrap();
            v.partial_cmp(x).is_some_and(|o| holds(f.op, o))
        }
        (Bound::Text(s), Datatype::String) => holds(f.op, l.lexical().cmp(s)),
        _ => false,
    }
}

/// Nested loops over the full triple list, one loop per pattern in written
/// order; filters last; then sort, dedupe and limit.
pub fn nested_loop(triples: &[Triple], q: &QuerySpec) -> Vec<Vec<Term>> {
    type Binding = Vec<(&'static str, Term)>;
    fn lookup<'a>(b: &'a Binding, v: &str) -> Option<&'a Term> {
        b.iter().find(|(k, _)| *k == v).map(|(_, t)| t)
    }
    fn unify(b: &mut Binding, slot: &Slot, value: &Term) -> bool {
        match slot {
            Slot::Fixed(t) => t == value,
            Slot::Var(v) => match lookup(b, v) {
                Some(t) => t == value,
                None => {
                    b.push((v, value.clone()));
                    true
                }
            },
        }
    }
    fn walk(triples: &[Triple], q: &QuerySpec, depth: usize, b: Binding, out: &mut Vec<Binding>) {
        if depth == q.patterns.len() {
            out.push(b);
            return;
        }
        let [s, p, o] = &q.patterns[depth];
        for t in triples {
            let mut next = b.clone();
            if unify(&mut next, s, &t.subject)
                && unify(&mut next, p, &Term::Iri(t.predicate.clone()))
                && unify(&mut next, o, &t.object)
            {
                walk(triples, q, depth + 1, next, out);
            }
        }
    }
    let mut solutions = Vec::new();
    walk(triples, q, 0, Vec::new(), &mut solutions);
    let mut rows: Vec<(Vec<String>, Vec<Term>)> = solutions
        .into_iter()
        .filter(|b| q.filters.iter().all(|f| passes(f, lookup(b, f.var).unwrap())))
        .map(|b| {
            let row: Vec<Term> = q.select.iter().map(|v| lookup(&b, v).unwrap().clone()).collect();
            (row.iter().map(Term::canonical).collect(), row)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    rows.dedup_by(|a, b| a.0 == b.0);
    if let Some(n) = q.limit {
        rows.truncate(n);
    }
    rows.into_iter().map(|(_, r)| r).collect()
}
