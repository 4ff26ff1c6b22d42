use std::collections::HashMap;

use serde_json::{Map, Value};

use super::{PatternTerm, Query, TriplePattern};
use crate::ontology::{display_entity, individual_name};
use crate::rdf::{Term, TripleStore};

/// Knobs for evaluating the same query in different ways; results never
/// depend on them.
#[derive(Debug, Clone, Default)]
pub struct EvalPlan {
    /// Explicit pattern order. Defaults to a greedy most-bound-first order.
    pub order: Option<Vec<usize>>,
    /// Apply every filter only after the full join instead of as soon as its
    /// variable is bound.
    pub late_filters: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl QueryResult {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Tab-separated values with a header line of variable names.
    pub fn to_tsv(&self) -> String {
        let mut out = self.vars.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(display_value).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    /// One JSON object per row.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .vars
                .iter()
                .zip(row)
                .map(|(v, t)| (v.clone(), Value::String(display_value(t))))
                .collect();
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}

/// Human-facing rendering: individual names, `ns.Local` for other IRIs,
/// lexical forms for literals.
pub fn display_value(t: &Term) -> String {
    match t {
        Term::Iri(i) => individual_name(i).unwrap_or_else(|| display_entity(i)),
        Term::Literal(l) => l.lexical().to_string(),
        Term::Blank(b) => format!("_:{}", b.label()),
    }
}

pub fn evaluate(store: &TripleStore, q: &Query) -> QueryResult {
    evaluate_with(store, q, &EvalPlan::default())
}

type Row = Vec<Option<Term>>;

pub fn evaluate_with(store: &TripleStore, q: &Query, plan: &EvalPlan) -> QueryResult {
    let mut slots: HashMap<&str, usize> = HashMap::new();
    for p in &q.patterns {
        for v in p.variables() {
            let n = slots.len();
            slots.entry(v).or_insert(n);
        }
    }
    let order = plan.order.clone().unwrap_or_else(|| greedy_order(&q.patterns));
    let mut applied = vec![false; q.filters.len()];
    let mut rows: Vec<Row> = vec![vec![None; slots.len()]];

    for &i in &order {
        let pat = &q.patterns[i];
        let mut next = Vec::new();
        for row in &rows {
            extend(store, pat, &slots, row, &mut next);
        }
        rows = next;
        if !plan.late_filters {
            apply_filters(q, &slots, &mut rows, &mut applied);
        }
        if rows.is_empty() {
            break;
        }
    }
    apply_filters(q, &slots, &mut rows, &mut applied);

    let mut projected: Vec<(Vec<String>, Vec<Term>)> = rows
        .into_iter()
        .map(|row| {
            let terms: Vec<Term> = q
                .select
                .iter()
                .map(|v| row[slots[v.as_str()]].clone().expect("selected variables are bound"))
                .collect();
            (terms.iter().map(Term::canonical).collect(), terms)
        })
        .collect();
    projected.sort_by(|a, b| a.0.cmp(&b.0));
    projected.dedup_by(|a, b| a.0 == b.0);
    if let Some(n) = q.limit {
        projected.truncate(n);
    }
    QueryResult {
        vars: q.select.clone(),
        rows: projected.into_iter().map(|(_, t)| t).collect(),
    }
}

fn apply_filters(q: &Query, slots: &HashMap<&str, usize>, rows: &mut Vec<Row>, applied: &mut [bool]) {
    for (f, done) in q.filters.iter().zip(applied.iter_mut()) {
        if *done {
            continue;
        }
        let slot = slots[f.var.as_str()];
        if rows.iter().all(|r| r[slot].is_some()) {
            rows.retain(|r| r[slot].as_ref().is_some_and(|t| f.test(t)));
            *done = true;
        }
    }
}

/// Repeatedly picks the pattern with the most positions bound by constants
/// or earlier patterns; ties go to the earlier pattern.
fn greedy_order(patterns: &[TriplePattern]) -> Vec<usize> {
    let mut bound: Vec<&str> = Vec::new();
    let mut left: Vec<usize> = (0..patterns.len()).collect();
    let mut order = Vec::new();
    while !left.is_empty() {
        let score = |i: usize| {
            let p = &patterns[i];
            [&p.subject, &p.predicate, &p.object]
                .iter()
                .filter(|t| match t {
                    PatternTerm::Term(_) => true,
                    PatternTerm::Var(v) => bound.contains(&v.as_str()),
                })
                .count()
        };
        let (pos, &best) = left
            .iter()
            .enumerate()
            .max_by(|a, b| score(*a.1).cmp(&score(*b.1)).then(b.0.cmp(&a.0)))
            .expect("non-empty");
        left.remove(pos);
        bound.extend(patterns[best].variables());
        order.push(best);
    }
    order
}

fn extend(store: &TripleStore, pat: &TriplePattern, slots: &HashMap<&str, usize>, row: &Row, out: &mut Vec<Row>) {
    let resolve = |t: &PatternTerm| -> Option<Term> {
        match t {
            PatternTerm::Term(term) => Some(term.clone()),
            PatternTerm::Var(v) => row[slots[v.as_str()]].clone(),
        }
    };
    let s = resolve(&pat.subject);
    let p = resolve(&pat.predicate);
    let o = resolve(&pat.object);
    if matches!(s, Some(Term::Literal(_))) {
        return;
    }
    let p_iri = match &p {
        None => None,
        Some(Term::Iri(i)) => Some(i),
        Some(_) => return,
    };
    for t in store.find(s.as_ref(), p_iri, o.as_ref()) {
        let mut r = row.clone();
        let values = [
            (&pat.subject, t.subject),
            (&pat.predicate, Term::Iri(t.predicate)),
            (&pat.object, t.object),
        ];
        let consistent = values.into_iter().all(|(pt, value)| match pt {
            PatternTerm::Term(_) => true,
            PatternTerm::Var(v) => {
                let slot = &mut r[slots[v.as_str()]];
                match slot {
                    Some(existing) => *existing == value,
                    None => {
                        *slot = Some(value);
                        true
                    }
                }
            }
        });
        if consistent {
            out.push(r);
        }
    }
}
