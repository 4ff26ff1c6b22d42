//! In-memory triple store with SPO, POS and OSP indexes.
//!
//! Terms are interned to `u32` ids. The SPO index is the primary copy and
//! also records the insertion sequence of each triple; POS and OSP are
//! derived permutations kept in lockstep.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

use super::term::{Iri, Term, Triple};

type Id = u32;
type Key = (Id, Id, Id);

#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    terms: Vec<Term>,
    canon: Vec<String>,
    ids: HashMap<Term, Id>,
    spo: BTreeMap<Key, u64>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    next_seq: u64,
}

impl TripleStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("term table overflow");
        self.terms.push(term.clone());
        self.canon.push(term.canonical());
        self.ids.insert(term.clone(), id);
        id
    }

    fn lookup(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    fn key_of(&self, t: &Triple) -> Option<Key> {
        let p = Term::Iri(t.predicate.clone());
        Some((self.lookup(&t.subject)?, self.lookup(&p)?, self.lookup(&t.object)?))
    }

    fn triple_of(&self, (s, p, o): Key) -> Triple {
        let Term::Iri(predicate) = self.terms[p as usize].clone() else {
            unreachable!("predicates are interned from IRIs");
        };
        Triple {
            subject: self.terms[s as usize].clone(),
            predicate,
            object: self.terms[o as usize].clone(),
        }
    }

    /// Inserts a triple. Returns `false` when it was already present.
    pub fn insert(&mut self, t: &Triple) -> bool {
        let s = self.intern(&t.subject);
        let p = self.intern(&Term::Iri(t.predicate.clone()));
        let o = self.intern(&t.object);
        if self.spo.contains_key(&(s, p, o)) {
            return false;
        }
        self.spo.insert((s, p, o), self.next_seq);
        self.next_seq += 1;
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    /// Removes a triple. Returns `false` when it was absent.
    pub fn remove(&mut self, t: &Triple) -> bool {
        let Some((s, p, o)) = self.key_of(t) else {
            return false;
        };
        if self.spo.remove(&(s, p, o)).is_none() {
            return false;
        }
        self.pos.remove(&(p, o, s));
        self.osp.remove(&(o, s, p));
        true
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.key_of(t).is_some_and(|k| self.spo.contains_key(&k))
    }

    /// Insertion sequence number of a present triple. Later inserts get
    /// larger numbers; re-inserting a removed triple gives it a new one.
    pub fn sequence(&self, t: &Triple) -> Option<u64> {
        self.key_of(t).and_then(|k| self.spo.get(&k).copied())
    }

    fn cmp_keys(&self, a: &Key, b: &Key) -> Ordering {
        let c = |id: Id| self.canon[id as usize].as_str();
        c(a.0)
            .cmp(c(b.0))
            .then_with(|| c(a.1).cmp(c(b.1)))
            .then_with(|| c(a.2).cmp(c(b.2)))
    }

    fn matching_keys(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Key> {
        let resolve = |t: Option<Term>| -> Result<Option<Id>, ()> {
            match t {
                None => Ok(None),
                Some(t) => self.lookup(&t).map(Some).ok_or(()),
            }
        };
        let (Ok(s), Ok(p), Ok(o)) = (
            resolve(s.cloned()),
            resolve(p.map(|i| Term::Iri(i.clone()))),
            resolve(o.cloned()),
        ) else {
            return Vec::new();
        };
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains_key(&(s, p, o)) {
                    vec![(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => spo_prefix(&self.spo, s, Some(p)).collect(),
            (Some(s), None, None) => spo_prefix(&self.spo, s, None).collect(),
            (None, Some(p), Some(o)) => prefix(&self.pos, p, Some(o)).map(|(p, o, s)| (s, p, o)).collect(),
            (None, Some(p), None) => prefix(&self.pos, p, None).map(|(p, o, s)| (s, p, o)).collect(),
            (Some(s), None, Some(o)) => prefix(&self.osp, o, Some(s)).map(|(o, s, p)| (s, p, o)).collect(),
            (None, None, Some(o)) => prefix(&self.osp, o, None).map(|(o, s, p)| (s, p, o)).collect(),
            (None, None, None) => self.spo.keys().copied().collect(),
        }
    }

    /// All triples agreeing with the bound positions, ordered
    /// lexicographically by the canonical text of (subject, predicate,
    /// object).
    pub fn find(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut keys = self.matching_keys(s, p, o);
        keys.sort_by(|a, b| self.cmp_keys(a, b));
        keys.into_iter().map(|k| self.triple_of(k)).collect()
    }

    /// Like [`find`](Self::find) but ordered by insertion sequence.
    pub fn find_in_insertion_order(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut keys = self.matching_keys(s, p, o);
        keys.sort_by_key(|k| self.spo[k]);
        keys.into_iter().map(|k| self.triple_of(k)).collect()
    }

    /// Number of triples matching the pattern, without materializing them.
    pub fn count(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> usize {
        self.matching_keys(s, p, o).len()
    }

    /// All triples in canonical order.
    pub fn triples(&self) -> Vec<Triple> {
        self.find(None, None, None)
    }

    /// Canonical N-Triples dump: sorted lines, each LF-terminated.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for t in self.triples() {
            super::write_triple(&mut out, &t);
            out.push('\n');
        }
        out
    }

    /// Rebuilds POS and OSP from SPO and compares them with the live indexes.
    pub fn indexes_consistent(&self) -> bool {
        let pos: BTreeSet<Key> = self.spo.keys().map(|&(s, p, o)| (p, o, s)).collect();
        let osp: BTreeSet<Key> = self.spo.keys().map(|&(s, p, o)| (o, s, p)).collect();
        pos == self.pos && osp == self.osp
    }
}

fn prefix(index: &BTreeSet<Key>, a: Id, b: Option<Id>) -> impl Iterator<Item = Key> + '_ {
    let (lo, hi) = match b {
        Some(b) => ((a, b, 0), (a, b, Id::MAX)),
        None => ((a, 0, 0), (a, Id::MAX, Id::MAX)),
    };
    index.range((Bound::Included(lo), Bound::Included(hi))).copied()
}

fn spo_prefix(spo: &BTreeMap<Key, u64>, s: Id, p: Option<Id>) -> impl Iterator<Item = Key> + '_ {
    let (lo, hi) = match p {
        Some(p) => ((s, p, 0), (s, p, Id::MAX)),
        None => ((s, 0, 0), (s, Id::MAX, Id::MAX)),
    };
    spo.range((Bound::Included(lo), Bound::Included(hi))).map(|(k, _)| *k)
}
