//! Truncation sweep over a store file built from random commits.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use causalkg::persist::{open_store, OpenMode};
use causalkg::rdf::{Triple, TripleStore};
use rand::Rng;

use super::oracle::random_triple;

#[derive(Debug, Default)]
pub struct SweepReport {
    pub cuts: usize,
    /// Cuts that recovered exactly the state after a whole commit.
    pub at_commit_boundary: usize,
    pub max_dropped_bytes: u64,
}

/// Writes `commits` random commits (one to three records each) to a fresh
/// store, then cuts a copy of the file at every byte and reopens it. Every
/// reopen must succeed and expose the state after some whole-record prefix
/// of the log.
pub fn truncation_sweep(dir: &Path, seed: u64, commits: usize) -> Result<SweepReport, String> {
    let path = dir.join("full.cg");
    let mut r = super::rng(seed);
    let (mut file, mut store) = open_store(&path, OpenMode::Exclusive).map_err(|e| e.to_string())?;
    // dump text -> index of the first record after which the store had it
    let mut history: BTreeMap<String, usize> = BTreeMap::new();
    let mut commit_states = Vec::new();
    let mut records = 0;
    history.insert(store.to_ntriples(), 0);
    commit_states.push(store.to_ntriples());
    let mut replay = TripleStore::new();
    for _ in 0..commits {
        let mut asserts: Vec<Triple> = Vec::new();
        let mut retracts: Vec<Triple> = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let existing = store.triples();
            if !existing.is_empty() && r.gen_bool(0.3) {
                let t = existing[r.gen_range(0..existing.len())].clone();
                store.remove(&t);
                asserts.retain(|a| a != &t);
                retracts.push(t);
            } else {
                let t = random_triple(&mut r);
                if store.insert(&t) {
                    asserts.push(t);
                }
            }
        }
        file.commit(&asserts, &retracts).map_err(|e| e.to_string())?;
        // the log holds retracts first, then asserts
        for t in &retracts {
            replay.remove(t);
            records += 1;
            history.entry(replay.to_ntriples()).or_insert(records);
        }
        for t in &asserts {
            replay.insert(t);
            records += 1;
            history.entry(replay.to_ntriples()).or_insert(records);
        }
        commit_states.push(store.to_ntriples());
    }
    drop(file);
    if replay.to_ntriples() != store.to_ntriples() {
        return Err("replayed records do not rebuild the final state".into());
    }

    let bytes = fs::read(&path).map_err(|e| e.to_string())?;
    let cut_path = dir.join("cut.cg");
    let mut report = SweepReport::default();
    for cut in 0..=bytes.len() {
        fs::write(&cut_path, &bytes[..cut]).map_err(|e| e.to_string())?;
        let (f, s) = open_store(&cut_path, OpenMode::Shared).map_err(|e| format!("cut at {cut}: {e}"))?;
        let dump = s.to_ntriples();
        if !history.contains_key(&dump) {
            return Err(format!("cut at {cut}: recovered state is not a historical prefix"));
        }
        if commit_states.contains(&dump) {
            report.at_commit_boundary += 1;
        }
        report.max_dropped_bytes = report.max_dropped_bytes.max(f.recovery().dropped_bytes);
        report.cuts += 1;

        // a writer cuts the torn tail and can keep appending
        if cut % 97 == 0 {
            let (mut w, mut ws) =
                open_store(&cut_path, OpenMode::Exclusive).map_err(|e| format!("cut at {cut}: {e}"))?;
            let extra = random_triple(&mut r);
            if ws.insert(&extra) {
                w.commit(std::slice::from_ref(&extra), &[]).map_err(|e| e.to_string())?;
            }
            drop(w);
            let (_, again) = open_store(&cut_path, OpenMode::Shared).map_err(|e| e.to_string())?;
            if again.to_ntriples() != ws.to_ntriples() {
                return Err(format!("cut at {cut}: append after recovery was lost"));
            }
        }
    }
    Ok(report)
}
