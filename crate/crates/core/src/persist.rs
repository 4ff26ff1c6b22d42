//! Single-file durability for a [`TripleStore`].
//!
//! File layout, UTF-8, every line LF-terminated:
//!
//! ```text
//! causalstore-v1
//! <sorted canonical N-Triples snapshot>
//! %%LOG
//! A <n-triples line>
//! R <n-triples line>
//! ```
//!
//! Commits append `A`/`R` records; [`StoreFile::compact`] folds the log into
//! a fresh sorted snapshot written through a temporary file and a rename.
//! A torn or unparsable tail of the log is cut off at open time.

use std::fs::{self, File, OpenOptions, TryLockError};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::rdf::{parse_line, write_triple, ParseError, Triple, TripleStore};

pub const HEADER: &str = "causalstore-v1";
pub const LOG_MARKER: &str = "%%LOG";

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("store {0} is locked by another exclusive opener")]
    Locked(PathBuf),
    #[error("store {0} is opened in shared mode and cannot be written")]
    ReadOnly(PathBuf),
    #[error("store {path} is corrupt: {message}")]
    Corrupt { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> PersistError + '_ {
    move |source| PersistError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenMode {
    /// Single writer holding an advisory lock for the lifetime of the handle.
    Exclusive,
    /// Read-only view frozen at open time; takes no lock and never writes.
    Shared,
}

/// What was discarded from the log tail while opening.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Recovery {
    pub dropped_records: usize,
    pub dropped_bytes: u64,
}

#[derive(Debug)]
pub struct StoreFile {
    path: PathBuf,
    mode: OpenMode,
    log: Option<File>,
    _lock: Option<File>,
    len: u64,
    batch: bool,
    recovery: Recovery,
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".lock");
    PathBuf::from(name)
}

fn empty_file() -> String {
    format!("{HEADER}\n{LOG_MARKER}\n")
}

fn is_torn_header(bytes: &[u8]) -> bool {
    let empty = empty_file();
    bytes.len() < empty.len() && empty.as_bytes().starts_with(bytes)
}

/// Opens (or creates, in exclusive mode) the store file at `path` and
/// rebuilds its triple set.
pub fn open_store(path: &Path, mode: OpenMode) -> Result<(StoreFile, TripleStore), PersistError> {
    let lock = match mode {
        OpenMode::Exclusive => {
            let lp = lock_path(path);
            let file = OpenOptions::new()
                .create(true)
                .truncate(false)
                .write(true)
                .open(&lp)
                .map_err(io_err(&lp))?;
            match file.try_lock() {
                Ok(()) => Some(file),
                Err(TryLockError::WouldBlock) => return Err(PersistError::Locked(path.to_path_buf())),
                Err(TryLockError::Error(e)) => return Err(io_err(&lp)(e)),
            }
        }
        OpenMode::Shared => None,
    };

    let bytes = match fs::read(path) {
        Ok(b) => Some(b),
        Err(e) if e.kind() == io::ErrorKind::NotFound => None,
        Err(e) => return Err(io_err(path)(e)),
    };

    let mut store = TripleStore::new();
    let mut recovery = Recovery::default();
    let valid_len;
    match bytes {
        Some(bytes) if !is_torn_header(&bytes) => {
            let parsed = parse_file(path, &bytes, &mut store)?;
            valid_len = parsed.valid_len;
            recovery = parsed.recovery;
        }
        _ => {
            // Absent, empty, or cut inside the initial header: nothing was
            // ever committed.
            valid_len = 0;
        }
    }

    let mut file = StoreFile {
        path: path.to_path_buf(),
        mode,
        log: None,
        _lock: lock,
        len: valid_len,
        batch: false,
        recovery,
    };

    if mode == OpenMode::Exclusive {
        if valid_len == 0 {
            file.write_snapshot(&store)?;
        } else {
            let log = OpenOptions::new().append(true).open(path).map_err(io_err(path))?;
            let on_disk = log.metadata().map_err(io_err(path))?.len();
            if on_disk != valid_len {
                log.set_len(valid_len).map_err(io_err(path))?;
                log.sync_data().map_err(io_err(path))?;
            }
            file.log = Some(log);
        }
        if recovery.dropped_records > 0 {
            log::warn!(
                "{}: dropped {} unreadable log record(s) ({} bytes)",
                path.display(),
                recovery.dropped_records,
                recovery.dropped_bytes
            );
        }
    }
    log::debug!("opened {} with {} triples", path.display(), store.len());
    Ok((file, store))
}

struct Parsed {
    valid_len: u64,
    recovery: Recovery,
}

fn parse_file(path: &Path, bytes: &[u8], store: &mut TripleStore) -> Result<Parsed, PersistError> {
    let corrupt = |message: String| PersistError::Corrupt {
        path: path.to_path_buf(),
        message,
    };
    let mut offset = 0usize;
    let mut lines = bytes.split_inclusive(|&b| b == b'\n').enumerate();

    let header = lines.next().map(|(_, l)| l).unwrap_or_default();
    if header != format!("{HEADER}\n").as_bytes() {
        return Err(corrupt("missing causalstore-v1 header".into()));
    }
    offset += header.len();

    let mut in_log = false;
    for (idx, raw) in lines.by_ref() {
        let line_no = idx + 1;
        let complete = raw.ends_with(b"\n");
        let text = std::str::from_utf8(raw).ok().filter(|_| complete);
        if !in_log {
            let Some(text) = text else {
                return Err(corrupt(format!("snapshot line {line_no} is incomplete")));
            };
            let text = &text[..text.len() - 1];
            if text == LOG_MARKER {
                in_log = true;
            } else {
                let t = parse_line(text, line_no)
                    .and_then(|t| t.ok_or_else(|| ParseError::new(line_no, 1, "empty snapshot line")))
                    .map_err(|e| corrupt(format!("snapshot: {e}")))?;
                store.insert(&t);
            }
            offset += raw.len();
            continue;
        }
        match text.and_then(|t| parse_record(&t[..t.len() - 1], line_no)) {
            Some((true, t)) => {
                store.insert(&t);
            }
            Some((false, t)) => {
                store.remove(&t);
            }
            None => {
                let rest = &bytes[offset..];
                let dropped_records = rest.split_inclusive(|&b| b == b'\n').count();
                return Ok(Parsed {
                    valid_len: offset as u64,
                    recovery: Recovery {
                        dropped_records,
                        dropped_bytes: rest.len() as u64,
                    },
                });
            }
        }
        offset += raw.len();
    }
    if !in_log {
        return Err(corrupt("missing %%LOG marker".into()));
    }
    Ok(Parsed {
        valid_len: offset as u64,
        recovery: Recovery::default(),
    })
}

fn parse_record(line: &str, line_no: usize) -> Option<(bool, Triple)> {
    let (op, rest) = line.split_at_checked(2)?;
    let assert = match op {
        "A " => true,
        "R " => false,
        _ => return None,
    };
    let t = parse_line(rest, line_no).ok()??;
    // records must be written in canonical form
    (t.canonical() == rest).then_some((assert, t))
}

/// Formats one log record, LF-terminated.
pub fn format_record(assert: bool, t: &Triple) -> String {
    let mut out = String::from(if assert { "A " } else { "R " });
    write_triple(&mut out, t);
    out.push('\n');
    out
}

impl StoreFile {
    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn mode(&self) -> OpenMode {
        self.mode
    }

    pub fn recovery(&self) -> Recovery {
        self.recovery
    }

    /// With batching on, commits are written but not synced until
    /// [`sync`](Self::sync) or batching is switched off.
    pub fn set_batch(&mut self, batch: bool) -> Result<(), PersistError> {
        self.batch = batch;
        if !batch {
            self.sync()?;
        }
        Ok(())
    }

    pub fn is_batch(&self) -> bool {
        self.batch
    }

    pub fn sync(&mut self) -> Result<(), PersistError> {
        if let Some(log) = &self.log {
            log.sync_data().map_err(io_err(&self.path))?;
        }
        Ok(())
    }

    fn writable(&mut self) -> Result<&mut File, PersistError> {
        match (self.mode, self.log.as_mut()) {
            (OpenMode::Exclusive, Some(log)) => Ok(log),
            _ => Err(PersistError::ReadOnly(self.path.clone())),
        }
    }

    /// Appends retract records, then assert records, and flushes them to
    /// stable storage. The caller has already applied the change in memory.
    /// Empty lists leave the file untouched.
    pub fn commit(&mut self, asserts: &[Triple], retracts: &[Triple]) -> Result<(), PersistError> {
        if self.mode == OpenMode::Shared {
            return Err(PersistError::ReadOnly(self.path.clone()));
        }
        if asserts.is_empty() && retracts.is_empty() {
            return Ok(());
        }
        let mut buf = String::new();
        for t in retracts {
            buf.push_str(&format_record(false, t));
        }
        for t in asserts {
            buf.push_str(&format_record(true, t));
        }
        let len = self.len;
        let batch = self.batch;
        let path = self.path.clone();
        let log = self.writable()?;
        let result = log
            .write_all(buf.as_bytes())
            .and_then(|()| if batch { Ok(()) } else { log.sync_data() });
        if let Err(e) = result {
            // leave no torn record behind; a retry appends from a clean boundary
            let _ = log.set_len(len);
            return Err(io_err(&path)(e));
        }
        self.len += buf.len() as u64;
        Ok(())
    }

    /// Rewrites the file as a sorted snapshot of `store` with an empty log.
    pub fn compact(&mut self, store: &TripleStore) -> Result<(), PersistError> {
        self.writable()?;
        self.write_snapshot(store)
    }

    fn write_snapshot(&mut self, store: &TripleStore) -> Result<(), PersistError> {
        let mut content = format!("{HEADER}\n");
        content.push_str(&store.to_ntriples());
        content.push_str(LOG_MARKER);
        content.push('\n');

        let mut tmp_name = self.path.as_os_str().to_os_string();
        tmp_name.push(".tmp");
        let tmp = PathBuf::from(tmp_name);
        {
            let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
            f.write_all(content.as_bytes()).map_err(io_err(&tmp))?;
            f.sync_all().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, &self.path).map_err(io_err(&self.path))?;
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            if let Ok(d) = File::open(dir) {
                let _ = d.sync_all();
            }
        }
        self.log = Some(
            OpenOptions::new()
                .append(true)
                .open(&self.path)
                .map_err(io_err(&self.path))?,
        );
        self.len = content.len() as u64;
        Ok(())
    }
}
