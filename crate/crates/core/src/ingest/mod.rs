//! Email metadata ingestion.
//!
//! Three container formats are supported: a metadata CSV (the interchange
//! format), a directory of `.eml` files, and an mbox file. All of them reduce
//! to a sequence of [`DocumentRecord`]s in input order. Malformed messages are
//! skipped and reported in [`ParseOutcome::skipped`] rather than failing the
//! whole run; duplicate document ids are fatal.

mod address;
mod mail;
mod signature;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use address::normalize_address;
pub use mail::{parse_eml, parse_eml_dir, parse_mbox};
pub use signature::detect_counsel_heuristic;

/// Canonical identity of a person node: a lowercase email address when one
/// is available, otherwise a normalized display name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityKey(String);

impl EntityKey {
    /// Normalizes `raw`; `None` when nothing is left after normalization.
    pub fn parse(raw: &str) -> Option<Self> {
        normalize_address(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub(crate) fn from_normalized(value: String) -> Self {
        debug_assert!(!value.is_empty());
        EntityKey(value)
    }
}

impl fmt::Display for EntityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for EntityKey {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Header metadata of one email plus its optional privilege label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub sender: EntityKey,
    pub to: Vec<EntityKey>,
    pub cc: Vec<EntityKey>,
    pub bcc: Vec<EntityKey>,
    pub privileged: Option<bool>,
}

impl DocumentRecord {
    /// Builds a record, dropping repeated keys within each recipient list.
    pub fn new(
        doc_id: impl Into<String>,
        sender: EntityKey,
        to: Vec<EntityKey>,
        cc: Vec<EntityKey>,
        bcc: Vec<EntityKey>,
        privileged: Option<bool>,
    ) -> Self {
        DocumentRecord {
            doc_id: doc_id.into(),
            sender,
            to: dedup_keys(to),
            cc: dedup_keys(cc),
            bcc: dedup_keys(bcc),
            privileged,
        }
    }

    /// To, then Cc, then (optionally) Bcc. May repeat a key that appears in
    /// more than one list.
    pub fn recipients(&self, include_bcc: bool) -> impl Iterator<Item = &EntityKey> {
        let bcc: &[EntityKey] = if include_bcc { &self.bcc } else { &[] };
        self.to.iter().chain(self.cc.iter()).chain(bcc.iter())
    }
}

fn dedup_keys(keys: Vec<EntityKey>) -> Vec<EntityKey> {
    let mut seen = HashSet::with_capacity(keys.len());
    keys.into_iter()
        .filter(|k| seen.insert(k.clone()))
        .collect()
}

/// Supported input containers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Eml,
    Mbox,
    Csv,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Eml => "eml",
            InputFormat::Mbox => "mbox",
            InputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    MissingSender,
    MissingDocId,
    Malformed,
}

/// A message or row that did not produce a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    /// Zero-based position in the input (row, message, or sorted file index).
    pub position: usize,
    /// File name, message id, or CSV row description.
    pub origin: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ParseOutcome {
    pub records: Vec<DocumentRecord>,
    pub skipped: Vec<Skipped>,
    /// Senders flagged by the signature heuristic (empty unless enabled).
    pub detected_counsel: CounselSet,
}

impl ParseOutcome {
    /// Total messages or rows seen.
    pub fn input_count(&self) -> usize {
        self.records.len() + self.skipped.len()
    }

    pub(crate) fn finish(self) -> Result<Self> {
        let mut ids = HashSet::with_capacity(self.records.len());
        for r in &self.records {
            if !ids.insert(r.doc_id.as_str()) {
                return Err(Error::DuplicateDocId(r.doc_id.clone()));
            }
        }
        for s in &self.skipped {
            log::warn!(
                "skipped input {} ({}): {:?}",
                s.position,
                s.origin,
                s.reason
            );
        }
        if !self.skipped.is_empty() {
            log::warn!(
                "{} of {} inputs skipped",
                self.skipped.len(),
                self.input_count()
            );
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Run the signature keyword heuristic on message bodies (EML/mbox only).
    pub detect_counsel: bool,
}

/// Parses `path` in the given format. For [`InputFormat::Eml`] the path is a
/// directory of message files.
pub fn parse_metadata(
    path: &Path,
    format: InputFormat,
    opts: IngestOptions,
) -> Result<ParseOutcome> {
    match format {
        InputFormat::Eml => parse_eml_dir(path, opts),
        InputFormat::Mbox => {
            let mut bytes = Vec::new();
            File::open(path)
                .and_then(|mut f| f.read_to_end(&mut bytes))
                .map_err(|e| Error::io(path, e))?;
            parse_mbox(&bytes, opts)
        }
        InputFormat::Csv => {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            parse_csv(BufReader::new(file))
        }
    }
}

const CSV_COLUMNS: [&str; 6] = ["DocID", "From", "To", "CC", "BCC", "Privileged"];

/// Parses the `DocID,From,To,CC,BCC,Privileged` metadata CSV. Recipient
/// columns are semicolon-separated; `Privileged` is `0`, `1` or empty and the
/// column itself may be absent.
pub fn parse_csv<R: Read>(input: R) -> Result<ParseOutcome> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim().eq_ignore_ascii_case(name))
    };
    let mut idx = [None; 6];
    for (slot, name) in idx.iter_mut().zip(CSV_COLUMNS) {
        *slot = column(name);
    }
    let [Some(c_id), Some(c_from), Some(c_to), Some(c_cc), Some(c_bcc), c_priv] = idx else {
        let missing = CSV_COLUMNS[..5]
            .iter()
            .zip(idx)
            .find(|(_, i)| i.is_none())
            .map(|(n, _)| *n)
            .unwrap_or("DocID");
        return Err(Error::MissingColumn(missing));
    };
    let width = headers.len();

    let mut out = ParseOutcome::default();
    for (position, row) in reader.records().enumerate() {
        let row = match row {
            Ok(row) => row,
            Err(e) if e.is_io_error() => return Err(e.into()),
            Err(_) => {
                out.skipped.push(Skipped {
                    position,
                    origin: format!("row {}", position + 2),
                    reason: SkipReason::Malformed,
                });
                continue;
            }
        };
        let skip = |reason| Skipped {
            position,
            origin: format!("row {}", position + 2),
            reason,
        };
        if row.len() != width {
            out.skipped.push(skip(SkipReason::Malformed));
            continue;
        }
        let doc_id = row[c_id].trim();
        if doc_id.is_empty() {
            out.skipped.push(skip(SkipReason::MissingDocId));
            continue;
        }
        let Some(sender) = normalize_address(&row[c_from]) else {
            out.skipped.push(skip(SkipReason::MissingSender));
            continue;
        };
        let privileged = match c_priv.map(|c| row[c].trim()) {
            None | Some("") => None,
            Some("1") => Some(true),
            Some("0") => Some(false),
            Some(_) => {
                out.skipped.push(skip(SkipReason::Malformed));
                continue;
            }
        };
        out.records.push(DocumentRecord::new(
            doc_id,
            sender,
            split_list(&row[c_to]),
            split_list(&row[c_cc]),
            split_list(&row[c_bcc]),
            privileged,
        ));
    }
    out.finish()
}

fn split_list(field: &str) -> Vec<EntityKey> {
    field.split(';').filter_map(normalize_address).collect()
}

/// Writes records in the metadata CSV format accepted by [`parse_csv`].
pub fn write_csv<W: std::io::Write>(records: &[DocumentRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    let join = |keys: &[EntityKey]| {
        keys.iter()
            .map(EntityKey::as_str)
            .collect::<Vec<_>>()
            .join(";")
    };
    for r in records {
        let privileged = match r.privileged {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        w.write_record([
            r.doc_id.as_str(),
            r.sender.as_str(),
            &join(&r.to),
            &join(&r.cc),
            &join(&r.bcc),
            privileged,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// The set of known counsel identities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounselSet {
    members: BTreeSet<EntityKey>,
}

impl CounselSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: EntityKey) -> bool {
        self.members.insert(key)
    }

    pub fn contains(&self, key: &EntityKey) -> bool {
        self.members.contains(key)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EntityKey> {
        self.members.iter()
    }
}

impl FromIterator<EntityKey> for CounselSet {
    fn from_iter<I: IntoIterator<Item = EntityKey>>(iter: I) -> Self {
        CounselSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl Extend<EntityKey> for CounselSet {
    fn extend<I: IntoIterator<Item = EntityKey>>(&mut self, iter: I) {
        self.members.extend(iter)
    }
}

/// Reads a counsel list: one identity per line, `#` starts a comment line.
pub fn load_counsel_list<R: Read>(input: R) -> Result<CounselSet> {
    let mut set = CounselSet::new();
    for line in BufReader::new(input).lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(key) = normalize_address(trimmed) {
            set.insert(key);
        }
    }
    if set.is_empty() {
        log::warn!("counsel list is empty; every entity score will stay at zero");
    }
    Ok(set)
}

pub fn load_counsel_file(path: &Path) -> Result<CounselSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_counsel_list(file)
}

/// Writes a counsel list in the format read by [`load_counsel_list`].
pub fn write_counsel_list<W: std::io::Write>(set: &CounselSet, mut out: W) -> Result<()> {
    for key in set.iter() {
        writeln!(out, "{key}")?;
    }
    Ok(())
}
