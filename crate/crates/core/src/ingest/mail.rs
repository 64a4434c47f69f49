//! EML and mbox readers. Only From, To, Cc, Bcc and Message-ID (plus the
//! optional `X-Privileged` label) are read; bodies are decoded only when the
//! signature heuristic is enabled.

use std::fs;
use std::path::{Path, PathBuf};

use mailparse::{MailAddr, MailHeaderMap};
use rayon::prelude::*;

use super::{
    detect_counsel_heuristic, normalize_address, DocumentRecord, EntityKey, IngestOptions,
    ParseOutcome, SkipReason, Skipped,
};
use crate::error::{Error, Result};

/// Result of parsing a single message.
#[derive(Debug)]
enum Parsed {
    Record {
        record: DocumentRecord,
        counsel_signature: bool,
    },
    Skip(SkipReason),
}

fn parse_message(bytes: &[u8], fallback_id: &str, opts: IngestOptions) -> Parsed {
    let headers = match mailparse::parse_headers(bytes) {
        Ok((headers, _)) => headers,
        Err(_) => return Parsed::Skip(SkipReason::Malformed),
    };
    let Some(sender) = headers
        .get_first_value("From")
        .as_deref()
        .and_then(normalize_address)
    else {
        return Parsed::Skip(SkipReason::MissingSender);
    };
    let doc_id = headers
        .get_first_value("Message-ID")
        .map(|v| {
            v.trim()
                .trim_start_matches('<')
                .trim_end_matches('>')
                .trim()
                .to_owned()
        })
        .filter(|v| !v.is_empty())
        .unwrap_or_else(|| fallback_id.to_owned());
    let list = |name: &str| {
        headers
            .get_all_values(name)
            .iter()
            .flat_map(|v| address_list(v))
            .collect::<Vec<_>>()
    };
    let privileged = headers.get_first_value("X-Privileged").and_then(|v| {
        match v.trim().to_ascii_lowercase().as_str() {
            "1" | "true" | "yes" => Some(true),
            "0" | "false" | "no" => Some(false),
            _ => None,
        }
    });
    let record = DocumentRecord::new(
        doc_id,
        sender,
        list("To"),
        list("Cc"),
        list("Bcc"),
        privileged,
    );
    let counsel_signature = opts.detect_counsel
        && mailparse::parse_mail(bytes)
            .ok()
            .and_then(|m| plain_body(&m))
            .is_some_and(|body| detect_counsel_heuristic(&body));
    Parsed::Record {
        record,
        counsel_signature,
    }
}

fn plain_body(mail: &mailparse::ParsedMail<'_>) -> Option<String> {
    if mail.subparts.is_empty() {
        return mail.get_body().ok();
    }
    mail.subparts.iter().find_map(|part| {
        if part.subparts.is_empty() && part.ctype.mimetype != "text/plain" {
            None
        } else {
            plain_body(part)
        }
    })
}

fn address_list(value: &str) -> Vec<EntityKey> {
    match mailparse::addrparse(value) {
        Ok(list) => list
            .iter()
            .flat_map(|addr| match addr {
                MailAddr::Single(info) => vec![single(&info.addr, info.display_name.as_deref())],
                MailAddr::Group(group) => group
                    .addrs
                    .iter()
                    .map(|info| single(&info.addr, info.display_name.as_deref()))
                    .collect(),
            })
            .flatten()
            .collect(),
        Err(_) => value.split(',').filter_map(normalize_address).collect(),
    }
}

fn single(addr: &str, display: Option<&str>) -> Option<EntityKey> {
    normalize_address(addr).or_else(|| display.and_then(normalize_address))
}

fn collect(items: Vec<(String, Parsed)>, opts: IngestOptions) -> Result<ParseOutcome> {
    let mut out = ParseOutcome::default();
    for (position, (origin, parsed)) in items.into_iter().enumerate() {
        match parsed {
            Parsed::Record {
                record,
                counsel_signature,
            } => {
                if opts.detect_counsel && counsel_signature {
                    out.detected_counsel.insert(record.sender.clone());
                }
                out.records.push(record);
            }
            Parsed::Skip(reason) => out.skipped.push(Skipped {
                position,
                origin,
                reason,
            }),
        }
    }
    out.finish()
}

/// Parses one standalone message. `fallback_id` is used when the message
/// has no Message-ID.
pub fn parse_eml(bytes: &[u8], fallback_id: &str, opts: IngestOptions) -> Result<ParseOutcome> {
    let parsed = parse_message(bytes, fallback_id, opts);
    collect(vec![(fallback_id.to_owned(), parsed)], opts)
}

/// Parses every regular file in `dir` (sorted by file name, non-recursive)
/// as one message. Messages without a Message-ID use their file name as id.
pub fn parse_eml_dir(dir: &Path, opts: IngestOptions) -> Result<ParseOutcome> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<_>>()
        .map_err(|e| Error::io(dir, e))?;
    paths.retain(|p| p.is_file());
    paths.sort();

    let items = paths
        .par_iter()
        .map(|path| {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            let parsed = parse_message(&bytes, &name, opts);
            Ok((name, parsed))
        })
        .collect::<Result<Vec<_>>>()?;
    collect(items, opts)
}

/// Splits an mbox stream into messages. A message starts at a `From ` line
/// that is either the first line or follows an empty line.
fn split_mbox(bytes: &[u8]) -> Vec<&[u8]> {
    let mut starts = Vec::new();
    let mut line_start = 0;
    let mut prev_blank = true;
    while line_start < bytes.len() {
        let line_end = bytes[line_start..]
            .iter()
            .position(|&b| b == b'\n')
            .map_or(bytes.len(), |p| line_start + p + 1);
        let line = &bytes[line_start..line_end];
        if prev_blank && line.starts_with(b"From ") {
            starts.push(line_start);
        }
        prev_blank = line.iter().all(|b| b.is_ascii_whitespace());
        line_start = line_end;
    }
    let mut messages = Vec::with_capacity(starts.len());
    for (i, &start) in starts.iter().enumerate() {
        let end = starts.get(i + 1).copied().unwrap_or(bytes.len());
        let chunk = &bytes[start..end];
        // drop the envelope line
        let body_start = chunk
            .iter()
            .position(|&b| b == b'\n')
            .map_or(chunk.len(), |p| p + 1);
        messages.push(&chunk[body_start..]);
    }
    messages
}

/// Parses an mbox file. Messages without a Message-ID get `mbox-<n>`
/// (one-based) as id.
pub fn parse_mbox(bytes: &[u8], opts: IngestOptions) -> Result<ParseOutcome> {
    let items = split_mbox(bytes)
        .par_iter()
        .enumerate()
        .map(|(i, msg)| {
            let fallback = format!("mbox-{}", i + 1);
            let parsed = parse_message(msg, &fallback, opts);
            (fallback, parsed)
        })
        .collect();
    collect(items, opts)
}
