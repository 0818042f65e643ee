//! Plain-text dataset files and the split manifest.
//!
//! One line per pair, `IN: <command> OUT: <actions>`, newline-terminated
//! UTF-8, in enumeration order, so repeated runs produce byte-identical
//! files.

use super::semantics::ActionSeq;
use super::splits::Splits;
use crate::scan::grammar::Command;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("writing {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("reading {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected 'IN: <command> OUT: <actions>'")]
    Malformed { path: PathBuf, line: usize },
}

/// Writes one split; an empty split produces an empty file.
pub fn write_dataset(pairs: &[(Command, ActionSeq)], path: &Path) -> Result<(), DatasetError> {
    let mut contents = String::new();
    for (command, actions) in pairs {
        writeln!(contents, "IN: {command} OUT: {actions}").expect("string writes cannot fail");
    }
    fs::write(path, contents).map_err(|source| DatasetError::Write {
        path: path.to_owned(),
        source,
    })
}

/// Parses a dataset file back into (command text, action text) pairs.
pub fn read_dataset(path: &Path) -> Result<Vec<(String, String)>, DatasetError> {
    let contents = fs::read_to_string(path).map_err(|source| DatasetError::Read {
        path: path.to_owned(),
        source,
    })?;
    contents
        .lines()
        .enumerate()
        .map(|(i, line)| {
            let rest = line.strip_prefix("IN: ").ok_or_else(|| DatasetError::Malformed {
                path: path.to_owned(),
                line: i + 1,
            })?;
            let (command, actions) =
                rest.split_once(" OUT: ").ok_or_else(|| DatasetError::Malformed {
                    path: path.to_owned(),
                    line: i + 1,
                })?;
            Ok((command.to_owned(), actions.to_owned()))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub split: String,
    pub file: String,
    pub pairs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitManifest {
    pub schema: u32,
    pub total_pairs: usize,
    pub files: Vec<ManifestEntry>,
}

/// Writes every split as `<stem>.txt` under `dir`, plus `manifest.json`
/// listing the per-split pair counts.
pub fn write_splits(splits: &Splits, dir: &Path) -> Result<SplitManifest, DatasetError> {
    let mut files = Vec::new();
    for (name, pairs) in splits.iter() {
        let file = format!("{}.txt", name.file_stem());
        write_dataset(pairs, &dir.join(&file))?;
        files.push(ManifestEntry {
            split: name.file_stem().to_owned(),
            file,
            pairs: pairs.len(),
        });
    }
    let manifest = SplitManifest {
        schema: 1,
        total_pairs: splits.total_pairs(),
        files,
    };
    let path = dir.join("manifest.json");
    let mut body =
        serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    body.push('\n');
    fs::write(&path, body).map_err(|source| DatasetError::Write { path, source })?;
    Ok(manifest)
}
