//! Append-only journal of finished sweep blocks.
//!
//! ```text
//! nullca-journal v1 <sha256 of the spec fingerprint>
//! <sha256 of payload> <block result as JSON>
//! ...
//! ```
//!
//! A final line without a newline is a torn write from an interrupted run
//! and is dropped. Any complete line that fails its digest is corruption.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::BlockResult;
use crate::error::{Error, Result};

const MAGIC: &str = "nullca-journal v1";

pub struct Journal {
    file: File,
}

fn sha256_hex(data: &str) -> String {
    let digest = Sha256::digest(data.as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

impl Journal {
    /// Opens or creates the journal and returns the blocks it already holds.
    pub fn open(
        path: &Path,
        fingerprint: &str,
        total_blocks: usize,
    ) -> Result<(Journal, BTreeMap<usize, BlockResult>)> {
        let header = format!("{MAGIC} {}", sha256_hex(fingerprint));
        let corrupt = |reason: String| Error::Integrity {
            path: PathBuf::from(path),
            reason,
        };

        let mut contents = String::new();
        if path.exists() {
            File::open(path)?.read_to_string(&mut contents)?;
        }
        // keep only newline-terminated lines
        let complete = contents.rfind('\n').map_or(0, |i| i + 1);
        let mut done = BTreeMap::new();
        let mut lines = contents[..complete].lines();

        match lines.next() {
            None => {
                let mut file = File::create(path)?;
                writeln!(file, "{header}")?;
                file.sync_data()?;
                return Ok((Journal { file }, done));
            }
            Some(first) if first == header => {}
            Some(first) if first.starts_with(MAGIC) => {
                return Err(corrupt(
                    "spec hash mismatch; the journal belongs to a different sweep".into(),
                ));
            }
            Some(_) => return Err(corrupt("missing journal header".into())),
        }

        for (n, line) in lines.enumerate() {
            let lineno = n + 2;
            let (digest, payload) = line
                .split_once(' ')
                .ok_or_else(|| corrupt(format!("line {lineno} is malformed")))?;
            if sha256_hex(payload) != digest {
                return Err(corrupt(format!("line {lineno} fails its digest")));
            }
            let block: BlockResult = serde_json::from_str(payload)
                .map_err(|e| corrupt(format!("line {lineno}: {e}")))?;
            if block.index >= total_blocks {
                return Err(corrupt(format!(
                    "line {lineno}: block {} is out of range",
                    block.index
                )));
            }
            if done.insert(block.index, block).is_some() {
                return Err(corrupt(format!("line {lineno}: duplicate block")));
            }
        }

        let file = OpenOptions::new().write(true).open(path)?;
        file.set_len(complete as u64)?;
        drop(file);
        let file = OpenOptions::new().append(true).open(path)?;
        Ok((Journal { file }, done))
    }

    pub fn append(&mut self, block: &BlockResult) -> Result<()> {
        let payload = serde_json::to_string(block).expect("block results serialize");
        let line = format!("{} {payload}\n", sha256_hex(&payload));
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}
