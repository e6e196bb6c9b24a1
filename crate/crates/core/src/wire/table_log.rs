//! The verifier table as an append-only log: each record is a 4-byte
//! big-endian length followed by one `VerifierEntry` envelope.

use std::fs::{self, File, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::Path;

use eticket_groups::PairingGroup;

use super::{decode, encode, WireError};
use crate::scheme::{VerifierEntry, VerifierTable};

fn record<B: PairingGroup>(grp: &B, entry: &VerifierEntry<B>) -> Vec<u8> {
    let body = encode(grp, entry);
    let mut out = Vec::with_capacity(body.len() + 4);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(&body);
    out
}

/// Log bytes for a whole table.
pub fn table_bytes<B: PairingGroup>(table: &VerifierTable<B>, grp: &B) -> Vec<u8> {
    table.entries().iter().flat_map(|e| record(grp, e)).collect()
}

/// Rewrites the log at `path` with every entry of `table`.
pub fn persist_table<B: PairingGroup>(grp: &B, table: &VerifierTable<B>, path: &Path) -> Result<(), WireError> {
    let tmp = path.with_extension("vtable.tmp");
    {
        let mut f = File::create(&tmp)?;
        f.write_all(&table_bytes(table, grp))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Appends one record to the log at `path`, creating it if needed.
pub fn append_entry<B: PairingGroup>(grp: &B, entry: &VerifierEntry<B>, path: &Path) -> Result<(), WireError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(&record(grp, entry))?;
    f.sync_data()?;
    Ok(())
}

/// Reads the log at `path`. A missing file is an empty table. An incomplete
/// final record is cut off the file with a warning; any other undecodable
/// record is an error.
pub fn load_table<B: PairingGroup>(grp: &B, path: &Path) -> Result<VerifierTable<B>, WireError> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(VerifierTable::new(grp.clone())),
        Err(e) => return Err(e.into()),
    };
    let (table, complete) = parse_log(grp, &bytes)?;
    if complete < bytes.len() {
        log::warn!(
            "{}: dropping {} bytes of an incomplete trailing record",
            path.display(),
            bytes.len() - complete
        );
        OpenOptions::new().write(true).open(path)?.set_len(complete as u64)?;
    }
    Ok(table)
}

/// Decodes log bytes, returning the table and the length of the complete
/// prefix.
pub fn parse_log<B: PairingGroup>(grp: &B, bytes: &[u8]) -> Result<(VerifierTable<B>, usize), WireError> {
    let mut table = VerifierTable::new(grp.clone());
    let mut pos = 0;
    while pos < bytes.len() {
        let rest = &bytes[pos..];
        let Some(len) = rest.get(..4) else { break };
        let len = u32::from_be_bytes(len.try_into().expect("4 bytes")) as usize;
        if len > super::MAX_BODY + super::BODY_OFFSET {
            return Err(WireError::CorruptRecord {
                offset: pos,
                reason: format!("record length {len}"),
            });
        }
        let Some(body) = rest.get(4..4 + len) else { break };
        let entry = decode::<B, VerifierEntry<B>>(grp, body).map_err(|e| WireError::CorruptRecord {
            offset: pos,
            reason: e.to_string(),
        })?;
        table.push(entry);
        pos += 4 + len;
    }
    Ok((table, pos))
}
