//! Files holding the state of each party between commands.
//!
//! Everything lives in one directory: `<system>.params` and `<system>.ca`
//! for the authority, `<id>.seller`, `<id>.pub` and `<id>.user` for the
//! parties, and `<verifier>.vtable` for each verifier's log.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Clone, Debug)]
pub struct Store {
    dir: PathBuf,
    system: String,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Rejects names that would escape the state directory.
pub fn check_name(name: &str) -> Result<(), CliError> {
    let ok = !name.is_empty()
        && !name.starts_with('.')
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "`{name}` is not a valid name (letters, digits, `-`, `_`, `.`)"
        )))
    }
}

impl Store {
    pub fn new(dir: impl Into<PathBuf>, system: &str) -> Result<Self, CliError> {
        check_name(system)?;
        Ok(Self {
            dir: dir.into(),
            system: system.to_string(),
        })
    }

    fn file(&self, stem: &str, ext: &str) -> Result<PathBuf, CliError> {
        check_name(stem)?;
        Ok(self.dir.join(format!("{stem}.{ext}")))
    }

    pub fn params(&self) -> PathBuf {
        self.dir.join(format!("{}.params", self.system))
    }

    pub fn ca(&self) -> PathBuf {
        self.dir.join(format!("{}.ca", self.system))
    }

    pub fn seller(&self, id: &str) -> Result<PathBuf, CliError> {
        self.file(id, "seller")
    }

    pub fn seller_key(&self, id: &str) -> Result<PathBuf, CliError> {
        self.file(id, "pub")
    }

    pub fn user(&self, id: &str) -> Result<PathBuf, CliError> {
        self.file(id, "user")
    }

    pub fn table(&self, verifier: &str) -> Result<PathBuf, CliError> {
        self.file(verifier, "vtable")
    }

    pub fn read(&self, path: &Path) -> Result<Vec<u8>, CliError> {
        fs::read(path).map_err(|source| {
            if source.kind() == ErrorKind::NotFound {
                CliError::Usage(format!("{} does not exist", path.display()))
            } else {
                io_err(path)(source)
            }
        })
    }

    /// Replaces `path` atomically.
    pub fn write(&self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
        fs::rename(&tmp, path).map_err(io_err(path))
    }
}
