use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::finder::TrialRecord;

/// Append-only JSON-lines file of trial records. Appends from concurrent
/// trials are serialized by a lock and written as one complete line each.
#[derive(Debug)]
pub struct StudyStore {
    path: PathBuf,
    file: Mutex<File>,
}

impl StudyStore {
    /// Start a new study, truncating any existing file.
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        Ok(Self {
            path,
            file: Mutex::new(file),
        })
    }

    /// Append to an existing study, creating the file if needed.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        Ok(Self {
            path,
            file: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, record: &TrialRecord) -> Result<()> {
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut file = self.file.lock().unwrap_or_else(|p| p.into_inner());
        file.write_all(line.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn load(&self) -> Result<Vec<TrialRecord>> {
        load_records(&self.path)
    }
}

/// Read every record. A line that does not parse, or a final line without
/// its newline (an interrupted append), is reported with its 0-based index.
pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut line = String::new();
    for index in 0.. {
        line.clear();
        let n = reader.read_line(&mut line).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        if !line.ends_with('\n') {
            return Err(Error::CorruptRecord {
                index,
                message: "truncated line".into(),
            });
        }
        let record = serde_json::from_str(line.trim_end()).map_err(|e| Error::CorruptRecord {
            index,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}
