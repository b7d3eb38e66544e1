//! Resumable range cursors, stored as plain JSON.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub subcommand: String,
    /// The parameters that define the scan; a resume must match them.
    pub params: Value,
    /// First unprocessed value of the scanned range.
    pub cursor: u64,
    /// Accumulated result so far.
    pub state: Value,
    pub done: bool,
}

impl Checkpoint {
    pub fn fresh(subcommand: &str, params: Value, cursor: u64, state: Value) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            params,
            cursor,
            state,
            done: false,
        }
    }
}

/// Reads `path` if it exists. A checkpoint written for another scan is an
/// argument error rather than something to silently overwrite.
pub fn load(path: &Path, subcommand: &str, params: &Value) -> Result<Option<Checkpoint>, CliError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let cp: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| CliError::Checkpoint(format!("{}: unreadable: {e}", path.display())))?;
    if cp.subcommand != subcommand || &cp.params != params {
        return Err(CliError::Usage(format!(
            "checkpoint {} belongs to `{}` with {}, not `{subcommand}` with {params}",
            path.display(),
            cp.subcommand,
            cp.params
        )));
    }
    Ok(Some(cp))
}

/// Writes through a temporary file so an interrupted save leaves the previous
/// checkpoint intact.
pub fn save(path: &Path, cp: &Checkpoint) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let text = serde_json::to_string_pretty(cp).map_err(|e| CliError::Checkpoint(e.to_string()))?;
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
