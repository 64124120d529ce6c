use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::construction::ConstructionTree;
use crate::error::{HullError, Result};

use super::RunConfig;

pub const FORMAT_VERSION: u32 = 1;

/// On-disk form of a construction run. Families keep their generator parameters, so lazily
/// represented generations are reproducible from the archive alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeArchive {
    pub format_version: u32,
    pub config: RunConfig,
    pub tree: ConstructionTree,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

impl TreeArchive {
    pub fn new(config: RunConfig, tree: ConstructionTree) -> Self {
        TreeArchive { format_version: FORMAT_VERSION, config, tree }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| HullError::Archive(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let probe: VersionProbe = serde_json::from_str(text).map_err(|e| HullError::Archive(format!("corrupt archive: {e}")))?;
        if probe.format_version != FORMAT_VERSION {
            return Err(HullError::Archive(format!("format version {} is not supported (expected {FORMAT_VERSION})", probe.format_version)));
        }
        serde_json::from_str(text).map_err(|e| HullError::Archive(format!("corrupt archive: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().ok_or_else(|| HullError::Io(format!("{} has no file name", path.display())))?;
    let mut tmp_name = name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
