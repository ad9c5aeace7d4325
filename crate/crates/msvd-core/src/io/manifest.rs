//! Dataset manifest: one `identifier, image path, mask path` record per
//! line, `#` starts a comment, paths resolve relative to the manifest file.
//! Referenced files must exist at load time and identifiers must be unique.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Manifest {
                line: line_no,
                detail: format!(
                    "expected `identifier, image path, mask path`, got {} field(s)",
                    fields.len()
                ),
            });
        }
        let id = fields[0].to_string();
        if !seen.insert(id.clone()) {
            return Err(Error::Manifest {
                line: line_no,
                detail: format!("duplicate identifier `{id}`"),
            });
        }
        let image_path = base.join(fields[1]);
        let mask_path = base.join(fields[2]);
        for p in [&image_path, &mask_path] {
            if !p.is_file() {
                return Err(Error::Manifest {
                    line: line_no,
                    detail: format!("referenced file does not exist: {}", p.display()),
                });
            }
        }
        entries.push(ManifestEntry {
            id,
            image_path,
            mask_path,
        });
    }
    Ok(DatasetManifest { entries })
}
