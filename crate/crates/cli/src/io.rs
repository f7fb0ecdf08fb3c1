use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bdspectra::bdcomplex::{ColumnContext, E0Column};
use bdspectra::invariants::Restrict;
use bdspectra::rootdata::GroupSpec;
use bdspectra::weyl::WeylData;
use bdspectra::zchain::export::Manifest;

pub const CACHE_ENV: &str = "BDSPECTRA_CACHE_DIR";

fn parent_of(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = parent_of(path);
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)?;
    Ok(())
}

fn cache_path(spec: &GroupSpec) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("weyl-{spec}.json")))
}

/// W-sets for the derived part, read from or stored in the cache directory
/// when one is configured. An unreadable or stale entry is recomputed.
pub fn weyl_data(spec: &GroupSpec) -> Result<WeylData> {
    let der = spec.derived();
    let Some(path) = cache_path(&der) else {
        return Ok(WeylData::compute(&der));
    };
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(data) = serde_json::from_str::<WeylData>(&text) {
            if data.spec == der {
                return Ok(data);
            }
        }
    }
    let data = WeylData::compute(&der);
    write_atomically(&path, serde_json::to_string(&data)?.as_bytes())
        .with_context(|| format!("writing cache entry {}", path.display()))?;
    Ok(data)
}

pub fn derived_context(spec: &GroupSpec) -> Result<ColumnContext> {
    let data = weyl_data(spec)?;
    Ok(ColumnContext::with_wsets(
        &spec.derived(),
        Restrict::Derived,
        data.wsets(),
    ))
}

/// Exports into a fresh sibling directory, then renames it over `dir`.
pub fn export_atomically(col: &E0Column, spec: &GroupSpec, dir: &Path) -> Result<Manifest> {
    let parent = parent_of(dir);
    fs::create_dir_all(parent)?;
    let staging = tempfile::Builder::new()
        .prefix(".bdspectra-export")
        .tempdir_in(parent)?;
    let manifest = col.export(spec, staging.path())?;
    if dir.exists() {
        fs::remove_dir_all(dir).with_context(|| format!("replacing {}", dir.display()))?;
    }
    fs::rename(staging.keep(), dir)
        .with_context(|| format!("moving export into {}", dir.display()))?;
    Ok(manifest)
}
