//! Download of PDB entries into a local directory. Not used by any scoring path.

use std::path::{Path, PathBuf};

use crate::error::{AppError, AppResult};

pub const RCSB_DOWNLOAD: &str = "https://files.rcsb.org/download";

/// Four alphanumeric characters starting with a digit, returned upper-case.
pub fn normalize_pdb_id(id: &str) -> AppResult<String> {
    let id = id.trim();
    let ok = id.len() == 4
        && id.chars().all(|c| c.is_ascii_alphanumeric())
        && id.chars().next().is_some_and(|c| c.is_ascii_digit());
    if ok {
        Ok(id.to_ascii_uppercase())
    } else {
        Err(AppError::Usage(format!("'{id}' is not a PDB id")))
    }
}

pub fn pdb_url(id: &str) -> AppResult<String> {
    Ok(format!("{RCSB_DOWNLOAD}/{}.pdb", normalize_pdb_id(id)?))
}

/// Fetches `<ID>.pdb` into `dir`, skipping the download if the file exists.
pub fn fetch_pdb(id: &str, dir: &Path) -> AppResult<PathBuf> {
    let id = normalize_pdb_id(id)?;
    let path = dir.join(format!("{id}.pdb"));
    if path.exists() {
        return Ok(path);
    }
    let url = pdb_url(&id)?;
    let body = ureq::get(&url)
        .call()
        .map_err(|e| AppError::Data(format!("{url}: {e}")))?
        .body_mut()
        .read_to_string()
        .map_err(|e| AppError::Data(format!("{url}: {e}")))?;
    crate::pdb::parse_pdb(&body, &id, None).map_err(|e| AppError::parse(url.clone(), e.to_string()))?;
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    std::fs::write(&path, body).map_err(|e| AppError::io(&path, e))?;
    Ok(path)
}
