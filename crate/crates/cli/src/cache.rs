//! Flat-file cache of θ-filtrations under $LENSFORM_CACHE_DIR, one JSON file
//! per (p, n). Writes go through a temporary file and a rename, so readers
//! never see a partial file.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use lensform::thickness::theta_filtration;
use lensform::{PrimeModulus, Result, ThetaFiltration};

pub const ENV: &str = "LENSFORM_CACHE_DIR";

fn path_for(p: u64, n: u64) -> Option<PathBuf> {
    let dir = std::env::var_os(ENV).filter(|d| !d.is_empty())?;
    Some(PathBuf::from(dir).join(format!("theta-p{p}-n{n}.json")))
}

pub fn filtration(p: PrimeModulus, n: u64) -> Result<ThetaFiltration> {
    let path = path_for(p.get(), n);
    if let Some(path) = &path {
        if let Ok(bytes) = fs::read(path) {
            match serde_json::from_slice::<ThetaFiltration>(&bytes) {
                Ok(f) if f.p == p.get() && f.n == n && f.check().is_ok() => return Ok(f),
                _ => eprintln!("lensform: ignoring unreadable cache entry {}", path.display()),
            }
        }
    }
    let f = theta_filtration(p, n)?;
    if let Some(path) = &path {
        if let Err(e) = store(path, &f) {
            eprintln!("lensform: cannot write cache entry {}: {e}", path.display());
        }
    }
    Ok(f)
}

fn store(path: &PathBuf, f: &ThetaFiltration) -> std::io::Result<()> {
    let dir = path.parent().expect("cache path has a directory");
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, f)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
