//! On-disk JSON cache of groups, McKay data and invariant bases, one file per label.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::flat::{invariant_basis, FlatModule, InvariantBasis};
use crate::group::{build_group_with, FiniteSubgroup, GroupLabel};
use crate::mckay::{mckay_data_with, McKayData};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub label: GroupLabel,
    pub group: FiniteSubgroup,
    pub mckay: McKayData,
    pub basis: InvariantBasis,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, label: GroupLabel) -> PathBuf {
        self.dir.join(format!("{label}.json"))
    }

    /// `Ok(None)` when no file exists; unreadable or mislabelled files are errors.
    pub fn load(&self, label: GroupLabel) -> Result<Option<CacheEntry>> {
        let path = self.path(label);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(path, e)),
        };
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| Error::json(&path, e))?;
        if entry.label != label {
            return Err(Error::InvalidInput(format!(
                "{}: cached label {} does not match {label}",
                path.display(),
                entry.label
            )));
        }
        Ok(Some(entry))
    }

    pub fn store(&self, entry: &CacheEntry) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        let path = self.path(entry.label);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(entry).map_err(|e| Error::json(&path, e))?;
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Loads the module for `label`, building and storing it on a miss.
    /// The flag reports whether the cache was hit.
    pub fn module(&self, label: GroupLabel, tol: &Tolerances) -> Result<(FlatModule, bool)> {
        if let Some(e) = self.load(label)? {
            return Ok((FlatModule::from_parts(e.group, e.mckay, e.basis, tol.clone()), true));
        }
        let entry = build_entry(label, tol)?;
        self.store(&entry)?;
        Ok((FlatModule::from_parts(entry.group, entry.mckay, entry.basis, tol.clone()), false))
    }
}

pub fn build_entry(label: GroupLabel, tol: &Tolerances) -> Result<CacheEntry> {
    let group = build_group_with(label, tol).map_err(|e| e.in_stage("group"))?;
    let mckay = mckay_data_with(&group, tol).map_err(|e| e.in_stage("mckay"))?;
    let basis = invariant_basis(&group, &mckay).map_err(|e| e.in_stage("basis"))?;
    Ok(CacheEntry {
        label,
        group,
        mckay,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let label = GroupLabel::new(Family::D, 2).unwrap();
        let tol = Tolerances::default();
        let (built, hit) = cache.module(label, &tol).unwrap();
        assert!(!hit);
        let (loaded, hit) = cache.module(label, &tol).unwrap();
        assert!(hit);
        assert_eq!(built.group.elements, loaded.group.elements);
        assert_eq!(built.group.cayley, loaded.group.cayley);
        assert_eq!(built.mckay.a, loaded.mckay.a);
        assert_eq!(built.mckay.isotypic.change, loaded.mckay.isotypic.change);
        assert_eq!(built.basis.vectors, loaded.basis.vectors);
    }

    #[test]
    fn mislabelled_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let a1 = GroupLabel::new(Family::A, 1).unwrap();
        let a2 = GroupLabel::new(Family::A, 2).unwrap();
        cache.module(a1, &Tolerances::default()).unwrap();
        fs::copy(cache.path(a1), cache.path(a2)).unwrap();
        assert!(cache.load(a2).is_err());
    }
}
