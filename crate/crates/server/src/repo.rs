//! Scenario folders under one root directory, with per-scenario locking and
//! version counters.
//!
//! The filesystem stays the source of truth: every read loads the folder and
//! every mutation writes it back before returning. A scenario's version is
//! bumped on each mutation made here and whenever its metadata files change
//! behind the server's back, so a client holding an old version gets a
//! conflict instead of silently overwriting someone else's edit.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use emissor::ekg::{read_batches, GraphStore};
use emissor::model::{ScenarioBundle, ValidationReport};
use emissor::segmentation::{RegistryEntry, PERSON_CLASS};
use emissor::storage::{load_scenario, save_scenario, Loaded, StorageError, RDF_DIR};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

pub const IDENTITIES_FILE: &str = "identities.json";

#[derive(Debug, Default)]
struct SlotState {
    version: u64,
    fingerprint: Option<u64>,
}

#[derive(Debug, Default)]
struct Slot {
    state: RwLock<SlotState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub iri: String,
    pub name: String,
    #[serde(default = "person_class")]
    pub class: String,
}

fn person_class() -> String {
    PERSON_CLASS.to_string()
}

/// One scenario as read from disk.
pub struct Snapshot {
    pub loaded: Loaded,
    pub version: u64,
    pub dir: PathBuf,
}

#[derive(Debug)]
pub struct Repository {
    root: PathBuf,
    slots: Mutex<HashMap<String, Arc<Slot>>>,
    identities: Mutex<()>,
}

fn fingerprint(dir: &Path, bundle: &ScenarioBundle) -> u64 {
    let mut h = DefaultHasher::new();
    let id = &bundle.scenario.id;
    let mut files = vec![format!("{id}.json")];
    files.extend(
        bundle
            .scenario
            .signals
            .values()
            .map(|f| f.trim_start_matches("./").to_string()),
    );
    for f in files {
        f.hash(&mut h);
        std::fs::read(dir.join(&f)).ok().hash(&mut h);
    }
    h.finish()
}

impl Repository {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Repository {
            root: root.into(),
            slots: Mutex::new(HashMap::new()),
            identities: Mutex::new(()),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Ids of every folder `<root>/<id>/` holding `<id>.json`, sorted.
    pub fn ids(&self) -> Result<Vec<String>, ApiError> {
        let mut ids = Vec::new();
        let entries = std::fs::read_dir(&self.root).map_err(|e| ApiError::internal(StorageError::io(&self.root, e)))?;
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if entry.path().join(format!("{name}.json")).is_file() {
                ids.push(name);
            }
        }
        ids.sort();
        Ok(ids)
    }

    fn dir(&self, id: &str) -> Result<PathBuf, ApiError> {
        let plain = !id.is_empty() && !id.starts_with('.') && !id.contains(['/', '\\']);
        let dir = self.root.join(id);
        if plain && dir.join(format!("{id}.json")).is_file() {
            Ok(dir)
        } else {
            Err(ApiError::NotFound(format!("scenario {id}")))
        }
    }

    fn slot(&self, id: &str) -> Arc<Slot> {
        let mut slots = self.slots.lock().expect("slot table poisoned");
        slots.entry(id.to_string()).or_default().clone()
    }

    /// Counts an external edit as a new version.
    fn observe(state: &mut SlotState, print: u64) {
        if state.fingerprint != Some(print) {
            state.version += 1;
            state.fingerprint = Some(print);
        }
    }

    pub fn read(&self, id: &str) -> Result<Snapshot, ApiError> {
        let dir = self.dir(id)?;
        let slot = self.slot(id);
        let state = slot.state.read().expect("scenario lock poisoned");
        let loaded = load_scenario(&dir).map_err(ApiError::storage)?;
        let print = fingerprint(&dir, &loaded.bundle);
        let version = if state.fingerprint == Some(print) {
            state.version
        } else {
            drop(state);
            let mut state = slot.state.write().expect("scenario lock poisoned");
            Self::observe(&mut state, print);
            state.version
        };
        Ok(Snapshot { loaded, version, dir })
    }

    /// Applies `edit` under the scenario's write lock. The edit sees the
    /// current on-disk state; the result is validated and written back only
    /// when it has no violations. `expected` is the version the client last
    /// saw, if it sent one.
    pub fn mutate<T>(
        &self,
        id: &str,
        expected: Option<u64>,
        edit: impl FnOnce(&mut ScenarioBundle) -> Result<T, ApiError>,
    ) -> Result<(T, u64), ApiError> {
        let dir = self.dir(id)?;
        let slot = self.slot(id);
        let mut state = slot.state.write().expect("scenario lock poisoned");
        let mut bundle = load_scenario(&dir).map_err(ApiError::storage)?.bundle;
        Self::observe(&mut state, fingerprint(&dir, &bundle));
        if let Some(expected) = expected {
            if expected != state.version {
                return Err(ApiError::Conflict {
                    expected,
                    current: state.version,
                });
            }
        }
        let out = edit(&mut bundle)?;
        let report = bundle.validate_with_media(&dir);
        if !report.is_valid() {
            return Err(ApiError::invalid("the edit leaves the scenario invalid", report));
        }
        save_scenario(&bundle, &dir).map_err(ApiError::storage)?;
        state.version += 1;
        state.fingerprint = Some(fingerprint(&dir, &bundle));
        Ok((out, state.version))
    }

    /// Runs `f` with the scenario and its graph while holding the write
    /// lock, so emissions into one scenario never interleave.
    pub fn exclusive<T>(
        &self,
        id: &str,
        f: impl FnOnce(&Snapshot, &mut GraphStore, &Path) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let dir = self.dir(id)?;
        let slot = self.slot(id);
        let mut state = slot.state.write().expect("scenario lock poisoned");
        let loaded = load_scenario(&dir).map_err(ApiError::storage)?;
        Self::observe(&mut state, fingerprint(&dir, &loaded.bundle));
        let snapshot = Snapshot {
            loaded,
            version: state.version,
            dir: dir.clone(),
        };
        let rdf = dir.join(RDF_DIR);
        let mut store = load_graph(&rdf)?;
        f(&snapshot, &mut store, &rdf)
    }

    /// The scenario's graph, read under the read lock.
    pub fn graph(&self, id: &str) -> Result<GraphStore, ApiError> {
        let dir = self.dir(id)?;
        let slot = self.slot(id);
        let _state = slot.state.read().expect("scenario lock poisoned");
        load_graph(&dir.join(RDF_DIR))
    }

    /// Scenario holding a mention, searched in id order.
    pub fn scenario_of_mention(&self, mention_id: &str) -> Result<String, ApiError> {
        for id in self.ids()? {
            let snap = self.read(&id)?;
            if snap.loaded.bundle.find_mention(mention_id).is_some() {
                return Ok(id);
            }
        }
        Err(ApiError::NotFound(format!("mention {mention_id}")))
    }

    fn identities_path(&self) -> PathBuf {
        self.root.join(IDENTITIES_FILE)
    }

    fn registered(&self) -> Result<Vec<Identity>, ApiError> {
        let path = self.identities_path();
        if !path.is_file() {
            return Ok(Vec::new());
        }
        let text = std::fs::read_to_string(&path).map_err(|e| ApiError::internal(StorageError::io(&path, e)))?;
        serde_json::from_str(&text).map_err(|e| ApiError::Internal(format!("{}: {e}", path.display())))
    }

    /// Registered identities first, then scenario participants not
    /// registered under the same IRI.
    pub fn identities(&self) -> Result<Vec<Identity>, ApiError> {
        let _guard = self.identities.lock().expect("identity lock poisoned");
        self.identities_unlocked()
    }

    fn identities_unlocked(&self) -> Result<Vec<Identity>, ApiError> {
        let mut out = self.registered()?;
        let mut seen: std::collections::HashSet<String> =
            out.iter().map(|i| emissor::ns::resolve_identifier(&i.iri)).collect();
        for id in self.ids()? {
            let snap = self.read(&id)?;
            for p in snap.loaded.bundle.scenario.context.participants() {
                if seen.insert(emissor::ns::resolve_identifier(&p.id)) {
                    out.push(Identity {
                        iri: p.id.clone(),
                        name: p.name.clone(),
                        class: PERSON_CLASS.to_string(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// Returns the identity with this name, registering a new one when no
    /// identity has it. The flag tells whether it was created.
    pub fn mint_identity(&self, name: &str, class: Option<&str>) -> Result<(Identity, bool), ApiError> {
        use emissor::ids::IdMint;
        use emissor::segmentation::{resolve_identity, IdentityQuery, Resolution};

        let _guard = self.identities.lock().expect("identity lock poisoned");
        let all = self.identities_unlocked()?;
        let registry: Vec<RegistryEntry> = all
            .iter()
            .map(|i| RegistryEntry::new(i.iri.clone(), i.name.clone()))
            .collect();
        match resolve_identity(IdentityQuery::Name(name), &registry, &mut IdMint::Random) {
            Resolution::Known(iri) => {
                let found = all.into_iter().find(|i| i.iri == iri).expect("resolved from this list");
                Ok((found, false))
            }
            Resolution::New(n) => {
                let identity = Identity {
                    iri: n.iri,
                    name: n.name,
                    class: class.map(str::to_string).unwrap_or(n.class),
                };
                let mut registered = self.registered()?;
                registered.push(identity.clone());
                let path = self.identities_path();
                let mut text = serde_json::to_string_pretty(&registered).expect("identities serialize");
                text.push('\n');
                std::fs::write(&path, text).map_err(|e| ApiError::internal(StorageError::io(&path, e)))?;
                Ok((identity, true))
            }
        }
    }
}

pub fn load_graph(rdf: &Path) -> Result<GraphStore, ApiError> {
    if !rdf.is_dir() {
        return Ok(GraphStore::new());
    }
    read_batches(rdf).map_err(|e| ApiError::Internal(format!("{}: {e}", rdf.display())))
}

/// Validation report as JSON.
pub fn report_json(report: &ValidationReport) -> serde_json::Value {
    serde_json::json!({
        "valid": report.is_valid(),
        "violations": report
            .violations
            .iter()
            .map(|v| serde_json::json!({ "kind": v.kind(), "message": v.to_string() }))
            .collect::<Vec<_>>(),
    })
}
