#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use emissor::ekg::{vocab, GraphStore, Iri, Quad, Term};
use emissor::ns::{GRASPF, ROBOT_TALK, ROBOT_WORLD};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn test_data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

pub fn copy_dir(src: &Path, dst: &Path) {
    std::fs::create_dir_all(dst).unwrap();
    for entry in std::fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        let to = dst.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &to);
        } else {
            std::fs::copy(entry.path(), &to).unwrap();
        }
    }
}

/// Every file under `dir` with its bytes, keyed by relative path.
pub fn tree_bytes(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.insert(
                    path.strip_prefix(root).unwrap().to_path_buf(),
                    std::fs::read(&path).unwrap(),
                );
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

/// (row, token, start, stop) rows of a tab separated oracle table.
pub fn token_table(rel: &str) -> Vec<(usize, String, usize, usize)> {
    std::fs::read_to_string(test_data(rel))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (
                f[0].parse().unwrap(),
                f[1].to_string(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

fn show(term: &Term, rename: &BTreeMap<Iri, &str>) -> String {
    match term {
        Term::Iri(i) => rename.get(i).map(|n| n.to_string()).unwrap_or_else(|| format!("<{i}>")),
        other => other.to_string(),
    }
}

/// The quads around the `pills locatedUnder table` claim, with the visual
/// mention carrying a PROBABLE attribution and that attribution renamed to
/// variables. Only the `chat1_utterance2_char0-39` statement is followed.
pub fn locatedunder_cluster(store: &GraphStore) -> Result<BTreeSet<String>, String> {
    let claim = Iri::ns(ROBOT_WORLD, "pills_locatedunder_table");
    let statement = Iri::ns(ROBOT_TALK, "chat1_utterance2_char0-39");
    let persp = vocab::perspectives();
    let has_attr = vocab::grasp("hasAttribution");
    let probable = Term::Iri(Iri::ns(GRASPF, "PROBABLE"));

    let experiences: Vec<Iri> = store
        .subjects(&persp, &vocab::rdf_type(), &Term::Iri(vocab::grasp("Experience")))
        .cloned()
        .collect();
    let mut visual = Vec::new();
    for v in &experiences {
        for a in store.object_iris(&persp, v, &has_attr) {
            if store.objects(&persp, a, &vocab::rdf_value()).any(|x| *x == probable) {
                visual.push((v.clone(), a.clone()));
            }
        }
    }
    let [(v, av)] = visual.as_slice() else {
        return Err(format!(
            "expected one PROBABLE visual attribution, found {}",
            visual.len()
        ));
    };
    let rename: BTreeMap<Iri, &str> = [(v.clone(), "?visual"), (av.clone(), "?visual-attribution")].into();

    let mut picked: Vec<Quad> = Vec::new();
    picked.extend(store.graph(&claim).cloned());
    picked.extend(
        store
            .graph(&vocab::claims())
            .filter(|q| q.subject == claim)
            .filter(|q| q.predicate != vocab::gaf("denotedBy") || q.object == Term::Iri(statement.clone()))
            .cloned(),
    );
    let mut attributions: Vec<Iri> = store.object_iris(&persp, &statement, &has_attr).cloned().collect();
    attributions.push(av.clone());
    picked.extend(store.graph(&persp).filter(|q| q.subject == statement).cloned());
    picked.extend(
        store
            .graph(&persp)
            .filter(|q| q.subject == *v && q.predicate == has_attr && q.object == Term::Iri(av.clone()))
            .cloned(),
    );
    let mut values = BTreeSet::new();
    for a in &attributions {
        for q in store.graph(&persp).filter(|q| q.subject == *a) {
            if q.predicate == vocab::rdf_value() {
                values.insert(q.object.clone());
            }
            picked.push(q.clone());
        }
    }
    for value in values.iter().filter_map(Term::as_iri) {
        picked.extend(store.graph(&persp).filter(|q| q.subject == *value).cloned());
    }

    Ok(picked
        .iter()
        .map(|q| {
            let object = if q.subject == *av && q.predicate == vocab::label() {
                "?label".to_string()
            } else {
                show(&q.object, &rename)
            };
            format!(
                "{} <{}> {} <{}>",
                show(&Term::Iri(q.subject.clone()), &rename),
                q.predicate,
                object,
                q.graph
            )
        })
        .collect())
}
