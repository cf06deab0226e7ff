//! The shipped catalog of named resolution graphs.
//!
//! Graph files live in `catalog/` next to the crate manifest and are
//! compiled in. Setting `RATSING_CATALOG_DIR` makes lookups read
//! `<dir>/<NAME>.json` instead.

use std::path::{Path, PathBuf};

use crate::dualgraph::DualGraph;
use crate::error::{Error, Result};

pub const CATALOG_ENV: &str = "RATSING_CATALOG_DIR";
pub const CATALOG_PREFIX: &str = "catalog:";

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        const SHIPPED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../catalog/", $name, ".json"))),)*
        ];
    };
}

shipped!(
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "D4", "D5", "D6", "D7", "D8", "E6", "E7",
    "E8", "HJ3_1", "HJ4_1", "HJ5_2", "HJ7_2", "HJ7_3", "HJ8_3", "HJ11_3", "HJ13_5",
);

/// Override directory from the environment, if set.
pub fn override_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from)
}

/// Names of the catalog graphs, shipped order.
pub fn names() -> Vec<String> {
    match override_dir() {
        Some(dir) => names_in(&dir),
        None => SHIPPED.iter().map(|(n, _)| n.to_string()).collect(),
    }
}

/// Shipped graph names, ignoring any override.
pub fn shipped_names() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(n, _)| *n)
}

fn names_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let path = e.path();
            (path.extension()? == "json")
                .then(|| path.file_stem()?.to_str().map(str::to_owned))
                .flatten()
        })
        .collect();
    names.sort();
    names
}

/// The compiled-in copy of a shipped graph.
pub fn shipped(name: &str) -> Result<DualGraph> {
    SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownCatalogGraph(name.to_owned()))
        .and_then(|(_, text)| DualGraph::parse_json(text))
}

pub fn load(name: &str) -> Result<DualGraph> {
    match override_dir() {
        Some(dir) => {
            let path = dir.join(format!("{name}.json"));
            if !path.is_file() {
                return Err(Error::UnknownCatalogGraph(name.to_owned()));
            }
            read_graph_file(&path)
        }
        None => shipped(name),
    }
}

pub fn all() -> Result<Vec<DualGraph>> {
    names().iter().map(|n| load(n)).collect()
}

pub fn read_graph_file(path: &Path) -> Result<DualGraph> {
    let text = read_text(path)?;
    DualGraph::parse_json(&text)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Resolves `catalog:NAME` against the catalog, anything else as a path.
pub fn resolve(input: &str) -> Result<DualGraph> {
    match input.strip_prefix(CATALOG_PREFIX) {
        Some(name) => load(name),
        None => read_graph_file(Path::new(input)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_file_parses_and_is_named_after_itself() {
        for name in shipped_names() {
            let g = shipped(name).unwrap();
            assert_eq!(g.name(), name);
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(shipped("Z9"), Err(Error::UnknownCatalogGraph(_))));
    }
}
