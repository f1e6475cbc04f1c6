//! Name-keyed registries of interchangeable algorithm implementations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Maps names to boxed strategy objects; lookup is by exact name.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces the entry under `name`.
    pub fn register(&mut self, name: impl Into<String>, strategy: Box<T>) {
        self.entries.insert(name.into(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Config(format!(
                "unknown {} strategy {name:?}; available: {}",
                self.kind,
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }
}
