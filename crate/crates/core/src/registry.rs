//! Name-keyed registries of interchangeable strategies.
//!
//! Each family (consistency oracles, effective theories, NP∩co-NP languages,
//! knowledge functions) is a trait; implementations are registered under a
//! name and built at runtime from a family-specific parameter type.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown {family} {name:?}; known: {known}")]
    Unknown { family: &'static str, name: String, known: String },
    #[error("{family} {name:?} is already registered")]
    Duplicate { family: &'static str, name: String },
    #[error("cannot build {family} {name:?}: {reason}")]
    Build { family: &'static str, name: String, reason: String },
}

type Factory<P, T> = Box<dyn Fn(&P) -> Result<Box<T>, String> + Send + Sync>;

struct Entry<P, T: ?Sized> {
    description: &'static str,
    make: Factory<P, T>,
}

pub struct Registry<P, T: ?Sized> {
    family: &'static str,
    entries: BTreeMap<String, Entry<P, T>>,
}

impl<P, T: ?Sized> fmt::Debug for Registry<P, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry").field("family", &self.family).field("names", &self.names()).finish()
    }
}

impl<P, T: ?Sized> Registry<P, T> {
    pub fn new(family: &'static str) -> Self {
        Registry { family, entries: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, name: &str, description: &'static str, make: F) -> Result<(), RegistryError>
    where
        F: Fn(&P) -> Result<Box<T>, String> + Send + Sync + 'static,
    {
        if self.entries.contains_key(name) {
            return Err(RegistryError::Duplicate { family: self.family, name: name.to_string() });
        }
        self.entries.insert(name.to_string(), Entry { description, make: Box::new(make) });
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn describe(&self) -> Vec<(&str, &'static str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.description)).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn build(&self, name: &str, params: &P) -> Result<Box<T>, RegistryError> {
        let entry = self.entries.get(name).ok_or_else(|| RegistryError::Unknown {
            family: self.family,
            name: name.to_string(),
            known: self.names().join(", "),
        })?;
        (entry.make)(params).map_err(|reason| RegistryError::Build { family: self.family, name: name.to_string(), reason })
    }
}
