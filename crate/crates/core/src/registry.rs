// Copyright 2026 The mbgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Name-keyed registries of interchangeable strategy implementations.
//!
//! Each strategy family (looking-glass transports, flow hashers, clocks) is a
//! trait; implementations are registered under a short name together with a
//! factory that builds a boxed trait object from string parameters. Front ends
//! select an implementation at runtime by name.

use std::collections::BTreeMap;
use std::fmt;

/// String parameters handed to a factory, e.g. `dir=/path/to/fixtures`.
pub type Params = BTreeMap<String, String>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown {family} {name:?}; available: {available}")]
    Unknown {
        family: &'static str,
        name: String,
        available: String,
    },
    #[error("{family} {name:?} needs parameter {param:?}")]
    MissingParam {
        family: &'static str,
        name: String,
        param: String,
    },
    #[error("{family} {name:?}: {message}")]
    Build {
        family: &'static str,
        name: String,
        message: String,
    },
}

type Factory<T> = Box<dyn Fn(&Params) -> Result<Box<T>, RegistryError> + Send + Sync>;

struct Entry<T: ?Sized> {
    description: &'static str,
    factory: Factory<T>,
}

pub struct Registry<T: ?Sized> {
    family: &'static str,
    entries: BTreeMap<String, Entry<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry {
            family,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `factory` under `name`, replacing any earlier registration.
    pub fn register<F>(&mut self, name: &str, description: &'static str, factory: F)
    where
        F: Fn(&Params) -> Result<Box<T>, RegistryError> + Send + Sync + 'static,
    {
        self.entries.insert(
            name.to_string(),
            Entry {
                description,
                factory: Box::new(factory),
            },
        );
    }

    pub fn build(&self, name: &str, params: &Params) -> Result<Box<T>, RegistryError> {
        match self.entries.get(name) {
            Some(e) => (e.factory)(params),
            None => Err(RegistryError::Unknown {
                family: self.family,
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    /// `(name, description)` pairs in name order.
    pub fn describe(&self) -> Vec<(&str, &'static str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.description)).collect()
    }

    pub fn family(&self) -> &'static str {
        self.family
    }
}

impl<T: ?Sized> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("family", &self.family)
            .field("entries", &self.names())
            .finish()
    }
}

/// Fetches a required parameter for a factory.
pub fn require<'a>(
    params: &'a Params,
    family: &'static str,
    name: &str,
    param: &str,
) -> Result<&'a str, RegistryError> {
    params
        .get(param)
        .map(String::as_str)
        .ok_or_else(|| RegistryError::MissingParam {
            family,
            name: name.to_string(),
            param: param.to_string(),
        })
}
