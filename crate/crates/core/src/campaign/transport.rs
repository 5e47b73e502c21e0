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

use std::fmt;
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};

use crate::lg::format::{DETAIL_COMMAND_PREFIX, SUMMARY_COMMAND};
use crate::registry::{require, Params, Registry, RegistryError};
use crate::RouterName;

/// The two looking-glass commands a campaign issues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgCommand {
    Summary,
    Detail(Ipv4Addr),
}

impl LgCommand {
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == SUMMARY_COMMAND {
            return Some(LgCommand::Summary);
        }
        s.strip_prefix(DETAIL_COMMAND_PREFIX)
            .and_then(|a| a.trim().parse().ok())
            .map(LgCommand::Detail)
    }
}

impl fmt::Display for LgCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LgCommand::Summary => f.write_str(SUMMARY_COMMAND),
            LgCommand::Detail(a) => write!(f, "{DETAIL_COMMAND_PREFIX}{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("unknown router {0}")]
    UnknownRouter(String),
    #[error("unsupported command {0:?}")]
    UnsupportedCommand(String),
    #[error("no response recorded for {router}: {command}")]
    NotFound { router: String, command: String },
    #[error("looking glass unreachable: {0}")]
    Unreachable(String),
}

/// A looking glass: answers a command on one of its routers with the full
/// response body.
pub trait LgTransport: Send + Sync {
    /// Routers this looking glass can be queried on.
    fn routers(&self) -> Vec<RouterName>;

    fn query(&self, router: &RouterName, command: &str) -> Result<String, TransportError>;
}

/// Replays responses stored on disk.
///
/// Layout: `<dir>/<router>/summary.txt` for the summary and
/// `<dir>/<router>/detail_<a.b.c.d>.txt` for route details.
#[derive(Debug, Clone)]
pub struct FixtureTransport {
    dir: PathBuf,
}

impl FixtureTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureTransport { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn summary_path(dir: &Path, router: &RouterName) -> PathBuf {
        dir.join(router.as_str()).join("summary.txt")
    }

    pub fn detail_path(dir: &Path, router: &RouterName, addr: Ipv4Addr) -> PathBuf {
        dir.join(router.as_str()).join(format!("detail_{addr}.txt"))
    }
}

impl LgTransport for FixtureTransport {
    fn routers(&self) -> Vec<RouterName> {
        let Ok(rd) = std::fs::read_dir(&self.dir) else {
            return Vec::new();
        };
        let mut out: Vec<RouterName> = rd
            .filter_map(Result::ok)
            .filter(|e| e.path().is_dir())
            .filter_map(|e| e.file_name().to_str().map(RouterName::new))
            .collect();
        out.sort();
        out
    }

    fn query(&self, router: &RouterName, command: &str) -> Result<String, TransportError> {
        if !self.dir.is_dir() {
            return Err(TransportError::Unreachable(self.dir.display().to_string()));
        }
        if router.as_str().contains(['/', '\\']) || !self.dir.join(router.as_str()).is_dir() {
            return Err(TransportError::UnknownRouter(router.to_string()));
        }
        let path = match LgCommand::parse(command) {
            Some(LgCommand::Summary) => Self::summary_path(&self.dir, router),
            Some(LgCommand::Detail(a)) => Self::detail_path(&self.dir, router, a),
            None => return Err(TransportError::UnsupportedCommand(command.to_string())),
        };
        std::fs::read_to_string(&path).map_err(|_| TransportError::NotFound {
            router: router.to_string(),
            command: command.to_string(),
        })
    }
}

/// Built-in transports: `fixture` (param `dir`) and `sim` (param `scenario`,
/// a scenario JSON file).
pub fn transport_registry() -> Registry<dyn LgTransport> {
    let mut r: Registry<dyn LgTransport> = Registry::new("transport");
    r.register("fixture", "replays responses from a fixture directory", |p: &Params| {
        let dir = require(p, "transport", "fixture", "dir")?;
        Ok(Box::new(FixtureTransport::new(dir)))
    });
    r.register("sim", "answers from a simulated scenario", |p: &Params| {
        let path = require(p, "transport", "sim", "scenario")?;
        let scenario = crate::sim::Scenario::load(Path::new(path)).map_err(|e| RegistryError::Build {
            family: "transport",
            name: "sim".into(),
            message: e.to_string(),
        })?;
        Ok(Box::new(crate::sim::SimTransport::new(scenario)))
    });
    r
}
