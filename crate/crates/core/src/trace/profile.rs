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

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};

use super::crossing::BorderCrossing;
use super::path::TraceroutePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Parallel,
    Divergent,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Parallel => "Parallel",
            Shape::Divergent => "Divergent",
        })
    }
}

impl std::str::FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parallel" => Ok(Shape::Parallel),
            "divergent" => Ok(Shape::Divergent),
            _ => Err(format!("unknown shape {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("no paths")]
    NoPaths,
}

/// Load-sharing profile of one deployment over its accepted paths.
///
/// `farside_shares[(x, f)]` is the fraction of paths through IXP IP `x` that
/// continued to farside `f`; [`DeploymentProfile::farside_overall`] gives it
/// as a fraction of all paths instead.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentProfile {
    pub ixp_shares: BTreeMap<Ipv4Addr, f64>,
    pub farside_shares: BTreeMap<(Ipv4Addr, Ipv4Addr), f64>,
    pub stability: BTreeMap<Ipv4Addr, bool>,
    pub shape: Shape,
    pub accepted: usize,
    pub ixp_counts: BTreeMap<Ipv4Addr, usize>,
    pub farside_counts: BTreeMap<(Ipv4Addr, Ipv4Addr), usize>,
    pub nearside_ips: BTreeSet<Ipv4Addr>,
    pub ixp_names: BTreeMap<Ipv4Addr, String>,
}

impl DeploymentProfile {
    pub fn farside_overall(&self, ixp_ip: Ipv4Addr, farside_ip: Ipv4Addr) -> f64 {
        self.farside_counts
            .get(&(ixp_ip, farside_ip))
            .map_or(0.0, |&c| c as f64 / self.accepted as f64)
    }

    pub fn farsides_of(&self, ixp_ip: Ipv4Addr) -> impl Iterator<Item = Ipv4Addr> + '_ {
        self.farside_counts
            .range((ixp_ip, Ipv4Addr::UNSPECIFIED)..=(ixp_ip, Ipv4Addr::BROADCAST))
            .map(|(&(_, f), _)| f)
    }

    pub fn is_stable(&self) -> bool {
        self.stability.values().all(|&s| s)
    }
}

pub fn compute_profile(paths: &[(TraceroutePath, BorderCrossing)]) -> Result<DeploymentProfile, ProfileError> {
    if paths.is_empty() {
        return Err(ProfileError::NoPaths);
    }
    let mut ixp_counts: BTreeMap<Ipv4Addr, usize> = BTreeMap::new();
    let mut farside_counts: BTreeMap<(Ipv4Addr, Ipv4Addr), usize> = BTreeMap::new();
    let mut per_dst: BTreeMap<Ipv4Addr, BTreeSet<Ipv4Addr>> = BTreeMap::new();
    let mut nearside_ips = BTreeSet::new();
    let mut ixp_names = BTreeMap::new();
    for (path, c) in paths {
        *ixp_counts.entry(c.ixp_ip).or_default() += 1;
        *farside_counts.entry((c.ixp_ip, c.farside_ip)).or_default() += 1;
        per_dst.entry(path.dst).or_default().insert(c.ixp_ip);
        nearside_ips.insert(c.nearside_ip);
        ixp_names
            .entry(c.ixp_ip)
            .and_modify(|n: &mut String| {
                if c.ixp_name < *n {
                    *n = c.ixp_name.clone();
                }
            })
            .or_insert_with(|| c.ixp_name.clone());
    }
    let total = paths.len() as f64;
    let ixp_shares = ixp_counts.iter().map(|(&ip, &n)| (ip, n as f64 / total)).collect();
    let farside_shares = farside_counts
        .iter()
        .map(|(&(x, f), &n)| ((x, f), n as f64 / ixp_counts[&x] as f64))
        .collect();
    let stability = per_dst.into_iter().map(|(d, s)| (d, s.len() == 1)).collect();
    let parallel = ixp_counts
        .keys()
        .all(|x| farside_counts.keys().filter(|(ix, _)| ix == x).count() == 1);
    Ok(DeploymentProfile {
        ixp_shares,
        farside_shares,
        stability,
        shape: if parallel { Shape::Parallel } else { Shape::Divergent },
        accepted: paths.len(),
        ixp_counts,
        farside_counts,
        nearside_ips,
        ixp_names,
    })
}
