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

use std::collections::BTreeSet;
use std::net::Ipv4Addr;
use std::path::Path;

use ipnet::Ipv4Net;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bgp::{hasher_registry, FlowHasher, DEFAULT_HASHER, DEFAULT_MAX_PATHS};
use crate::registry::Params;
use crate::trace::Shape;
use crate::{Asn, RouterName};

pub const SCENARIO_FORMAT: &str = "mbgp-scenario/1";
pub const DEFAULT_LINK_MIX: [f64; 3] = [82.8, 8.7, 8.4];
pub const DEFAULT_FANOUT: usize = 3;

const LOCATIONS: [(&str, &str); 20] = [
    ("sjc", "San Jose"),
    ("tor", "Toronto"),
    ("fra", "Frankfurt"),
    ("ams", "Amsterdam"),
    ("lon", "London"),
    ("nyc", "New York"),
    ("chi", "Chicago"),
    ("sea", "Seattle"),
    ("lax", "Los Angeles"),
    ("par", "Paris"),
    ("hkg", "Hong Kong"),
    ("sin", "Singapore"),
    ("tyo", "Tokyo"),
    ("syd", "Sydney"),
    ("mia", "Miami"),
    ("dal", "Dallas"),
    ("den", "Denver"),
    ("atl", "Atlanta"),
    ("zrh", "Zurich"),
    ("sto", "Stockholm"),
];

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown router {0}")]
    UnknownRouter(String),
    #[error("{dst} is not reachable from {src}")]
    Unreachable { src: Ipv4Addr, dst: Ipv4Addr },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("scenario file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Size and mix parameters for [`generate_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub routers: usize,
    pub peers: usize,
    /// Probability that a peer has a session at a given router.
    pub presence: f64,
    /// Share of sessions configured with M-BGP.
    pub mbgp_fraction: f64,
    /// Relative weights of link counts 2, 3 and 4 among M-BGP sessions.
    pub link_mix: [f64; 3],
    pub divergent_fraction: f64,
    pub fanout: usize,
    pub max_paths: usize,
    pub max_prefixes: usize,
    pub source_as: Asn,
    /// Share of M-BGP sessions that also have one untied neighbor address.
    pub extra_neighbor_fraction: f64,
    /// Share of IXP member interfaces left out of the IXP dataset.
    pub member_omit_fraction: f64,
    /// Flow hasher the routers use for load sharing, by registry name.
    pub hasher: String,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            routers: 4,
            peers: 20,
            presence: 0.4,
            mbgp_fraction: 0.5,
            link_mix: DEFAULT_LINK_MIX,
            divergent_fraction: 0.25,
            fanout: DEFAULT_FANOUT,
            max_paths: DEFAULT_MAX_PATHS,
            max_prefixes: 3,
            source_as: Asn(6939),
            extra_neighbor_fraction: 0.2,
            member_omit_fraction: 0.1,
            hasher: DEFAULT_HASHER.to_string(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if !(1..=127).contains(&self.routers) {
            return bad(format!("routers must be in 1..=127, got {}", self.routers));
        }
        if !(1..=254).contains(&self.peers) {
            return bad(format!("peers must be in 1..=254, got {}", self.peers));
        }
        for (name, v) in [
            ("presence", self.presence),
            ("mbgp_fraction", self.mbgp_fraction),
            ("divergent_fraction", self.divergent_fraction),
            ("extra_neighbor_fraction", self.extra_neighbor_fraction),
            ("member_omit_fraction", self.member_omit_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if self.link_mix.iter().any(|w| !w.is_finite() || *w < 0.0) || self.link_mix.iter().sum::<f64>() <= 0.0 {
            return bad(format!(
                "link mix {:?} needs non-negative weights with a positive sum",
                self.link_mix
            ));
        }
        if !(2..=8).contains(&self.fanout) {
            return bad(format!("fanout must be in 2..=8, got {}", self.fanout));
        }
        if !hasher_registry().contains(&self.hasher) {
            return bad(format!("unknown flow hasher {:?}", self.hasher));
        }
        if self.max_paths == 0 {
            return bad("max_paths must be at least 1".into());
        }
        if !(1..=64).contains(&self.max_prefixes) {
            return bad(format!("max_prefixes must be in 1..=64, got {}", self.max_prefixes));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimRouter {
    pub name: RouterName,
    pub location: String,
    pub router_id: Ipv4Addr,
    /// Traceroute source address behind this router.
    pub probe_src: Ipv4Addr,
    pub gateway: Ipv4Addr,
    pub nearside: Vec<Ipv4Addr>,
    pub ixp_name: String,
    pub ixp_prefix: Ipv4Net,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimPeer {
    pub asn: Asn,
    /// Covering block for the peer's prefixes and router interfaces.
    pub block: Ipv4Net,
    pub prefixes: Vec<Ipv4Net>,
}

impl SimPeer {
    /// The peer's /24 prefixes, ascending.
    pub fn targets(&self) -> Vec<Ipv4Net> {
        let mut v: Vec<Ipv4Net> = self.prefixes.iter().copied().filter(|p| p.prefix_len() == 24).collect();
        v.sort();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wiring {
    Parallel,
    Divergent { fanout: usize },
}

impl Wiring {
    pub fn shape(self) -> Shape {
        match self {
            Wiring::Parallel => Shape::Parallel,
            Wiring::Divergent { .. } => Shape::Divergent,
        }
    }
}

/// One peer's presence at one router.
///
/// The first `link_count` neighbor addresses carry tied routes; the rest
/// are announced with a lower local preference. `farsides[i]` are the peer
/// interfaces behind `neighbor_addresses[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub router: RouterName,
    pub peer: Asn,
    pub ixp_name: String,
    pub neighbor_addresses: Vec<Ipv4Addr>,
    pub link_count: usize,
    pub wiring: Wiring,
    /// Index into the peer's sorted /24s of the first prefix with tied
    /// routes; earlier /24s have a single best route.
    pub first_target: usize,
    pub farsides: Vec<Vec<Ipv4Addr>>,
    /// Neighbor addresses missing from the IXP member list.
    pub unregistered: Vec<Ipv4Addr>,
}

impl Session {
    pub fn tied_addresses(&self) -> &[Ipv4Addr] {
        &self.neighbor_addresses[..self.link_count.min(self.neighbor_addresses.len())]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub format: String,
    pub seed: u64,
    pub source_as: Asn,
    pub max_paths: usize,
    pub link_mix: [f64; 3],
    #[serde(default = "default_hasher")]
    pub hasher: String,
    pub routers: Vec<SimRouter>,
    pub peers: Vec<SimPeer>,
    pub sessions: Vec<Session>,
}

fn default_hasher() -> String {
    DEFAULT_HASHER.to_string()
}

impl Scenario {
    pub fn flow_hasher(&self) -> Result<Box<dyn FlowHasher>, SimError> {
        hasher_registry()
            .build(&self.hasher, &Params::new())
            .map_err(|e| SimError::InvalidConfig(e.to_string()))
    }

    pub fn router(&self, name: &RouterName) -> Option<&SimRouter> {
        self.routers.iter().find(|r| &r.name == name)
    }

    pub fn router_by_source(&self, src: Ipv4Addr) -> Option<&SimRouter> {
        self.routers.iter().find(|r| r.probe_src == src)
    }

    pub fn peer(&self, asn: Asn) -> Option<&SimPeer> {
        self.peers.iter().find(|p| p.asn == asn)
    }

    pub fn session(&self, router: &RouterName, peer: Asn) -> Option<&Session> {
        self.sessions.iter().find(|s| &s.router == router && s.peer == peer)
    }

    pub fn sessions_at<'a>(&'a self, router: &'a RouterName) -> impl Iterator<Item = &'a Session> + 'a {
        self.sessions.iter().filter(move |s| &s.router == router)
    }

    /// The peer prefix containing `addr`, longest first.
    pub fn prefix_of(&self, addr: Ipv4Addr) -> Option<(&SimPeer, Ipv4Net)> {
        self.peers
            .iter()
            .flat_map(|p| p.prefixes.iter().map(move |n| (p, *n)))
            .filter(|(_, n)| n.contains(&addr))
            .max_by_key(|(_, n)| n.prefix_len())
    }

    /// Number of routes a session gets installed once ties are truncated to
    /// `max_paths`.
    pub fn installed_links(&self, s: &Session) -> usize {
        if s.link_count < 2 {
            1
        } else {
            s.tied_addresses().len().min(self.max_paths)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let s: Scenario = serde_json::from_str(text)?;
        if s.format != SCENARIO_FORMAT {
            return Err(SimError::InvalidConfig(format!(
                "unsupported scenario format {:?}",
                s.format
            )));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), SimError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruthPair {
    pub router: RouterName,
    pub peering_as: Asn,
    pub prefix: Ipv4Net,
    pub next_hops: BTreeSet<Ipv4Addr>,
    pub shape: Shape,
}

/// The M-BGP deployments a scenario contains, read off its configuration.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroundTruth {
    pub pairs: Vec<TruthPair>,
}

impl GroundTruth {
    pub fn from_scenario(s: &Scenario) -> Self {
        let mut pairs = Vec::new();
        for sess in &s.sessions {
            let n = s.installed_links(sess);
            if n < 2 {
                continue;
            }
            let peer = s.peer(sess.peer).expect("session peer exists");
            let mut tied: Vec<Ipv4Addr> = sess.tied_addresses().to_vec();
            tied.sort();
            pairs.push(TruthPair {
                router: sess.router.clone(),
                peering_as: sess.peer,
                prefix: peer.targets()[sess.first_target],
                next_hops: tied.into_iter().take(n).collect(),
                shape: sess.wiring.shape(),
            });
        }
        pairs.sort();
        GroundTruth { pairs }
    }

    pub fn keys(&self) -> BTreeSet<(RouterName, Asn)> {
        self.pairs.iter().map(|p| (p.router.clone(), p.peering_as)).collect()
    }

    pub fn pair(&self, router: &RouterName, asn: Asn) -> Option<&TruthPair> {
        self.pairs.iter().find(|p| &p.router == router && p.peering_as == asn)
    }
}

/// Splits `total` into parts proportional to `weights` by largest remainder.
pub fn quota(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut out: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut left = total - out.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for i in order.into_iter().cycle() {
        if left == 0 {
            break;
        }
        out[i] += 1;
        left -= 1;
    }
    out
}

fn offset(base: Ipv4Net, n: u32) -> Ipv4Addr {
    Ipv4Addr::from(u32::from(base.network()) + n)
}

pub fn generate_scenario(config: &SimConfig, seed: u64) -> Result<(Scenario, GroundTruth), SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let ixp_space: Ipv4Net = "100.64.0.0/10".parse().unwrap();
    let routers: Vec<SimRouter> = (0..config.routers)
        .map(|r| {
            let (code, city) = LOCATIONS[r % LOCATIONS.len()];
            let n = r as u32;
            SimRouter {
                name: RouterName::new(format!("{code}{}", r / LOCATIONS.len() + 1)),
                location: city.to_string(),
                router_id: Ipv4Addr::new(192, 0, 2, (2 * n + 1) as u8),
                probe_src: Ipv4Addr::new(198, 51, 100, (n + 1) as u8),
                gateway: Ipv4Addr::new(203, 0, 113, (n + 1) as u8),
                nearside: vec![
                    Ipv4Addr::new(192, 0, 2, (2 * n + 1) as u8),
                    Ipv4Addr::new(192, 0, 2, (2 * n + 2) as u8),
                ],
                ixp_name: format!("IX {city}"),
                ixp_prefix: Ipv4Net::new(offset(ixp_space, n * 1024), 22).unwrap(),
            }
        })
        .collect();

    let peers: Vec<SimPeer> = (1..=config.peers)
        .map(|j| {
            let j8 = j as u8;
            let n24 = rng.random_range(1..=config.max_prefixes);
            let mut prefixes: Vec<Ipv4Net> = (0..n24)
                .map(|n| Ipv4Net::new(Ipv4Addr::new(10, j8, n as u8, 0), 24).unwrap())
                .collect();
            if rng.random_bool(0.2) {
                prefixes.push(Ipv4Net::new(Ipv4Addr::new(10, j8, 64, 0), 23).unwrap());
            }
            SimPeer {
                asn: Asn(64512 + j as u32),
                block: Ipv4Net::new(Ipv4Addr::new(10, j8, 0, 0), 16).unwrap(),
                prefixes,
            }
        })
        .collect();

    let mut layout: Vec<(usize, usize)> = Vec::new();
    for p in 0..peers.len() {
        let mut present: Vec<usize> = (0..routers.len())
            .filter(|_| rng.random_bool(config.presence))
            .collect();
        if present.is_empty() {
            present.push(rng.random_range(0..routers.len()));
        }
        layout.extend(present.into_iter().map(|r| (r, p)));
    }

    let mbgp_total = (config.mbgp_fraction * layout.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..layout.len()).collect();
    order.shuffle(&mut rng);
    let mut ks: Vec<usize> = quota(mbgp_total, &config.link_mix)
        .into_iter()
        .enumerate()
        .flat_map(|(i, n)| std::iter::repeat_n(i + 2, n))
        .collect();
    ks.shuffle(&mut rng);
    let mut link_count = vec![1usize; layout.len()];
    for (&i, &k) in order.iter().zip(&ks) {
        link_count[i] = k;
    }

    let mut sessions = Vec::with_capacity(layout.len());
    for (idx, &(r, p)) in layout.iter().enumerate() {
        let router = &routers[r];
        let peer = &peers[p];
        let k = link_count[idx];
        let (addresses, wiring, first_target) = if k >= 2 {
            let extra = usize::from(k < 4 && rng.random_bool(config.extra_neighbor_fraction));
            let wiring = if rng.random_bool(config.divergent_fraction) {
                Wiring::Divergent { fanout: config.fanout }
            } else {
                Wiring::Parallel
            };
            (k + extra, wiring, rng.random_range(0..peer.targets().len()))
        } else {
            (rng.random_range(1..=2), Wiring::Parallel, 0)
        };
        let neighbor_addresses: Vec<Ipv4Addr> = (0..addresses as u32)
            .map(|i| offset(router.ixp_prefix, 1 + p as u32 * 4 + i))
            .collect();
        let fan = match wiring {
            Wiring::Divergent { fanout } => fanout,
            Wiring::Parallel => 1,
        };
        let farsides = (0..addresses)
            .map(|i| {
                let per_link = if i < k { fan } else { 1 };
                (0..per_link)
                    .map(|f| Ipv4Addr::new(10, (p + 1) as u8, 128 + r as u8, (i * 8 + f + 1) as u8))
                    .collect()
            })
            .collect();
        let unregistered = neighbor_addresses
            .iter()
            .copied()
            .filter(|_| rng.random_bool(config.member_omit_fraction))
            .collect();
        sessions.push(Session {
            router: router.name.clone(),
            peer: peer.asn,
            ixp_name: router.ixp_name.clone(),
            neighbor_addresses,
            link_count: k,
            wiring,
            first_target,
            farsides,
            unregistered,
        });
    }
    sessions.sort_by(|a, b| (&a.router, a.peer).cmp(&(&b.router, b.peer)));

    let scenario = Scenario {
        format: SCENARIO_FORMAT.to_string(),
        seed,
        source_as: config.source_as,
        max_paths: config.max_paths,
        link_mix: config.link_mix,
        hasher: config.hasher.clone(),
        routers,
        peers,
        sessions,
    };
    let truth = GroundTruth::from_scenario(&scenario);
    Ok((scenario, truth))
}
