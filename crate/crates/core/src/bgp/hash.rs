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

use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;

use super::decision::InstalledRouteSet;
use crate::net::host_addresses;
use crate::registry::Registry;

/// Header fields hashed by per-destination load sharing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FlowKey {
    pub src: Ipv4Addr,
    pub dst: Ipv4Addr,
}

impl FlowKey {
    pub fn new(src: Ipv4Addr, dst: Ipv4Addr) -> Self {
        FlowKey { src, dst }
    }
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, b| (h ^ u64::from(*b)).wrapping_mul(FNV_PRIME))
}

/// A hash over flow headers used to pick an egress among installed routes.
pub trait FlowHasher: Send + Sync {
    fn name(&self) -> &'static str;
    fn hash(&self, key: &FlowKey) -> u64;
}

/// FNV-1a over `src ‖ dst`, both in network byte order. The default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fnv1aSrcDst;

impl FlowHasher for Fnv1aSrcDst {
    fn name(&self) -> &'static str {
        "fnv1a"
    }

    fn hash(&self, key: &FlowKey) -> u64 {
        let mut buf = [0u8; 8];
        buf[..4].copy_from_slice(&key.src.octets());
        buf[4..].copy_from_slice(&key.dst.octets());
        fnv1a_64(&buf)
    }
}

/// FNV-1a over the destination address only.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fnv1aDst;

impl FlowHasher for Fnv1aDst {
    fn name(&self) -> &'static str {
        "fnv1a-dst"
    }

    fn hash(&self, key: &FlowKey) -> u64 {
        fnv1a_64(&key.dst.octets())
    }
}

pub const DEFAULT_HASHER: &str = "fnv1a";

/// All built-in flow hashers, keyed by name.
pub fn hasher_registry() -> Registry<dyn FlowHasher> {
    let mut r: Registry<dyn FlowHasher> = Registry::new("flow hasher");
    r.register("fnv1a", "64-bit FNV-1a over source and destination address", |_| {
        Ok(Box::new(Fnv1aSrcDst))
    });
    r.register("fnv1a-dst", "64-bit FNV-1a over the destination address", |_| {
        Ok(Box::new(Fnv1aDst))
    });
    r
}

/// Next hop used for `key` under the default hasher.
pub fn egress_next_hop(key: &FlowKey, installed: &InstalledRouteSet) -> Ipv4Addr {
    egress_next_hop_with(&Fnv1aSrcDst, key, installed)
}

/// Next hop used for `key`: bucket `hash mod n` over the installed next hops
/// sorted ascending as integers.
pub fn egress_next_hop_with(hasher: &dyn FlowHasher, key: &FlowKey, installed: &InstalledRouteSet) -> Ipv4Addr {
    let hops = installed.sorted_next_hops();
    assert!(!hops.is_empty(), "installed route set is empty");
    if hops.len() == 1 {
        return hops[0];
    }
    let idx = (hasher.hash(key) % hops.len() as u64) as usize;
    hops[idx]
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShareError {
    #[error("prefix /{0} is longer than /30")]
    PrefixTooLong(u8),
}

pub fn expected_shares(
    prefix: &Ipv4Net,
    src: Ipv4Addr,
    installed: &InstalledRouteSet,
) -> Result<BTreeMap<Ipv4Addr, f64>, ShareError> {
    expected_shares_with(&Fnv1aSrcDst, prefix, src, installed)
}

/// Fraction of the prefix's host addresses sent to each installed next hop.
/// Next hops that receive no destination still appear with share 0.
pub fn expected_shares_with(
    hasher: &dyn FlowHasher,
    prefix: &Ipv4Net,
    src: Ipv4Addr,
    installed: &InstalledRouteSet,
) -> Result<BTreeMap<Ipv4Addr, f64>, ShareError> {
    if prefix.prefix_len() > 30 {
        return Err(ShareError::PrefixTooLong(prefix.prefix_len()));
    }
    let mut counts: BTreeMap<Ipv4Addr, u64> = installed.routes.iter().map(|r| (r.next_hop, 0)).collect();
    let mut total = 0u64;
    for dst in host_addresses(prefix) {
        let hop = egress_next_hop_with(hasher, &FlowKey::new(src, dst), installed);
        *counts.entry(hop).or_default() += 1;
        total += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(hop, c)| (hop, c as f64 / total as f64))
        .collect())
}
