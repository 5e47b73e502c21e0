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
use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};

use super::data::{IxpDataset, PrefixTable};
use crate::lg::BgpSummaryEntry;
use crate::net::first_host;
use crate::{Asn, RouterName};

/// A peering AS reachable from one router over two or more neighbor
/// addresses, the precondition for tied paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeerCandidate {
    pub router: RouterName,
    pub peering_as: Asn,
    pub neighbor_addresses: BTreeSet<Ipv4Addr>,
    pub via_ixp: bool,
    pub ixp_name: Option<String>,
}

/// Groups each router's summary rows by neighbor AS and keeps the ASes with at
/// least two neighbor addresses that are all confirmed as IXP interfaces.
/// Output is ordered by router, then AS.
pub fn find_multipath_candidates(
    summaries: &BTreeMap<RouterName, Vec<BgpSummaryEntry>>,
    ixp: &IxpDataset,
) -> Vec<PeerCandidate> {
    let mut out = Vec::new();
    for (router, entries) in summaries {
        let mut by_as: BTreeMap<Asn, BTreeSet<Ipv4Addr>> = BTreeMap::new();
        for e in entries {
            by_as.entry(e.neighbor_as).or_default().insert(e.neighbor_address);
        }
        for (asn, addrs) in by_as {
            if addrs.len() < 2 {
                continue;
            }
            let via_ixp = addrs.iter().all(|a| ixp.confirms(*a, asn));
            if !via_ixp {
                continue;
            }
            let names: BTreeSet<&str> = addrs
                .iter()
                .filter_map(|a| ixp.member(*a).map(|r| r.ixp_name.as_str()).or_else(|| ixp.ixp_of(*a)))
                .collect();
            let ixp_name = (!names.is_empty()).then(|| names.into_iter().collect::<Vec<_>>().join(" / "));
            out.push(PeerCandidate {
                router: router.clone(),
                peering_as: asn,
                neighbor_addresses: addrs,
                via_ixp,
                ixp_name,
            });
        }
    }
    out
}

/// The `.1` address of every /24 originated by `asn`, ascending and without
/// duplicates.
pub fn select_probe_targets(asn: Asn, prefixes: &PrefixTable) -> Vec<Ipv4Addr> {
    let nets: BTreeSet<u32> = prefixes
        .originated_by(asn)
        .filter(|p| p.prefix_len() == 24)
        .map(|p| u32::from(first_host(p)))
        .collect();
    nets.into_iter().map(Ipv4Addr::from).collect()
}
