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

use ipnet::Ipv4Net;
use serde::{Deserialize, Serialize};

use super::detail::{RouteDetailRecord, StatusCode};
use crate::{Asn, RouterName};

/// A detected M-BGP deployment: one border router installing several
/// equally good eBGP routes from one peering AS.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MbgpEvidence {
    pub router: RouterName,
    pub peering_as: Asn,
    pub prefix: Ipv4Net,
    pub next_hops: BTreeSet<Ipv4Addr>,
}

impl MbgpEvidence {
    pub fn link_count(&self) -> usize {
        self.next_hops.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("mixed prefixes: {0} and {1}")]
    MixedPrefixes(Ipv4Net, Ipv4Net),
}

// Absent values agree with anything.
fn agrees(a: Option<u32>, b: Option<u32>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

fn metrics_agree(a: &RouteDetailRecord, b: &RouteDetailRecord) -> bool {
    agrees(a.loc_pref, b.loc_pref) && agrees(a.weight, b.weight) && a.as_path.len() == b.as_path.len()
}

/// Decides whether a route-detail response proves an M-BGP deployment.
///
/// The multipath set is every record flagged `M` and `E`, plus any `B`,`E`
/// record whose LocPref, weight and AS-path length tie all of those. Evidence
/// requires at least two distinct next hops in the set, every path starting
/// with `peering_as`, and pairwise agreement on the three metrics.
pub fn detect_mbgp(
    records: &[RouteDetailRecord],
    router: &RouterName,
    peering_as: Asn,
) -> Result<Option<MbgpEvidence>, DetectError> {
    let Some(first) = records.first() else {
        return Ok(None);
    };
    if let Some(other) = records.iter().find(|r| r.prefix != first.prefix) {
        return Err(DetectError::MixedPrefixes(first.prefix, other.prefix));
    }

    let multipath: Vec<&RouteDetailRecord> = records.iter().filter(|r| r.is_multipath_external()).collect();
    if multipath.is_empty() {
        return Ok(None);
    }
    let mut counted = multipath.clone();
    counted.extend(records.iter().filter(|r| {
        !r.has(StatusCode::Multipath)
            && r.has(StatusCode::Best)
            && r.has(StatusCode::External)
            && multipath.iter().all(|m| metrics_agree(r, m))
    }));

    if counted.iter().any(|r| r.first_as() != Some(peering_as)) {
        return Ok(None);
    }
    for (i, a) in counted.iter().enumerate() {
        if counted[i + 1..].iter().any(|b| !metrics_agree(a, b)) {
            return Ok(None);
        }
    }
    let next_hops: BTreeSet<Ipv4Addr> = counted.iter().map(|r| r.next_hop).collect();
    if next_hops.len() < 2 {
        return Ok(None);
    }
    Ok(Some(MbgpEvidence {
        router: router.clone(),
        peering_as,
        prefix: first.prefix,
        next_hops,
    }))
}
