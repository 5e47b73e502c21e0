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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bgp::{
    egress_next_hop_with, fnv1a_64, select_installed, FlowHasher, FlowKey, InstalledRouteSet, RouteCandidate,
};
use crate::lg::format::{render_route_detail, render_summary};
use crate::lg::{BgpSummaryEntry, RouteDetailRecord, StatusCode};
use crate::trace::{Hop, TraceroutePath};
use crate::RouterName;

use super::scenario::{Scenario, Session, SimError, SimRouter, Wiring};

pub const NOT_IN_TABLE: &str = "% Network not in table\n";

const TIED_LOC_PREF: u32 = 100;
const LOWER_LOC_PREF: u32 = 90;
const IGP_METRIC: u32 = 10;

/// Routes a session announces for `prefix`: tied on the configured links
/// once the prefix is at or past the session's first M-BGP /24 (or is not a
/// /24), otherwise only the first neighbor address is preferred.
pub fn route_candidates(scenario: &Scenario, session: &Session, prefix: ipnet::Ipv4Net) -> Vec<RouteCandidate> {
    let peer = scenario.peer(session.peer).expect("session peer exists");
    let tied = session.link_count >= 2
        && match peer.targets().iter().position(|t| *t == prefix) {
            Some(i) => i >= session.first_target,
            None => true,
        };
    session
        .neighbor_addresses
        .iter()
        .enumerate()
        .map(|(i, &addr)| {
            let preferred = if tied { i < session.link_count } else { i == 0 };
            RouteCandidate::new(addr, vec![session.peer])
                .expect("non-empty path")
                .with_loc_pref(if preferred { TIED_LOC_PREF } else { LOWER_LOC_PREF })
                .with_igp_metric(IGP_METRIC)
        })
        .collect()
}

/// The route set `router` installs towards `target`, if it has a route.
pub fn installed_route_set<'a>(
    scenario: &'a Scenario,
    router: &RouterName,
    target: Ipv4Addr,
) -> Result<Option<(&'a Session, InstalledRouteSet)>, SimError> {
    if scenario.router(router).is_none() {
        return Err(SimError::UnknownRouter(router.to_string()));
    }
    let Some((peer, prefix)) = scenario.prefix_of(target) else {
        return Ok(None);
    };
    let Some(session) = scenario.session(router, peer.asn) else {
        return Ok(None);
    };
    let cands = route_candidates(scenario, session, prefix);
    let set = select_installed(&cands, prefix, scenario.max_paths).expect("simulated candidates are valid");
    Ok(Some((session, set)))
}

pub fn synth_summary(scenario: &Scenario, router: &RouterName) -> Result<String, SimError> {
    if scenario.router(router).is_none() {
        return Err(SimError::UnknownRouter(router.to_string()));
    }
    let mut entries = Vec::new();
    for s in scenario.sessions_at(router) {
        let peer = scenario.peer(s.peer).expect("session peer exists");
        for &addr in &s.neighbor_addresses {
            let h = fnv1a_64(&u32::from(addr).to_be_bytes());
            entries.push(BgpSummaryEntry {
                neighbor_address: addr,
                neighbor_as: s.peer,
                state_or_prefix_count: peer.prefixes.len().to_string(),
                uptime: format!("{}d{:02}h", h % 90, (h >> 8) % 24),
                extras: Default::default(),
            });
        }
    }
    entries.sort_by_key(|e| u32::from(e.neighbor_address));
    Ok(render_summary(&entries))
}

pub fn synth_route_detail(scenario: &Scenario, router: &RouterName, target: Ipv4Addr) -> Result<String, SimError> {
    let Some((_, set)) = installed_route_set(scenario, router, target)? else {
        return Ok(NOT_IN_TABLE.to_string());
    };
    let records: Vec<RouteDetailRecord> = set
        .routes
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut codes = BTreeSet::from([StatusCode::External]);
            if set.multipath {
                codes.insert(StatusCode::Multipath);
            }
            if i == 0 {
                codes.insert(StatusCode::Best);
            }
            RouteDetailRecord {
                prefix: set.prefix,
                status_codes: codes,
                next_hop: r.next_hop,
                loc_pref: Some(r.loc_pref),
                weight: Some(r.weight),
                med: Some(r.med),
                as_path: r.as_path().to_vec(),
                raw_block: String::new(),
            }
        })
        .collect();
    Ok(render_route_detail(&records))
}

/// Second-stage farside choice for divergent wiring, keyed on the
/// destination and salted with the IXP address.
pub fn farside_index(dst: Ipv4Addr, ixp_ip: Ipv4Addr, fanout: usize) -> usize {
    let mut bytes = [0u8; 8];
    bytes[..4].copy_from_slice(&dst.octets());
    bytes[4..].copy_from_slice(&ixp_ip.octets());
    (fnv1a_64(&bytes) % fanout as u64) as usize
}

/// `probes` traceroutes from `src` to `dst`, `interval` seconds apart. All
/// probes take the same hops.
pub fn synth_traceroute(
    scenario: &Scenario,
    src: Ipv4Addr,
    dst: Ipv4Addr,
    probes: u32,
    interval: u64,
) -> Result<Vec<TraceroutePath>, SimError> {
    let unreachable = || SimError::Unreachable { src, dst };
    let router = scenario.router_by_source(src).ok_or_else(unreachable)?;
    let (session, set) = installed_route_set(scenario, &router.name, dst)?.ok_or_else(unreachable)?;
    let hasher = scenario.flow_hasher()?;
    Ok(trace_paths(
        scenario,
        hasher.as_ref(),
        router,
        session,
        &set,
        dst,
        probes,
        interval,
    ))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn trace_paths(
    scenario: &Scenario,
    hasher: &dyn FlowHasher,
    router: &SimRouter,
    session: &Session,
    set: &InstalledRouteSet,
    dst: Ipv4Addr,
    probes: u32,
    interval: u64,
) -> Vec<TraceroutePath> {
    let src = router.probe_src;
    let ixp_ip = egress_next_hop_with(hasher, &FlowKey::new(src, dst), set);
    let link = session
        .neighbor_addresses
        .iter()
        .position(|a| *a == ixp_ip)
        .expect("egress is a session address");
    let farsides = &session.farsides[link];
    let farside = match session.wiring {
        Wiring::Divergent { .. } if farsides.len() > 1 => farsides[farside_index(dst, ixp_ip, farsides.len())],
        _ => farsides[0],
    };
    let nearside = router.nearside[(u32::from(dst) as usize) % router.nearside.len()];

    let key = [u32::from(src).to_be_bytes(), u32::from(dst).to_be_bytes()].concat();
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed ^ fnv1a_64(&key));
    let hop_ips = [router.gateway, nearside, ixp_ip, farside, dst];
    let hops: Vec<Hop> = hop_ips
        .iter()
        .enumerate()
        .map(|(i, &ip)| {
            let rtt = 0.4 + 1.1 * (i as f64 + 1.0) + rng.random_range(0.0..0.5);
            Hop {
                ttl: i as u8 + 1,
                ip: Some(ip),
                rtt_ms: Some((rtt * 1000.0).round() / 1000.0),
            }
        })
        .collect();
    (0..probes as u64)
        .map(|n| TraceroutePath {
            src,
            dst,
            started_at: n * interval,
            hops: hops.clone(),
        })
        .collect()
}
