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

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, HashSet};
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;
use serde::{Deserialize, Serialize};

use super::route::{Origin, Protocol, RouteCandidate};
use crate::Asn;

/// Outcome of comparing two candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preferred {
    First,
    Second,
    Tie,
}

impl Preferred {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Preferred::First,
            Ordering::Less => Preferred::Second,
            Ordering::Equal => Preferred::Tie,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Preferred::First => Preferred::Second,
            Preferred::Second => Preferred::First,
            Preferred::Tie => Preferred::Tie,
        }
    }
}

/// Compares two routes to the same prefix.
///
/// The ladder is: higher weight, higher LocPref, shorter AS path, lower
/// origin, lower MED (only between routes from the same neighbor AS), eBGP
/// over iBGP, lower IGP metric. Router ID and next hop never decide here.
///
/// Because MED is skipped across neighbor ASes, this relation is not
/// transitive in general; [`select_installed`] does not rely on it being so.
pub fn compare_routes(a: &RouteCandidate, b: &RouteCandidate) -> Preferred {
    let same_neighbor = a.neighbor_as() == b.neighbor_as();
    let ord = a
        .weight
        .cmp(&b.weight)
        .then(a.loc_pref.cmp(&b.loc_pref))
        .then(b.as_path_len().cmp(&a.as_path_len()))
        .then(b.origin.cmp(&a.origin))
        .then(if same_neighbor {
            b.med.cmp(&a.med)
        } else {
            Ordering::Equal
        })
        .then(protocol_rank(a.protocol).cmp(&protocol_rank(b.protocol)))
        .then(b.igp_metric.cmp(&a.igp_metric));
    Preferred::from_ordering(ord)
}

fn protocol_rank(p: Protocol) -> u8 {
    match p {
        Protocol::Ebgp => 1,
        Protocol::Ibgp => 0,
    }
}

type KeyWithMed = (
    u32,
    u32,
    Reverse<usize>,
    Reverse<Origin>,
    Reverse<u32>,
    u8,
    Reverse<u32>,
);
type KeyWithoutMed = (u32, u32, Reverse<usize>, Reverse<Origin>, u8, Reverse<u32>);

// Sort key with MED, valid among routes from one neighbor AS. Larger is better.
fn key_with_med(r: &RouteCandidate) -> KeyWithMed {
    (
        r.weight,
        r.loc_pref,
        Reverse(r.as_path_len()),
        Reverse(r.origin),
        Reverse(r.med),
        protocol_rank(r.protocol),
        Reverse(r.igp_metric),
    )
}

fn key_without_med(r: &RouteCandidate) -> KeyWithoutMed {
    (
        r.weight,
        r.loc_pref,
        Reverse(r.as_path_len()),
        Reverse(r.origin),
        protocol_rank(r.protocol),
        Reverse(r.igp_metric),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelectError {
    #[error("no routes")]
    NoRoutes,
    #[error("max_paths must be at least 1")]
    ZeroMaxPaths,
    #[error("next hop {0} appears in more than one candidate")]
    DuplicateNextHop(Ipv4Addr),
}

/// Routes a router installs for one prefix.
///
/// `routes[0]` is the best path; any further multipath members follow in
/// ascending next-hop order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstalledRouteSet {
    pub prefix: Ipv4Net,
    pub routes: Vec<RouteCandidate>,
    pub multipath: bool,
}

impl InstalledRouteSet {
    pub fn best(&self) -> &RouteCandidate {
        &self.routes[0]
    }

    /// Installed next hops in ascending numeric order; this is the bucket
    /// order used by load sharing.
    pub fn sorted_next_hops(&self) -> Vec<Ipv4Addr> {
        let mut hops: Vec<_> = self.routes.iter().map(|r| r.next_hop).collect();
        hops.sort_by_key(|ip| u32::from(*ip));
        hops
    }

    pub fn neighbor_as(&self) -> Asn {
        self.best().neighbor_as()
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }
}

/// Runs the decision process and decides which routes get installed.
///
/// Selection is done per neighbor AS first (so MED is only ever compared
/// between routes of one neighbor), then across the per-AS winners without
/// MED. The resulting top group is mutually tied under [`compare_routes`].
/// With one member or `max_paths == 1` the route with the lowest router ID is
/// installed alone. Otherwise the eBGP members learnt from the best route's
/// neighbor AS are installed, at most `max_paths` of them, chosen by
/// ascending router ID.
pub fn select_installed(
    candidates: &[RouteCandidate],
    prefix: Ipv4Net,
    max_paths: usize,
) -> Result<InstalledRouteSet, SelectError> {
    if candidates.is_empty() {
        return Err(SelectError::NoRoutes);
    }
    if max_paths == 0 {
        return Err(SelectError::ZeroMaxPaths);
    }
    let mut seen = HashSet::with_capacity(candidates.len());
    for c in candidates {
        if !seen.insert(c.next_hop) {
            return Err(SelectError::DuplicateNextHop(c.next_hop));
        }
    }

    let mut by_neighbor: BTreeMap<Asn, Vec<&RouteCandidate>> = BTreeMap::new();
    for c in candidates {
        by_neighbor.entry(c.neighbor_as()).or_default().push(c);
    }
    let mut survivors: Vec<&RouteCandidate> = Vec::new();
    for group in by_neighbor.values() {
        let top = group.iter().map(|r| key_with_med(r)).max().expect("group non-empty");
        survivors.extend(group.iter().filter(|r| key_with_med(r) == top));
    }
    let top = survivors
        .iter()
        .map(|r| key_without_med(r))
        .max()
        .expect("survivors non-empty");
    let mut tie_group: Vec<&RouteCandidate> = survivors.into_iter().filter(|r| key_without_med(r) == top).collect();
    tie_group.sort_by_key(|r| (u32::from(r.router_id), u32::from(r.next_hop)));

    let best = tie_group[0];
    if tie_group.len() == 1 || max_paths == 1 {
        return Ok(InstalledRouteSet {
            prefix,
            routes: vec![best.clone()],
            multipath: false,
        });
    }

    let members: Vec<&RouteCandidate> = if best.protocol == Protocol::Ebgp {
        tie_group
            .iter()
            .copied()
            .filter(|r| r.protocol == Protocol::Ebgp && r.neighbor_as() == best.neighbor_as())
            .take(max_paths)
            .collect()
    } else {
        vec![best]
    };

    let mut rest: Vec<RouteCandidate> = members[1..].iter().map(|r| (*r).clone()).collect();
    rest.sort_by_key(|r| u32::from(r.next_hop));
    let mut routes = Vec::with_capacity(members.len());
    routes.push(best.clone());
    routes.extend(rest);
    let multipath = routes.len() > 1;
    debug_assert!(routes
        .iter()
        .all(|r| r.ranked_attributes() == routes[0].ranked_attributes()));
    Ok(InstalledRouteSet {
        prefix,
        routes,
        multipath,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{Origin, Protocol};
    use super::*;

    fn ip(s: &str) -> Ipv4Addr {
        s.parse().unwrap()
    }

    fn route(nh: &str, path: &[u32]) -> RouteCandidate {
        RouteCandidate::new(ip(nh), path.iter().map(|a| Asn(*a)).collect()).unwrap()
    }

    fn prefix() -> Ipv4Net {
        "142.46.150.0/24".parse().unwrap()
    }

    #[test]
    fn higher_loc_pref_wins() {
        let a = route("10.0.0.1", &[1]).with_loc_pref(200);
        let b = route("10.0.0.2", &[1]).with_loc_pref(100);
        assert_eq!(compare_routes(&a, &b), Preferred::First);
        assert_eq!(compare_routes(&b, &a), Preferred::Second);
    }

    #[test]
    fn identical_attributes_tie() {
        let a = route("198.32.181.46", &[19752]).with_router_id(ip("1.1.1.1"));
        let b = route("206.108.34.48", &[19752]).with_router_id(ip("2.2.2.2"));
        assert_eq!(compare_routes(&a, &b), Preferred::Tie);
    }

    #[test]
    fn med_skipped_across_neighbors() {
        let a = route("10.0.0.1", &[1]).with_med(10);
        let b = route("10.0.0.2", &[2]).with_med(5);
        assert_eq!(compare_routes(&a, &b), Preferred::Tie);
        let c = route("10.0.0.3", &[1]).with_med(5);
        assert_eq!(compare_routes(&a, &c), Preferred::Second);
    }

    #[test]
    fn ladder_order() {
        let base = route("10.0.0.1", &[1]);
        // weight beats everything below it
        let a = base.clone().with_weight(1).with_loc_pref(0);
        assert_eq!(compare_routes(&a, &base), Preferred::First);
        // shorter path
        let mut long = route("10.0.0.2", &[1]);
        long.set_as_path(vec![Asn(1), Asn(2)]).unwrap();
        assert_eq!(compare_routes(&base, &long), Preferred::First);
        // origin
        let egp = route("10.0.0.2", &[1]).with_origin(Origin::Egp);
        assert_eq!(compare_routes(&base, &egp), Preferred::First);
        // ebgp over ibgp, even with a better metric
        let ibgp = route("10.0.0.2", &[1]).with_protocol(Protocol::Ibgp);
        let costly = base.clone().with_igp_metric(50);
        assert_eq!(compare_routes(&costly, &ibgp), Preferred::First);
        // igp metric
        assert_eq!(compare_routes(&base, &costly), Preferred::First);
    }

    #[test]
    fn two_tied_same_neighbor_installed() {
        let a = route("206.108.34.48", &[19752]);
        let b = route("198.32.181.46", &[19752]);
        let set = select_installed(&[a, b], prefix(), 4).unwrap();
        assert!(set.multipath);
        assert_eq!(set.len(), 2);
        assert_eq!(set.sorted_next_hops(), vec![ip("198.32.181.46"), ip("206.108.34.48")]);
    }

    #[test]
    fn max_paths_one_picks_lowest_router_id() {
        let a = route("10.0.0.1", &[7]).with_router_id(ip("9.9.9.9"));
        let b = route("10.0.0.2", &[7]).with_router_id(ip("1.1.1.1"));
        let set = select_installed(&[a, b], prefix(), 1).unwrap();
        assert!(!set.multipath);
        assert_eq!(set.best().next_hop, ip("10.0.0.2"));
    }

    #[test]
    fn five_tied_truncated_to_max_paths() {
        let cands: Vec<_> = (1..=5)
            .map(|i| route(&format!("10.0.0.{}", 10 - i), &[7]).with_router_id(Ipv4Addr::new(1, 1, 1, i)))
            .collect();
        let set = select_installed(&cands, prefix(), 4).unwrap();
        assert_eq!(set.len(), 4);
        // router IDs 1..=4 win; the one with router id .5 (next hop .5) is dropped
        assert!(set.routes.iter().all(|r| r.next_hop != ip("10.0.0.5")));
        assert_eq!(set.best().router_id, ip("1.1.1.1"));
        let tail: Vec<_> = set.routes[1..].iter().map(|r| r.next_hop).collect();
        assert_eq!(tail, vec![ip("10.0.0.6"), ip("10.0.0.7"), ip("10.0.0.8")]);
    }

    #[test]
    fn ties_across_neighbors_do_not_multipath() {
        let a = route("10.0.0.1", &[1]).with_router_id(ip("1.0.0.1"));
        let b = route("10.0.0.2", &[2]).with_router_id(ip("1.0.0.2"));
        let set = select_installed(&[a, b], prefix(), 4).unwrap();
        assert!(!set.multipath);
        assert_eq!(set.neighbor_as(), Asn(1));
    }

    #[test]
    fn ibgp_ties_do_not_multipath() {
        let a = route("10.0.0.1", &[1]).with_protocol(Protocol::Ibgp);
        let b = route("10.0.0.2", &[1]).with_protocol(Protocol::Ibgp);
        let set = select_installed(&[a, b], prefix(), 4).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(select_installed(&[], prefix(), 4), Err(SelectError::NoRoutes));
        let a = route("10.0.0.1", &[1]);
        assert_eq!(
            select_installed(std::slice::from_ref(&a), prefix(), 0),
            Err(SelectError::ZeroMaxPaths)
        );
        assert_eq!(
            select_installed(&[a.clone(), a], prefix(), 2),
            Err(SelectError::DuplicateNextHop(ip("10.0.0.1")))
        );
    }

    #[test]
    fn med_cycle_resolves_deterministically() {
        // b beats a on MED, a beats c on metric, c beats b on metric
        let a = route("10.0.0.1", &[1]).with_med(10).with_igp_metric(1);
        let b = route("10.0.0.2", &[1]).with_med(5).with_igp_metric(3);
        let c = route("10.0.0.3", &[2]).with_igp_metric(2);
        assert_eq!(compare_routes(&b, &a), Preferred::First);
        assert_eq!(compare_routes(&a, &c), Preferred::First);
        assert_eq!(compare_routes(&c, &b), Preferred::First);
        let one = select_installed(&[a.clone(), b.clone(), c.clone()], prefix(), 4).unwrap();
        let two = select_installed(&[c, b, a], prefix(), 4).unwrap();
        assert_eq!(one, two);
        assert_eq!(one.best().next_hop, ip("10.0.0.3"));
    }
}
