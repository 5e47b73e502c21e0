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

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;

use crate::campaign::IxpDataset;
use crate::net::slash24_of;
use crate::Asn;

use super::crossing::{extract_border_crossing, BorderCrossing, DiscardReason};
use super::mapping::{map_ip, IpMapping, IpToAsOracle, Verdict};
use super::path::TraceroutePath;
use super::profile::{compute_profile, DeploymentProfile};

/// Paths from one source towards one destination /24.
#[derive(Debug, Clone)]
pub struct Deployment {
    pub src: Ipv4Addr,
    pub src_as: Asn,
    pub peer_as: Asn,
    pub prefix: Ipv4Net,
    pub profile: Option<DeploymentProfile>,
    pub discarded: BTreeMap<DiscardReason, usize>,
}

impl Deployment {
    pub fn accepted(&self) -> usize {
        self.profile.as_ref().map_or(0, |p| p.accepted)
    }

    pub fn discarded_total(&self) -> usize {
        self.discarded.values().sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Analysis {
    pub deployments: Vec<Deployment>,
    pub input_paths: usize,
    pub accepted: usize,
    /// Every discarded path, including those inside deployments.
    pub discarded: BTreeMap<DiscardReason, usize>,
}

impl Analysis {
    pub fn discarded_total(&self) -> usize {
        self.discarded.values().sum()
    }

    pub fn deployment(&self, src: Ipv4Addr, prefix: Ipv4Net) -> Option<&Deployment> {
        self.deployments.iter().find(|d| d.src == src && d.prefix == prefix)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (n, d) in self.deployments.iter().enumerate() {
            let _ = writeln!(
                out,
                "Deployment {}: source {} ({}) -> {} {}",
                n + 1,
                d.src,
                d.src_as,
                d.peer_as,
                d.prefix
            );
            let _ = writeln!(
                out,
                "  accepted paths: {}, discarded: {}{}",
                d.accepted(),
                d.discarded_total(),
                reasons(&d.discarded)
            );
            let Some(p) = &d.profile else {
                let _ = writeln!(out, "  no accepted paths\n");
                continue;
            };
            let stable = p.stability.values().filter(|&&s| s).count();
            let _ = writeln!(
                out,
                "  type: {}, stable destinations: {}/{}",
                p.shape,
                stable,
                p.stability.len()
            );
            let near: Vec<String> = p.nearside_ips.iter().map(|ip| ip.to_string()).collect();
            let _ = writeln!(out, "  nearside IPs: {}", near.join(", "));
            let _ = writeln!(
                out,
                "  {:<20} {:<18} {:>7}  {:<18} {:>7}",
                "IXP name", "IXP IP", "routes%", "farside IP", "routes%"
            );
            for (&x, share) in &p.ixp_shares {
                for (i, f) in p.farsides_of(x).enumerate() {
                    let (name, ip, pct) = if i == 0 {
                        (
                            p.ixp_names[&x].as_str(),
                            x.to_string(),
                            format!("{:.1}%", share * 100.0),
                        )
                    } else {
                        ("", String::new(), String::new())
                    };
                    let _ = writeln!(
                        out,
                        "  {:<20} {:<18} {:>7}  {:<18} {:>6.1}%",
                        name,
                        ip,
                        pct,
                        f,
                        p.farside_overall(x, f) * 100.0
                    );
                }
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} paths: {} accepted, {} discarded{}",
            self.input_paths,
            self.accepted,
            self.discarded_total(),
            reasons(&self.discarded)
        );
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from(
            "src,src_as,peer_as,prefix,shape,ixp_name,ixp_ip,ixp_share,farside_ip,farside_share,farside_share_of_ixp,stable\n",
        );
        for d in &self.deployments {
            let Some(p) = &d.profile else { continue };
            for (&(x, f), cond) in &p.farside_shares {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{:.4},{},{:.4},{:.4},{}",
                    d.src,
                    d.src_as.0,
                    d.peer_as.0,
                    d.prefix,
                    p.shape,
                    p.ixp_names[&x],
                    x,
                    p.ixp_shares[&x],
                    f,
                    p.farside_overall(x, f),
                    cond,
                    p.is_stable()
                );
            }
        }
        out
    }
}

fn reasons(counts: &BTreeMap<DiscardReason, usize>) -> String {
    if counts.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = counts.iter().map(|(r, n)| format!("{r}: {n}")).collect();
    format!(" ({})", parts.join(", "))
}

/// Maps every hop, extracts border crossings and profiles each
/// (source, destination /24) group.
///
/// The source AS is `source_as` when given, else the mapping of the path's
/// source address; the peering AS is the mapping of its destination.
pub fn analyze(
    paths: &[TraceroutePath],
    primary: &dyn IpToAsOracle,
    secondary: &dyn IpToAsOracle,
    ixp: &IxpDataset,
    source_as: Option<Asn>,
) -> Analysis {
    let mut cache: HashMap<Ipv4Addr, IpMapping> = HashMap::new();
    let mut map = |ip: Ipv4Addr| {
        cache
            .entry(ip)
            .or_insert_with(|| map_ip(ip, primary, secondary))
            .clone()
    };

    let mut analysis = Analysis {
        input_paths: paths.len(),
        ..Default::default()
    };
    type Key = (Ipv4Addr, Ipv4Net, Asn, Asn);
    type Group = (Vec<(TraceroutePath, BorderCrossing)>, BTreeMap<DiscardReason, usize>);
    let mut groups: BTreeMap<Key, Group> = BTreeMap::new();

    for path in paths {
        let src_as = match source_as {
            Some(a) => Some(a),
            None => match map(path.src).verdict {
                Verdict::As(a) => Some(a),
                _ => None,
            },
        };
        let Some(src_as) = src_as else {
            *analysis.discarded.entry(DiscardReason::SourceUnmapped).or_default() += 1;
            continue;
        };
        let Verdict::As(peer_as) = map(path.dst).verdict else {
            *analysis
                .discarded
                .entry(DiscardReason::DestinationUnmapped)
                .or_default() += 1;
            continue;
        };
        let mappings: Vec<Option<IpMapping>> = path.hops.iter().map(|h| h.ip.map(&mut map)).collect();
        let group = groups
            .entry((path.src, slash24_of(path.dst), src_as, peer_as))
            .or_default();
        match extract_border_crossing(path, src_as, peer_as, &mappings, ixp) {
            Ok(c) => group.0.push((path.clone(), c)),
            Err(r) => {
                *group.1.entry(r).or_default() += 1;
                *analysis.discarded.entry(r).or_default() += 1;
            }
        }
    }

    for ((src, prefix, src_as, peer_as), (accepted, discarded)) in groups {
        analysis.accepted += accepted.len();
        analysis.deployments.push(Deployment {
            src,
            src_as,
            peer_as,
            prefix,
            profile: compute_profile(&accepted).ok(),
            discarded,
        });
    }
    analysis
}
