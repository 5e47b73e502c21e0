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

use crate::campaign::IxpDataset;
use crate::Asn;

use super::mapping::{resolve_ixp_hop, IpMapping, Verdict};
use super::path::TraceroutePath;

/// Nearside, IXP and farside hops of one inter-domain border crossing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BorderCrossing {
    pub nearside_ip: Ipv4Addr,
    pub ixp_ip: Ipv4Addr,
    pub farside_ip: Ipv4Addr,
    pub ixp_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscardReason {
    Disagreement,
    NoCrossing,
    Ambiguous,
    IxpUnresolved,
    Unresponsive,
    SourceUnmapped,
    DestinationUnmapped,
}

impl DiscardReason {
    pub const ALL: [DiscardReason; 7] = [
        DiscardReason::Disagreement,
        DiscardReason::NoCrossing,
        DiscardReason::Ambiguous,
        DiscardReason::IxpUnresolved,
        DiscardReason::Unresponsive,
        DiscardReason::SourceUnmapped,
        DiscardReason::DestinationUnmapped,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DiscardReason::Disagreement => "oracle disagreement",
            DiscardReason::NoCrossing => "no border crossing",
            DiscardReason::Ambiguous => "ambiguous crossing",
            DiscardReason::IxpUnresolved => "IXP hop unresolved",
            DiscardReason::Unresponsive => "unresponsive hop at border",
            DiscardReason::SourceUnmapped => "source AS unknown",
            DiscardReason::DestinationUnmapped => "destination AS unknown",
        }
    }
}

impl fmt::Display for DiscardReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn is_as(m: &Option<IpMapping>, asn: Asn) -> bool {
    matches!(m, Some(IpMapping { verdict: Verdict::As(a), .. }) if *a == asn)
}

/// Finds the single `src_as -> IXP -> peer_as` triple on `path`.
///
/// `mappings[i]` is the combined mapping of `path.hops[i]`, `None` when the
/// hop did not answer. Any oracle disagreement on the path discards it.
pub fn extract_border_crossing(
    path: &TraceroutePath,
    src_as: Asn,
    peer_as: Asn,
    mappings: &[Option<IpMapping>],
    ixp: &IxpDataset,
) -> Result<BorderCrossing, DiscardReason> {
    assert_eq!(path.hops.len(), mappings.len(), "one mapping per hop");
    if mappings.iter().flatten().any(|m| m.verdict == Verdict::Disagreement) {
        return Err(DiscardReason::Disagreement);
    }

    let mut found = Vec::new();
    let mut failure = DiscardReason::NoCrossing;
    for i in 0..mappings.len() {
        if !is_as(&mappings[i], src_as) {
            continue;
        }
        let (Some(mid), Some(far)) = (mappings.get(i + 1), mappings.get(i + 2)) else {
            if mappings.get(i + 1).is_some_and(|m| m.is_none()) {
                failure = failure.max(DiscardReason::Unresponsive);
            }
            continue;
        };
        let Some(mid) = mid else {
            failure = failure.max(DiscardReason::Unresponsive);
            continue;
        };
        let name = match &mid.verdict {
            Verdict::Ixp(name) => name.clone(),
            Verdict::Unmapped => match ixp.ixp_of(mid.ip) {
                Some(name) => name.to_string(),
                None if far.is_some() && is_as(far, peer_as) => {
                    failure = failure.max(DiscardReason::IxpUnresolved);
                    continue;
                }
                None => continue,
            },
            _ => continue,
        };
        let Some(far_map) = far else {
            failure = failure.max(DiscardReason::Unresponsive);
            continue;
        };
        if !is_as(far, peer_as) {
            continue;
        }
        if resolve_ixp_hop(src_as, mid.ip, peer_as, ixp) != Some(peer_as) {
            failure = failure.max(DiscardReason::IxpUnresolved);
            continue;
        }
        found.push(BorderCrossing {
            nearside_ip: mappings[i].as_ref().map(|m| m.ip).unwrap_or(Ipv4Addr::UNSPECIFIED),
            ixp_ip: mid.ip,
            farside_ip: far_map.ip,
            ixp_name: name,
        });
    }
    match found.len() {
        0 => Err(failure),
        1 => Ok(found.pop().unwrap()),
        _ => Err(DiscardReason::Ambiguous),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::path::Hop;

    fn ds() -> IxpDataset {
        IxpDataset::from_csv(
            "ixp_name,ixp_prefix,member_asn,member_ip\nEquinix San Jose,206.223.116.0/23,,\n".as_bytes(),
        )
        .unwrap()
    }

    fn build(hops: &[(&str, Option<Verdict>)]) -> (TraceroutePath, Vec<Option<IpMapping>>) {
        let mut path = TraceroutePath {
            src: "65.49.77.70".parse().unwrap(),
            dst: "142.148.224.9".parse().unwrap(),
            started_at: 0,
            hops: Vec::new(),
        };
        let mut maps = Vec::new();
        for (i, (ip, v)) in hops.iter().enumerate() {
            let ip: Option<Ipv4Addr> = if *ip == "*" { None } else { Some(ip.parse().unwrap()) };
            path.hops.push(Hop {
                ttl: i as u8 + 1,
                ip,
                rtt_ms: None,
            });
            maps.push(ip.map(|ip| IpMapping {
                ip,
                verdict: v.clone().unwrap(),
            }));
        }
        (path, maps)
    }

    const HE: Asn = Asn(6939);
    const INVESCO: Asn = Asn(14630);

    #[test]
    fn case1_crossing() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("206.223.117.58", Some(Verdict::Ixp("Equinix San Jose".into()))),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
            ("142.148.224.9", Some(Verdict::As(INVESCO))),
        ]);
        let c = extract_border_crossing(&p, HE, INVESCO, &m, &ds()).unwrap();
        assert_eq!(c.nearside_ip, "184.105.213.157".parse::<Ipv4Addr>().unwrap());
        assert_eq!(c.ixp_ip, "206.223.117.58".parse::<Ipv4Addr>().unwrap());
        assert_eq!(c.farside_ip, "199.230.0.190".parse::<Ipv4Addr>().unwrap());
        assert_eq!(c.ixp_name, "Equinix San Jose");
    }

    #[test]
    fn unmapped_ixp_hop_resolved_from_dataset() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("206.223.117.58", Some(Verdict::Unmapped)),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
        ]);
        let c = extract_border_crossing(&p, HE, INVESCO, &m, &ds()).unwrap();
        assert_eq!(c.ixp_name, "Equinix San Jose");
    }

    #[test]
    fn never_leaving_source() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("72.52.92.246", Some(Verdict::As(HE))),
        ]);
        assert_eq!(
            extract_border_crossing(&p, HE, INVESCO, &m, &ds()),
            Err(DiscardReason::NoCrossing)
        );
    }

    #[test]
    fn two_triples_are_ambiguous() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("206.223.117.58", Some(Verdict::Ixp("Equinix San Jose".into()))),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
            ("72.52.92.246", Some(Verdict::As(HE))),
            ("206.223.117.57", Some(Verdict::Ixp("Equinix San Jose".into()))),
            ("199.230.0.182", Some(Verdict::As(INVESCO))),
        ]);
        assert_eq!(
            extract_border_crossing(&p, HE, INVESCO, &m, &ds()),
            Err(DiscardReason::Ambiguous)
        );
    }

    #[test]
    fn unresponsive_inside_triple() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("*", None),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
        ]);
        assert_eq!(
            extract_border_crossing(&p, HE, INVESCO, &m, &ds()),
            Err(DiscardReason::Unresponsive)
        );
    }

    #[test]
    fn unresponsive_outside_triple_ignored() {
        let (p, m) = build(&[
            ("*", None),
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("206.223.117.58", Some(Verdict::Ixp("Equinix San Jose".into()))),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
            ("*", None),
        ]);
        assert!(extract_border_crossing(&p, HE, INVESCO, &m, &ds()).is_ok());
    }

    #[test]
    fn disagreement_discards() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("206.223.117.58", Some(Verdict::Ixp("Equinix San Jose".into()))),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
            ("142.148.224.9", Some(Verdict::Disagreement)),
        ]);
        assert_eq!(
            extract_border_crossing(&p, HE, INVESCO, &m, &ds()),
            Err(DiscardReason::Disagreement)
        );
    }

    #[test]
    fn unresolvable_ixp_hop() {
        let (p, m) = build(&[
            ("184.105.213.157", Some(Verdict::As(HE))),
            ("192.0.2.9", Some(Verdict::Unmapped)),
            ("199.230.0.190", Some(Verdict::As(INVESCO))),
        ]);
        assert_eq!(
            extract_border_crossing(&p, HE, INVESCO, &m, &ds()),
            Err(DiscardReason::IxpUnresolved)
        );
    }
}
