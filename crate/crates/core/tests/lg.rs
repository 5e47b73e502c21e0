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

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;
use mbgp_core::lg::format::{render_route_detail, render_summary};
use mbgp_core::lg::{
    detect_mbgp, parse_bgp_summary, parse_bgp_summary_report, parse_route_detail, BgpSummaryEntry, DetailError,
    DetectError, RouteDetailRecord, StatusCode,
};
use mbgp_core::{Asn, RouterName};
use proptest::prelude::*;

fn tor1_file(name: &str) -> String {
    std::fs::read_to_string(common::fixtures().join("tor1_lg/lg/tor1").join(name)).unwrap()
}

fn prefix() -> Ipv4Net {
    "142.46.150.0/24".parse().unwrap()
}

fn rec(nh: [u8; 4], codes: &str, loc_pref: Option<u32>, weight: Option<u32>, path: &[u32]) -> RouteDetailRecord {
    RouteDetailRecord {
        prefix: prefix(),
        status_codes: codes.chars().map(StatusCode::from_letter).collect(),
        next_hop: Ipv4Addr::from(nh),
        loc_pref,
        weight,
        med: None,
        as_path: path.iter().map(|a| Asn(*a)).collect(),
        raw_block: String::new(),
    }
}

fn tor1() -> RouterName {
    RouterName::new("tor1")
}

#[test]
fn tor1_detail_parses_two_multipath_records() {
    let recs = parse_route_detail(&tor1_file("detail_142.46.150.1.txt")).unwrap();
    assert_eq!(recs.len(), 2);
    for r in &recs {
        assert_eq!(r.prefix, prefix());
        assert!(r.is_multipath_external());
        assert_eq!(r.loc_pref, Some(100));
        assert_eq!(r.weight, Some(0));
        assert_eq!(r.as_path, vec![Asn(19752)]);
        assert!(r.raw_block.contains(&r.next_hop.to_string()));
    }
    let hops: Vec<Ipv4Addr> = recs.iter().map(|r| r.next_hop).collect();
    assert_eq!(
        hops,
        vec![Ipv4Addr::new(198, 32, 181, 46), Ipv4Addr::new(206, 108, 34, 48)]
    );
}

#[test]
fn tor1_detail_is_evidence() {
    let recs = parse_route_detail(&tor1_file("detail_142.46.150.1.txt")).unwrap();
    let ev = detect_mbgp(&recs, &tor1(), Asn(19752)).unwrap().unwrap();
    assert_eq!(ev.link_count(), 2);
    assert_eq!(ev.prefix, prefix());
    assert_eq!(detect_mbgp(&recs, &tor1(), Asn(812)).unwrap(), None);
}

#[test]
fn tor1_summary_rows() {
    let rows = parse_bgp_summary(&tor1_file("summary.txt")).unwrap();
    let row = rows
        .iter()
        .find(|r| r.neighbor_address == Ipv4Addr::new(206, 108, 34, 48))
        .unwrap();
    assert_eq!(row.neighbor_as, Asn(19752));
    assert_eq!(rows.iter().filter(|r| r.neighbor_as == Asn(19752)).count(), 2);
}

#[test]
fn single_best_external_route() {
    let text = render_route_detail(&[rec([198, 32, 181, 46], "BE", Some(100), Some(0), &[19752])]);
    let recs = parse_route_detail(&text).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(recs[0].has(StatusCode::Best) && recs[0].has(StatusCode::External));
    assert!(!recs[0].has(StatusCode::Multipath));
    assert_eq!(detect_mbgp(&recs, &tor1(), Asn(19752)).unwrap(), None);
}

#[test]
fn four_blocks_keep_their_order() {
    let input = vec![
        rec([10, 0, 0, 9], "BE", Some(100), Some(0), &[64500, 65000]),
        rec([10, 0, 0, 3], "ME", Some(100), Some(0), &[64500, 65000]),
        rec([10, 0, 0, 7], "ME", Some(100), Some(0), &[64500, 65000]),
        rec([10, 0, 0, 1], "ME", Some(100), Some(0), &[64500, 65000]),
    ];
    let text = format!(
        "router> show ip bgp detail 142.46.150.1\n{}\nrouter>\n",
        render_route_detail(&input)
    );
    let recs = parse_route_detail(&text).unwrap();
    let hops: Vec<u8> = recs.iter().map(|r| r.next_hop.octets()[3]).collect();
    assert_eq!(hops, vec![9, 3, 7, 1]);
    assert_eq!(recs.iter().filter(|r| r.is_multipath_external()).count(), 3);
    let ev = detect_mbgp(&recs, &tor1(), Asn(64500)).unwrap().unwrap();
    assert_eq!(ev.link_count(), 4);
}

#[test]
fn banner_only_response_has_no_routes() {
    assert_eq!(
        parse_route_detail("router> show ip bgp detail 1.2.3.4\n% Network not in table\n"),
        Err(DetailError::NoRoutes)
    );
    assert_eq!(parse_route_detail(""), Err(DetailError::NoRoutes));
}

#[test]
fn differing_loc_pref_is_not_evidence() {
    let recs = vec![
        rec([10, 0, 0, 1], "ME", Some(100), Some(0), &[64500]),
        rec([10, 0, 0, 2], "ME", Some(200), Some(0), &[64500]),
    ];
    assert_eq!(detect_mbgp(&recs, &tor1(), Asn(64500)).unwrap(), None);
}

#[test]
fn mixed_prefixes_rejected() {
    let mut other = rec([10, 0, 0, 2], "ME", Some(100), Some(0), &[64500]);
    other.prefix = "142.46.151.0/24".parse().unwrap();
    let recs = vec![rec([10, 0, 0, 1], "ME", Some(100), Some(0), &[64500]), other];
    assert!(matches!(
        detect_mbgp(&recs, &tor1(), Asn(64500)),
        Err(DetectError::MixedPrefixes(_, _))
    ));
}

#[derive(Debug, Clone, Copy)]
enum Field {
    Same,
    Differ,
    OneAbsent,
    BothAbsent,
}

const FIELDS: [Field; 4] = [Field::Same, Field::Differ, Field::OneAbsent, Field::BothAbsent];

fn values(f: Field, base: u32) -> (Option<u32>, Option<u32>) {
    match f {
        Field::Same => (Some(base), Some(base)),
        Field::Differ => (Some(base), Some(base + 1)),
        Field::OneAbsent => (Some(base), None),
        Field::BothAbsent => (None, None),
    }
}

// Each metric must have at most one distinct present value across the set.
fn agreement_oracle(recs: &[RouteDetailRecord]) -> bool {
    let distinct = |get: &dyn Fn(&RouteDetailRecord) -> Option<u32>| {
        recs.iter().filter_map(get).collect::<BTreeSet<u32>>().len() <= 1
    };
    distinct(&|r| r.loc_pref) && distinct(&|r| r.weight) && distinct(&|r| Some(r.as_path.len() as u32))
}

#[test]
fn field_agreement_combinations() {
    let mut seen = 0;
    for lp in FIELDS {
        for w in FIELDS {
            for same_len in [true, false] {
                for first_codes in ["ME", "BE"] {
                    let (lp_a, lp_b) = values(lp, 100);
                    let (w_a, w_b) = values(w, 0);
                    let path_b: &[u32] = if same_len { &[64500, 65000] } else { &[64500] };
                    let recs = vec![
                        rec([10, 0, 0, 1], first_codes, lp_a, w_a, &[64500, 65000]),
                        rec([10, 0, 0, 2], "ME", lp_b, w_b, path_b),
                    ];
                    let want = agreement_oracle(&recs);
                    let got = detect_mbgp(&recs, &tor1(), Asn(64500)).unwrap();
                    assert_eq!(got.is_some(), want, "{lp:?} {w:?} same_len={same_len} {first_codes}");
                    seen += usize::from(want);
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn foreign_first_as_is_not_evidence() {
    let recs = vec![
        rec([10, 0, 0, 1], "ME", Some(100), Some(0), &[64500]),
        rec([10, 0, 0, 2], "ME", Some(100), Some(0), &[64501]),
    ];
    assert_eq!(detect_mbgp(&recs, &tor1(), Asn(64500)).unwrap(), None);
}

#[test]
fn summary_with_one_corrupted_row() {
    let entries: Vec<BgpSummaryEntry> = (1..=3u8)
        .map(|i| BgpSummaryEntry {
            neighbor_address: Ipv4Addr::new(198, 32, 181, i),
            neighbor_as: Asn(64500 + i as u32),
            state_or_prefix_count: "10".into(),
            uptime: "1d00h".into(),
            extras: BTreeMap::new(),
        })
        .collect();
    let text = render_summary(&entries).replace("198.32.181.2 ", "198.32.181.x ");
    let report = parse_bgp_summary_report(&text).unwrap();
    assert_eq!(report.entries.len(), 2);
    assert_eq!(report.skipped(), 1);
}

#[test]
fn summary_without_table_is_an_error() {
    let err = parse_bgp_summary("").unwrap_err();
    assert!(err.to_string().starts_with("unrecognized summary format"));
    assert!(parse_bgp_summary("% Access denied\nbye\n").is_err());
}

fn arb_record() -> impl Strategy<Value = RouteDetailRecord> {
    (
        1..=6u8,
        prop::sample::select(vec!["ME", "BE", "MBE", "E", "B", "M"]),
        prop::option::of(prop_oneof![Just(100u32), Just(200u32)]),
        prop::option::of(0..2u32),
        prop::collection::vec(64500..64502u32, 1..3),
    )
        .prop_map(|(nh, codes, lp, w, path)| rec([10, 0, 0, nh], codes, lp, w, &path))
}

proptest! {
    #[test]
    fn evidence_always_has_two_links(recs in prop::collection::vec(arb_record(), 0..6)) {
        if let Some(ev) = detect_mbgp(&recs, &tor1(), Asn(64500)).unwrap() {
            prop_assert!(ev.link_count() >= 2);
            for nh in &ev.next_hops {
                prop_assert!(recs.iter().any(|r| r.next_hop == *nh && r.first_as() == Some(Asn(64500))));
            }
        }
    }

    #[test]
    fn detail_render_parse_round_trip(recs in prop::collection::vec(arb_record(), 1..6)) {
        let parsed = parse_route_detail(&render_route_detail(&recs)).unwrap();
        prop_assert_eq!(parsed.len(), recs.len());
        for (a, b) in parsed.iter().zip(&recs) {
            prop_assert_eq!(
                (a.prefix, &a.status_codes, a.next_hop, a.loc_pref, a.weight, &a.as_path),
                (b.prefix, &b.status_codes, b.next_hop, b.loc_pref, b.weight, &b.as_path)
            );
        }
    }

    #[test]
    fn parsers_are_total(text in "(?s).{0,400}") {
        let _ = parse_route_detail(&text);
        let _ = parse_bgp_summary_report(&text);
    }
}
