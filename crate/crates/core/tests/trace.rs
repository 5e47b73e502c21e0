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

use std::collections::BTreeSet;
use std::io::BufReader;
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;
use mbgp_core::campaign::IxpDataset;
use mbgp_core::sim::{generate_scenario, ixp_dataset, primary_oracle, secondary_oracle, traceroute_sweep, SimConfig};
use mbgp_core::trace::{
    analyze, compute_profile, extract_border_crossing, map_ip, plan_probe_schedule, read_traceroutes, BorderCrossing,
    DiscardReason, OracleTable, ProfileError, ScheduleError, Shape, TraceroutePath,
};
use mbgp_core::Asn;
use proptest::prelude::*;

fn ip(s: &str) -> Ipv4Addr {
    s.parse().unwrap()
}

struct TraceCases {
    primary: OracleTable,
    secondary: OracleTable,
    ixp: IxpDataset,
}

fn trace_cases() -> TraceCases {
    let dir = common::fixtures().join("trace_cases");
    TraceCases {
        primary: OracleTable::load(&dir.join("oracle_primary.csv")).unwrap(),
        secondary: OracleTable::load(&dir.join("oracle_secondary.csv")).unwrap(),
        ixp: IxpDataset::load(&dir.join("ixp.csv")).unwrap(),
    }
}

fn case_paths(n: u32) -> (Vec<TraceroutePath>, usize, usize) {
    let path = common::fixtures().join("trace_cases").join(format!("case{n}.txt"));
    let lines = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .count();
    let parsed = read_traceroutes(BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    (parsed.paths, parsed.malformed.len(), lines)
}

#[test]
fn case1_border_crossing() {
    let t = trace_cases();
    let (paths, _, _) = case_paths(1);
    let p = &paths[0];
    let maps: Vec<_> = p
        .hops
        .iter()
        .map(|h| h.ip.map(|a| map_ip(a, &t.primary, &t.secondary)))
        .collect();
    let c = extract_border_crossing(p, Asn(6939), Asn(14630), &maps, &t.ixp).unwrap();
    assert_eq!(
        c,
        BorderCrossing {
            nearside_ip: ip("72.52.92.246"),
            ixp_ip: ip("206.223.117.58"),
            farside_ip: ip("199.230.0.190"),
            ixp_name: "Equinix San Jose".into(),
        }
    );
    assert_eq!(
        extract_border_crossing(p, Asn(6939), Asn(15169), &maps, &t.ixp),
        Err(DiscardReason::NoCrossing)
    );
}

#[test]
fn trace_cases_accounting_and_shapes() {
    let t = trace_cases();
    let expect = [
        (1, "142.148.224.0/24", Shape::Parallel),
        (2, "192.76.120.0/24", Shape::Parallel),
        (3, "74.122.186.0/24", Shape::Divergent),
        (4, "142.46.150.0/24", Shape::Divergent),
    ];
    for (n, prefix, shape) in expect {
        let (paths, malformed, lines) = case_paths(n);
        assert_eq!(paths.len() + malformed, lines, "case {n}");
        assert!(malformed >= 1);
        let a = analyze(&paths, &t.primary, &t.secondary, &t.ixp, None);
        assert_eq!(a.input_paths, paths.len());
        assert_eq!(a.accepted + a.discarded_total(), a.input_paths, "case {n}");
        let d = a
            .deployments
            .iter()
            .find(|d| d.prefix == prefix.parse::<Ipv4Net>().unwrap())
            .unwrap();
        let p = d.profile.as_ref().unwrap();
        assert_eq!(p.shape, shape, "case {n}");
        assert_eq!(p.accepted, 1000);
        assert!((p.ixp_shares.values().sum::<f64>() - 1.0).abs() < 1e-9);
        for x in p.ixp_shares.keys() {
            let sum: f64 = p.farsides_of(*x).map(|f| p.farside_shares[&(*x, f)]).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
        assert!(p.is_stable(), "case {n}");
        let csv = a.render_csv();
        assert!(csv.lines().count() > 1);
        assert!(a.render_text().contains(&format!("{} accepted", a.accepted)));
    }
}

#[test]
fn case3_ixp_ips_reach_several_farsides() {
    let t = trace_cases();
    let (paths, _, _) = case_paths(3);
    let a = analyze(&paths, &t.primary, &t.secondary, &t.ixp, None);
    let p = a.deployments.iter().find_map(|d| d.profile.as_ref()).unwrap();
    assert!(p.ixp_shares.keys().any(|x| p.farsides_of(*x).count() > 1));
    let overall: f64 = p.farside_counts.keys().map(|(x, f)| p.farside_overall(*x, *f)).sum();
    assert!((overall - 1.0).abs() < 1e-9);
}

#[test]
fn schedule_matches_arithmetic() {
    let prefix: Ipv4Net = "142.148.224.0/24".parse().unwrap();
    let (probes, interval) = (3u32, 420u64);
    let plan = plan_probe_schedule(prefix, probes, interval).unwrap();
    assert_eq!(plan.len(), 254 * probes as usize);
    let base = u32::from(ip("142.148.224.0"));
    for (i, (dst, t)) in plan.iter().enumerate() {
        assert_eq!(u32::from(*dst), base + 1 + (i as u32) / probes);
        assert_eq!(*t, (i as u64 % probes as u64) * interval);
    }
    let first: Vec<u64> = plan
        .iter()
        .filter(|(d, _)| *d == ip("142.148.224.1"))
        .map(|(_, t)| *t)
        .collect();
    assert_eq!(first, vec![0, 420, 840]);
    assert_eq!(plan_probe_schedule(prefix, 50, 420).unwrap().len(), 12_700);
    assert_eq!(plan.iter().filter(|(_, t)| *t == 0).count(), 254);
}

#[test]
fn schedule_rejects_bad_input() {
    assert_eq!(
        plan_probe_schedule("10.0.0.0/23".parse().unwrap(), 3, 420),
        Err(ScheduleError::NotSlash24(23))
    );
    assert_eq!(
        plan_probe_schedule("10.0.0.0/24".parse().unwrap(), 0, 420),
        Err(ScheduleError::NoProbes)
    );
}

#[test]
fn empty_profile_is_an_error() {
    let err = compute_profile(&[]).unwrap_err();
    assert_eq!(err, ProfileError::NoPaths);
    assert_eq!(err.to_string(), "no paths");
}

fn crossing_sample(dst: u8, ixp: u8, far: u8) -> (TraceroutePath, BorderCrossing) {
    (
        TraceroutePath {
            src: ip("65.49.77.70"),
            dst: Ipv4Addr::new(198, 18, 0, dst),
            started_at: 0,
            hops: Vec::new(),
        },
        BorderCrossing {
            nearside_ip: ip("72.52.92.246"),
            ixp_ip: Ipv4Addr::new(206, 223, 116, ixp),
            farside_ip: Ipv4Addr::new(199, 230, 0, far),
            ixp_name: "IX".into(),
        },
    )
}

fn arb_noise() -> impl Strategy<Value = Vec<(usize, usize, u8)>> {
    prop::collection::vec((0..10_000usize, 0..6usize, 0..3u8), 0..40)
}

proptest! {
    #[test]
    fn profile_is_permutation_invariant(
        rows in prop::collection::vec((1..20u8, 1..4u8, 1..4u8), 1..40),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let paths: Vec<_> = rows.iter().map(|(d, x, f)| crossing_sample(*d, *x, *f)).collect();
        let mut shuffled = paths.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(compute_profile(&paths).unwrap(), compute_profile(&shuffled).unwrap());

        let p = compute_profile(&paths).unwrap();
        let parallel = p.ixp_shares.keys().all(|x| p.farsides_of(*x).count() == 1);
        prop_assert_eq!(p.shape == Shape::Parallel, parallel);
        let dsts: BTreeSet<Ipv4Addr> = paths.iter().map(|(t, _)| t.dst).collect();
        prop_assert_eq!(p.stability.len(), dsts.len());
    }

    #[test]
    fn accounting_survives_noise(seed in 0..1000u64, noise in arb_noise()) {
        let config = SimConfig { routers: 2, peers: 6, ..SimConfig::default() };
        let (s, truth) = generate_scenario(&config, seed).unwrap();
        let mut paths = traceroute_sweep(&s, &truth, 1, 420).unwrap();
        prop_assume!(!paths.is_empty());
        for (pi, hi, kind) in noise {
            let n = paths.len();
            let hops = &mut paths[pi % n].hops;
            let h = hi % hops.len();
            match kind {
                0 => hops[h].ip = None,
                1 => hops[h].ip = Some(Ipv4Addr::new(203, 0, 113, 250)),
                _ => { hops.remove(h); }
            }
            if hops.is_empty() {
                hops.push(mbgp_core::trace::Hop { ttl: 1, ip: None, rtt_ms: None });
            }
        }
        let a = analyze(&paths, &primary_oracle(&s), &secondary_oracle(&s), &ixp_dataset(&s), Some(s.source_as));
        prop_assert_eq!(a.input_paths, paths.len());
        prop_assert_eq!(a.accepted + a.discarded_total(), paths.len());
        let per_deployment: usize = a.deployments.iter().map(|d| d.accepted() + d.discarded_total()).sum();
        let global_only: usize = [DiscardReason::SourceUnmapped, DiscardReason::DestinationUnmapped]
            .iter()
            .map(|r| a.discarded.get(r).copied().unwrap_or(0))
            .sum();
        prop_assert_eq!(per_deployment + global_only, paths.len());
    }
}
