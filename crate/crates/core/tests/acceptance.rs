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

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::hash::Hasher;
use std::net::Ipv4Addr;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ipnet::Ipv4Net;
use mbgp_core::bgp::{
    compare_routes, egress_next_hop, expected_shares, select_installed, FlowKey, Origin, Preferred, Protocol,
    RouteCandidate,
};
use mbgp_core::campaign::{
    aggregate, collect_summaries, find_multipath_candidates, read_evidence, run_campaign, AsRankTable,
    FixtureTransport, IxpDataset, LgTransport, PrefixTable, RateLimiter, RetryPolicy, SimClock, DEFAULT_GROUP_BOUNDS,
};
use mbgp_core::lg::{detect_mbgp, parse_route_detail};
use mbgp_core::net::host_addresses;
use mbgp_core::sim::{generate_scenario, synth_traceroute, SimConfig};
use mbgp_core::trace::{
    analyze, map_ip, read_traceroutes, resolve_ixp_hop, IpToAsOracle, OracleTable, OracleVerdict, Shape, Verdict,
};
use mbgp_core::{Asn, RouterName};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ip(s: &str) -> Ipv4Addr {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let dir = common::fixtures().join("tor1_lg");
    let text = std::fs::read_to_string(dir.join("lg/tor1/detail_142.46.150.1.txt")).unwrap();
    let records = parse_route_detail(&text).map_err(|e| e.to_string())?;
    let router = RouterName::from("tor1");
    let ev = detect_mbgp(&records, &router, Asn(19752))
        .map_err(|e| e.to_string())?
        .ok_or("no evidence")?;
    let want: BTreeSet<Ipv4Addr> = [ip("198.32.181.46"), ip("206.108.34.48")].into();
    ensure(ev.router == router, || format!("router {}", ev.router))?;
    ensure(ev.prefix == "142.46.150.0/24".parse::<Ipv4Net>().unwrap(), || {
        format!("prefix {}", ev.prefix)
    })?;
    ensure(ev.next_hops == want, || format!("next hops {:?}", ev.next_hops))?;
    ensure(ev.link_count() == 2, || format!("link count {}", ev.link_count()))?;

    let transport = FixtureTransport::new(dir.join("lg"));
    let limiter = RateLimiter::new(6, std::sync::Arc::new(SimClock::new()));
    let retry = RetryPolicy::immediate();
    let sums = collect_summaries(&transport, &transport.routers(), &limiter, &retry);
    let ixp = IxpDataset::load(&dir.join("ixp.csv")).unwrap();
    let prefixes = PrefixTable::load(&dir.join("prefixes.csv")).unwrap();
    let cands = find_multipath_candidates(&sums.summaries, &ixp);
    let out = run_campaign(&transport, &cands, &prefixes, &limiter, &retry);
    ensure(out.evidences == vec![ev], || {
        format!("campaign evidence {:?}", out.evidences)
    })?;
    Ok("tor1 142.46.150.0/24 via 198.32.181.46, 206.108.34.48, link count 2".into())
}

fn criterion_2() -> Outcome {
    let dir = common::fixtures().join("trace_cases");
    let primary = OracleTable::load(&dir.join("oracle_primary.csv")).map_err(|e| e.to_string())?;
    let secondary = OracleTable::load(&dir.join("oracle_secondary.csv")).map_err(|e| e.to_string())?;
    let ixp = IxpDataset::load(&dir.join("ixp.csv")).map_err(|e| e.to_string())?;
    type Case<'a> = (u32, &'a str, &'a str, Shape, &'a [(&'a str, f64)]);
    let cases: [Case; 4] = [
        (
            1,
            "65.49.77.70",
            "142.148.224.0/24",
            Shape::Parallel,
            &[("206.223.117.58", 50.0), ("206.223.117.57", 50.0)],
        ),
        (
            2,
            "65.49.77.70",
            "192.76.120.0/24",
            Shape::Parallel,
            &[("206.223.117.18", 50.0), ("206.223.116.110", 50.0)],
        ),
        (
            3,
            "65.49.77.70",
            "74.122.186.0/24",
            Shape::Divergent,
            &[("206.223.116.50", 49.5), ("206.223.116.49", 50.5)],
        ),
        (
            4,
            "209.51.186.5",
            "142.46.150.0/24",
            Shape::Divergent,
            &[("198.32.181.46", 50.3), ("206.108.34.48", 49.7)],
        ),
    ];
    let mut notes = Vec::new();
    for (n, src, prefix, shape, shares) in cases {
        let file = std::fs::File::open(dir.join(format!("case{n}.txt"))).unwrap();
        let parsed = read_traceroutes(std::io::BufReader::new(file)).unwrap();
        let a = analyze(&parsed.paths, &primary, &secondary, &ixp, None);
        let d = a
            .deployment(ip(src), prefix.parse().unwrap())
            .ok_or_else(|| format!("case {n}: no deployment"))?;
        let p = d
            .profile
            .as_ref()
            .ok_or_else(|| format!("case {n}: no accepted paths"))?;
        ensure(p.shape == shape, || format!("case {n}: shape {} != {shape}", p.shape))?;
        ensure(p.ixp_shares.len() == shares.len(), || {
            format!("case {n}: {} IXP IPs", p.ixp_shares.len())
        })?;
        for (x, pct) in shares {
            let got = 100.0 * p.ixp_shares.get(&ip(x)).copied().unwrap_or(0.0);
            ensure((got - pct).abs() <= 0.1 + 1e-9, || {
                format!("case {n}: {x} {got:.2}% vs {pct}%")
            })?;
        }
        notes.push(format!("case {n} {} {}/{}", p.shape, p.accepted, d.discarded_total()));
    }
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let dir = common::fixtures().join("campaign_stats");
    let ev = read_evidence(std::fs::File::open(dir.join("evidence.csv")).unwrap()).map_err(|e| e.to_string())?;
    let rank = AsRankTable::load(&dir.join("as_rank.csv")).map_err(|e| e.to_string())?;
    let report = aggregate(&ev, &rank, &DEFAULT_GROUP_BOUNDS);
    let pct = report.link_count_percentages();
    for (k, want) in [(2, 82.8), (3, 8.7), (4, 8.4)] {
        let got = pct.get(&k).copied().unwrap_or(0.0);
        ensure((got - want).abs() <= 0.05, || format!("k={k}: {got:.3}% vs {want}%"))?;
    }
    ensure(report.case_count() == 950, || format!("{} cases", report.case_count()))?;
    let line = report.summary_line();
    ensure(line.starts_with("58 routers, 512 ASes"), || line.clone())?;
    let groups: Vec<usize> = report.rank_groups.iter().map(|g| g.as_count).collect();
    ensure(groups == [22, 75, 52, 360] && report.unranked == 3, || {
        format!("rank groups {groups:?}, unranked {}", report.unranked)
    })?;
    Ok(format!(
        "{line}; k=2/3/4: {:.1}/{:.1}/{:.1}%",
        pct[&2], pct[&3], pct[&4]
    ))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let config = SimConfig {
            routers: rng.random_range(1..=20),
            peers: rng.random_range(1..=200),
            ..Default::default()
        };
        let (s, truth) = generate_scenario(&config, seed).map_err(|e| e.to_string())?;
        let res = common::full_loop(&s, &truth, 6);
        let want = truth.keys();
        let tp = res.detected.intersection(&want).count();
        ensure(tp == want.len() && tp == res.detected.len(), || {
            format!(
                "seed {seed}: {tp} true positives, {} detected, {} expected",
                res.detected.len(),
                want.len()
            )
        })?;
        for p in &truth.pairs {
            let got = res.shapes.get(&(p.router.clone(), p.peering_as));
            ensure(got == Some(&p.shape), || {
                format!(
                    "seed {seed}: {} AS{} shape {got:?} vs {}",
                    p.router, p.peering_as, p.shape
                )
            })?;
        }
        pairs += want.len();
    }
    Ok(format!(
        "20 seeds, {pairs} deployments, precision 1.0, recall 1.0, all shapes match"
    ))
}

fn random_candidate(rng: &mut ChaCha8Rng, i: usize, ids: &[u32]) -> RouteCandidate {
    let neighbor = Asn(rng.random_range(1..=2));
    let mut path = vec![neighbor];
    for _ in 0..rng.random_range(0..=2) {
        path.push(Asn(rng.random_range(100..200)));
    }
    RouteCandidate::new(Ipv4Addr::new(10, 0, 0, i as u8 + 1), path)
        .unwrap()
        .with_weight(if rng.random_bool(0.1) { 100 } else { 0 })
        .with_loc_pref(if rng.random_bool(0.2) { 200 } else { 100 })
        .with_origin([Origin::Igp, Origin::Egp, Origin::Incomplete][rng.random_range(0..3)])
        .with_med([0, 5, 10][rng.random_range(0..3)])
        .with_protocol(if rng.random_bool(0.8) {
            Protocol::Ebgp
        } else {
            Protocol::Ibgp
        })
        .with_igp_metric(rng.random_range(1..=3))
        .with_router_id(Ipv4Addr::from(ids[i]))
}

fn beats(a: &RouteCandidate, b: &RouteCandidate) -> bool {
    compare_routes(a, b) == Preferred::First
}

/// Installed next hops straight from the pairwise comparison: drop every
/// route beaten by a route of its own neighbor AS, then every survivor beaten
/// by another survivor.
fn select_oracle(cands: &[RouteCandidate], max_paths: usize) -> (Ipv4Addr, BTreeSet<Ipv4Addr>) {
    let s1: Vec<&RouteCandidate> = cands
        .iter()
        .filter(|c| !cands.iter().any(|d| d.neighbor_as() == c.neighbor_as() && beats(d, c)))
        .collect();
    let mut top: Vec<&RouteCandidate> = s1.iter().copied().filter(|c| !s1.iter().any(|d| beats(d, c))).collect();
    top.sort_by_key(|c| (u32::from(c.router_id), u32::from(c.next_hop)));
    let best = top[0];
    let mut set = BTreeSet::from([best.next_hop]);
    if top.len() > 1 && max_paths > 1 && best.protocol == Protocol::Ebgp {
        set = top
            .iter()
            .filter(|c| c.protocol == Protocol::Ebgp && c.neighbor_as() == best.neighbor_as())
            .take(max_paths)
            .map(|c| c.next_hop)
            .collect();
    }
    (best.next_hop, set)
}

fn criterion_5() -> Outcome {
    const SETS: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let prefix: Ipv4Net = "192.0.2.0/24".parse().unwrap();
    let (mut antisym, mut trans, mut trans_sets, mut select) = (0usize, 0usize, 0usize, 0usize);
    let mut example = None;
    for _ in 0..SETS {
        let n = rng.random_range(1..=6);
        let mut ids: Vec<u32> = (1..=64).collect();
        ids.shuffle(&mut rng);
        let cands: Vec<RouteCandidate> = (0..n).map(|i| random_candidate(&mut rng, i, &ids)).collect();
        for a in &cands {
            for b in &cands {
                if compare_routes(a, b) != compare_routes(b, a).reverse() {
                    antisym += 1;
                }
            }
        }
        let ge = |x: &RouteCandidate, y: &RouteCandidate| compare_routes(x, y) != Preferred::Second;
        let before = trans;
        for a in &cands {
            for b in &cands {
                for c in &cands {
                    if ge(a, b) && ge(b, c) && !ge(a, c) {
                        trans += 1;
                        if example.is_none() {
                            example = Some(format!(
                                "{} >= {} >= {} but {} > {}",
                                a.next_hop, b.next_hop, c.next_hop, c.next_hop, a.next_hop
                            ));
                        }
                    }
                }
            }
        }
        trans_sets += usize::from(trans > before);
        let max_paths = rng.random_range(1..=4);
        let got = select_installed(&cands, prefix, max_paths).unwrap();
        let (best, want) = select_oracle(&cands, max_paths);
        let got_set: BTreeSet<Ipv4Addr> = got.routes.iter().map(|r| r.next_hop).collect();
        let ordered = got.routes[1..].windows(2).all(|w| w[0].next_hop < w[1].next_hop);
        if got.best().next_hop != best || got_set != want || !ordered || got.multipath != (want.len() > 1) {
            select += 1;
        }
    }
    let detail = format!(
        "{SETS} sets: antisymmetry violations {antisym}, transitivity violations {trans} (in {trans_sets} sets), select_installed mismatches {select}"
    );
    if antisym + trans + select == 0 {
        Ok(detail)
    } else {
        Err(match example {
            Some(e) => format!("{detail}; e.g. {e}"),
            None => detail,
        })
    }
}

fn fnv_oracle(src: Ipv4Addr, dst: Ipv4Addr) -> u64 {
    let mut h = fnv::FnvHasher::default();
    h.write(&src.octets());
    h.write(&dst.octets());
    h.finish()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for k in 2..=4usize {
        for _ in 0..100 {
            let src = Ipv4Addr::from(rng.random::<u32>());
            let prefix = Ipv4Net::new(Ipv4Addr::from(rng.random::<u32>()), 24).unwrap().trunc();
            let hops: BTreeSet<u32> = std::iter::repeat_with(|| rng.random::<u32>()).take(k).collect();
            let cands: Vec<RouteCandidate> = hops
                .iter()
                .map(|h| RouteCandidate::new(Ipv4Addr::from(*h), vec![Asn(64500)]).unwrap())
                .collect();
            let installed = select_installed(&cands, prefix, 4).unwrap();
            ensure(installed.len() == k, || format!("{} installed of {k}", installed.len()))?;
            let sorted: Vec<Ipv4Addr> = hops.iter().map(|h| Ipv4Addr::from(*h)).collect();
            let mut counts: BTreeMap<Ipv4Addr, usize> = BTreeMap::new();
            for dst in host_addresses(&prefix) {
                let got = egress_next_hop(&FlowKey::new(src, dst), &installed);
                let want = sorted[(fnv_oracle(src, dst) % k as u64) as usize];
                ensure(got == want, || {
                    format!("egress {got} vs oracle {want} for {src} -> {dst}")
                })?;
                *counts.entry(got).or_default() += 1;
            }
            let shares = expected_shares(&prefix, src, &installed).map_err(|e| e.to_string())?;
            for h in &sorted {
                let share = counts.get(h).copied().unwrap_or(0) as f64 / 254.0;
                ensure((shares[h] - share).abs() < 1e-12, || {
                    format!("expected_shares {} vs {share}", shares[h])
                })?;
                let dev = (share - 1.0 / k as f64).abs();
                worst = worst.max(dev);
                ensure(dev <= 0.10, || format!("k={k}: share {share:.3} of next hop {h}"))?;
            }
        }
    }

    let config = SimConfig {
        routers: 4,
        peers: 40,
        mbgp_fraction: 1.0,
        ..Default::default()
    };
    let (s, truth) = generate_scenario(&config, 6).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let p = &truth.pairs[rng.random_range(0..truth.pairs.len())];
        let dst = host_addresses(&p.prefix).nth(rng.random_range(0..254)).unwrap();
        let src = s.router(&p.router).unwrap().probe_src;
        let probes = synth_traceroute(&s, src, dst, 50, 420).map_err(|e| e.to_string())?;
        ensure(
            probes.len() == 50 && probes.iter().all(|x| x.hops == probes[0].hops),
            || format!("{dst} unstable"),
        )?;
    }
    Ok(format!(
        "k=2,3,4 x 100 prefixes: max deviation from 1/k {worst:.3}; 100 destinations x 50 probes stable"
    ))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut queries = 0;
    for seed in [70u64, 71, 72] {
        let config = SimConfig {
            routers: 6,
            peers: 60,
            max_prefixes: 6,
            ..Default::default()
        };
        let (s, truth) = generate_scenario(&config, seed).map_err(|e| e.to_string())?;
        let rate = 6;
        let res = common::full_loop(&s, &truth, rate);
        for st in &res.outcome.stats {
            let sess = s.session(&st.router, st.peering_as).unwrap();
            let want = match truth.pair(&st.router, st.peering_as) {
                Some(_) => sess.first_target + 1,
                None => st.targets,
            };
            ensure(st.targets_queried == want, || {
                format!(
                    "seed {seed} {} AS{}: {} queries, expected {want}",
                    st.router, st.peering_as, st.targets_queried
                )
            })?;
            ensure(
                st.detected_at == truth.pair(&st.router, st.peering_as).map(|_| want),
                || {
                    format!(
                        "seed {seed} {} AS{}: detected at {:?}",
                        st.router, st.peering_as, st.detected_at
                    )
                },
            )?;
            checked += 1;
        }
        let mut times: Vec<Duration> = res.outcome.log.iter().map(|e| e.at).collect();
        times.sort();
        for (i, t) in times.iter().enumerate() {
            let in_window = times[i..]
                .iter()
                .take_while(|u| **u < *t + Duration::from_secs(60))
                .count();
            ensure(in_window <= rate as usize, || {
                format!("seed {seed}: {in_window} queries in the minute from {t:?}")
            })?;
        }
        queries += times.len();
    }
    Ok(format!(
        "{checked} candidates stop at their first M-BGP prefix; {queries} queries, no 60 s window above 6"
    ))
}

struct Fixed(OracleVerdict);

impl IpToAsOracle for Fixed {
    fn lookup(&self, _ip: Ipv4Addr) -> OracleVerdict {
        self.0.clone()
    }
}

/// Combined verdict as stated by the agreement rule.
fn truth_table(a: &OracleVerdict, b: &OracleVerdict) -> Verdict {
    use OracleVerdict::*;
    match (a, b) {
        (As(x), As(y)) => {
            if x == y {
                Verdict::As(*x)
            } else {
                Verdict::Disagreement
            }
        }
        (Unmapped, Unmapped) => Verdict::Unmapped,
        (Unmapped, Ixp(n)) | (Ixp(n), Unmapped) => Verdict::Ixp(n.clone()),
        (Unmapped, As(_)) | (As(_), Unmapped) => Verdict::Unmapped,
        (Ixp(n), Ixp(m)) => {
            if n == m {
                Verdict::Ixp(n.clone())
            } else {
                Verdict::Disagreement
            }
        }
        (Ixp(n), As(_)) | (As(_), Ixp(n)) => Verdict::Ixp(n.clone()),
    }
}

fn criterion_8() -> Outcome {
    let verdicts = [
        OracleVerdict::As(Asn(6939)),
        OracleVerdict::As(Asn(174)),
        OracleVerdict::Ixp("Equinix San Jose".into()),
        OracleVerdict::Ixp("TorIX".into()),
        OracleVerdict::Unmapped,
    ];
    let addr = ip("206.223.117.58");
    let mut n = 0;
    for a in &verdicts {
        for b in &verdicts {
            let got = map_ip(addr, &Fixed(a.clone()), &Fixed(b.clone()));
            let want = truth_table(a, b);
            ensure(got.ip == addr && got.verdict == want, || {
                format!("{a} + {b}: {:?} vs {want:?}", got.verdict)
            })?;
            n += 1;
        }
    }
    let ixp = IxpDataset::from_csv(
        "ixp_name,ixp_prefix,member_asn,member_ip\nTorIX,206.108.34.0/23,19752,206.108.34.48\nEquinix San Jose,206.223.116.0/23,,\n"
            .as_bytes(),
    )
    .unwrap();
    let member = resolve_ixp_hop(Asn(6939), ip("206.108.34.48"), Asn(19752), &ixp);
    ensure(member == Some(Asn(19752)), || format!("member branch {member:?}"))?;
    let lan = resolve_ixp_hop(Asn(6939), ip("206.223.117.58"), Asn(14630), &ixp);
    ensure(lan == Some(Asn(14630)), || format!("prefix branch {lan:?}"))?;
    let none = resolve_ixp_hop(Asn(6939), ip("192.0.2.7"), Asn(14630), &ixp);
    ensure(none.is_none(), || format!("discard branch {none:?}"))?;
    Ok(format!("{n} verdict combinations, 3 resolution branches"))
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "route-detail replay", 1, criterion_1),
        (2, "traceroute case replay", 1, criterion_2),
        (3, "deployment statistics replay", 1, criterion_3),
        (4, "end-to-end oracle equivalence", 60, criterion_4),
        (5, "decision-process properties", 30, criterion_5),
        (6, "load-share properties", 10, criterion_6),
        (7, "early stop and rate limit", 10, criterion_7),
        (8, "IP-to-AS truth table", 1, criterion_8),
    ];
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match res {
            Ok(d) if secs <= budget as f64 => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget} s budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {n} ({name}): {} [{secs:.2} s / {budget} s] {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
