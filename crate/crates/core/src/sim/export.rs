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
use std::io::{Read, Write};
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};

use ipnet::Ipv4Net;

use crate::campaign::{FixtureTransport, IxpDataset, IxpRecord, PrefixTable};
use crate::net::{first_host, host_addresses};
use crate::trace::{write_traceroutes, OracleTable, OracleVerdict, Shape, TraceroutePath};
use crate::{Asn, RouterName};

use super::scenario::{GroundTruth, Scenario, SimError, TruthPair};
use super::synth::{installed_route_set, synth_route_detail, synth_summary, trace_paths};

pub const SCENARIO_FILE: &str = "scenario.json";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";
pub const TRACEROUTES_FILE: &str = "traceroutes.txt";
pub const PRIMARY_ORACLE_FILE: &str = "oracle_primary.csv";
pub const SECONDARY_ORACLE_FILE: &str = "oracle_secondary.csv";
pub const IXP_FILE: &str = "ixp.csv";
pub const PREFIXES_FILE: &str = "prefixes.csv";
pub const LG_DIR: &str = "lg";

pub const GROUND_TRUTH_HEADER: &str = "router,peering_as,prefix,link_count,next_hops,shape";

fn source_blocks() -> [Ipv4Net; 3] {
    ["192.0.2.0/24", "198.51.100.0/24", "203.0.113.0/24"].map(|s| s.parse().unwrap())
}

fn oracle(s: &Scenario, with_ixps: bool) -> OracleTable {
    let mut rows: Vec<(Ipv4Net, OracleVerdict)> = source_blocks()
        .into_iter()
        .map(|p| (p, OracleVerdict::As(s.source_as)))
        .collect();
    if with_ixps {
        rows.extend(
            s.routers
                .iter()
                .map(|r| (r.ixp_prefix, OracleVerdict::Ixp(r.ixp_name.clone()))),
        );
    }
    rows.extend(s.peers.iter().map(|p| (p.block, OracleVerdict::As(p.asn))));
    OracleTable::new(rows)
}

/// IP-to-AS table that labels IXP peering LANs.
pub fn primary_oracle(s: &Scenario) -> OracleTable {
    oracle(s, true)
}

/// IP-to-AS table that leaves IXP peering LANs unmapped.
pub fn secondary_oracle(s: &Scenario) -> OracleTable {
    oracle(s, false)
}

pub fn ixp_dataset(s: &Scenario) -> IxpDataset {
    let mut records = Vec::new();
    for r in &s.routers {
        records.push(IxpRecord {
            ixp_name: r.ixp_name.clone(),
            ixp_prefix: r.ixp_prefix,
            member_asn: None,
            member_ip: None,
        });
        for sess in s.sessions_at(&r.name) {
            for &addr in &sess.neighbor_addresses {
                if sess.unregistered.contains(&addr) {
                    continue;
                }
                records.push(IxpRecord {
                    ixp_name: r.ixp_name.clone(),
                    ixp_prefix: r.ixp_prefix,
                    member_asn: Some(sess.peer),
                    member_ip: Some(addr),
                });
            }
        }
    }
    IxpDataset::new(records).expect("members lie inside their IXP prefix")
}

pub fn prefix_table(s: &Scenario) -> PrefixTable {
    PrefixTable::new(
        s.peers
            .iter()
            .flat_map(|p| p.prefixes.iter().map(move |n| (*n, p.asn)))
            .collect(),
    )
}

pub fn write_ground_truth<W: Write>(mut w: W, truth: &GroundTruth) -> std::io::Result<()> {
    writeln!(w, "{GROUND_TRUTH_HEADER}")?;
    for p in &truth.pairs {
        let hops: Vec<String> = p.next_hops.iter().map(|h| h.to_string()).collect();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            p.router,
            p.peering_as,
            p.prefix,
            p.next_hops.len(),
            hops.join(";"),
            p.shape.to_string().to_lowercase()
        )?;
    }
    Ok(())
}

pub fn read_ground_truth<R: Read>(reader: R) -> Result<GroundTruth, SimError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let bad = |line: usize, m: String| SimError::InvalidConfig(format!("ground truth line {line}: {m}"));
    let mut pairs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        if rec.len() != 6 {
            return Err(bad(line, format!("expected 6 fields, got {}", rec.len())));
        }
        let next_hops: BTreeSet<Ipv4Addr> = rec[4]
            .split(';')
            .map(|h| h.trim().parse().map_err(|_| bad(line, format!("bad next hop {h:?}"))))
            .collect::<Result<_, _>>()?;
        let link_count: usize = rec[3].parse().map_err(|_| bad(line, "bad link count".into()))?;
        if link_count != next_hops.len() {
            return Err(bad(line, "link count does not match next hops".into()));
        }
        pairs.push(TruthPair {
            router: RouterName::new(&rec[0]),
            peering_as: rec[1].parse::<Asn>().map_err(|e| bad(line, e.to_string()))?,
            prefix: rec[2].parse().map_err(|_| bad(line, "bad prefix".into()))?,
            next_hops,
            shape: rec[5].parse::<Shape>().map_err(|e| bad(line, e))?,
        });
    }
    pairs.sort();
    Ok(GroundTruth { pairs })
}

/// Full-/24 traceroute sweep of every ground-truth deployment from the
/// probe source behind its router.
pub fn traceroute_sweep(
    s: &Scenario,
    truth: &GroundTruth,
    probes: u32,
    interval: u64,
) -> Result<Vec<TraceroutePath>, SimError> {
    let hasher = s.flow_hasher()?;
    let mut out = Vec::new();
    for p in &truth.pairs {
        let router = s.router(&p.router).expect("truth router exists");
        let (session, set) = installed_route_set(s, &p.router, first_host(&p.prefix))
            .ok()
            .flatten()
            .expect("truth prefixes are reachable");
        for dst in host_addresses(&p.prefix) {
            out.extend(trace_paths(
                s,
                hasher.as_ref(),
                router,
                session,
                &set,
                dst,
                probes,
                interval,
            ));
        }
    }
    Ok(out)
}

/// Writes the summary of every router and the route detail of every /24
/// probe target of its peers, in the fixture-transport layout.
pub fn write_lg_fixtures(s: &Scenario, dir: &Path) -> Result<(), SimError> {
    for r in &s.routers {
        std::fs::create_dir_all(dir.join(r.name.as_str()))?;
        std::fs::write(FixtureTransport::summary_path(dir, &r.name), synth_summary(s, &r.name)?)?;
        for sess in s.sessions_at(&r.name) {
            let peer = s.peer(sess.peer).expect("session peer exists");
            for t in peer.targets() {
                let addr = first_host(&t);
                std::fs::write(
                    FixtureTransport::detail_path(dir, &r.name, addr),
                    synth_route_detail(s, &r.name, addr)?,
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ArtifactPaths {
    pub scenario: PathBuf,
    pub ground_truth: PathBuf,
    pub traceroutes: PathBuf,
    pub primary_oracle: PathBuf,
    pub secondary_oracle: PathBuf,
    pub ixp: PathBuf,
    pub prefixes: PathBuf,
    pub lg_dir: PathBuf,
}

impl ArtifactPaths {
    pub fn in_dir(dir: &Path) -> Self {
        ArtifactPaths {
            scenario: dir.join(SCENARIO_FILE),
            ground_truth: dir.join(GROUND_TRUTH_FILE),
            traceroutes: dir.join(TRACEROUTES_FILE),
            primary_oracle: dir.join(PRIMARY_ORACLE_FILE),
            secondary_oracle: dir.join(SECONDARY_ORACLE_FILE),
            ixp: dir.join(IXP_FILE),
            prefixes: dir.join(PREFIXES_FILE),
            lg_dir: dir.join(LG_DIR),
        }
    }
}

pub fn write_artifacts(
    s: &Scenario,
    truth: &GroundTruth,
    dir: &Path,
    probes: u32,
    interval: u64,
) -> Result<ArtifactPaths, SimError> {
    std::fs::create_dir_all(dir)?;
    let paths = ArtifactPaths::in_dir(dir);
    s.save(&paths.scenario)?;
    let mut buf = Vec::new();
    write_ground_truth(&mut buf, truth)?;
    std::fs::write(&paths.ground_truth, buf)?;
    std::fs::write(&paths.primary_oracle, primary_oracle(s).to_csv())?;
    std::fs::write(&paths.secondary_oracle, secondary_oracle(s).to_csv())?;
    let io = |e: crate::campaign::DataError| SimError::Io(std::io::Error::other(e.to_string()));
    ixp_dataset(s)
        .write_csv(std::fs::File::create(&paths.ixp)?)
        .map_err(io)?;
    prefix_table(s)
        .write_csv(std::fs::File::create(&paths.prefixes)?)
        .map_err(io)?;
    let traces = traceroute_sweep(s, truth, probes, interval)?;
    write_traceroutes(
        std::io::BufWriter::new(std::fs::File::create(&paths.traceroutes)?),
        &traces,
    )?;
    write_lg_fixtures(s, &paths.lg_dir)?;
    Ok(paths)
}
