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
use std::io::{Read, Write};
use std::net::Ipv4Addr;
use std::path::{Path, PathBuf};

use ipnet::Ipv4Net;

use crate::lg::MbgpEvidence;
use crate::net::{parse_prefix, PrefixMap};
use crate::{Asn, RouterName};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Invalid { line: u64, message: String },
}

fn invalid(line: u64, message: impl Into<String>) -> DataError {
    DataError::Invalid {
        line,
        message: message.into(),
    }
}

fn open(path: &Path) -> Result<std::fs::File, DataError> {
    std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// Rows of a headered CSV; the header row and `#` comments are skipped.
fn rows<R: Read>(reader: R, header_first: &str) -> Result<Vec<(u64, csv::StringRecord)>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.iter().all(str::is_empty) || rec.get(0) == Some(header_first) {
            continue;
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize, line: u64, name: &str) -> Result<&'a str, DataError> {
    rec.get(i).ok_or_else(|| invalid(line, format!("missing field {name}")))
}

/// One PeeringDB-style row: an IXP peering LAN and optionally one member
/// interface on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IxpRecord {
    pub ixp_name: String,
    pub ixp_prefix: Ipv4Net,
    pub member_asn: Option<Asn>,
    pub member_ip: Option<Ipv4Addr>,
}

#[derive(Debug, Clone, Default)]
pub struct IxpDataset {
    records: Vec<IxpRecord>,
    members: HashMap<Ipv4Addr, usize>,
    lans: PrefixMap<String>,
}

impl IxpDataset {
    /// Builds the dataset; every member IP must lie inside its IXP prefix.
    pub fn new(records: Vec<IxpRecord>) -> Result<Self, DataError> {
        let mut ds = IxpDataset::default();
        for (i, r) in records.into_iter().enumerate() {
            if let Some(ip) = r.member_ip {
                if !r.ixp_prefix.contains(&ip) {
                    return Err(invalid(
                        i as u64 + 1,
                        format!("member {ip} outside {} of {}", r.ixp_prefix, r.ixp_name),
                    ));
                }
                ds.members.insert(ip, ds.records.len());
            }
            ds.lans.insert(r.ixp_prefix, r.ixp_name.clone());
            ds.records.push(r);
        }
        Ok(ds)
    }

    pub fn records(&self) -> &[IxpRecord] {
        &self.records
    }

    /// The member record registered for `ip`.
    pub fn member(&self, ip: Ipv4Addr) -> Option<&IxpRecord> {
        self.members.get(&ip).map(|i| &self.records[*i])
    }

    /// Name of the IXP whose peering LAN contains `ip`.
    pub fn ixp_of(&self, ip: Ipv4Addr) -> Option<&str> {
        self.lans.longest_match(ip).map(|(_, n)| n.as_str())
    }

    pub fn in_ixp_prefix(&self, ip: Ipv4Addr) -> bool {
        self.lans.longest_match(ip).is_some()
    }

    /// True when `ip` is registered to `asn` or lies on any IXP peering LAN.
    pub fn confirms(&self, ip: Ipv4Addr, asn: Asn) -> bool {
        self.member(ip).is_some_and(|r| r.member_asn == Some(asn)) || self.in_ixp_prefix(ip)
    }

    /// Reads `ixp_name,ixp_prefix,member_asn,member_ip`; the member columns
    /// may be empty.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DataError> {
        let mut records = Vec::new();
        for (line, rec) in rows(reader, "ixp_name")? {
            let name = field(&rec, 0, line, "ixp_name")?.to_string();
            let prefix = parse_prefix(field(&rec, 1, line, "ixp_prefix")?).map_err(|e| invalid(line, e.to_string()))?;
            let asn = match rec.get(2).unwrap_or("") {
                "" => None,
                s => Some(s.parse::<Asn>().map_err(|e| invalid(line, e.to_string()))?),
            };
            let ip = match rec.get(3).unwrap_or("") {
                "" => None,
                s => Some(s.parse::<Ipv4Addr>().map_err(|e| invalid(line, format!("{s}: {e}")))?),
            };
            records.push(IxpRecord {
                ixp_name: name,
                ixp_prefix: prefix,
                member_asn: asn,
                member_ip: ip,
            });
        }
        IxpDataset::new(records)
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        Self::from_csv(open(path)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), DataError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["ixp_name", "ixp_prefix", "member_asn", "member_ip"])?;
        for r in &self.records {
            wtr.write_record([
                r.ixp_name.clone(),
                r.ixp_prefix.to_string(),
                r.member_asn.map(|a| a.to_string()).unwrap_or_default(),
                r.member_ip.map(|a| a.to_string()).unwrap_or_default(),
            ])?;
        }
        wtr.flush().map_err(|source| DataError::Io {
            path: PathBuf::new(),
            source,
        })?;
        Ok(())
    }
}

/// Announced prefixes and their origin AS; multi-origin rows are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixTable {
    pub records: Vec<(Ipv4Net, Asn)>,
}

impl PrefixTable {
    pub fn new(records: Vec<(Ipv4Net, Asn)>) -> Self {
        PrefixTable { records }
    }

    pub fn originated_by(&self, asn: Asn) -> impl Iterator<Item = &Ipv4Net> {
        self.records.iter().filter(move |(_, a)| *a == asn).map(|(p, _)| p)
    }

    /// Reads `prefix,origin_asn`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DataError> {
        let mut records = Vec::new();
        for (line, rec) in rows(reader, "prefix")? {
            let p = parse_prefix(field(&rec, 0, line, "prefix")?).map_err(|e| invalid(line, e.to_string()))?;
            let a: Asn = field(&rec, 1, line, "origin_asn")?
                .parse()
                .map_err(|e: crate::ParseAsnError| invalid(line, e.to_string()))?;
            records.push((p, a));
        }
        Ok(PrefixTable { records })
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        Self::from_csv(open(path)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), DataError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["prefix", "origin_asn"])?;
        for (p, a) in &self.records {
            wtr.write_record([p.to_string(), a.to_string()])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsRankEntry {
    pub asn: Asn,
    pub rank: u32,
    pub cone_size: u64,
    pub name: String,
}

#[derive(Debug, Clone, Default)]
pub struct AsRankTable {
    by_asn: BTreeMap<Asn, AsRankEntry>,
}

impl AsRankTable {
    pub fn new(entries: impl IntoIterator<Item = AsRankEntry>) -> Self {
        AsRankTable {
            by_asn: entries.into_iter().map(|e| (e.asn, e)).collect(),
        }
    }

    pub fn get(&self, asn: Asn) -> Option<&AsRankEntry> {
        self.by_asn.get(&asn)
    }

    pub fn len(&self) -> usize {
        self.by_asn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_asn.is_empty()
    }

    /// Reads `asn,rank,cone_size,name`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, DataError> {
        let mut entries = Vec::new();
        for (line, rec) in rows(reader, "asn")? {
            let asn: Asn = field(&rec, 0, line, "asn")?
                .parse()
                .map_err(|e: crate::ParseAsnError| invalid(line, e.to_string()))?;
            let rank = field(&rec, 1, line, "rank")?
                .parse::<u32>()
                .map_err(|e| invalid(line, format!("rank: {e}")))?;
            let cone_size = field(&rec, 2, line, "cone_size")?
                .parse::<u64>()
                .map_err(|e| invalid(line, format!("cone_size: {e}")))?;
            let name = rec.get(3).unwrap_or("").to_string();
            entries.push(AsRankEntry {
                asn,
                rank,
                cone_size,
                name,
            });
        }
        Ok(AsRankTable::new(entries))
    }

    pub fn load(path: &Path) -> Result<Self, DataError> {
        Self::from_csv(open(path)?)
    }
}

pub const EVIDENCE_HEADER: &str = "router,peering_as,prefix,link_count,next_hops";

/// Writes evidence as `router,peering_as,prefix,link_count,next_hops` with
/// next hops separated by `;`.
pub fn write_evidence<W: Write>(w: W, evidence: &[MbgpEvidence]) -> Result<(), DataError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(EVIDENCE_HEADER.split(','))?;
    for e in evidence {
        let hops: Vec<String> = e.next_hops.iter().map(|h| h.to_string()).collect();
        wtr.write_record([
            e.router.to_string(),
            e.peering_as.to_string(),
            e.prefix.to_string(),
            e.link_count().to_string(),
            hops.join(";"),
        ])?;
    }
    wtr.flush().map_err(|source| DataError::Io {
        path: PathBuf::new(),
        source,
    })?;
    Ok(())
}

pub fn read_evidence<R: Read>(reader: R) -> Result<Vec<MbgpEvidence>, DataError> {
    let mut out = Vec::new();
    for (line, rec) in rows(reader, "router")? {
        let router = RouterName::new(field(&rec, 0, line, "router")?);
        let peering_as: Asn = field(&rec, 1, line, "peering_as")?
            .parse()
            .map_err(|e: crate::ParseAsnError| invalid(line, e.to_string()))?;
        let prefix = parse_prefix(field(&rec, 2, line, "prefix")?).map_err(|e| invalid(line, e.to_string()))?;
        let link_count = field(&rec, 3, line, "link_count")?
            .parse::<usize>()
            .map_err(|e| invalid(line, format!("link_count: {e}")))?;
        let next_hops = field(&rec, 4, line, "next_hops")?
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<Ipv4Addr>())
            .collect::<Result<std::collections::BTreeSet<_>, _>>()
            .map_err(|e| invalid(line, format!("next_hops: {e}")))?;
        if next_hops.len() != link_count {
            return Err(invalid(
                line,
                format!("link_count {link_count} but {} next hops", next_hops.len()),
            ));
        }
        if link_count < 2 {
            return Err(invalid(line, "link_count must be at least 2"));
        }
        out.push(MbgpEvidence {
            router,
            peering_as,
            prefix,
            next_hops,
        });
    }
    Ok(out)
}
