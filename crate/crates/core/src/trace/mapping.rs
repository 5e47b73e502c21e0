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
use std::io::Read;
use std::net::Ipv4Addr;
use std::path::Path;

use ipnet::Ipv4Net;

use crate::campaign::IxpDataset;
use crate::net::{parse_prefix, PrefixMap};
use crate::Asn;

/// What a single IP-to-AS oracle says about an address.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OracleVerdict {
    As(Asn),
    Ixp(String),
    Unmapped,
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::As(a) => write!(f, "{a}"),
            OracleVerdict::Ixp(n) => write!(f, "IXP:{n}"),
            OracleVerdict::Unmapped => f.write_str("unmapped"),
        }
    }
}

impl std::str::FromStr for OracleVerdict {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("unmapped") {
            return Ok(OracleVerdict::Unmapped);
        }
        if t.len() > 4 && t[..4].eq_ignore_ascii_case("ixp:") {
            return Ok(OracleVerdict::Ixp(t[4..].trim().to_string()));
        }
        t.parse::<Asn>()
            .map(OracleVerdict::As)
            .map_err(|_| OracleError::BadVerdict(s.to_string()))
    }
}

/// An IP-to-AS mapping source.
pub trait IpToAsOracle: Send + Sync {
    fn lookup(&self, ip: Ipv4Addr) -> OracleVerdict;
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("bad verdict {0:?}")]
    BadVerdict(String),
    #[error("line {line}: {message}")]
    Invalid { line: u64, message: String },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Oracle backed by a `prefix,verdict` table; lookups use longest-prefix
/// match and addresses outside every prefix are unmapped.
#[derive(Debug, Clone, Default)]
pub struct OracleTable {
    table: PrefixMap<OracleVerdict>,
    rows: Vec<(Ipv4Net, OracleVerdict)>,
}

impl OracleTable {
    pub fn new(rows: impl IntoIterator<Item = (Ipv4Net, OracleVerdict)>) -> Self {
        let mut t = OracleTable::default();
        for (p, v) in rows {
            t.table.insert(p, v.clone());
            t.rows.push((p.trunc(), v));
        }
        t
    }

    pub fn rows(&self) -> &[(Ipv4Net, OracleVerdict)] {
        &self.rows
    }

    pub fn from_csv<R: Read>(reader: R) -> Result<Self, OracleError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            let (Some(p), Some(v)) = (rec.get(0), rec.get(1)) else {
                return Err(OracleError::Invalid {
                    line,
                    message: "expected prefix,verdict".into(),
                });
            };
            if p == "prefix" {
                continue;
            }
            let prefix = parse_prefix(p).map_err(|e| OracleError::Invalid {
                line,
                message: e.to_string(),
            })?;
            rows.push((prefix, v.parse()?));
        }
        Ok(OracleTable::new(rows))
    }

    pub fn load(path: &Path) -> Result<Self, OracleError> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("prefix,verdict\n");
        for (p, v) in &self.rows {
            out.push_str(&format!("{p},{v}\n"));
        }
        out
    }
}

impl IpToAsOracle for OracleTable {
    fn lookup(&self, ip: Ipv4Addr) -> OracleVerdict {
        self.table
            .longest_match(ip)
            .map(|(_, v)| v.clone())
            .unwrap_or(OracleVerdict::Unmapped)
    }
}

/// Combined verdict of the two oracles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    As(Asn),
    Ixp(String),
    Unmapped,
    Disagreement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpMapping {
    pub ip: Ipv4Addr,
    pub verdict: Verdict,
}

/// Maps `ip` by agreement of both oracles.
///
/// | primary \ secondary | AS b                | IXP m          | unmapped  |
/// |---------------------|---------------------|----------------|-----------|
/// | AS a                | AS a if a = b, else disagreement | IXP m | unmapped |
/// | IXP n               | IXP n               | IXP n if n = m, else disagreement | IXP n |
/// | unmapped            | unmapped            | IXP m          | unmapped  |
///
/// An IXP verdict wins over an AS verdict: an address on an IXP peering LAN
/// is resolved later from the IXP dataset, not from either oracle's AS.
pub fn map_ip(ip: Ipv4Addr, primary: &dyn IpToAsOracle, secondary: &dyn IpToAsOracle) -> IpMapping {
    use OracleVerdict as O;
    let verdict = match (primary.lookup(ip), secondary.lookup(ip)) {
        (O::As(a), O::As(b)) if a == b => Verdict::As(a),
        (O::As(_), O::As(_)) => Verdict::Disagreement,
        (O::Ixp(n), O::Ixp(m)) if n == m => Verdict::Ixp(n),
        (O::Ixp(_), O::Ixp(_)) => Verdict::Disagreement,
        (O::Ixp(n), _) | (_, O::Ixp(n)) => Verdict::Ixp(n),
        (O::As(_), O::Unmapped) | (O::Unmapped, O::As(_)) | (O::Unmapped, O::Unmapped) => Verdict::Unmapped,
    };
    IpMapping { ip, verdict }
}

/// Maps an IXP hop sitting between `prev_as` and `next_as`.
///
/// A registered member interface maps to its member AS; any other address on
/// an IXP peering LAN maps to `next_as`. Anything else cannot be resolved and
/// the path it is on has to be discarded (`None`).
pub fn resolve_ixp_hop(_prev_as: Asn, ixp_ip: Ipv4Addr, next_as: Asn, ixp: &IxpDataset) -> Option<Asn> {
    if let Some(asn) = ixp.member(ixp_ip).and_then(|r| r.member_asn) {
        return Some(asn);
    }
    if ixp.in_ixp_prefix(ixp_ip) {
        return Some(next_as);
    }
    None
}
