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

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::net::Ipv4Addr;

#[derive(Debug, Clone, PartialEq)]
pub struct Hop {
    pub ttl: u8,
    /// `None` for an unresponsive hop.
    pub ip: Option<Ipv4Addr>,
    pub rtt_ms: Option<f64>,
}

/// One traceroute from `src` to `dst`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceroutePath {
    pub src: Ipv4Addr,
    pub dst: Ipv4Addr,
    /// Start time in seconds.
    pub started_at: u64,
    pub hops: Vec<Hop>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathParseError {
    #[error("expected 4 fields, found {0}")]
    FieldCount(usize),
    #[error("bad {field}: {value:?}")]
    BadField { field: &'static str, value: String },
    #[error("bad hop {0:?}")]
    BadHop(String),
    #[error("ttl {0} does not increase")]
    TtlOrder(u8),
}

pub const TRACEROUTE_HEADER: &str = "src,dst,started_at,hops";

fn bad(field: &'static str, value: &str) -> PathParseError {
    PathParseError::BadField {
        field,
        value: value.to_string(),
    }
}

impl TraceroutePath {
    /// Parses `src,dst,started_at,ttl:ip:rtt|ttl:ip:rtt|...`; `*` marks an
    /// unresponsive address or a missing RTT.
    pub fn parse_line(line: &str) -> Result<Self, PathParseError> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 4 {
            return Err(PathParseError::FieldCount(fields.len()));
        }
        let src = fields[0].trim().parse().map_err(|_| bad("src", fields[0]))?;
        let dst = fields[1].trim().parse().map_err(|_| bad("dst", fields[1]))?;
        let started_at = fields[2].trim().parse().map_err(|_| bad("started_at", fields[2]))?;
        let mut hops: Vec<Hop> = Vec::new();
        for h in fields[3].trim().split('|').filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = h.split(':').collect();
            if parts.is_empty() || parts.len() > 3 {
                return Err(PathParseError::BadHop(h.to_string()));
            }
            let ttl: u8 = parts[0].parse().map_err(|_| PathParseError::BadHop(h.to_string()))?;
            let ip = match parts.get(1).copied().unwrap_or("*") {
                "*" | "" => None,
                s => Some(s.parse().map_err(|_| PathParseError::BadHop(h.to_string()))?),
            };
            let rtt_ms = match parts.get(2).copied().unwrap_or("*") {
                "*" | "" => None,
                s => Some(
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite() && *v >= 0.0)
                        .ok_or_else(|| PathParseError::BadHop(h.to_string()))?,
                ),
            };
            if hops.last().is_some_and(|p| p.ttl >= ttl) {
                return Err(PathParseError::TtlOrder(ttl));
            }
            hops.push(Hop { ttl, ip, rtt_ms });
        }
        Ok(TraceroutePath {
            src,
            dst,
            started_at,
            hops,
        })
    }

    pub fn to_line(&self) -> String {
        let mut hops = String::new();
        for (i, h) in self.hops.iter().enumerate() {
            if i > 0 {
                hops.push('|');
            }
            write!(hops, "{}:", h.ttl).unwrap();
            match h.ip {
                Some(ip) => write!(hops, "{ip}:").unwrap(),
                None => hops.push_str("*:"),
            }
            match h.rtt_ms {
                Some(r) => write!(hops, "{r:.3}").unwrap(),
                None => hops.push('*'),
            }
        }
        format!("{},{},{},{}", self.src, self.dst, self.started_at, hops)
    }
}

/// Paths read from a traceroute file together with the lines that failed.
#[derive(Debug, Clone, Default)]
pub struct TraceParse {
    pub paths: Vec<TraceroutePath>,
    /// `(1-based line number, error)`.
    pub malformed: Vec<(usize, PathParseError)>,
}

/// Reads one path per line, skipping blank lines, `#` comments and the
/// header line.
pub fn read_traceroutes<R: BufRead>(reader: R) -> std::io::Result<TraceParse> {
    let mut out = TraceParse::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t == TRACEROUTE_HEADER {
            continue;
        }
        match TraceroutePath::parse_line(t) {
            Ok(p) => out.paths.push(p),
            Err(e) => out.malformed.push((i + 1, e)),
        }
    }
    Ok(out)
}

pub fn write_traceroutes<W: Write>(mut w: W, paths: &[TraceroutePath]) -> std::io::Result<()> {
    writeln!(w, "{TRACEROUTE_HEADER}")?;
    for p in paths {
        writeln!(w, "{}", p.to_line())?;
    }
    Ok(())
}
