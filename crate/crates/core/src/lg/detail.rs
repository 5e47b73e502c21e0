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
use std::fmt;
use std::net::Ipv4Addr;

use ipnet::Ipv4Net;
use serde::{Deserialize, Serialize};

use crate::Asn;

/// A route status code letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatusCode {
    Multipath,
    External,
    Best,
    Internal,
    /// Any other letter, kept verbatim.
    Other(char),
}

impl StatusCode {
    pub fn from_letter(c: char) -> Self {
        match c.to_ascii_uppercase() {
            'M' => StatusCode::Multipath,
            'E' => StatusCode::External,
            'B' => StatusCode::Best,
            'I' => StatusCode::Internal,
            other => StatusCode::Other(other),
        }
    }

    pub fn letter(self) -> char {
        match self {
            StatusCode::Multipath => 'M',
            StatusCode::External => 'E',
            StatusCode::Best => 'B',
            StatusCode::Internal => 'I',
            StatusCode::Other(c) => c,
        }
    }
}

impl fmt::Display for StatusCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// One route block of a `show ip bgp detail` response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteDetailRecord {
    pub prefix: Ipv4Net,
    pub status_codes: BTreeSet<StatusCode>,
    pub next_hop: Ipv4Addr,
    pub loc_pref: Option<u32>,
    pub weight: Option<u32>,
    pub med: Option<u32>,
    pub as_path: Vec<Asn>,
    pub raw_block: String,
}

impl RouteDetailRecord {
    pub fn has(&self, code: StatusCode) -> bool {
        self.status_codes.contains(&code)
    }

    pub fn is_multipath_external(&self) -> bool {
        self.has(StatusCode::Multipath) && self.has(StatusCode::External)
    }

    pub fn first_as(&self) -> Option<Asn> {
        self.as_path.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetailError {
    #[error("no routes in response")]
    NoRoutes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Key {
    Prefix,
    Status,
    NextHop,
    LocPref,
    Weight,
    Med,
    Path,
}

fn key_of(tok: &str) -> Option<Key> {
    let t = tok.trim_end_matches(':').to_ascii_lowercase();
    Some(match t.as_str() {
        "prefix" | "network" => Key::Prefix,
        "status" | "status-codes" => Key::Status,
        "nexthop" | "next-hop" | "next_hop" => Key::NextHop,
        "locprf" | "locpref" | "localpref" | "local-pref" | "local_pref" => Key::LocPref,
        "weight" => Key::Weight,
        "med" | "metric" => Key::Med,
        "path" | "as-path" | "aspath" | "as_path" => Key::Path,
        _ => return None,
    })
}

#[derive(Default)]
struct Partial {
    prefix: Option<Ipv4Net>,
    status: BTreeSet<StatusCode>,
    has_status: bool,
    next_hop: Option<Ipv4Addr>,
    loc_pref: Option<u32>,
    weight: Option<u32>,
    med: Option<u32>,
    as_path: Vec<Asn>,
    lines: Vec<String>,
}

impl Partial {
    fn is_route(&self) -> bool {
        self.has_status || self.next_hop.is_some()
    }

    fn finish(self, inherited: Option<Ipv4Net>) -> Option<RouteDetailRecord> {
        let prefix = self.prefix.or(inherited)?;
        let next_hop = self.next_hop?;
        if self.status.is_empty() {
            return None;
        }
        Some(RouteDetailRecord {
            prefix,
            status_codes: self.status,
            next_hop,
            loc_pref: self.loc_pref,
            weight: self.weight,
            med: self.med,
            as_path: self.as_path,
            raw_block: self.lines.join("\n"),
        })
    }
}

fn parse_status(value: &str) -> BTreeSet<StatusCode> {
    value
        .chars()
        .filter(|c| c.is_ascii_alphabetic())
        .map(StatusCode::from_letter)
        .collect()
}

fn find_cidr(toks: &[&str]) -> Option<Ipv4Net> {
    toks.iter().map(|t| t.trim_end_matches([',', ':', ';'])).find_map(|t| {
        if t.contains('/') {
            t.parse::<Ipv4Net>().ok().map(|n| n.trunc())
        } else {
            None
        }
    })
}

/// Parses every route block of a route-detail response.
///
/// Blocks are delimited by blank lines, by a new prefix line, or by a second
/// `Status`/`NextHop` key within the same block. A block needs a prefix (its
/// own or one declared earlier in the response), a next hop and at least one
/// status code; incomplete blocks are dropped.
pub fn parse_route_detail(text: &str) -> Result<Vec<RouteDetailRecord>, DetailError> {
    let mut records = Vec::new();
    let mut current_prefix: Option<Ipv4Net> = None;
    let mut part = Partial::default();

    let mut flush = |part: &mut Partial, current_prefix: Option<Ipv4Net>| {
        let done = std::mem::take(part);
        if done.is_route() {
            if let Some(r) = done.finish(current_prefix) {
                records.push(r);
            }
        }
    };

    for line in text.lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            flush(&mut part, current_prefix);
            continue;
        }

        let mut i = 0;
        let mut saw_key = false;
        while i < toks.len() {
            let mut key = key_of(toks[i]);
            let mut width = 1;
            if key.is_none()
                && toks[i].eq_ignore_ascii_case("next")
                && toks
                    .get(i + 1)
                    .is_some_and(|t| t.trim_end_matches(':').eq_ignore_ascii_case("hop"))
            {
                key = Some(Key::NextHop);
                width = 2;
            }
            let Some(key) = key else {
                i += 1;
                continue;
            };
            saw_key = true;
            i += width;
            match key {
                Key::Path => {
                    let path: Vec<Asn> = toks[i..].iter().filter_map(|t| t.parse().ok()).collect();
                    part.as_path = path;
                    i = toks.len();
                }
                Key::Status => {
                    if part.has_status {
                        flush(&mut part, current_prefix);
                    }
                    part.has_status = true;
                    if let Some(v) = toks.get(i) {
                        part.status = parse_status(v);
                        i += 1;
                    }
                }
                Key::NextHop => {
                    let value = toks
                        .get(i)
                        .and_then(|v| v.trim_end_matches([',', ';']).parse::<Ipv4Addr>().ok());
                    if part.next_hop.is_some() && value.is_some() {
                        flush(&mut part, current_prefix);
                    }
                    if value.is_some() {
                        part.next_hop = value;
                        i += 1;
                    }
                }
                Key::Prefix => {
                    if let Some(p) = toks.get(i).and_then(|v| v.parse::<Ipv4Net>().ok()) {
                        flush(&mut part, current_prefix);
                        current_prefix = Some(p.trunc());
                        part.prefix = Some(p.trunc());
                        i += 1;
                    }
                }
                Key::LocPref | Key::Weight | Key::Med => {
                    if let Some(v) = toks.get(i).and_then(|v| v.trim_end_matches(',').parse::<u32>().ok()) {
                        match key {
                            Key::LocPref => part.loc_pref = Some(v),
                            Key::Weight => part.weight = Some(v),
                            _ => part.med = Some(v),
                        }
                        i += 1;
                    }
                }
            }
        }

        if !saw_key {
            // free-form header such as "BGP routing table entry for 10.0.0.0/24"
            if let Some(p) = find_cidr(&toks) {
                flush(&mut part, current_prefix);
                current_prefix = Some(p);
                part.prefix = Some(p);
            }
        }
        part.lines.push(line.to_string());
    }
    flush(&mut part, current_prefix);

    if records.is_empty() {
        return Err(DetailError::NoRoutes);
    }
    Ok(records)
}
