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

use std::collections::BTreeMap;
use std::net::Ipv4Addr;

use serde::{Deserialize, Serialize};

use crate::Asn;

/// One neighbor row of `show ip bgp summary`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgpSummaryEntry {
    pub neighbor_address: Ipv4Addr,
    pub neighbor_as: Asn,
    pub state_or_prefix_count: String,
    pub uptime: String,
    pub extras: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SummaryError {
    #[error("unrecognized summary format (first skipped lines: {first_skipped:?})")]
    Unrecognized { first_skipped: Vec<String> },
}

/// Entries plus bookkeeping about what was not parsed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SummaryParse {
    pub entries: Vec<BgpSummaryEntry>,
    /// Lines that looked like table rows but could not be parsed.
    pub malformed: Vec<String>,
    /// Banner, prompt and header lines.
    pub banner_lines: usize,
    pub header_seen: bool,
}

impl SummaryParse {
    pub fn skipped(&self) -> usize {
        self.malformed.len()
    }
}

pub fn parse_bgp_summary(text: &str) -> Result<Vec<BgpSummaryEntry>, SummaryError> {
    let p = parse_bgp_summary_report(text)?;
    if p.entries.is_empty() {
        return Err(SummaryError::Unrecognized {
            first_skipped: text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .take(3)
                .map(str::to_string)
                .collect(),
        });
    }
    Ok(p.entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Neighbor,
    As,
    State,
    Uptime,
    Other,
}

fn classify_header(tok: &str) -> Column {
    let t = tok.to_ascii_lowercase();
    match t.as_str() {
        "neighbor" | "neighbour" | "peer" => Column::Neighbor,
        "as" | "asn" | "remote-as" => Column::As,
        "up/down" | "uptime" | "up" => Column::Uptime,
        _ if t.contains("state") || t.contains("pfx") => Column::State,
        _ => Column::Other,
    }
}

/// Parses a summary table, counting rows it had to skip.
///
/// A row is any line whose first token starts with a digit; it must hold an
/// IPv4 neighbor address followed by an AS number. When a header line naming
/// an `AS`/`ASN` column is present, the AS number is taken from that column
/// (so `Neighbor V AS ...` layouts work); otherwise it is the token right
/// after the address. A recognized header with no rows at all is an empty
/// table rather than an error.
pub fn parse_bgp_summary_report(text: &str) -> Result<SummaryParse, SummaryError> {
    let mut out = SummaryParse::default();
    let mut header: Option<Vec<(String, Column)>> = None;
    let mut skipped_lines = Vec::new();

    for line in text.lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let looks_like_row = toks[0].starts_with(|c: char| c.is_ascii_digit());
        if !looks_like_row {
            out.banner_lines += 1;
            if skipped_lines.len() < 3 {
                skipped_lines.push(line.to_string());
            }
            let cols: Vec<(String, Column)> = toks.iter().map(|t| (t.to_string(), classify_header(t))).collect();
            if cols.iter().any(|(_, c)| *c == Column::As) && cols.iter().any(|(_, c)| *c == Column::Neighbor) {
                header = Some(cols);
                out.header_seen = true;
            }
            continue;
        }
        match parse_row(&toks, header.as_deref()) {
            Some(e) => out.entries.push(e),
            None => {
                if skipped_lines.len() < 3 {
                    skipped_lines.push(line.to_string());
                }
                out.malformed.push(line.to_string());
            }
        }
    }

    if out.entries.is_empty() && !(out.header_seen && out.malformed.is_empty()) {
        return Err(SummaryError::Unrecognized {
            first_skipped: skipped_lines,
        });
    }
    Ok(out)
}

fn parse_row(toks: &[&str], header: Option<&[(String, Column)]>) -> Option<BgpSummaryEntry> {
    let neighbor_address: Ipv4Addr = toks[0].parse().ok()?;

    if let Some(cols) = header {
        if cols.len() == toks.len() && cols[0].1 == Column::Neighbor {
            let mut entry = BgpSummaryEntry {
                neighbor_address,
                neighbor_as: Asn(0),
                state_or_prefix_count: String::new(),
                uptime: String::new(),
                extras: BTreeMap::new(),
            };
            let mut have_as = false;
            for ((name, col), tok) in cols.iter().zip(toks).skip(1) {
                match col {
                    Column::As => {
                        entry.neighbor_as = tok.parse().ok()?;
                        have_as = true;
                    }
                    Column::State => entry.state_or_prefix_count = tok.to_string(),
                    Column::Uptime => entry.uptime = tok.to_string(),
                    Column::Neighbor | Column::Other => {
                        entry.extras.insert(name.clone(), tok.to_string());
                    }
                }
            }
            return have_as.then_some(entry);
        }
    }

    let neighbor_as: Asn = toks.get(1)?.parse().ok()?;
    let mut extras = BTreeMap::new();
    for (i, t) in toks.iter().enumerate().skip(4) {
        extras.insert(format!("col{}", i + 1), t.to_string());
    }
    Some(BgpSummaryEntry {
        neighbor_address,
        neighbor_as,
        state_or_prefix_count: toks.get(2).map(|s| s.to_string()).unwrap_or_default(),
        uptime: toks.get(3).map(|s| s.to_string()).unwrap_or_default(),
        extras,
    })
}
