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

//! Canonical text layouts of the two looking-glass commands.
//!
//! Route detail, one block per route, blocks separated by a blank line:
//!
//! ```text
//! Prefix: 142.46.150.0/24
//! Status: M,E  NextHop: 198.32.181.46  LocPrf: 100  Weight: 0  MED: 0
//! Path: 19752
//! ```
//!
//! Absent metrics are left out of the status line. Summary: a header line,
//! then one row per neighbor session:
//!
//! ```text
//! Neighbor         ASN       State/PfxRcd  Up/Down
//! 198.32.181.46    19752     412           12d03h
//! ```

use std::fmt::Write;

use super::{BgpSummaryEntry, RouteDetailRecord};

pub const SUMMARY_HEADER: &str = "Neighbor         ASN       State/PfxRcd  Up/Down";

/// Exact command strings sent to a looking glass.
pub const SUMMARY_COMMAND: &str = "show ip bgp summary";
pub const DETAIL_COMMAND_PREFIX: &str = "show ip bgp detail ";

pub fn detail_command(addr: std::net::Ipv4Addr) -> String {
    format!("{DETAIL_COMMAND_PREFIX}{addr}")
}

pub fn render_route_block(r: &RouteDetailRecord) -> String {
    let mut out = String::new();
    let codes: Vec<String> = r.status_codes.iter().map(|c| c.to_string()).collect();
    writeln!(out, "Prefix: {}", r.prefix).unwrap();
    write!(out, "Status: {}  NextHop: {}", codes.join(","), r.next_hop).unwrap();
    if let Some(v) = r.loc_pref {
        write!(out, "  LocPrf: {v}").unwrap();
    }
    if let Some(v) = r.weight {
        write!(out, "  Weight: {v}").unwrap();
    }
    if let Some(v) = r.med {
        write!(out, "  MED: {v}").unwrap();
    }
    out.push('\n');
    let path: Vec<String> = r.as_path.iter().map(|a| a.to_string()).collect();
    writeln!(out, "Path: {}", path.join(" ")).unwrap();
    out
}

pub fn render_route_detail(records: &[RouteDetailRecord]) -> String {
    records.iter().map(render_route_block).collect::<Vec<_>>().join("\n")
}

pub fn render_summary(entries: &[BgpSummaryEntry]) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_HEADER);
    out.push('\n');
    for e in entries {
        writeln!(
            out,
            "{:<16} {:<9} {:<13} {}",
            e.neighbor_address.to_string(),
            e.neighbor_as.to_string(),
            e.state_or_prefix_count,
            e.uptime
        )
        .unwrap();
    }
    out
}
