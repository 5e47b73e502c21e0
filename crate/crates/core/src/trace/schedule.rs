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

use std::net::Ipv4Addr;

use ipnet::Ipv4Net;

use crate::net::host_addresses;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("probe schedules need a /24, got /{0}")]
    NotSlash24(u8),
    #[error("at least one probe per destination is required")]
    NoProbes,
}

/// Probe times for a full sweep of a /24: every host `.1` to `.254` probed
/// `probes` times, `interval` seconds apart, starting at 0.
///
/// Entries are ordered by destination, then round.
pub fn plan_probe_schedule(prefix: Ipv4Net, probes: u32, interval: u64) -> Result<Vec<(Ipv4Addr, u64)>, ScheduleError> {
    if prefix.prefix_len() != 24 {
        return Err(ScheduleError::NotSlash24(prefix.prefix_len()));
    }
    if probes == 0 {
        return Err(ScheduleError::NoProbes);
    }
    Ok(host_addresses(&prefix.trunc())
        .flat_map(|dst| (0..probes as u64).map(move |r| (dst, r * interval)))
        .collect())
}
