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

//! Traceroute analysis of M-BGP deployments.
//!
//! Each hop is mapped to an AS by two independent oracles and kept only when
//! they agree. IXP hops, which the oracles leave unmapped or tag as IXP, are
//! resolved through the IXP dataset. Every accepted path contributes one
//! border crossing (nearside IP, IXP IP, farside IP); the crossings of a
//! deployment yield its load shares, per-destination egress stability and
//! parallel/divergent shape.

mod analyze;
mod crossing;
mod mapping;
mod path;
mod profile;
mod schedule;

pub use analyze::{analyze, Analysis, Deployment};
pub use crossing::{extract_border_crossing, BorderCrossing, DiscardReason};
pub use mapping::{map_ip, resolve_ixp_hop, IpMapping, IpToAsOracle, OracleError, OracleTable, OracleVerdict, Verdict};
pub use path::{
    read_traceroutes, write_traceroutes, Hop, PathParseError, TraceParse, TraceroutePath, TRACEROUTE_HEADER,
};
pub use profile::{compute_profile, DeploymentProfile, ProfileError, Shape};
pub use schedule::{plan_probe_schedule, ScheduleError};
