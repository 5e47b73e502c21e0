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

//! Looking-glass response parsing and M-BGP evidence extraction.
//!
//! Two commands are understood: `show ip bgp summary` and
//! `show ip bgp detail <addr>`. Both parsers are anchored on IPv4-address and
//! AS-number tokens rather than on fixed column positions, so small vendor
//! layout differences do not matter. The canonical layouts written by
//! [`format`] are accepted bit-exactly.

mod detail;
mod evidence;
pub mod format;
mod summary;

pub use detail::{parse_route_detail, DetailError, RouteDetailRecord, StatusCode};
pub use evidence::{detect_mbgp, DetectError, MbgpEvidence};
pub use summary::{parse_bgp_summary, parse_bgp_summary_report, BgpSummaryEntry, SummaryError, SummaryParse};
