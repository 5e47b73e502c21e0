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

//! The looking-glass query campaign and aggregation of its results.
//!
//! The flow is: query every border router for its BGP summary, keep peering
//! ASes reachable through two or more IXP neighbor addresses, query the `.1`
//! address of each of their /24 prefixes until one response proves M-BGP,
//! then aggregate the evidence into per-router, per-AS and link-count tables.

mod candidates;
mod clock;
mod data;
mod report;
mod run;
mod transport;

pub use candidates::{find_multipath_candidates, select_probe_targets, PeerCandidate};
pub use clock::{clock_registry, Clock, RateLimiter, RetryPolicy, SimClock, SystemClock, DEFAULT_RATE_LIMIT};
pub use data::{
    read_evidence, write_evidence, AsRankEntry, AsRankTable, DataError, IxpDataset, IxpRecord, PrefixTable,
    EVIDENCE_HEADER,
};
pub use report::{aggregate, CampaignReport, RankGroup, DEFAULT_GROUP_BOUNDS};
pub use run::{
    collect_summaries, run_campaign, run_campaign_parallel, CampaignOutcome, CandidateFailure, CandidateStats,
    QueryLogEntry, SummaryCollection,
};
pub use transport::{transport_registry, FixtureTransport, LgCommand, LgTransport, TransportError};
