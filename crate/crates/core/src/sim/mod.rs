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

//! Deterministic synthetic M-BGP scenarios.
//!
//! A scenario fixes routers, peers, sessions and, per session, how many
//! neighbor addresses carry tied routes and how the peer wires them. All
//! looking-glass responses, traceroutes and oracle tables are pure functions
//! of the scenario, and the ground truth is read straight off it.
//!
//! Address plan: router interfaces in 192.0.2.0/24, probe sources in
//! 198.51.100.0/24, source-side gateways in 203.0.113.0/24, one /22 peering
//! LAN per router in 100.64.0.0/10, peer `j` in 10.j.0.0/16 with its /24s at
//! the bottom and farside interfaces from 10.j.128.0 up.

mod export;
mod scenario;
mod synth;
mod transport;

pub use export::{
    ixp_dataset, prefix_table, primary_oracle, read_ground_truth, secondary_oracle, traceroute_sweep, write_artifacts,
    write_ground_truth, write_lg_fixtures, ArtifactPaths, GROUND_TRUTH_FILE, GROUND_TRUTH_HEADER, IXP_FILE, LG_DIR,
    PREFIXES_FILE, PRIMARY_ORACLE_FILE, SCENARIO_FILE, SECONDARY_ORACLE_FILE, TRACEROUTES_FILE,
};
pub use scenario::{
    generate_scenario, quota, GroundTruth, Scenario, Session, SimConfig, SimError, SimPeer, SimRouter, TruthPair,
    Wiring, DEFAULT_FANOUT, DEFAULT_LINK_MIX, SCENARIO_FORMAT,
};
pub use synth::{
    farside_index, installed_route_set, route_candidates, synth_route_detail, synth_summary, synth_traceroute,
    NOT_IN_TABLE,
};
pub use transport::SimTransport;
