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

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use mbgp_core::campaign::LgTransport;
use mbgp_core::campaign::{
    collect_summaries, find_multipath_candidates, run_campaign, CampaignOutcome, RateLimiter, RetryPolicy, SimClock,
};
use mbgp_core::sim::{
    ixp_dataset, prefix_table, primary_oracle, secondary_oracle, traceroute_sweep, GroundTruth, Scenario, SimTransport,
};
use mbgp_core::trace::{analyze, Analysis, Shape};
use mbgp_core::{Asn, RouterName};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub struct LoopResult {
    pub outcome: CampaignOutcome,
    pub detected: BTreeSet<(RouterName, Asn)>,
    pub analysis: Analysis,
    pub shapes: BTreeMap<(RouterName, Asn), Shape>,
    pub clock: Arc<SimClock>,
    pub limiter_rate: u32,
}

/// Runs detection over the simulator transport and traceroute analysis over
/// a one-probe sweep of every ground-truth prefix.
pub fn full_loop(s: &Scenario, truth: &GroundTruth, rate: u32) -> LoopResult {
    let transport = SimTransport::new(s.clone());
    let clock = Arc::new(SimClock::new());
    let limiter = RateLimiter::new(rate, clock.clone());
    let retry = RetryPolicy::immediate();
    let summaries = collect_summaries(&transport, &transport.routers(), &limiter, &retry);
    assert!(summaries.failures.is_empty(), "{:?}", summaries.failures);
    let ixp = ixp_dataset(s);
    let candidates = find_multipath_candidates(&summaries.summaries, &ixp);
    let mut outcome = run_campaign(&transport, &candidates, &prefix_table(s), &limiter, &retry);
    let mut log = summaries.log;
    log.append(&mut outcome.log);
    outcome.log = log;
    let detected = outcome
        .evidences
        .iter()
        .map(|e| (e.router.clone(), e.peering_as))
        .collect();

    let traces = traceroute_sweep(s, truth, 1, 0).expect("sweep");
    let analysis = analyze(&traces, &primary_oracle(s), &secondary_oracle(s), &ixp, None);
    let mut shapes = BTreeMap::new();
    for d in &analysis.deployments {
        let router = s.router_by_source(d.src).expect("probe source").name.clone();
        if let Some(p) = &d.profile {
            shapes.insert((router, d.peer_as), p.shape);
        }
    }
    LoopResult {
        outcome,
        detected,
        analysis,
        shapes,
        clock,
        limiter_rate: rate,
    }
}
