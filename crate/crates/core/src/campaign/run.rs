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
use std::sync::Mutex;
use std::time::Duration;

use super::candidates::{select_probe_targets, PeerCandidate};
use super::clock::{RateLimiter, RetryPolicy};
use super::data::PrefixTable;
use super::transport::{LgCommand, LgTransport, TransportError};
use crate::lg::{detect_mbgp, parse_bgp_summary_report, parse_route_detail, BgpSummaryEntry, MbgpEvidence};
use crate::{Asn, RouterName};

/// One transport invocation, for rate-limit audits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLogEntry {
    pub seq: u64,
    pub at: Duration,
    pub router: RouterName,
    pub command: String,
    pub attempt: u32,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateStats {
    pub router: RouterName,
    pub peering_as: Asn,
    pub targets: usize,
    /// Distinct targets a route-detail query was issued for.
    pub targets_queried: usize,
    /// Transport invocations including retries.
    pub attempts: usize,
    /// 1-based index of the target that produced evidence.
    pub detected_at: Option<usize>,
}

/// Targets of one candidate that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFailure {
    pub router: RouterName,
    pub peering_as: Asn,
    pub skipped_targets: Vec<Ipv4Addr>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignOutcome {
    pub evidences: Vec<MbgpEvidence>,
    pub failures: Vec<CandidateFailure>,
    pub stats: Vec<CandidateStats>,
    pub log: Vec<QueryLogEntry>,
}

impl CampaignOutcome {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

fn is_transient(e: &TransportError) -> bool {
    matches!(e, TransportError::Unreachable(_))
}

fn issue(
    transport: &dyn LgTransport,
    limiter: &RateLimiter,
    retry: &RetryPolicy,
    router: &RouterName,
    command: &LgCommand,
    log: &mut Vec<QueryLogEntry>,
) -> (Result<String, TransportError>, usize) {
    let command = command.to_string();
    let mut attempts = 0;
    let mut attempt = 0u32;
    loop {
        if attempt > 0 {
            let wait = retry.backoff(attempt);
            if !wait.is_zero() {
                limiter.clock().sleep(wait);
            }
        }
        let at = limiter.acquire();
        let res = transport.query(router, &command);
        attempts += 1;
        log.push(QueryLogEntry {
            seq: 0,
            at,
            router: router.clone(),
            command: command.clone(),
            attempt,
            outcome: match &res {
                Ok(_) => "ok".to_string(),
                Err(e) => format!("error: {e}"),
            },
        });
        match res {
            Err(e) if is_transient(&e) && attempt < retry.max_retries => attempt += 1,
            other => return (other, attempts),
        }
    }
}

struct CandidateRun {
    evidence: Option<MbgpEvidence>,
    stats: CandidateStats,
    failure: Option<CandidateFailure>,
    log: Vec<QueryLogEntry>,
}

fn run_candidate(
    transport: &dyn LgTransport,
    cand: &PeerCandidate,
    prefixes: &PrefixTable,
    limiter: &RateLimiter,
    retry: &RetryPolicy,
) -> CandidateRun {
    let targets = select_probe_targets(cand.peering_as, prefixes);
    let mut stats = CandidateStats {
        router: cand.router.clone(),
        peering_as: cand.peering_as,
        targets: targets.len(),
        targets_queried: 0,
        attempts: 0,
        detected_at: None,
    };
    let mut log = Vec::new();
    let mut skipped = Vec::new();
    let mut reason = String::new();
    let mut evidence = None;

    for (i, target) in targets.iter().enumerate() {
        let (res, attempts) = issue(
            transport,
            limiter,
            retry,
            &cand.router,
            &LgCommand::Detail(*target),
            &mut log,
        );
        stats.targets_queried += 1;
        stats.attempts += attempts;
        let text = match res {
            Ok(t) => t,
            Err(e) => {
                skipped.push(*target);
                reason = e.to_string();
                continue;
            }
        };
        let Ok(records) = parse_route_detail(&text) else {
            continue;
        };
        match detect_mbgp(&records, &cand.router, cand.peering_as) {
            Ok(Some(ev)) => {
                stats.detected_at = Some(i + 1);
                evidence = Some(ev);
                break;
            }
            Ok(None) => {}
            Err(e) => {
                skipped.push(*target);
                reason = e.to_string();
            }
        }
    }

    let failure = (!skipped.is_empty()).then(|| CandidateFailure {
        router: cand.router.clone(),
        peering_as: cand.peering_as,
        skipped_targets: skipped,
        reason,
    });
    CandidateRun {
        evidence,
        stats,
        failure,
        log,
    }
}

fn assemble(runs: Vec<CandidateRun>) -> CampaignOutcome {
    let mut out = CampaignOutcome::default();
    for r in runs {
        out.evidences.extend(r.evidence);
        out.failures.extend(r.failure);
        out.stats.push(r.stats);
        out.log.extend(r.log);
    }
    out.log.sort_by_key(|e| e.at);
    for (i, e) in out.log.iter_mut().enumerate() {
        e.seq = i as u64;
    }
    out
}

/// Queries each candidate's targets in order and stops at the first one whose
/// response proves M-BGP.
///
/// Transient transport errors are retried per `retry`; a target that still
/// fails is skipped and reported in [`CampaignOutcome::failures`].
pub fn run_campaign(
    transport: &dyn LgTransport,
    candidates: &[PeerCandidate],
    prefixes: &PrefixTable,
    limiter: &RateLimiter,
    retry: &RetryPolicy,
) -> CampaignOutcome {
    let runs = candidates
        .iter()
        .map(|c| run_candidate(transport, c, prefixes, limiter, retry))
        .collect();
    assemble(runs)
}

/// Like [`run_campaign`] but queries distinct routers from up to `workers`
/// threads. All threads share the one rate limiter; the outcome lists
/// candidates in input order.
pub fn run_campaign_parallel(
    transport: &dyn LgTransport,
    candidates: &[PeerCandidate],
    prefixes: &PrefixTable,
    limiter: &RateLimiter,
    retry: &RetryPolicy,
    workers: usize,
) -> CampaignOutcome {
    let mut by_router: BTreeMap<&RouterName, Vec<usize>> = BTreeMap::new();
    for (i, c) in candidates.iter().enumerate() {
        by_router.entry(&c.router).or_default().push(i);
    }
    let queue = Mutex::new(by_router.into_values().collect::<Vec<_>>());
    let results: Mutex<Vec<Option<CandidateRun>>> = Mutex::new((0..candidates.len()).map(|_| None).collect());

    std::thread::scope(|s| {
        for _ in 0..workers.max(1) {
            s.spawn(|| loop {
                let Some(group) = queue.lock().unwrap().pop() else {
                    break;
                };
                for i in group {
                    let run = run_candidate(transport, &candidates[i], prefixes, limiter, retry);
                    results.lock().unwrap()[i] = Some(run);
                }
            });
        }
    });

    let runs = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every candidate is processed"))
        .collect();
    assemble(runs)
}

#[derive(Debug, Clone, Default)]
pub struct SummaryCollection {
    pub summaries: BTreeMap<RouterName, Vec<BgpSummaryEntry>>,
    pub failures: Vec<(RouterName, String)>,
    pub log: Vec<QueryLogEntry>,
}

/// Issues `show ip bgp summary` on every router and parses the responses.
pub fn collect_summaries(
    transport: &dyn LgTransport,
    routers: &[RouterName],
    limiter: &RateLimiter,
    retry: &RetryPolicy,
) -> SummaryCollection {
    let mut out = SummaryCollection::default();
    for r in routers {
        let (res, _) = issue(transport, limiter, retry, r, &LgCommand::Summary, &mut out.log);
        match res.map_err(|e| e.to_string()).and_then(|t| {
            parse_bgp_summary_report(&t)
                .map(|p| p.entries)
                .map_err(|e| e.to_string())
        }) {
            Ok(entries) => {
                out.summaries.insert(r.clone(), entries);
            }
            Err(e) => out.failures.push((r.clone(), e)),
        }
    }
    for (i, e) in out.log.iter_mut().enumerate() {
        e.seq = i as u64;
    }
    out
}
