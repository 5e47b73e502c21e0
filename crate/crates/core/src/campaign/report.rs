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

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::data::AsRankTable;
use crate::lg::MbgpEvidence;
use crate::{Asn, RouterName};

pub const DEFAULT_GROUP_BOUNDS: [u32; 3] = [100, 1000, 10000];

/// ASes whose rank falls in `(lower, upper]`; `upper == None` is open-ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankGroup {
    pub label: String,
    pub lower: u32,
    pub upper: Option<u32>,
    pub as_count: usize,
}

/// Aggregated campaign results. A case is one (router, peering AS) pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CampaignReport {
    pub deployments: Vec<MbgpEvidence>,
    /// Link count per case: the largest link count among its evidences.
    pub cases: BTreeMap<(RouterName, Asn), usize>,
    /// Distinct peering ASes per router.
    pub per_router_counts: BTreeMap<RouterName, usize>,
    /// Distinct routers per peering AS.
    pub per_as_router_counts: BTreeMap<Asn, usize>,
    pub link_count_histogram: BTreeMap<usize, usize>,
    pub rank_groups: Vec<RankGroup>,
    /// Peering ASes missing from the rank table.
    pub unranked: usize,
}

impl CampaignReport {
    pub fn case_count(&self) -> usize {
        self.cases.len()
    }

    pub fn router_count(&self) -> usize {
        self.per_router_counts.len()
    }

    pub fn as_count(&self) -> usize {
        self.per_as_router_counts.len()
    }

    /// Percentage of cases per link count.
    pub fn link_count_percentages(&self) -> BTreeMap<usize, f64> {
        let total = self.case_count() as f64;
        self.link_count_histogram
            .iter()
            .map(|(k, v)| (*k, if total > 0.0 { 100.0 * *v as f64 / total } else { 0.0 }))
            .collect()
    }

    pub fn max_routers_per_as(&self) -> usize {
        self.per_as_router_counts.values().copied().max().unwrap_or(0)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} routers, {} ASes, {} cases",
            self.router_count(),
            self.as_count(),
            self.case_count()
        )
    }

    /// Human-readable tables.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.summary_line()).unwrap();
        writeln!(out).unwrap();
        writeln!(out, "links  cases  percent").unwrap();
        let pct = self.link_count_percentages();
        for (k, v) in &self.link_count_histogram {
            writeln!(out, "{:<6} {:<6} {:.1}%", k, v, pct[k]).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "rank group     ASes").unwrap();
        for g in &self.rank_groups {
            writeln!(out, "{:<14} {}", g.label, g.as_count).unwrap();
        }
        writeln!(out, "{:<14} {}", "unranked", self.unranked).unwrap();
        writeln!(out).unwrap();
        writeln!(out, "router         ASes").unwrap();
        let mut routers: Vec<_> = self.per_router_counts.iter().collect();
        routers.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        for (r, n) in routers {
            writeln!(out, "{:<14} {}", r.as_str(), n).unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "peering AS     routers").unwrap();
        let mut ases: Vec<_> = self.per_as_router_counts.iter().collect();
        ases.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        for (a, n) in ases {
            writeln!(out, "{:<14} {}", format!("AS{a}"), n).unwrap();
        }
        out
    }

    /// One CSV with columns `table,key,count,percent`.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("table,key,count,percent\n");
        writeln!(out, "summary,routers,{},", self.router_count()).unwrap();
        writeln!(out, "summary,ases,{},", self.as_count()).unwrap();
        writeln!(out, "summary,cases,{},", self.case_count()).unwrap();
        let pct = self.link_count_percentages();
        for (k, v) in &self.link_count_histogram {
            writeln!(out, "links,{},{},{:.1}", k, v, pct[k]).unwrap();
        }
        for g in &self.rank_groups {
            writeln!(out, "rank_group,{},{},", g.label, g.as_count).unwrap();
        }
        writeln!(out, "rank_group,unranked,{},", self.unranked).unwrap();
        for (r, n) in &self.per_router_counts {
            writeln!(out, "router,{},{},", r.as_str(), n).unwrap();
        }
        for (a, n) in &self.per_as_router_counts {
            writeln!(out, "peering_as,{},{},", a, n).unwrap();
        }
        out
    }
}

fn group_label(lower: u32, upper: Option<u32>) -> String {
    match upper {
        Some(u) => format!("{}-{}", lower + 1, u),
        None => format!(">{lower}"),
    }
}

/// Builds the report. `group_bounds` must be ascending; ranks `<= b[0]` form
/// the first group, `(b[0], b[1]]` the second, and so on, with a final
/// open-ended group above the last bound.
pub fn aggregate(deployments: &[MbgpEvidence], as_rank: &AsRankTable, group_bounds: &[u32]) -> CampaignReport {
    let mut report = CampaignReport::default();
    let mut dedup: BTreeSet<MbgpEvidence> = BTreeSet::new();
    for e in deployments {
        let case = report.cases.entry((e.router.clone(), e.peering_as)).or_insert(0);
        *case = (*case).max(e.link_count());
        dedup.insert(e.clone());
    }
    report.deployments = dedup.into_iter().collect();

    let mut as_by_router: BTreeMap<&RouterName, BTreeSet<Asn>> = BTreeMap::new();
    let mut router_by_as: BTreeMap<Asn, BTreeSet<&RouterName>> = BTreeMap::new();
    for ((router, asn), links) in &report.cases {
        as_by_router.entry(router).or_default().insert(*asn);
        router_by_as.entry(*asn).or_default().insert(router);
        *report.link_count_histogram.entry(*links).or_default() += 1;
    }
    report.per_router_counts = as_by_router.into_iter().map(|(r, s)| (r.clone(), s.len())).collect();
    report.per_as_router_counts = router_by_as.iter().map(|(a, s)| (*a, s.len())).collect();

    let mut lower = 0;
    for b in group_bounds {
        report.rank_groups.push(RankGroup {
            label: group_label(lower, Some(*b)),
            lower,
            upper: Some(*b),
            as_count: 0,
        });
        lower = *b;
    }
    report.rank_groups.push(RankGroup {
        label: group_label(lower, None),
        lower,
        upper: None,
        as_count: 0,
    });
    for asn in router_by_as.keys() {
        match as_rank.get(*asn) {
            Some(entry) => {
                let g = report
                    .rank_groups
                    .iter_mut()
                    .find(|g| entry.rank > g.lower && g.upper.is_none_or(|u| entry.rank <= u));
                match g {
                    Some(g) => g.as_count += 1,
                    // rank 0 falls below every group
                    None => report.rank_groups[0].as_count += 1,
                }
            }
            None => report.unranked += 1,
        }
    }
    report
}
