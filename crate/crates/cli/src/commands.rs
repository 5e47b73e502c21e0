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

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use mbgp_core::campaign::{
    aggregate, clock_registry, collect_summaries, find_multipath_candidates, read_evidence, run_campaign,
    run_campaign_parallel, transport_registry, write_evidence, AsRankTable, Clock, IxpDataset, PrefixTable,
    QueryLogEntry, RateLimiter, RetryPolicy, DEFAULT_GROUP_BOUNDS, DEFAULT_RATE_LIMIT,
};
use mbgp_core::registry::Params;
use mbgp_core::sim::{
    generate_scenario, write_artifacts, SimConfig, SimError, IXP_FILE, PREFIXES_FILE, PRIMARY_ORACLE_FILE,
    SECONDARY_ORACLE_FILE,
};
use mbgp_core::trace::{analyze as analyze_paths, read_traceroutes, OracleTable};
use mbgp_core::Asn;

use crate::config::ConfigFile;
use crate::error::{input, CliError};
use crate::{AnalyzeArgs, DetectArgs, Format, ReportArgs, SimulateArgs};

fn required(v: Option<PathBuf>, flag: &str) -> Result<PathBuf, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn sibling(of: &Path, name: &str) -> PathBuf {
    of.parent().unwrap_or(Path::new(".")).join(name)
}

fn write_file(path: &Path, body: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(input(format!("cannot create {}", dir.display())))?;
    }
    std::fs::write(path, body).map_err(input(format!("cannot write {}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn parse_link_mix(s: &str) -> Result<[f64; 3], CliError> {
    let bad = || CliError::Usage(format!("link mix {s:?}: expected three numbers like 82.8/8.7/8.4"));
    let parts: Vec<f64> = s
        .split(['/', ','])
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    parts.try_into().map_err(|_| bad())
}

pub fn parse_group_bounds(s: &str) -> Result<Vec<u32>, CliError> {
    let bounds: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("group bounds {s:?}: {e}")))?;
    if bounds.is_empty() || bounds.windows(2).any(|w| w[0] >= w[1]) || bounds[0] == 0 {
        return Err(CliError::Usage(format!(
            "group bounds {s:?} must be positive and increasing"
        )));
    }
    Ok(bounds)
}

pub fn simulate(a: &SimulateArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let out = required(cfg.pick(a.out.clone(), "out")?, "out")?;
    let seed = cfg.pick_or(a.seed, "seed", 0u64)?;
    let defaults = SimConfig::default();
    let mut config = SimConfig {
        routers: cfg.pick_or(a.routers, "routers", defaults.routers)?,
        peers: cfg.pick_or(a.peers, "peers", defaults.peers)?,
        max_paths: cfg.pick_or(a.max_paths, "max-paths", defaults.max_paths)?,
        hasher: cfg.pick_or(a.hash.clone(), "hash", defaults.hasher.clone())?,
        source_as: Asn(cfg.pick_or(a.source_as, "source-as", defaults.source_as.0)?),
        ..defaults
    };
    if let Some(mix) = cfg.pick(a.link_mix.clone(), "link-mix")? {
        config.link_mix = parse_link_mix(&mix)?;
    }
    let probes = cfg.pick_or(a.probes, "probes", 1u32)?;
    let interval = cfg.pick_or(a.interval, "interval", 420u64)?;
    if probes == 0 {
        return Err(CliError::Usage("--probes must be at least 1".into()));
    }

    let (scenario, truth) = generate_scenario(&config, seed).map_err(|e| match e {
        SimError::InvalidConfig(m) => CliError::Usage(m),
        other => CliError::Input(other.to_string()),
    })?;
    write_artifacts(&scenario, &truth, &out, probes, interval)
        .map_err(input(format!("cannot write artifacts to {}", out.display())))?;
    println!(
        "{} routers, {} peers, {} M-BGP pairs written to {}",
        scenario.routers.len(),
        scenario.peers.len(),
        truth.pairs.len(),
        out.display()
    );
    Ok(())
}

fn render_log(entries: &[QueryLogEntry], started: u64) -> String {
    let mut out = format!("# started_unix={started}\nseq,at_ms,router,command,attempt,outcome\n");
    for e in entries {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.seq,
            e.at.as_millis(),
            e.router,
            e.command,
            e.attempt,
            e.outcome.replace(',', ";")
        )
        .unwrap();
    }
    out
}

pub fn detect(a: &DetectArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let fixtures = cfg.pick(a.fixtures.clone(), "fixtures")?;
    let scenario = cfg.pick(a.input.clone(), "in")?;
    let transport_name = match cfg.pick(a.transport.clone(), "transport")? {
        Some(t) => t,
        None if fixtures.is_some() => "fixture".into(),
        None if scenario.is_some() => "sim".into(),
        None => return Err(CliError::Usage("give --fixtures DIR or --in SCENARIO".into())),
    };
    let (params, data_dir): (Params, PathBuf) = match transport_name.as_str() {
        "fixture" => {
            let dir = required(fixtures, "fixtures")?;
            let data = sibling(&dir, "");
            (Params::from([("dir".into(), dir.display().to_string())]), data)
        }
        "sim" => {
            let file = required(scenario, "in")?;
            let data = sibling(&file, "");
            (Params::from([("scenario".into(), file.display().to_string())]), data)
        }
        other => {
            let names = transport_registry().names().join(", ");
            return Err(CliError::Usage(format!(
                "unknown transport {other:?}; available: {names}"
            )));
        }
    };
    let transport = transport_registry()
        .build(&transport_name, &params)
        .map_err(|e| CliError::Input(e.to_string()))?;

    let out = required(cfg.pick(a.out.clone(), "out")?, "out")?;
    let log_path = cfg.pick(a.log.clone(), "log")?.unwrap_or_else(|| {
        let mut p = out.clone().into_os_string();
        p.push(".log");
        PathBuf::from(p)
    });
    let prefixes_path = cfg
        .pick(a.prefixes.clone(), "prefixes")?
        .unwrap_or_else(|| data_dir.join(PREFIXES_FILE));
    let ixp_path = cfg
        .pick(a.ixp.clone(), "ixp")?
        .unwrap_or_else(|| data_dir.join(IXP_FILE));
    let prefixes = PrefixTable::load(&prefixes_path).map_err(input(prefixes_path.display()))?;
    let ixp = IxpDataset::load(&ixp_path).map_err(input(ixp_path.display()))?;

    let rate = cfg.pick_or(a.rate_limit, "rate-limit", DEFAULT_RATE_LIMIT)?;
    if rate == 0 {
        return Err(CliError::Usage("--rate-limit must be at least 1".into()));
    }
    let workers = cfg.pick_or(a.workers, "workers", 1usize)?.max(1);
    let clock_name = cfg.pick_or(a.clock.clone(), "clock", "simulated".to_string())?;
    let clock: Arc<dyn Clock> = Arc::from(
        clock_registry()
            .build(&clock_name, &Params::new())
            .map_err(|e| CliError::Usage(e.to_string()))?,
    );
    let limiter = RateLimiter::new(rate, clock);
    let retry = RetryPolicy::live();
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());

    let routers = transport.routers();
    let summaries = collect_summaries(transport.as_ref(), &routers, &limiter, &retry);
    let mut log = summaries.log.clone();
    if summaries.summaries.is_empty() {
        write_file(&log_path, render_log(&log, started).as_bytes())?;
        return Err(CliError::Input(format!(
            "no parseable BGP summary from {} router(s)",
            routers.len()
        )));
    }
    let candidates = find_multipath_candidates(&summaries.summaries, &ixp);
    let outcome = if workers > 1 {
        run_campaign_parallel(transport.as_ref(), &candidates, &prefixes, &limiter, &retry, workers)
    } else {
        run_campaign(transport.as_ref(), &candidates, &prefixes, &limiter, &retry)
    };
    log.extend(outcome.log.iter().cloned());
    log.sort_by_key(|e| e.at);
    for (i, e) in log.iter_mut().enumerate() {
        e.seq = i as u64;
    }

    let mut buf = Vec::new();
    write_evidence(&mut buf, &outcome.evidences).map_err(input(out.display()))?;
    write_file(&out, &buf)?;
    write_file(&log_path, render_log(&log, started).as_bytes())?;
    println!(
        "{} evidence record(s) from {} candidate(s) on {} router(s), {} queries",
        outcome.evidences.len(),
        candidates.len(),
        summaries.summaries.len(),
        log.len()
    );

    let mut problems: Vec<String> = summaries
        .failures
        .iter()
        .map(|(r, e)| format!("summary from {r}: {e}"))
        .collect();
    problems.extend(outcome.failures.iter().map(|f| {
        format!(
            "{} AS{}: {} target(s) skipped: {}",
            f.router,
            f.peering_as,
            f.skipped_targets.len(),
            f.reason
        )
    }));
    if problems.is_empty() {
        Ok(())
    } else {
        for p in &problems {
            eprintln!("mbgp: {p}");
        }
        Err(CliError::Partial(format!("{} partial failure(s)", problems.len())))
    }
}

pub fn analyze(a: &AnalyzeArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let path = required(cfg.pick(a.input.clone(), "in")?, "in")?;
    let primary_path = cfg
        .pick(a.primary.clone(), "primary")?
        .unwrap_or_else(|| sibling(&path, PRIMARY_ORACLE_FILE));
    let secondary_path = cfg
        .pick(a.secondary.clone(), "secondary")?
        .unwrap_or_else(|| sibling(&path, SECONDARY_ORACLE_FILE));
    let ixp_path = cfg
        .pick(a.ixp.clone(), "ixp")?
        .unwrap_or_else(|| sibling(&path, IXP_FILE));
    let source_as = cfg.pick(a.source_as, "source-as")?.map(Asn);
    let format = cfg.pick_or(a.format, "format", Format::Text)?;
    let out = cfg.pick(a.out.clone(), "out")?;

    let file = std::fs::File::open(&path).map_err(input(path.display()))?;
    let parsed = read_traceroutes(std::io::BufReader::new(file)).map_err(input(path.display()))?;
    if parsed.paths.is_empty() {
        return Err(CliError::Input(if parsed.malformed.is_empty() {
            "no paths".to_string()
        } else {
            format!("no paths: all {} traceroute line(s) malformed", parsed.malformed.len())
        }));
    }
    let primary = OracleTable::load(&primary_path).map_err(input(primary_path.display()))?;
    let secondary = OracleTable::load(&secondary_path).map_err(input(secondary_path.display()))?;
    let ixp = IxpDataset::load(&ixp_path).map_err(input(ixp_path.display()))?;

    if !parsed.malformed.is_empty() {
        eprintln!("mbgp: skipped {} malformed traceroute line(s)", parsed.malformed.len());
    }
    let analysis = analyze_paths(&parsed.paths, &primary, &secondary, &ixp, source_as);
    let text = match format {
        Format::Text => analysis.render_text(),
        Format::Csv => analysis.render_csv(),
    };
    emit(out.as_deref(), &text)
}

pub fn report(a: &ReportArgs, cfg: &ConfigFile) -> Result<(), CliError> {
    let path = required(cfg.pick(a.input.clone(), "in")?, "in")?;
    let bounds = match cfg.pick(a.group_bounds.clone(), "group-bounds")? {
        Some(s) => parse_group_bounds(&s)?,
        None => DEFAULT_GROUP_BOUNDS.to_vec(),
    };
    let format = cfg.pick_or(a.format, "format", Format::Text)?;
    let out = cfg.pick(a.out.clone(), "out")?;

    let file = std::fs::File::open(&path).map_err(input(path.display()))?;
    let evidence = read_evidence(file).map_err(input(path.display()))?;
    let as_rank = match cfg.pick(a.as_rank.clone(), "as-rank")? {
        Some(p) => AsRankTable::load(&p).map_err(input(p.display()))?,
        None => AsRankTable::default(),
    };
    let rep = aggregate(&evidence, &as_rank, &bounds);
    let text = match format {
        Format::Text => rep.render_text(),
        Format::Csv => rep.render_csv(),
    };
    emit(out.as_deref(), &text)
}
