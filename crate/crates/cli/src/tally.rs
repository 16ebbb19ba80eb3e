//! `electlab tally`: every number needed to recheck the winners by hand.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use electlab::ballots::ParseOptions;
use electlab::cmo::{self, LrOutcome};
use electlab::rivals::{coombs_with_trace, hare_with_trace, EliminationTrace, SearchCaps, KEMENY_DEFAULT_CAP};
use electlab::{CondorcetStatus, Election, ElectionResult, Error, Profile, Score, System};

use crate::args::{Format, TallyArgs};
use crate::output::{lr_text, Outcome};

#[derive(Debug, Serialize)]
pub struct TallyReport {
    pub source: String,
    pub candidates: Vec<String>,
    pub voters: u64,
    pub patterns: usize,
    pub full_ranking: bool,
    /// One row per unordered pair, first-declared candidate first.
    pub pairwise: Vec<PairRow>,
    pub condorcet: CondorcetRow,
    pub results: Vec<SystemRow>,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug, Serialize)]
pub struct PairRow {
    pub candidate: String,
    pub opponent: String,
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    pub margin: i64,
}

#[derive(Debug, Serialize)]
pub struct CondorcetRow {
    /// strong, weak or none.
    pub status: &'static str,
    pub winner: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ScoreRow {
    pub candidate: String,
    pub value: Score,
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct TraceRow {
    pub stage: String,
    pub contenders: Vec<String>,
    pub survivors: Vec<String>,
    /// Per-round vote counts of the elimination methods.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<CountRow>,
}

#[derive(Debug, Serialize)]
pub struct CountRow {
    pub candidate: String,
    pub count: f64,
}

#[derive(Debug, Serialize)]
pub struct LrRow {
    pub candidate: String,
    pub lr: f64,
    /// Five significant digits.
    pub lr_text: String,
    /// `null` when the LR is 0.
    pub log_lr: Option<f64>,
    pub validated: bool,
    pub steps: usize,
    pub cap_reached: bool,
    pub infeasible: bool,
}

#[derive(Debug, Serialize)]
pub struct SystemRow {
    pub system: String,
    pub winners: Vec<String>,
    pub tie: bool,
    pub scores: Vec<ScoreRow>,
    pub trace: Vec<TraceRow>,
    pub notes: Vec<String>,
    /// Per-candidate likelihood ratios, CMO systems only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub likelihood: Option<Vec<LrRow>>,
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub system: String,
    pub reason: String,
}

/// Systems named explicitly must run; those pulled in by `all` are dropped
/// with a notice when a size cap rules them out.
fn requested(text: &str) -> Result<Vec<(System, bool)>> {
    let mut out: Vec<(System, bool)> = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let batch: Vec<(System, bool)> = if part.eq_ignore_ascii_case("all") {
            System::ALL.iter().map(|&s| (s, false)).collect()
        } else {
            vec![(part.parse::<System>()?, true)]
        };
        for (s, explicit) in batch {
            match out.iter_mut().find(|(t, _)| *t == s) {
                Some(entry) => entry.1 |= explicit,
                None => out.push((s, explicit)),
            }
        }
    }
    if out.is_empty() {
        anyhow::bail!("no systems requested");
    }
    Ok(out)
}

/// Why `system` cannot run on `profile`, judged before running it.
fn precheck(system: System, profile: &Profile) -> Option<String> {
    let caps = SearchCaps::default();
    let c = profile.candidate_count();
    match system {
        System::Kemeny if c > KEMENY_DEFAULT_CAP => {
            Some(format!("{c} candidates exceed the cap of {KEMENY_DEFAULT_CAP}"))
        }
        System::Young | System::Dodgson if profile.voters() > caps.max_voters => {
            Some(format!("{} voters exceed the cap of {}", profile.voters(), caps.max_voters))
        }
        System::Young | System::Dodgson if profile.entries().len() > caps.max_patterns => Some(format!(
            "{} distinct rankings exceed the cap of {}",
            profile.entries().len(),
            caps.max_patterns
        )),
        System::Dodgson if !profile.is_full_ranking() => Some("needs strict full rankings".into()),
        _ => None,
    }
}

fn add_counts(profile: &Profile, row: &mut SystemRow, trace: &EliminationTrace) {
    for (t, round) in row.trace.iter_mut().zip(&trace.rounds) {
        t.counts = round
            .remaining
            .iter()
            .map(|&x| CountRow {
                candidate: profile.name(x).into(),
                count: round.counts[x],
            })
            .collect();
    }
}

fn read_source(path: &Path) -> Result<(String, String)> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
        return Ok(("<stdin>".into(), text));
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((path.display().to_string(), text))
}

fn lr_rows(profile: &Profile, outcomes: &[LrOutcome]) -> Vec<LrRow> {
    outcomes
        .iter()
        .map(|o| LrRow {
            candidate: profile.name(o.target).to_string(),
            lr: o.lr,
            lr_text: lr_text(o.lr),
            log_lr: o.log_lr.is_finite().then_some(o.log_lr),
            validated: o.validated,
            steps: o.steps.len(),
            cap_reached: o.cap_reached,
            infeasible: o.infeasible,
        })
        .collect()
}

fn system_row(profile: &Profile, r: &ElectionResult, likelihood: Option<Vec<LrRow>>) -> SystemRow {
    let names = |ids: &[usize]| ids.iter().map(|&i| profile.name(i).to_string()).collect::<Vec<_>>();
    SystemRow {
        system: r.method.clone(),
        winners: names(&r.winners),
        tie: r.is_tie(),
        scores: r
            .scores
            .iter()
            .enumerate()
            .map(|(i, s)| ScoreRow {
                candidate: profile.name(i).to_string(),
                value: s.clone(),
                text: s.to_string(),
            })
            .collect(),
        trace: r
            .trace
            .iter()
            .map(|t| TraceRow {
                stage: t.stage.clone(),
                contenders: names(&t.contenders),
                survivors: names(&t.survivors),
                counts: Vec::new(),
            })
            .collect(),
        notes: r.notes.clone(),
        likelihood,
    }
}

/// Tallies one profile. Returns the report and any anomalies.
pub fn tally_profile(source: &str, profile: Profile, systems: &[(System, bool)]) -> Result<(TallyReport, Vec<String>)> {
    let election = Election::from_profile(profile);
    let p = election.profile();
    let t = election.tally();
    let c = p.candidate_count();
    let mut pairwise = Vec::new();
    for x in 0..c {
        for y in x + 1..c {
            pairwise.push(PairRow {
                candidate: p.name(x).into(),
                opponent: p.name(y).into(),
                wins: t.wins(x, y),
                losses: t.wins(y, x),
                ties: t.ties(x, y),
                margin: t.margin(x, y),
            });
        }
    }
    let condorcet = match t.condorcet_winner() {
        CondorcetStatus::Strong(w) => CondorcetRow {
            status: "strong",
            winner: Some(p.name(w).into()),
        },
        CondorcetStatus::Weak(w) => CondorcetRow {
            status: "weak",
            winner: Some(p.name(w).into()),
        },
        CondorcetStatus::None => CondorcetRow {
            status: "none",
            winner: None,
        },
    };
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    let mut anomalies = Vec::new();
    for &(s, explicit) in systems {
        if let Some(reason) = precheck(s, p) {
            if explicit {
                anyhow::bail!("{source}: {s}: {reason}");
            }
            skipped.push(Skipped {
                system: s.name().into(),
                reason,
            });
            continue;
        }
        let row = match s {
            System::Cmo | System::CmoSingleStep => {
                let mut r = if s == System::Cmo { cmo::cmo_by_step(p) } else { cmo::cmo_single_step(p) };
                r.result.method = s.name().into();
                if s == System::Cmo && r.cap_blocked() {
                    anomalies.push(format!("{source}: {s}: {}", cmo::CAP_BLOCKED));
                }
                system_row(p, &r.result, Some(lr_rows(p, &r.outcomes)))
            }
            System::Hare | System::Coombs => {
                let (mut r, trace) = if s == System::Hare { hare_with_trace(p) } else { coombs_with_trace(p) };
                r.method = s.name().into();
                let mut row = system_row(p, &r, None);
                add_counts(p, &mut row, &trace);
                row
            }
            _ => match s.run(&election) {
                Ok(r) => system_row(p, &r, None),
                Err(e @ Error::CapExceeded { .. }) if !explicit => {
                    skipped.push(Skipped {
                        system: s.name().into(),
                        reason: e.to_string(),
                    });
                    continue;
                }
                Err(e) => return Err(anyhow::Error::new(e).context(format!("{source}: {s}"))),
            },
        };
        results.push(row);
    }
    let report = TallyReport {
        source: source.to_string(),
        candidates: p.names(),
        voters: p.voters(),
        patterns: p.entries().len(),
        full_ranking: p.is_full_ranking(),
        pairwise,
        condorcet,
        results,
        skipped,
    };
    Ok((report, anomalies))
}

pub fn run(args: &TallyArgs) -> Result<Outcome> {
    let systems = requested(&args.systems)?;
    let options = ParseOptions {
        allow_write_ins: args.write_ins,
    };
    // Parse everything first so a bad file stops the run before any output.
    let mut profiles = Vec::new();
    for path in &args.inputs {
        let (source, text) = read_source(path)?;
        let profile = Profile::parse_with(&text, options).with_context(|| format!("parsing {source}"))?;
        profiles.push((source, profile));
    }
    let mut reports = Vec::new();
    let mut anomalies = Vec::new();
    for (source, profile) in profiles {
        let (r, a) = tally_profile(&source, profile, &systems)?;
        reports.push(r);
        anomalies.extend(a);
    }
    let text = match args.format {
        Format::Json if reports.len() == 1 => serde_json::to_string_pretty(&reports[0])? + "\n",
        Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
        Format::Csv => to_csv(&reports)?,
        Format::Text => reports.iter().map(to_text).collect::<Vec<_>>().join("\n"),
    };
    print!("{text}");
    Ok(Outcome { anomalies })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    source: &'a str,
    system: &'a str,
    candidate: &'a str,
    score: &'a str,
    winner: bool,
    lr: Option<f64>,
    log_lr: Option<f64>,
}

/// One row per file, system and candidate.
pub fn to_csv(reports: &[TallyReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for rep in reports {
        for row in &rep.results {
            for (i, s) in row.scores.iter().enumerate() {
                let lr = row.likelihood.as_ref().map(|l| &l[i]);
                w.serialize(CsvRow {
                    source: &rep.source,
                    system: &row.system,
                    candidate: &s.candidate,
                    score: &s.text,
                    winner: row.winners.contains(&s.candidate),
                    lr: lr.map(|l| l.lr),
                    log_lr: lr.and_then(|l| l.log_lr),
                })?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn to_text(rep: &TallyReport) -> String {
    let mut s = String::new();
    let names = &rep.candidates;
    let width = names.iter().map(String::len).max().unwrap_or(1).max(rep.voters.to_string().len()).max(4);
    let _ = writeln!(s, "ballots: {}", rep.source);
    let _ = writeln!(
        s,
        "candidates: {}; voters: {}; distinct rankings: {}{}",
        names.join(", "),
        rep.voters,
        rep.patterns,
        if rep.full_ranking { "" } else { " (partial rankings)" }
    );
    let _ = writeln!(s, "\nvoters preferring row to column:");
    let _ = write!(s, "{:>width$}", "");
    for n in names {
        let _ = write!(s, " {n:>width$}");
    }
    s.push('\n');
    let wins = |x: &str, y: &str| -> Option<u64> {
        rep.pairwise.iter().find_map(|p| {
            if p.candidate == x && p.opponent == y {
                Some(p.wins)
            } else if p.candidate == y && p.opponent == x {
                Some(p.losses)
            } else {
                None
            }
        })
    };
    for x in names {
        let _ = write!(s, "{x:>width$}");
        for y in names {
            match wins(x, y) {
                Some(w) => {
                    let _ = write!(s, " {w:>width$}");
                }
                None => {
                    let _ = write!(s, " {:>width$}", "-");
                }
            }
        }
        s.push('\n');
    }
    let _ = writeln!(s, "\nraces:");
    for p in &rep.pairwise {
        let _ = writeln!(
            s,
            "  {} vs {}: {} to {}, {} tied, margin {:+}",
            p.candidate, p.opponent, p.wins, p.losses, p.ties, p.margin
        );
    }
    let _ = match &rep.condorcet.winner {
        Some(w) => writeln!(s, "\nCondorcet winner: {w} ({})", rep.condorcet.status),
        None => writeln!(s, "\nCondorcet winner: none"),
    };
    for r in &rep.results {
        let _ = writeln!(
            s,
            "\n{}: {}{}",
            r.system,
            r.winners.join(", "),
            if r.tie { " (tie)" } else { "" }
        );
        let scores: Vec<String> = r.scores.iter().map(|sc| format!("{}={}", sc.candidate, sc.text)).collect();
        if !scores.is_empty() {
            let _ = writeln!(s, "  scores: {}", scores.join("  "));
        }
        for t in &r.trace {
            let _ = write!(s, "  {}: {} -> {}", t.stage, t.contenders.join(","), t.survivors.join(","));
            if !t.counts.is_empty() {
                let counts: Vec<String> = t.counts.iter().map(|c| format!("{}={}", c.candidate, c.count)).collect();
                let _ = write!(s, "  [counts {}]", counts.join(" "));
            }
            s.push('\n');
        }
        if let Some(lrs) = &r.likelihood {
            for l in lrs {
                let log = l.log_lr.map_or("-inf".to_string(), |v| format!("{v:.6}"));
                let mut flags = vec![format!("{} step{}", l.steps, if l.steps == 1 { "" } else { "s" })];
                if l.validated {
                    flags.push("validated".into());
                }
                if l.cap_reached {
                    flags.push("step cap reached".into());
                }
                if l.infeasible {
                    flags.push("infeasible".into());
                }
                let _ = writeln!(s, "  {:<width$}  LR {}  log-LR {}  ({})", l.candidate, l.lr_text, log, flags.join(", "));
            }
        }
        for n in &r.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    for k in &rep.skipped {
        let _ = writeln!(s, "\nskipped {}: {}", k.system, k.reason);
    }
    s
}
