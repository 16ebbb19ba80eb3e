//! Per-trial outcomes and the tables built from them.

use std::io;

use serde::Serialize;

use crate::ballots::CandidateId;
use crate::result::ElectionResult;
use crate::systems::System;
use crate::voter_model::ModelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Hit,
    Miss,
    /// More than one winner, whether or not the true winner is among them.
    Tie,
}

impl Outcome {
    pub fn of(result: &ElectionResult, truth: CandidateId) -> Self {
        match result.winners.as_slice() {
            [w] if *w == truth => Outcome::Hit,
            [_] => Outcome::Miss,
            _ => Outcome::Tie,
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn is_hit(self) -> bool {
        self == Outcome::Hit
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Attempt index; regenerating this attempt reproduces the trial.
    pub trial: u64,
    pub true_winner: CandidateId,
    /// Paradox in the ballots the systems were run on.
    pub paradox: bool,
    /// Same order as the report's system list.
    pub outcomes: Vec<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemTotals {
    pub system: String,
    pub hits: u64,
    pub misses: u64,
    pub ties: u64,
    /// Hits as a percentage of the reference system's hits.
    pub relative_hits: Option<f64>,
}

impl SystemTotals {
    pub fn failures(&self) -> u64 {
        self.misses + self.ties
    }
}

/// Reference system against one opponent. `cross[r][o]` counts trials with
/// reference outcome `r` and opponent outcome `o`, both in hit, miss, tie
/// order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairStats {
    pub reference: String,
    pub opponent: String,
    pub cross: [[u64; 3]; 3],
    /// One system hit and the other failed.
    pub hf_trials: u64,
    pub reference_wins: u64,
    pub reference_pct_wins: Option<f64>,
    pub reference_pct_ties: f64,
    pub opponent_pct_ties: f64,
}

impl PairStats {
    fn new(reference: System, opponent: System, cross: [[u64; 3]; 3]) -> Self {
        let total: u64 = cross.iter().flatten().sum();
        let reference_wins = cross[0][1] + cross[0][2];
        let hf_trials = reference_wins + cross[1][0] + cross[2][0];
        let pct = |n: u64, d: u64| if d == 0 { None } else { Some(100.0 * n as f64 / d as f64) };
        Self {
            reference: reference.name().into(),
            opponent: opponent.name().into(),
            cross,
            hf_trials,
            reference_wins,
            reference_pct_wins: pct(reference_wins, hf_trials),
            reference_pct_ties: pct(cross[2].iter().sum(), total).unwrap_or(0.0),
            opponent_pct_ties: pct(cross.iter().map(|row| row[2]).sum(), total).unwrap_or(0.0),
        }
    }

    pub fn total(&self) -> u64 {
        self.cross.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub study: String,
    /// `CP` when only paradox trials count, `All` otherwise.
    pub trial_type: String,
    pub model: ModelConfig,
    pub perturbation_sd: Option<f64>,
    pub population: Option<usize>,
    pub reference: String,
    pub requested_trials: u64,
    pub qualifying: u64,
    pub attempts: u64,
    pub systems: Vec<SystemTotals>,
    pub pairs: Vec<PairStats>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// Report fields other than the tables.
pub(crate) struct Header {
    pub study: String,
    pub trial_type: String,
    pub model: ModelConfig,
    pub perturbation_sd: Option<f64>,
    pub population: Option<usize>,
    pub requested_trials: u64,
    pub attempts: u64,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    study: &'a str,
    trial_type: &'a str,
    candidates: usize,
    voters: usize,
    system: &'a str,
    trials: u64,
    hits: u64,
    misses: u64,
    ties: u64,
    relative_hits: Option<f64>,
    hf_trials: Option<u64>,
    reference_pct_wins: Option<f64>,
    reference_pct_ties: Option<f64>,
    opponent_pct_ties: Option<f64>,
}

#[derive(Serialize)]
struct TrialRow<'a> {
    study: &'a str,
    trial: u64,
    true_winner: CandidateId,
    paradox: bool,
    system: &'a str,
    outcome: Outcome,
}

impl StudyReport {
    pub(crate) fn build(header: Header, reference: System, systems: &[System], records: Vec<TrialRecord>) -> Self {
        let mut totals: Vec<[u64; 3]> = vec![[0; 3]; systems.len()];
        for r in &records {
            for (t, o) in totals.iter_mut().zip(&r.outcomes) {
                t[o.index()] += 1;
            }
        }
        let ref_idx = systems.iter().position(|&s| s == reference);
        let ref_hits = ref_idx.map(|i| totals[i][0]);
        let systems_out = systems
            .iter()
            .zip(&totals)
            .map(|(s, t)| SystemTotals {
                system: s.name().into(),
                hits: t[0],
                misses: t[1],
                ties: t[2],
                relative_hits: ref_hits.filter(|&h| h > 0).map(|h| 100.0 * t[0] as f64 / h as f64),
            })
            .collect();
        let pairs = match ref_idx {
            Some(ri) => systems
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != ri)
                .map(|(oi, &opp)| {
                    let mut cross = [[0u64; 3]; 3];
                    for r in &records {
                        cross[r.outcomes[ri].index()][r.outcomes[oi].index()] += 1;
                    }
                    PairStats::new(reference, opp, cross)
                })
                .collect(),
            None => Vec::new(),
        };
        Self {
            study: header.study,
            trial_type: header.trial_type,
            model: header.model,
            perturbation_sd: header.perturbation_sd,
            population: header.population,
            reference: reference.name().into(),
            requested_trials: header.requested_trials,
            qualifying: records.len() as u64,
            attempts: header.attempts,
            systems: systems_out,
            pairs,
            notes: header.notes,
            records,
        }
    }

    pub fn totals(&self, system: System) -> Option<&SystemTotals> {
        self.systems.iter().find(|t| t.system == system.name())
    }

    pub fn hits(&self, system: System) -> Option<u64> {
        self.totals(system).map(|t| t.hits)
    }

    pub fn pair(&self, opponent: System) -> Option<&PairStats> {
        self.pairs.iter().find(|p| p.opponent == opponent.name())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per system; the pairwise columns are empty on the reference
    /// row.
    pub fn write_csv<W: io::Write>(&self, out: W, with_header: bool) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(with_header).from_writer(out);
        for t in &self.systems {
            let pair = self.pairs.iter().find(|p| p.opponent == t.system);
            w.serialize(CsvRow {
                study: &self.study,
                trial_type: &self.trial_type,
                candidates: self.model.candidates,
                voters: self.model.voters,
                system: &t.system,
                trials: self.qualifying,
                hits: t.hits,
                misses: t.misses,
                ties: t.ties,
                relative_hits: t.relative_hits,
                hf_trials: pair.map(|p| p.hf_trials),
                reference_pct_wins: pair.and_then(|p| p.reference_pct_wins),
                reference_pct_ties: pair.map(|p| p.reference_pct_ties),
                opponent_pct_ties: pair.map(|p| p.opponent_pct_ties),
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// One row per trial and system.
    pub fn write_trials_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            for (t, &outcome) in self.systems.iter().zip(&r.outcomes) {
                w.serialize(TrialRow {
                    study: &self.study,
                    trial: r.trial,
                    true_winner: r.true_winner,
                    paradox: r.paradox,
                    system: &t.system,
                    outcome,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
