//! Paradox-trial counts: residual ties, method agreement, CMO shortcuts
//! and the head-to-head tie-breaker.

use serde::Serialize;

use super::runner::{first_counted, first_qualifying};
use crate::ballots::{CandidateId, PairwiseTally};
use crate::cmo;
use crate::error::{Error, Result};
use crate::minimax::{minimax_classic, tiebreak_h, tiebreak_t1};
use crate::result::ElectionResult;
use crate::systems::{Election, System};
use crate::voter_model::{Electorate, ModelConfig, VoterRankings};

fn budget(target: u64) -> u64 {
    target.saturating_mul(20_000).max(1_000_000)
}

/// Generated ballots for attempt `t` when they have no Condorcet winner.
fn paradox_attempt(model: &ModelConfig, t: u64) -> Option<(VoterRankings, PairwiseTally)> {
    let r = Electorate::generate(model, t).rankings(model.rating_mode);
    let tally = r.tally();
    tally.is_cyclic().then_some((r, tally))
}

fn rate(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TieRateReport {
    pub method: String,
    pub model: ModelConfig,
    pub paradox_trials: u64,
    pub ties: u64,
    pub attempts: u64,
    pub tie_rate: f64,
}

/// Share of paradox trials on which `method` returns more than one winner.
pub fn run_tie_rate_study(model: &ModelConfig, method: System, trials: u64) -> Result<TieRateReport> {
    model.validate()?;
    let found = first_qualifying(trials, budget(trials), |t| {
        let Some((r, _)) = paradox_attempt(model, t) else {
            return Ok(None);
        };
        Ok(Some(method.run(&Election::from_rankings(r))?.is_tie()))
    })?;
    let paradox_trials = found.items.len() as u64;
    let ties = found.items.iter().filter(|&&tie| tie).count() as u64;
    Ok(TieRateReport {
        method: method.name().into(),
        model: model.clone(),
        paradox_trials,
        ties,
        attempts: found.attempts,
        tie_rate: rate(ties, paradox_trials),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub trial: u64,
    /// Winner per method.
    pub winners: Vec<CandidateId>,
    /// Ballots in the text grammar, for re-tallying.
    pub profile: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub methods: Vec<String>,
    pub model: ModelConfig,
    /// Paradox trials on which every method had a unique winner.
    pub trials: u64,
    pub attempts: u64,
    /// Paradox trials skipped because some method tied.
    pub tied_trials: u64,
    /// `agree[i][j]`: trials where methods `i` and `j` picked the same winner.
    pub agree: Vec<Vec<u64>>,
    /// Per method, disagreeing trials where it alone differed from all the
    /// others, which all agreed. Needs at least three methods.
    pub odd_one_out: Vec<u64>,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn agreement_rate(&self, i: usize, j: usize) -> f64 {
        rate(self.agree[i][j], self.trials)
    }
}

/// Pairwise winner agreement on tie-free paradox trials. Every disagreeing
/// trial is kept with its ballots.
pub fn compare_agreement(model: &ModelConfig, methods: &[System], trials: u64) -> Result<AgreementReport> {
    model.validate()?;
    if methods.is_empty() {
        return Err(Error::Config("no methods to compare".into()));
    }
    // `None` marks a paradox trial with a tie somewhere.
    let found = first_counted(
        trials,
        budget(trials),
        |t| {
            let Some((r, _)) = paradox_attempt(model, t) else {
                return Ok(None);
            };
            let election = Election::from_rankings(r);
            let mut winners = Vec::with_capacity(methods.len());
            for m in methods {
                match m.run(&election)?.unique_winner() {
                    Some(w) => winners.push(w),
                    None => return Ok(Some(None)),
                }
            }
            let disagree = winners.iter().any(|&w| w != winners[0]);
            let profile = disagree.then(|| election.profile().to_text());
            Ok(Some(Some((t, winners, profile))))
        },
        Option::is_some,
    )?;
    let attempts = found.attempts;
    let tied_trials = found.items.iter().filter(|i| i.is_none()).count() as u64;
    let rows: Vec<_> = found.items.into_iter().flatten().collect();
    let n = methods.len();
    let mut agree = vec![vec![0u64; n]; n];
    let mut odd_one_out = vec![0u64; n];
    let mut disagreements = Vec::new();
    for (t, winners, profile) in rows.iter() {
        for i in 0..n {
            for j in 0..n {
                agree[i][j] += u64::from(winners[i] == winners[j]);
            }
        }
        if let Some(profile) = profile {
            for i in (0..n).filter(|_| n >= 3) {
                let others: Vec<CandidateId> = (0..n).filter(|&j| j != i).map(|j| winners[j]).collect();
                if others.iter().all(|&w| w == others[0] && w != winners[i]) {
                    odd_one_out[i] += 1;
                }
            }
            disagreements.push(Disagreement {
                trial: *t,
                winners: winners.clone(),
                profile: profile.clone(),
            });
        }
    }
    Ok(AgreementReport {
        methods: methods.iter().map(|m| m.name().to_string()).collect(),
        model: model.clone(),
        trials: rows.len() as u64,
        attempts,
        tied_trials,
        agree,
        odd_one_out,
        disagreements,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmoStudyReport {
    pub model: ModelConfig,
    pub attempts: u64,
    pub paradox_trials: u64,
    /// Paradox trials where one step per candidate already confirmed the
    /// winner.
    pub step1_confirmed: u64,
    /// Paradox trials where full CMO and single-step CMO each confirmed a
    /// single winner, and how many of those agreed.
    pub both_defined: u64,
    pub single_step_agrees: u64,
    /// Paradox trials on which full CMO could not confirm a winner.
    pub unconfirmed: u64,
    /// Paradox trials where some candidate hit the step cap.
    pub cap_reached: u64,
    /// Paradox trials where the cap left full CMO without a confirmed
    /// winner.
    pub cap_blocked: u64,
    /// Share of all generated trials confirmed in one step; trials with a
    /// Condorcet winner need no steps.
    pub step1_rate_all: f64,
    pub step1_rate_paradox: f64,
}

/// Single-step confirmation and agreement with full stepwise CMO.
pub fn run_cmo_study(model: &ModelConfig, trials: u64) -> Result<CmoStudyReport> {
    model.validate()?;
    let found = first_qualifying(trials, budget(trials), |t| {
        let Some((r, _)) = paradox_attempt(model, t) else {
            return Ok(None);
        };
        let profile = r.to_profile();
        let full = cmo::cmo_by_step(&profile);
        let single = cmo::cmo_single_step(&profile);
        Ok(Some((full, single)))
    })?;
    let paradox_trials = found.items.len() as u64;
    let mut rep = CmoStudyReport {
        model: model.clone(),
        attempts: found.attempts,
        paradox_trials,
        step1_confirmed: 0,
        both_defined: 0,
        single_step_agrees: 0,
        unconfirmed: 0,
        cap_reached: 0,
        cap_blocked: 0,
        step1_rate_all: 0.0,
        step1_rate_paradox: 0.0,
    };
    for (full, single) in &found.items {
        rep.step1_confirmed += u64::from(single.confirmed);
        rep.unconfirmed += u64::from(!full.confirmed);
        rep.cap_reached += u64::from(full.outcomes.iter().any(|o| o.cap_reached));
        rep.cap_blocked += u64::from(full.cap_blocked());
        let confirmed = |r: &cmo::CmoResult| r.confirmed.then(|| r.result.unique_winner()).flatten();
        if let (Some(a), Some(b)) = (confirmed(full), confirmed(single)) {
            rep.both_defined += 1;
            rep.single_step_agrees += u64::from(a == b);
        }
    }
    let failed = paradox_trials - rep.step1_confirmed;
    rep.step1_rate_all = rate(found.attempts - failed, found.attempts);
    rep.step1_rate_paradox = rate(rep.step1_confirmed, paradox_trials);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TiebreakTally {
    pub hits: u64,
    pub misses: u64,
    pub ties: u64,
}

impl TiebreakTally {
    fn add(&mut self, r: &ElectionResult, better: CandidateId) {
        match r.unique_winner() {
            Some(w) if w == better => self.hits += 1,
            Some(_) => self.misses += 1,
            None => self.ties += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TiebreakHReport {
    pub model: ModelConfig,
    pub attempts: u64,
    pub trials: u64,
    pub t1: TiebreakTally,
    pub h: TiebreakTally,
}

/// Paradox trials where classic minimax ties: the first two tied
/// candidates go to T1 and to head-to-head, and a hit is picking the one
/// nearer the mean voter.
pub fn run_tiebreak_h_study(model: &ModelConfig, trials: u64) -> Result<TiebreakHReport> {
    model.validate()?;
    if model.rating_mode.is_random() {
        return Err(Error::Config("centrism needs the spatial model".into()));
    }
    let found = first_qualifying(trials, budget(trials), |t| {
        let e = Electorate::generate(model, t);
        let tally = e.rankings(model.rating_mode).tally();
        if !tally.is_cyclic() {
            return Ok(None);
        }
        let classic = minimax_classic(&tally);
        let pair = match classic.winners.as_slice() {
            [a, b, ..] => [*a, *b],
            _ => return Ok(None),
        };
        let mean = e.voter_mean();
        let dist = |j: CandidateId| -> f64 { e.candidate_point(j).iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum() };
        let better = if dist(pair[0]) <= dist(pair[1]) { pair[0] } else { pair[1] };
        Ok(Some((tiebreak_t1(&pair, &tally), tiebreak_h(&pair, &tally), better)))
    })?;
    let mut rep = TiebreakHReport {
        model: model.clone(),
        attempts: found.attempts,
        trials: found.items.len() as u64,
        t1: TiebreakTally::default(),
        h: TiebreakTally::default(),
    };
    for (t1, h, better) in &found.items {
        rep.t1.add(t1, *better);
        rep.h.add(h, *better);
    }
    Ok(rep)
}
