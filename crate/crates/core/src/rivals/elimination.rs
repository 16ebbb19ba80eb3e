//! Hare (instant runoff) and Coombs.
//!
//! Each round recounts the ballots over the surviving candidates. A majority
//! of first places ends the count. Otherwise every candidate tied at the
//! extreme count is removed together, unless that would remove everyone, in
//! which case the survivors tie.

use serde::Serialize;

use super::positional::{credit_unit, first_place_credit, last_place_credit};
use crate::ballots::{CandidateId, Profile};
use crate::result::{ElectionResult, Score, TraceStep};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationRound {
    pub remaining: Vec<CandidateId>,
    /// First-place (Hare) or last-place (Coombs) votes, fractional for tied
    /// tiers; 0 for candidates already out.
    pub counts: Vec<f64>,
    pub eliminated: Vec<CandidateId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationTrace {
    pub rounds: Vec<EliminationRound>,
}

#[derive(Clone, Copy, PartialEq)]
enum Rule {
    Hare,
    Coombs,
}

fn run(profile: &Profile, rule: Rule) -> (ElectionResult, EliminationTrace) {
    let name = match rule {
        Rule::Hare => "Hare",
        Rule::Coombs => "Coombs",
    };
    let c = profile.candidate_count();
    let unit = credit_unit(c);
    let total = profile.voters() as u128 * unit;
    let mut remaining = vec![true; c];
    let mut rounds = Vec::new();
    let mut first_scores = None;
    let mut note = None;

    let winners = loop {
        let alive: Vec<CandidateId> = (0..c).filter(|&x| remaining[x]).collect();
        let firsts = first_place_credit(profile, &remaining, unit);
        if first_scores.is_none() {
            first_scores = Some(firsts.clone());
        }
        if alive.len() == 1 {
            break alive;
        }
        if let Some(&x) = alive.iter().find(|&&x| firsts[x] * 2 > total) {
            note = Some(format!("majority of first places in round {}", rounds.len() + 1));
            rounds.push(EliminationRound {
                remaining: alive.clone(),
                counts: (0..c).map(|y| firsts[y] as f64 / unit as f64).collect(),
                eliminated: alive.iter().copied().filter(|&y| y != x).collect(),
            });
            break vec![x];
        }
        let counts = match rule {
            Rule::Hare => firsts,
            Rule::Coombs => last_place_credit(profile, &remaining, unit),
        };
        let extreme = match rule {
            Rule::Hare => alive.iter().map(|&x| counts[x]).min(),
            Rule::Coombs => alive.iter().map(|&x| counts[x]).max(),
        }
        .expect("someone is left");
        let out: Vec<CandidateId> = alive.iter().copied().filter(|&x| counts[x] == extreme).collect();
        let shown = (0..c)
            .map(|x| if remaining[x] { counts[x] as f64 / unit as f64 } else { 0.0 })
            .collect();
        if out.len() == alive.len() {
            rounds.push(EliminationRound {
                remaining: alive.clone(),
                counts: shown,
                eliminated: Vec::new(),
            });
            break alive;
        }
        for &x in &out {
            remaining[x] = false;
        }
        rounds.push(EliminationRound {
            remaining: alive,
            counts: shown,
            eliminated: out,
        });
    };

    let scores = first_scores
        .unwrap_or_default()
        .iter()
        .map(|&v| Score::Real(v as f64 / unit as f64))
        .collect();
    let mut r = ElectionResult::new(name, winners, scores);
    r.trace = rounds
        .iter()
        .enumerate()
        .map(|(i, round)| TraceStep {
            stage: format!("round {}", i + 1),
            contenders: round.remaining.clone(),
            survivors: round
                .remaining
                .iter()
                .copied()
                .filter(|x| !round.eliminated.contains(x))
                .collect(),
        })
        .collect();
    r.notes.extend(note);
    (r, EliminationTrace { rounds })
}

/// Removes the candidates with the fewest first places each round.
pub fn hare(profile: &Profile) -> ElectionResult {
    run(profile, Rule::Hare).0
}

pub fn hare_with_trace(profile: &Profile) -> (ElectionResult, EliminationTrace) {
    run(profile, Rule::Hare)
}

/// Removes the candidates with the most last places each round.
pub fn coombs(profile: &Profile) -> ElectionResult {
    run(profile, Rule::Coombs).0
}

pub fn coombs_with_trace(profile: &Profile) -> (ElectionResult, EliminationTrace) {
    run(profile, Rule::Coombs)
}
