//! Likelihood ratios for "X is the Condorcet winner of the population".
//!
//! A hypothesis assigns a population share to every observed ballot pattern.
//! The unconstrained maximum is `HP = f / v`. To ask whether a target could
//! be the population's Condorcet winner, the hypothesis is rebalanced race by
//! race until the target wins or ties every race, and the log-likelihood of
//! the result is compared with that of `HP`.
//!
//! Everything is computed in log space; the LR itself is only produced for
//! display.

use serde::Serialize;

use crate::ballots::{condorcet_winner, CandidateId, Profile};
use crate::error::{Error, Result};
use crate::result::{ElectionResult, Score};

/// Margins within this distance of zero count as ties under a hypothesis.
pub const MARGIN_TOLERANCE: f64 = 1e-12;
/// LRs whose logs differ by at most this much are treated as equal.
pub const LOG_LR_TOLERANCE: f64 = 1e-12;

/// Population shares, one per entry of the profile it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub shares: Vec<f64>,
}

impl Hypothesis {
    pub fn sum(&self) -> f64 {
        self.shares.iter().sum()
    }
}

/// `HP`: shares proportional to observed frequencies.
pub fn hp_of(profile: &Profile) -> Hypothesis {
    let v = profile.voters() as f64;
    Hypothesis {
        shares: profile.entries().iter().map(|(_, f)| *f as f64 / v).collect(),
    }
}

/// `Σ f·ln h − Σ f·ln(f/v)`. Returns `-∞` if `h` gives no mass to an
/// observed pattern.
pub fn log_lr(h: &Hypothesis, profile: &Profile) -> f64 {
    let v = profile.voters() as f64;
    let mut total = 0.0;
    for ((_, f), &share) in profile.entries().iter().zip(&h.shares) {
        if *f == 0 {
            continue;
        }
        if share <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let f = *f as f64;
        total += f * (share.ln() - (f / v).ln());
    }
    total.min(0.0)
}

/// `Σ f·ln h`, the unnormalized log-likelihood.
pub fn log_likelihood(h: &Hypothesis, profile: &Profile) -> f64 {
    profile
        .entries()
        .iter()
        .zip(&h.shares)
        .map(|((_, f), &share)| if *f == 0 { 0.0 } else { *f as f64 * share.ln() })
        .sum()
}

/// Which side of a race each pattern falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Win,
    Lose,
    Tie,
}

fn side(profile: &Profile, i: usize, target: CandidateId, opponent: CandidateId) -> Side {
    let p = &profile.entries()[i].0;
    if p.prefers(target, opponent) {
        Side::Win
    } else if p.prefers(opponent, target) {
        Side::Lose
    } else {
        Side::Tie
    }
}

/// Hypothesis mass of the Win, Lose and Tie groups of one race.
pub fn race_masses(h: &Hypothesis, profile: &Profile, target: CandidateId, opponent: CandidateId) -> (f64, f64, f64) {
    let (mut w, mut l, mut t) = (0.0, 0.0, 0.0);
    for (i, &share) in h.shares.iter().enumerate() {
        match side(profile, i, target, opponent) {
            Side::Win => w += share,
            Side::Lose => l += share,
            Side::Tie => t += share,
        }
    }
    (w, l, t)
}

/// Rescales the Win and Lose groups of the target–opponent race so the race
/// is tied, leaving the Tie group alone.
pub fn tie_adjust(h: &Hypothesis, profile: &Profile, target: CandidateId, opponent: CandidateId) -> Result<Hypothesis> {
    let (w, l, _) = race_masses(h, profile, target, opponent);
    if w <= 0.0 || l <= 0.0 {
        return Err(Error::DegenerateRace { wins: w, losses: l });
    }
    let up = (w + l) / (2.0 * w);
    let down = (w + l) / (2.0 * l);
    let shares = h
        .shares
        .iter()
        .enumerate()
        .map(|(i, &s)| match side(profile, i, target, opponent) {
            Side::Win => s * up,
            Side::Lose => s * down,
            Side::Tie => s,
        })
        .collect();
    Ok(Hypothesis { shares })
}

/// Target's signed margin against every candidate under `h` (0 against
/// itself).
pub fn margins_under(h: &Hypothesis, profile: &Profile, target: CandidateId) -> Vec<f64> {
    (0..profile.candidate_count())
        .map(|y| {
            if y == target {
                return 0.0;
            }
            let (w, l, _) = race_masses(h, profile, target, y);
            w - l
        })
        .collect()
}

/// `ln` of the binomial LR for a race with `W` wins and `L` losses, using
/// `0·ln 0 = 0`.
pub fn binomial_log_lr(wins: u64, losses: u64) -> Result<f64> {
    if wins + losses == 0 {
        return Err(Error::NoParticipants);
    }
    let (w, l) = (wins as f64, losses as f64);
    let n = w + l;
    let term = |k: f64| if k == 0.0 { 0.0 } else { k * (k / n).ln() };
    Ok((n * 0.5f64.ln() - term(w) - term(l)).min(0.0))
}

/// One rebalancing step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmoStep {
    pub opponent: CandidateId,
    /// Hypothesis masses of the Win, Lose and Tie groups before the step.
    pub wins: f64,
    pub losses: f64,
    pub ties: f64,
    /// Other opponents whose margin was equally large; the lowest index won.
    pub tied_with: Vec<CandidateId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrOutcome {
    pub target: CandidateId,
    pub lr: f64,
    pub log_lr: f64,
    /// The target wins or ties every race under the final hypothesis.
    pub validated: bool,
    pub steps: Vec<CmoStep>,
    /// Ran out of steps (one per original defeat) before validating.
    pub cap_reached: bool,
    /// Some race had no winning mass left, so no observed-support
    /// hypothesis can tie it; the LR is 0.
    pub infeasible: bool,
    #[serde(skip)]
    hypothesis: Hypothesis,
}

impl LrOutcome {
    pub fn hypothesis(&self) -> &Hypothesis {
        &self.hypothesis
    }

    fn finished(&self) -> bool {
        self.validated || self.cap_reached || self.infeasible
    }
}

/// Stepwise search for one target, driven one step at a time.
struct Search<'a> {
    profile: &'a Profile,
    cap: usize,
    outcome: LrOutcome,
}

impl<'a> Search<'a> {
    fn new(profile: &'a Profile, target: CandidateId) -> Self {
        let tally = profile.tally();
        let cap = (0..profile.candidate_count())
            .filter(|&y| y != target && tally.margin(target, y) < 0)
            .count();
        let hypothesis = hp_of(profile);
        let mut s = Self {
            profile,
            cap,
            outcome: LrOutcome {
                target,
                lr: 1.0,
                log_lr: 0.0,
                validated: false,
                steps: Vec::new(),
                cap_reached: false,
                infeasible: false,
                hypothesis,
            },
        };
        s.check();
        s
    }

    fn check(&mut self) {
        let m = margins_under(&self.outcome.hypothesis, self.profile, self.outcome.target);
        self.outcome.validated = m.iter().all(|&x| x >= -MARGIN_TOLERANCE);
        if !self.outcome.validated && self.outcome.steps.len() >= self.cap {
            self.outcome.cap_reached = true;
        }
    }

    /// Applies one step. Returns false when nothing is left to do.
    fn step(&mut self) -> bool {
        if self.outcome.finished() {
            return false;
        }
        let target = self.outcome.target;
        let m = margins_under(&self.outcome.hypothesis, self.profile, target);
        let worst = m.iter().copied().fold(f64::INFINITY, f64::min);
        let opponent = (0..m.len()).find(|&y| m[y] == worst).expect("non-empty");
        let tied_with = (opponent + 1..m.len()).filter(|&y| m[y] == worst).collect();
        let (w, l, t) = race_masses(&self.outcome.hypothesis, self.profile, target, opponent);
        self.outcome.steps.push(CmoStep {
            opponent,
            wins: w,
            losses: l,
            ties: t,
            tied_with,
        });
        match tie_adjust(&self.outcome.hypothesis, self.profile, target, opponent) {
            Ok(h) => {
                self.outcome.log_lr = log_lr(&h, self.profile);
                self.outcome.lr = self.outcome.log_lr.exp();
                self.outcome.hypothesis = h;
                self.check();
            }
            Err(_) => {
                self.outcome.infeasible = true;
                self.outcome.log_lr = f64::NEG_INFINITY;
                self.outcome.lr = 0.0;
            }
        }
        true
    }
}

/// Rebalances against the target's current largest defeat until it wins or
/// ties every race.
pub fn cmo_by_candidate(profile: &Profile, target: CandidateId) -> LrOutcome {
    let mut search = Search::new(profile, target);
    while search.step() {}
    search.outcome
}

/// Per-candidate outcomes plus the winner set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmoResult {
    pub result: ElectionResult,
    pub outcomes: Vec<LrOutcome>,
    /// Largest number of steps any candidate needed before the winner was
    /// confirmed.
    pub rounds: usize,
    /// Winner is the best validated LR and every other bound lies below it.
    pub confirmed: bool,
}

/// Note on a stepwise result whose winner the step cap left unconfirmed.
pub const CAP_BLOCKED: &str = "step cap reached before the winner was confirmed";

impl CmoResult {
    /// Some candidate ran out of steps and no winner was confirmed. Only
    /// meaningful for the stepwise search.
    pub fn cap_blocked(&self) -> bool {
        !self.confirmed && self.outcomes.iter().any(|o| o.cap_reached)
    }
}

/// Stepwise results record cap hits in the notes.
fn flag_cap(mut r: CmoResult) -> CmoResult {
    if r.cap_blocked() {
        r.result.notes.push(CAP_BLOCKED.into());
    } else if r.outcomes.iter().any(|o| o.cap_reached) {
        r.result.notes.push("step cap reached by a candidate that cannot win".into());
    }
    r
}

fn best_log(outcomes: &[LrOutcome], validated_only: bool) -> f64 {
    outcomes
        .iter()
        .filter(|o| !validated_only || o.validated)
        .map(|o| o.log_lr)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn finish(method: &str, outcomes: Vec<LrOutcome>, rounds: usize, confirmed: bool, pool_validated: bool) -> CmoResult {
    let best = best_log(&outcomes, pool_validated);
    let winners: Vec<CandidateId> = outcomes
        .iter()
        .filter(|o| (!pool_validated || o.validated) && o.log_lr >= best - LOG_LR_TOLERANCE)
        .map(|o| o.target)
        .collect();
    let scores = outcomes.iter().map(|o| Score::Real(o.lr)).collect();
    let mut result = ElectionResult::new(method, winners, scores);
    if !confirmed {
        result.notes.push("winner not confirmed by a validated LR".into());
    }
    CmoResult {
        result,
        outcomes,
        rounds,
        confirmed,
    }
}

/// Advances all candidates in lock step, stopping once the best validated
/// LR beats every unvalidated upper bound.
pub fn cmo_by_step(profile: &Profile) -> CmoResult {
    const NAME: &str = "CMO";
    let c = profile.candidate_count();
    if let Some(w) = condorcet_winner(&profile.tally()).winner() {
        let outcomes: Vec<LrOutcome> = (0..c).map(|x| Search::new(profile, x).outcome).collect();
        let mut r = finish(NAME, outcomes, 0, true, true);
        r.result.winners = vec![w];
        return r;
    }
    let mut searches: Vec<Search> = (0..c).map(|x| Search::new(profile, x)).collect();
    let mut rounds = 0;
    loop {
        let mut advanced = false;
        let outcomes: Vec<LrOutcome> = searches.iter().map(|s| s.outcome.clone()).collect();
        let best_validated = best_log(&outcomes, true);
        let any_validated = outcomes.iter().any(|o| o.validated);
        // A bound can still matter if it is not already below the best
        // validated LR.
        let pending: Vec<usize> = (0..c)
            .filter(|&x| {
                let o = &searches[x].outcome;
                !o.finished() && (!any_validated || o.log_lr >= best_validated - LOG_LR_TOLERANCE)
            })
            .collect();
        if any_validated && pending.is_empty() {
            let confirmed = outcomes
                .iter()
                .filter(|o| !o.validated)
                .all(|o| o.log_lr < best_validated - LOG_LR_TOLERANCE);
            return flag_cap(finish(NAME, outcomes, rounds, confirmed, true));
        }
        for x in pending {
            advanced |= searches[x].step();
        }
        if advanced {
            rounds += 1;
        } else {
            // Nobody validated and nothing left to try.
            let outcomes = searches.into_iter().map(|s| s.outcome).collect();
            return flag_cap(finish(NAME, outcomes, rounds, false, false));
        }
    }
}

/// One step per candidate; the highest resulting LR wins whether or not it
/// was validated.
pub fn cmo_single_step(profile: &Profile) -> CmoResult {
    let outcomes: Vec<LrOutcome> = (0..profile.candidate_count())
        .map(|x| {
            let mut s = Search::new(profile, x);
            s.step();
            s.outcome
        })
        .collect();
    let best = best_log(&outcomes, false);
    let confirmed = outcomes
        .iter()
        .any(|o| o.validated && o.log_lr >= best - LOG_LR_TOLERANCE);
    finish("CMO-1", outcomes, 1, confirmed, false)
}
