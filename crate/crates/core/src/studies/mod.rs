//! Monte Carlo comparisons of systems against a designated true winner.
//!
//! Each study kind says how one attempt is generated, whether it qualifies
//! and which candidate counts as the true winner. Attempt `t` draws every
//! random quantity from streams numbered `t`, so an attempt can be
//! regenerated alone with [`regenerate`]. Qualifying attempts are taken in
//! attempt order, which keeps reports identical for any thread count.

mod rates;
mod report;
mod runner;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::ballots::CandidateId;
use crate::cmo;
use crate::error::{Error, Result};
use crate::rivals::KEMENY_DEFAULT_CAP;
use crate::rng::{stream, Purpose};
use crate::systems::{Election, System};
use crate::voter_model::{Electorate, ModelConfig, RatingMode, Transform, VoterRankings};

pub use rates::{
    compare_agreement, run_cmo_study, run_tiebreak_h_study, run_tie_rate_study, AgreementReport, CmoStudyReport,
    Disagreement, TieRateReport, TiebreakHReport, TiebreakTally,
};
pub use report::{Outcome, PairStats, StudyReport, SystemTotals, TrialRecord};

use report::Header;

/// Candidates in the Kemeny comparisons of the standard plans.
pub const KEMENY_CANDIDATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    /// Error added to ballots that had a Condorcet winner.
    Error,
    /// A sample from a population that had a Condorcet winner.
    Sampling,
    /// The candidate nearest the mean voter is the true winner.
    Centrism,
    /// Exponentiated coordinates hide the symmetric model's winner.
    Asymmetry,
    /// One voter demotes the Condorcet winner from first to last.
    OpinionChange,
    /// Highest mean favorability wins, with an excellence term.
    Attractiveness,
}

impl StudyKind {
    pub const ALL: [StudyKind; 6] = [
        StudyKind::Error,
        StudyKind::Sampling,
        StudyKind::Centrism,
        StudyKind::Asymmetry,
        StudyKind::OpinionChange,
        StudyKind::Attractiveness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Error => "error",
            StudyKind::Sampling => "sampling",
            StudyKind::Centrism => "centrism",
            StudyKind::Asymmetry => "asymmetry",
            StudyKind::OpinionChange => "opinion-change",
            StudyKind::Attractiveness => "attractiveness",
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = match key.as_str() {
            "opinion" => "opinion-change",
            "excellence" => "attractiveness",
            other => other,
        };
        Self::ALL.into_iter().find(|k| k.name() == key).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
            Error::Config(format!("unknown study '{}'; known: {}", s.trim(), known.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub model: ModelConfig,
    /// Standard deviation of the error added in error studies.
    pub perturbation_sd: f64,
    /// Population drawn before sampling `model.voters` voters.
    pub population: usize,
    /// Count every attempt instead of paradox attempts only.
    pub all_trials: bool,
    /// Qualifying trials wanted.
    pub trials: u64,
    /// Attempt budget; `None` picks a generous multiple of `trials`.
    pub max_attempts: Option<u64>,
    pub reference: System,
    pub systems: Vec<System>,
}

impl StudyConfig {
    /// Defaults for `kind`: 10 candidates, 75 voters, 5,000 trials. The
    /// attractiveness study uses excellence weight 1 and counts all trials.
    pub fn new(kind: StudyKind) -> Self {
        let mut model = ModelConfig::default();
        if kind == StudyKind::Attractiveness {
            model.excellence_weight = 1.0;
        }
        let mut cfg = Self {
            kind,
            model,
            perturbation_sd: 1.0,
            population: 200,
            all_trials: kind == StudyKind::Attractiveness,
            trials: 5000,
            max_attempts: None,
            reference: System::MinimaxT2,
            systems: Vec::new(),
        };
        cfg.systems = cfg.default_systems();
        cfg
    }

    /// Systems compared in `kind` at the configured candidate count; Kemeny
    /// joins only when the count is within its cap.
    pub fn default_systems(&self) -> Vec<System> {
        let mut out = self.base_systems();
        if self.model.candidates > KEMENY_DEFAULT_CAP {
            out.retain(|&s| s != System::Kemeny);
        }
        out
    }

    fn base_systems(&self) -> Vec<System> {
        use System::*;
        match (self.kind, self.all_trials) {
            (StudyKind::Error | StudyKind::Sampling, _) => {
                vec![MinimaxT2, Schulze, Coombs, Sssmd, Ssmd, Hare, Kemeny, Plurality, Approval, Copeland]
            }
            (StudyKind::Centrism, false) => vec![MinimaxT2, Schulze, Kemeny, Copeland],
            (StudyKind::Centrism, true) => vec![MinimaxT2, Coombs, Hare, Plurality, Approval],
            (StudyKind::Asymmetry | StudyKind::OpinionChange, _) => vec![MinimaxT2, Schulze],
            (StudyKind::Attractiveness, _) => vec![MinimaxT2, Borda, Kemeny, Plurality, Approval, Hare, Coombs],
        }
    }

    pub fn trial_type(&self) -> &'static str {
        if self.all_trials {
            "All"
        } else {
            "CP"
        }
    }

    fn attempt_budget(&self) -> u64 {
        self.max_attempts.unwrap_or_else(|| self.trials.saturating_mul(10_000).max(1_000_000))
    }

    /// The reference system first, then the rest in order without repeats.
    fn system_list(&self) -> Vec<System> {
        let mut out = vec![self.reference];
        for &s in &self.systems {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        let c = self.model.candidates;
        if self.systems.contains(&System::Kemeny) && c > KEMENY_DEFAULT_CAP {
            return Err(Error::Config(format!(
                "kemeny is limited to {KEMENY_DEFAULT_CAP} candidates, study has {c}"
            )));
        }
        match self.kind {
            StudyKind::Error if !(self.perturbation_sd > 0.0 && self.perturbation_sd.is_finite()) => {
                Err(Error::Config("perturbation sd must be positive".into()))
            }
            StudyKind::Sampling if self.population < self.model.voters => Err(Error::Config(format!(
                "sample of {} exceeds population of {}",
                self.model.voters, self.population
            ))),
            StudyKind::OpinionChange if self.model.rating_mode != RatingMode::Continuous => Err(Error::Config(
                "the opinion-change study needs strict full rankings (continuous ratings)".into(),
            )),
            StudyKind::Asymmetry | StudyKind::Centrism if self.model.rating_mode.is_random() => {
                Err(Error::Config(format!("the {} study needs the spatial model", self.kind)))
            }
            _ => Ok(()),
        }
    }
}

/// The sub-studies behind one column of the comparison tables: Kemeny runs
/// separately at four candidates, and in centrism the systems that can miss
/// a Condorcet winner are compared on all trials.
pub fn standard_plan(base: &StudyConfig) -> Vec<StudyConfig> {
    let with = |candidates: usize, all_trials: bool, keep: &dyn Fn(System) -> bool| {
        let mut cfg = base.clone();
        cfg.model.candidates = candidates;
        cfg.all_trials = all_trials;
        cfg.systems = cfg.default_systems();
        cfg.systems.retain(|&s| keep(s));
        cfg
    };
    let c = base.model.candidates;
    let kemeny_only = |s: System| s == System::MinimaxT2 || s == System::Kemeny;
    let no_kemeny = |s: System| s != System::Kemeny;
    match base.kind {
        StudyKind::Error | StudyKind::Sampling => vec![
            with(c, false, &no_kemeny),
            with(KEMENY_CANDIDATES, false, &kemeny_only),
        ],
        StudyKind::Centrism => vec![
            with(c, false, &no_kemeny),
            with(c, true, &|_| true),
            with(KEMENY_CANDIDATES, false, &kemeny_only),
        ],
        _ => vec![base.clone()],
    }
}

/// One generated attempt that met the study's conditions.
#[derive(Debug, Clone)]
pub struct Trial {
    pub true_winner: CandidateId,
    pub rankings: VoterRankings,
    pub paradox: bool,
}

impl Trial {
    pub fn election(&self) -> Election {
        Election::from_rankings(self.rankings.clone())
    }
}

fn winner_of(r: &VoterRankings) -> Option<CandidateId> {
    r.tally().condorcet_winner().winner()
}

/// Regenerates attempt `t` of a study; `None` when it does not qualify.
pub fn regenerate(cfg: &StudyConfig, t: u64) -> Result<Option<Trial>> {
    let m = &cfg.model;
    let mode = m.rating_mode;
    let needs_paradox = !cfg.all_trials;
    let keep = |true_winner: CandidateId, rankings: VoterRankings| {
        let paradox = rankings.tally().is_cyclic();
        (paradox || !needs_paradox).then_some(Trial {
            true_winner,
            rankings,
            paradox,
        })
    };
    Ok(match cfg.kind {
        StudyKind::Error => {
            let base = Electorate::generate(m, t);
            let Some(w) = winner_of(&base.rankings(mode)) else {
                return Ok(None);
            };
            keep(w, base.add_error(cfg.perturbation_sd, m.seed, t).rankings(mode))
        }
        StudyKind::Sampling => {
            let mut pm = m.clone();
            pm.voters = cfg.population;
            let pop = Electorate::generate(&pm, t);
            let Some(w) = winner_of(&pop.rankings(mode)) else {
                return Ok(None);
            };
            keep(w, pop.subsample(m.voters, m.seed, t)?.rankings(mode))
        }
        StudyKind::Centrism => {
            let e = Electorate::generate(m, t);
            let r = e.rankings(mode);
            if needs_paradox && !r.tally().is_cyclic() {
                return Ok(None);
            }
            keep(e.most_centrist(), r)
        }
        StudyKind::Asymmetry => {
            let mut sm = m.clone();
            sm.transform = Transform::Identity;
            let sym = Electorate::generate(&sm, t);
            let Some(w) = winner_of(&sym.rankings(mode)) else {
                return Ok(None);
            };
            keep(w, sym.exponentiate().rankings(mode))
        }
        StudyKind::OpinionChange => {
            let e = Electorate::generate(m, t);
            let mut r = e.rankings(mode);
            let Some(w) = winner_of(&r) else {
                return Ok(None);
            };
            let firsts: Vec<usize> = (0..r.voter_count()).filter(|&i| r.ranks_first(i, w)).collect();
            if firsts.is_empty() {
                return Ok(None);
            }
            let pick = firsts[stream(m.seed, Purpose::Opinion, t).random_range(0..firsts.len())];
            r.move_to_last(pick, w);
            if !r.is_strict() {
                return Ok(None);
            }
            keep(w, r)
        }
        StudyKind::Attractiveness => {
            let e = Electorate::generate(m, t);
            let r = e.rankings(mode);
            if needs_paradox && !r.tally().is_cyclic() {
                return Ok(None);
            }
            keep(e.most_favored(), r)
        }
    })
}

/// Runs every system on one trial; the second value lists anomalies.
pub fn evaluate(trial: &Trial, systems: &[System]) -> Result<(Vec<Outcome>, Vec<String>)> {
    let election = trial.election();
    let mut outcomes = Vec::with_capacity(systems.len());
    let mut anomalies = Vec::new();
    for &s in systems {
        let r = s.run(&election)?;
        anomalies.extend(r.notes.iter().filter(|n| *n == cmo::CAP_BLOCKED).map(|n| format!("{s}: {n}")));
        outcomes.push(Outcome::of(&r, trial.true_winner));
    }
    Ok((outcomes, anomalies))
}

/// Runs one study. Fewer than `trials` qualifying trials within the attempt
/// budget is reported in the notes, not as an error.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let systems = cfg.system_list();
    let found = runner::first_qualifying(cfg.trials, cfg.attempt_budget(), |t| {
        let Some(trial) = regenerate(cfg, t)? else {
            return Ok(None);
        };
        let (outcomes, anomalies) = evaluate(&trial, &systems)?;
        let record = TrialRecord {
            trial: t,
            true_winner: trial.true_winner,
            paradox: trial.paradox,
            outcomes,
        };
        Ok(Some((record, anomalies)))
    })?;
    let mut notes = Vec::new();
    let mut records = Vec::with_capacity(found.items.len());
    for (record, anomalies) in found.items {
        notes.extend(anomalies.into_iter().map(|a| format!("trial {}: {a}", record.trial)));
        records.push(record);
    }
    if (records.len() as u64) < cfg.trials {
        notes.push(format!(
            "attempt budget exhausted: {} of {} qualifying trials after {} attempts",
            records.len(),
            cfg.trials,
            found.attempts
        ));
    }
    if cfg.model.candidates > KEMENY_DEFAULT_CAP && cfg.base_systems().contains(&System::Kemeny) && !systems.contains(&System::Kemeny) {
        notes.push(format!("kemeny not run above {KEMENY_DEFAULT_CAP} candidates"));
    }
    let header = Header {
        study: cfg.kind.name().into(),
        trial_type: cfg.trial_type().into(),
        model: cfg.model.clone(),
        perturbation_sd: (cfg.kind == StudyKind::Error).then_some(cfg.perturbation_sd),
        population: (cfg.kind == StudyKind::Sampling).then_some(cfg.population),
        requested_trials: cfg.trials,
        attempts: found.attempts,
        notes,
    };
    Ok(StudyReport::build(header, cfg.reference, &systems, records))
}

pub fn run_plan(base: &StudyConfig) -> Result<Vec<StudyReport>> {
    standard_plan(base).iter().map(run_study).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: StudyKind, trials: u64) -> StudyConfig {
        let mut cfg = StudyConfig::new(kind);
        cfg.model.candidates = 5;
        cfg.model.voters = 25;
        cfg.trials = trials;
        cfg.systems = cfg.default_systems();
        cfg
    }

    #[test]
    fn kind_names_round_trip() {
        for k in StudyKind::ALL {
            assert_eq!(k.name().parse::<StudyKind>().unwrap(), k);
        }
        assert!("nope".parse::<StudyKind>().unwrap_err().to_string().contains("opinion-change"));
    }

    #[test]
    fn default_systems_follow_the_candidate_cap() {
        let cfg = StudyConfig::new(StudyKind::Error);
        assert_eq!(cfg.systems.len(), 9);
        assert!(!cfg.systems.contains(&System::Kemeny));
        let plan = standard_plan(&cfg);
        assert_eq!(plan[1].model.candidates, 4);
        assert_eq!(plan[1].systems, vec![System::MinimaxT2, System::Kemeny]);
        let centrism = standard_plan(&StudyConfig::new(StudyKind::Centrism));
        assert_eq!(centrism.len(), 3);
        assert_eq!(centrism[0].systems, vec![System::MinimaxT2, System::Schulze, System::Copeland]);
        assert!(centrism[1].all_trials);
    }

    #[test]
    fn qualifying_trials_meet_their_conditions() {
        for kind in [StudyKind::Error, StudyKind::Sampling, StudyKind::Asymmetry, StudyKind::OpinionChange] {
            let mut cfg = small(kind, 3);
            cfg.population = 60;
            let rep = run_study(&cfg).unwrap();
            assert_eq!(rep.qualifying, 3, "{kind}");
            for rec in &rep.records {
                assert!(rec.paradox);
                let trial = regenerate(&cfg, rec.trial).unwrap().unwrap();
                assert_eq!(trial.true_winner, rec.true_winner);
                let (outcomes, _) = evaluate(&trial, &cfg.system_list()).unwrap();
                assert_eq!(outcomes, rec.outcomes);
            }
        }
    }

    #[test]
    fn all_trials_mode_counts_every_attempt() {
        let mut cfg = small(StudyKind::Centrism, 20);
        cfg.all_trials = true;
        cfg.systems = cfg.default_systems();
        let rep = run_study(&cfg).unwrap();
        assert_eq!((rep.qualifying, rep.attempts), (20, 20));
        assert_eq!(rep.trial_type, "All");
    }

    #[test]
    fn full_sample_never_qualifies() {
        let mut cfg = small(StudyKind::Sampling, 1);
        cfg.population = cfg.model.voters;
        cfg.max_attempts = Some(300);
        let rep = run_study(&cfg).unwrap();
        assert_eq!(rep.qualifying, 0);
        assert_eq!(rep.attempts, 300);
        assert!(rep.notes.iter().any(|n| n.contains("budget")));
    }

    #[test]
    fn zero_trials_give_an_empty_report() {
        let rep = run_study(&small(StudyKind::Error, 0)).unwrap();
        assert_eq!(rep.qualifying, 0);
        assert!(rep.pairs.iter().all(|p| p.total() == 0));
    }

    #[test]
    fn invalid_combinations_are_rejected() {
        let mut cfg = StudyConfig::new(StudyKind::Error);
        cfg.systems.push(System::Kemeny);
        assert!(run_study(&cfg).is_err());
        let mut cfg = StudyConfig::new(StudyKind::OpinionChange);
        cfg.model.rating_mode = RatingMode::Rounded9;
        assert!(run_study(&cfg).is_err());
        let mut cfg = StudyConfig::new(StudyKind::Sampling);
        cfg.population = 10;
        assert!(run_study(&cfg).is_err());
    }

    #[test]
    fn single_candidate_is_trivially_centrist() {
        let mut cfg = small(StudyKind::Centrism, 5);
        cfg.model.candidates = 1;
        cfg.all_trials = true;
        cfg.systems = vec![System::MinimaxT2, System::Plurality];
        let rep = run_study(&cfg).unwrap();
        assert!(rep.systems.iter().all(|t| t.hits == 5));
    }
}
