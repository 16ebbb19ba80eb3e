//! Minimax and its relatives.
//!
//! Every variant first returns a strong or weak Condorcet winner when one
//! exists. Otherwise each candidate is scored by its worst defeat, measured
//! in one of several ways, and the best-scoring candidates win. Ties are
//! returned as ties; the tie-breakers narrow a tied set further and report
//! whatever remains.
//!
//! | method   | defeat measure                          |
//! |----------|-----------------------------------------|
//! | classic  | raw margin `L − W`                      |
//! | P        | `(L − W) / (W + L)`                     |
//! | Z / Zs   | `z = (W − L) / √(W + L)` (Zs uses `z·|z|`) |
//! | L        | binomial likelihood ratio of a tie      |
//! | SSMD     | sum of defeat margins                   |
//! | SSSMD    | sum of squared defeat margins           |

use serde::Serialize;

use crate::ballots::{condorcet_winner, CandidateId, CondorcetStatus, PairwiseTally};
use crate::cmo::binomial_log_lr;
use crate::result::{arg_max, arg_min, ElectionResult, Proportion, Score, TraceStep};

/// Absolute tolerance on log-likelihood ratios when deciding LR ties.
pub const LOG_LR_TOLERANCE: f64 = 1e-12;

/// One race from one candidate's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RaceEntry {
    pub opponent: CandidateId,
    /// Positive for a victory, negative for a defeat.
    pub margin: i64,
    pub participants: u64,
}

impl RaceEntry {
    pub fn proportion(&self) -> Proportion {
        Proportion::new(self.margin, self.participants as i64)
    }
}

/// Each candidate's margins against every opponent, most negative first.
/// Entries with equal raw margins are ordered by proportional margin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossProfile {
    columns: Vec<Vec<RaceEntry>>,
}

impl LossProfile {
    pub fn new(tally: &PairwiseTally) -> Self {
        let c = tally.candidate_count();
        let columns = (0..c)
            .map(|x| {
                let mut col: Vec<RaceEntry> = (0..c)
                    .filter(|&y| y != x)
                    .map(|y| RaceEntry {
                        opponent: y,
                        margin: tally.margin(x, y),
                        participants: tally.participants(x, y),
                    })
                    .collect();
                col.sort_by(|a, b| {
                    a.margin
                        .cmp(&b.margin)
                        .then_with(|| a.proportion().cmp(&b.proportion()))
                        .then_with(|| a.opponent.cmp(&b.opponent))
                });
                col
            })
            .collect();
        Self { columns }
    }

    pub fn column(&self, candidate: CandidateId) -> &[RaceEntry] {
        &self.columns[candidate]
    }

    /// The raw margins only; what minimax-T2 compares.
    pub fn margins(&self, candidate: CandidateId) -> Vec<i64> {
        self.columns[candidate].iter().map(|e| e.margin).collect()
    }
}

fn all_candidates(tally: &PairwiseTally) -> Vec<CandidateId> {
    (0..tally.candidate_count()).collect()
}

/// Returns the Condorcet winner as the sole winner, if there is one.
fn condorcet_shortcut(
    tally: &PairwiseTally,
    method: &str,
    scores: &[Score],
) -> Option<ElectionResult> {
    let status = condorcet_winner(tally);
    let w = status.winner()?;
    let kind = match status {
        CondorcetStatus::Strong(_) => "strong",
        _ => "weak",
    };
    Some(
        ElectionResult::new(method, vec![w], scores.to_vec())
            .with_note(format!("{kind} Condorcet winner")),
    )
}

/// Largest defeat margin, 0 when the candidate never loses.
pub fn largest_loss(tally: &PairwiseTally, x: CandidateId) -> i64 {
    (0..tally.candidate_count())
        .filter(|&y| y != x)
        .map(|y| -tally.margin(x, y))
        .max()
        .unwrap_or(0)
        .max(0)
}

/// Largest defeat as a share of that race's participants.
pub fn largest_proportional_loss(tally: &PairwiseTally, x: CandidateId) -> Proportion {
    (0..tally.candidate_count())
        .filter(|&y| y != x)
        .map(|y| Proportion::new(-tally.margin(x, y), tally.participants(x, y) as i64))
        .max()
        .unwrap_or_else(Proportion::zero)
        .max(Proportion::zero())
}

/// Largest squared sign-test statistic `(L − W)² / (W + L)` over defeats.
fn largest_z_squared(tally: &PairwiseTally, x: CandidateId) -> Proportion {
    let mut worst = Proportion::zero();
    for y in 0..tally.candidate_count() {
        let m = tally.margin(x, y);
        if y == x || m >= 0 {
            continue;
        }
        let z2 = Proportion::new(m * m, tally.participants(x, y) as i64);
        worst = worst.max(z2);
    }
    worst
}

pub fn minimax_classic(tally: &PairwiseTally) -> ElectionResult {
    const NAME: &str = "minimax";
    let ll: Vec<i64> = (0..tally.candidate_count()).map(|x| largest_loss(tally, x)).collect();
    let scores: Vec<Score> = ll.iter().map(|&v| Score::Int(v)).collect();
    if let Some(r) = condorcet_shortcut(tally, NAME, &scores) {
        return r;
    }
    let winners = arg_min(&all_candidates(tally), |x| ll[x]);
    ElectionResult::new(NAME, winners, scores)
}

pub fn minimax_p(tally: &PairwiseTally) -> ElectionResult {
    const NAME: &str = "minimax-P";
    let pl: Vec<Proportion> = (0..tally.candidate_count())
        .map(|x| largest_proportional_loss(tally, x))
        .collect();
    let scores: Vec<Score> = pl.iter().map(|&p| Score::Ratio(p)).collect();
    if let Some(r) = condorcet_shortcut(tally, NAME, &scores) {
        return r;
    }
    let winners = arg_min(&all_candidates(tally), |x| pl[x]);
    ElectionResult::new(NAME, winners, scores)
}

/// Scores are the signed `z` of each candidate's worst defeat (0 when
/// undefeated); comparisons are done exactly on `z²`.
pub fn minimax_z(tally: &PairwiseTally) -> ElectionResult {
    const NAME: &str = "minimax-Z";
    let z2: Vec<Proportion> = (0..tally.candidate_count())
        .map(|x| largest_z_squared(tally, x))
        .collect();
    let scores: Vec<Score> = z2.iter().map(|p| Score::Real(-p.to_f64().sqrt())).collect();
    if let Some(r) = condorcet_shortcut(tally, NAME, &scores) {
        return r;
    }
    let winners = arg_min(&all_candidates(tally), |x| z2[x]);
    ElectionResult::new(NAME, winners, scores)
}

/// Like [`minimax_z`] with `z·|z|` as the score, so no square roots are
/// needed. Always selects the same winners.
pub fn minimax_zs(tally: &PairwiseTally) -> ElectionResult {
    const NAME: &str = "minimax-Zs";
    let zs: Vec<Proportion> = (0..tally.candidate_count())
        .map(|x| {
            let p = largest_z_squared(tally, x);
            Proportion::new(-p.num, p.den)
        })
        .collect();
    let scores: Vec<Score> = zs.iter().map(|&p| Score::Ratio(p)).collect();
    if let Some(r) = condorcet_shortcut(tally, NAME, &scores) {
        return r;
    }
    let winners = arg_max(&all_candidates(tally), |x| zs[x]);
    ElectionResult::new(NAME, winners, scores)
}

/// Smallest log binomial LR over the candidate's defeats (0 if undefeated).
pub fn lowest_log_lr(tally: &PairwiseTally, x: CandidateId) -> f64 {
    let mut lowest = 0.0f64;
    for y in 0..tally.candidate_count() {
        if y == x || tally.margin(x, y) >= 0 {
            continue;
        }
        let v = binomial_log_lr(tally.wins(x, y), tally.wins(y, x)).expect("a defeat has participants");
        lowest = lowest.min(v);
    }
    lowest
}

/// Maximizes each candidate's lowest binomial LR; equal to single-step CMO.
pub fn minimax_l(tally: &PairwiseTally) -> ElectionResult {
    const NAME: &str = "minimax-L";
    let logs: Vec<f64> = (0..tally.candidate_count()).map(|x| lowest_log_lr(tally, x)).collect();
    let scores: Vec<Score> = logs.iter().map(|v| Score::Real(v.exp())).collect();
    if let Some(r) = condorcet_shortcut(tally, NAME, &scores) {
        return r;
    }
    let best = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let winners = (0..logs.len())
        .filter(|&x| logs[x] >= best - LOG_LR_TOLERANCE)
        .collect();
    ElectionResult::new(NAME, winners, scores)
        .with_note(format!("LR ties use |Δ ln LR| ≤ {LOG_LR_TOLERANCE:e}"))
}

fn defeat_sum(tally: &PairwiseTally, x: CandidateId, squared: bool) -> i64 {
    (0..tally.candidate_count())
        .filter(|&y| y != x)
        .map(|y| -tally.margin(x, y))
        .filter(|&d| d > 0)
        .map(|d| if squared { d * d } else { d })
        .sum()
}

/// Smallest sum of margins of defeat.
pub fn ssmd(tally: &PairwiseTally) -> ElectionResult {
    sum_method(tally, "SSMD", false)
}

/// Smallest sum of squared margins of defeat.
pub fn sssmd(tally: &PairwiseTally) -> ElectionResult {
    sum_method(tally, "SSSMD", true)
}

fn sum_method(tally: &PairwiseTally, name: &str, squared: bool) -> ElectionResult {
    let sums: Vec<i64> = (0..tally.candidate_count())
        .map(|x| defeat_sum(tally, x, squared))
        .collect();
    let winners = arg_min(&all_candidates(tally), |x| sums[x]);
    ElectionResult::new(name, winners, sums.iter().map(|&s| Score::Int(s)).collect())
}

/// Tie-breaker applied after classic minimax produced a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    /// Smallest largest proportional loss.
    T1,
    /// Lexicographic comparison of sorted margin columns.
    T2,
    /// T1, then alternating raw and proportional column entries.
    T3,
    /// Head to head among the tied candidates.
    H,
}

impl TieBreak {
    pub fn method_name(self) -> &'static str {
        match self {
            TieBreak::T1 => "minimax-T1",
            TieBreak::T2 => "minimax-T2",
            TieBreak::T3 => "minimax-T3",
            TieBreak::H => "minimax-H",
        }
    }
}

fn narrow(trace: &mut Vec<TraceStep>, stage: String, contenders: &[CandidateId], survivors: Vec<CandidateId>) -> Vec<CandidateId> {
    trace.push(TraceStep {
        stage,
        contenders: contenders.to_vec(),
        survivors: survivors.clone(),
    });
    survivors
}

pub fn tiebreak_t1(tied: &[CandidateId], tally: &PairwiseTally) -> ElectionResult {
    let mut trace = Vec::new();
    let survivors = arg_min(tied, |x| largest_proportional_loss(tally, x));
    let survivors = narrow(&mut trace, "largest proportional loss".into(), tied, survivors);
    let scores = (0..tally.candidate_count())
        .map(|x| Score::Ratio(largest_proportional_loss(tally, x)))
        .collect();
    let mut r = ElectionResult::new("T1", survivors, scores);
    r.trace = trace;
    r
}

pub fn tiebreak_t2(tied: &[CandidateId], losses: &LossProfile) -> ElectionResult {
    let mut trace = Vec::new();
    let mut pool = tied.to_vec();
    let depth = tied.first().map_or(0, |&x| losses.column(x).len());
    for rank in 0..depth {
        if pool.len() < 2 {
            break;
        }
        let survivors = arg_max(&pool, |x| losses.column(x)[rank].margin);
        pool = narrow(&mut trace, format!("margin rank {}", rank + 1), &pool, survivors);
    }
    let scores = (0..losses.columns.len())
        .map(|x| Score::Int(losses.column(x).first().map_or(0, |e| e.margin)))
        .collect();
    let mut r = ElectionResult::new("T2", pool, scores);
    r.trace = trace;
    r
}

pub fn tiebreak_t3(tied: &[CandidateId], tally: &PairwiseTally, losses: &LossProfile) -> ElectionResult {
    let mut trace = Vec::new();
    let first = arg_min(tied, |x| largest_proportional_loss(tally, x));
    let mut pool = narrow(&mut trace, "largest proportional loss".into(), tied, first);
    let depth = tied.first().map_or(0, |&x| losses.column(x).len());
    for rank in 1..depth {
        if pool.len() < 2 {
            break;
        }
        let raw = arg_max(&pool, |x| losses.column(x)[rank].margin);
        pool = narrow(&mut trace, format!("raw margin rank {}", rank + 1), &pool, raw);
        if pool.len() < 2 {
            break;
        }
        let prop = arg_max(&pool, |x| losses.column(x)[rank].proportion());
        pool = narrow(&mut trace, format!("proportional margin rank {}", rank + 1), &pool, prop);
    }
    let scores = (0..tally.candidate_count())
        .map(|x| Score::Ratio(largest_proportional_loss(tally, x)))
        .collect();
    let mut r = ElectionResult::new("T3", pool, scores);
    r.trace = trace;
    r
}

/// Condorcet winner restricted to `pool`.
fn condorcet_among(pool: &[CandidateId], tally: &PairwiseTally) -> CondorcetStatus {
    let mut undefeated = Vec::new();
    for &x in pool {
        let others = pool.iter().filter(|&&y| y != x);
        if others.clone().all(|&y| tally.margin(x, y) > 0) {
            return CondorcetStatus::Strong(x);
        }
        if others.clone().all(|&y| tally.margin(x, y) >= 0) {
            undefeated.push(x);
        }
    }
    match undefeated.as_slice() {
        [x] => CondorcetStatus::Weak(*x),
        _ => CondorcetStatus::None,
    }
}

pub fn tiebreak_h(tied: &[CandidateId], tally: &PairwiseTally) -> ElectionResult {
    let mut notes = Vec::new();
    let survivors = match condorcet_among(tied, tally) {
        CondorcetStatus::Strong(x) => vec![x],
        CondorcetStatus::Weak(x) => {
            notes.push("decided by a weak Condorcet winner among the tied candidates".to_string());
            vec![x]
        }
        CondorcetStatus::None => tied.to_vec(),
    };
    let mut r = ElectionResult::new("H", survivors.clone(), Vec::new());
    r.trace.push(TraceStep {
        stage: "head to head".into(),
        contenders: tied.to_vec(),
        survivors,
    });
    r.notes = notes;
    r
}

/// Classic minimax followed by `variant` on any tie.
pub fn minimax_t(tally: &PairwiseTally, variant: TieBreak) -> ElectionResult {
    let classic = minimax_classic(tally);
    let mut result = classic.clone();
    result.method = variant.method_name().to_string();
    if !classic.is_tie() {
        return result;
    }
    let broken = match variant {
        TieBreak::T1 => tiebreak_t1(&classic.winners, tally),
        TieBreak::T2 => tiebreak_t2(&classic.winners, &LossProfile::new(tally)),
        TieBreak::T3 => tiebreak_t3(&classic.winners, tally, &LossProfile::new(tally)),
        TieBreak::H => tiebreak_h(&classic.winners, tally),
    };
    result.winners = broken.winners;
    result.trace = broken.trace;
    result.notes.extend(broken.notes);
    if result.is_tie() {
        result.notes.push("residual tie".into());
    }
    result
}
