//! Methods that score ballot positions.

use crate::ballots::{condorcet_winner, CandidateId, CondorcetStatus, Profile};
use crate::error::{Error, Result};
use crate::result::{arg_max, ElectionResult, Score, TraceStep};
use crate::voter_model::VoterRankings;

/// Least common multiple of `1..=n`, used to keep fractional credit exact.
pub(crate) fn credit_unit(n: usize) -> u128 {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (1..=n.max(1) as u128).fold(1, |acc, k| acc / gcd(acc, k) * k)
}

/// First-place credit among `remaining`, in units of `1 / credit_unit(c)`
/// voters. A tied top tier shares one vote equally.
pub(crate) fn first_place_credit(profile: &Profile, remaining: &[bool], unit: u128) -> Vec<u128> {
    extreme_credit(profile, remaining, unit, true)
}

pub(crate) fn last_place_credit(profile: &Profile, remaining: &[bool], unit: u128) -> Vec<u128> {
    extreme_credit(profile, remaining, unit, false)
}

fn extreme_credit(profile: &Profile, remaining: &[bool], unit: u128, top: bool) -> Vec<u128> {
    let c = profile.candidate_count();
    let mut credit = vec![0u128; c];
    for (p, f) in profile.entries() {
        let levels = (0..c).filter(|&x| remaining[x]).map(|x| p.level(x));
        let target = if top { levels.min() } else { levels.max() };
        let Some(target) = target else { continue };
        let tier: Vec<CandidateId> = (0..c)
            .filter(|&x| remaining[x] && p.level(x) == target)
            .collect();
        let share = unit / tier.len() as u128 * *f as u128;
        for x in tier {
            credit[x] += share;
        }
    }
    credit
}

fn credit_scores(credit: &[u128], unit: u128) -> Vec<Score> {
    credit.iter().map(|&v| Score::Real(v as f64 / unit as f64)).collect()
}

/// One point for every candidate ranked strictly below, unrated candidates
/// included; an unrated candidate scores nothing on that ballot.
pub fn borda_scores(profile: &Profile) -> Vec<u64> {
    let c = profile.candidate_count();
    let mut scores = vec![0u64; c];
    for (p, f) in profile.entries() {
        for (x, score) in scores.iter_mut().enumerate() {
            let below = (0..c).filter(|&y| p.level(y) > p.level(x)).count() as u64;
            *score += below * f;
        }
    }
    scores
}

pub fn borda(profile: &Profile) -> ElectionResult {
    let scores = borda_scores(profile);
    let pool: Vec<CandidateId> = (0..scores.len()).collect();
    let winners = arg_max(&pool, |x| scores[x]);
    ElectionResult::new("Borda", winners, scores.iter().map(|&s| Score::Int(s as i64)).collect())
}

/// The Condorcet winner if any, else the Borda winner.
pub fn black(profile: &Profile) -> ElectionResult {
    let mut r = borda(profile);
    r.method = "Black".into();
    match condorcet_winner(&profile.tally()) {
        CondorcetStatus::Strong(w) | CondorcetStatus::Weak(w) => {
            r.winners = vec![w];
            r.notes.push("Condorcet winner".into());
        }
        CondorcetStatus::None => r.notes.push("no Condorcet winner; Borda decides".into()),
    }
    r
}

pub fn plurality(profile: &Profile) -> ElectionResult {
    let c = profile.candidate_count();
    let unit = credit_unit(c);
    let credit = first_place_credit(profile, &vec![true; c], unit);
    let pool: Vec<CandidateId> = (0..c).collect();
    let winners = arg_max(&pool, |x| credit[x]);
    ElectionResult::new("plurality", winners, credit_scores(&credit, unit))
}

/// A majority of first places wins outright; otherwise the top two meet
/// head to head. A tie for a runoff place goes to the earlier-declared
/// candidate and is recorded in the trace.
pub fn plurality_runoff(profile: &Profile) -> ElectionResult {
    const NAME: &str = "plurality runoff";
    let c = profile.candidate_count();
    let unit = credit_unit(c);
    let credit = first_place_credit(profile, &vec![true; c], unit);
    let scores = credit_scores(&credit, unit);
    let total = profile.voters() as u128 * unit;
    if let Some(x) = (0..c).find(|&x| credit[x] * 2 > total) {
        return ElectionResult::new(NAME, vec![x], scores).with_note("majority of first places");
    }
    if c < 2 {
        return ElectionResult::new(NAME, (0..c).collect(), scores);
    }
    let mut order: Vec<CandidateId> = (0..c).collect();
    order.sort_by(|&a, &b| credit[b].cmp(&credit[a]).then(a.cmp(&b)));
    let finalists = vec![order[0], order[1]];
    let mut r = ElectionResult::new(NAME, Vec::new(), scores);
    let cut = credit[order[1]];
    if order.get(2).is_some_and(|&x| credit[x] == cut) {
        let tied: Vec<CandidateId> = (0..c).filter(|&x| credit[x] == cut && x != order[0]).collect();
        let admitted: Vec<CandidateId> = tied.iter().copied().filter(|x| finalists.contains(x)).collect();
        r.trace.push(TraceStep {
            stage: "runoff place tie, declaration order".into(),
            contenders: tied,
            survivors: admitted,
        });
    }
    let (a, b) = (finalists[0], finalists[1]);
    let m = profile.tally().margin(a, b);
    let mut winners = match m {
        m if m > 0 => vec![a],
        m if m < 0 => vec![b],
        _ => vec![a, b],
    };
    winners.sort_unstable();
    r.trace.push(TraceStep {
        stage: "runoff".into(),
        contenders: finalists,
        survivors: winners.clone(),
    });
    r.winners = winners;
    r
}

/// How many candidates each voter approves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApprovalScheme {
    Fixed(usize),
    /// Voter number `n` (counting from 0) approves `counts[n % len]`.
    Cycle(Vec<usize>),
}

impl ApprovalScheme {
    /// Fifths of the electorate approving one through five candidates.
    pub fn study_default() -> Self {
        Self::Cycle(vec![1, 2, 3, 4, 5])
    }

    /// The study scheme with counts capped at `c − 1`, since approving
    /// every candidate carries no information (and at least one).
    pub fn study_default_for(c: usize) -> Self {
        Self::Cycle((1..=5).map(|k: usize| k.min(c.saturating_sub(1)).max(1)).collect())
    }

    pub fn count_for(&self, voter: u64) -> usize {
        match self {
            Self::Fixed(k) => *k,
            Self::Cycle(ks) => ks[(voter % ks.len() as u64) as usize],
        }
    }

    fn max_count(&self) -> usize {
        match self {
            Self::Fixed(k) => *k,
            Self::Cycle(ks) => ks.iter().copied().max().unwrap_or(0),
        }
    }

    pub(crate) fn validate(&self, candidates: usize) -> Result<()> {
        if let Self::Cycle(ks) = self {
            if ks.is_empty() {
                return Err(Error::Config("approval cycle is empty".into()));
            }
        }
        let k = self.max_count();
        if k > candidates {
            return Err(Error::ApprovalCount { k, candidates });
        }
        Ok(())
    }
}

/// Adds one voter's approvals: `x` is approved when it is rated and fewer
/// than `k` candidates sit strictly above it.
fn add_approvals(levels: &[u16], rated_below: u16, k: usize, weight: u64, out: &mut [u64]) {
    for (x, &lx) in levels.iter().enumerate() {
        if lx >= rated_below {
            continue;
        }
        let above = levels.iter().filter(|&&l| l < lx).count();
        if above < k {
            out[x] += weight;
        }
    }
}

/// Voters are numbered by expanding the profile's entries in order.
pub fn approval(profile: &Profile, scheme: &ApprovalScheme) -> Result<ElectionResult> {
    let c = profile.candidate_count();
    scheme.validate(c)?;
    let mut counts = vec![0u64; c];
    let mut voter = 0u64;
    for (p, f) in profile.entries() {
        match scheme {
            ApprovalScheme::Fixed(k) => add_approvals(p.levels(), p.tier_count() as u16, *k, *f, &mut counts),
            ApprovalScheme::Cycle(_) => {
                for n in voter..voter + f {
                    add_approvals(p.levels(), p.tier_count() as u16, scheme.count_for(n), 1, &mut counts);
                }
            }
        }
        voter += f;
    }
    Ok(approval_result(counts))
}

/// Same as [`approval`] for individually generated ballots, numbered in
/// voter order.
pub fn approval_by_voter(voters: &VoterRankings, scheme: &ApprovalScheme) -> Result<ElectionResult> {
    let c = voters.candidate_count();
    scheme.validate(c)?;
    let mut counts = vec![0u64; c];
    for (n, levels) in voters.level_rows().enumerate() {
        add_approvals(&levels, u16::MAX, scheme.count_for(n as u64), 1, &mut counts);
    }
    Ok(approval_result(counts))
}

fn approval_result(counts: Vec<u64>) -> ElectionResult {
    let pool: Vec<CandidateId> = (0..counts.len()).collect();
    let winners = arg_max(&pool, |x| counts[x]);
    ElectionResult::new("approval", winners, counts.iter().map(|&a| Score::Int(a as i64)).collect())
}
