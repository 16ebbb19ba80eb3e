//! Ballots, profiles and the pairwise tally.
//!
//! A ballot is stored as a weak order: every candidate gets a *level*, the
//! index of the tier it sits in (0 = most preferred). Candidates the voter did
//! not rate share one extra level below every tier, so "unrated" behaves as a
//! virtual bottom tier in which all members are mutually tied.
//!
//! All counting is done in exact integers.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense candidate index, `0..c`, in declaration order.
pub type CandidateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub id: CandidateId,
    pub name: String,
}

/// One voter's weak order over the candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankingPattern {
    levels: Box<[u16]>,
    tier_count: u16,
}

impl RankingPattern {
    /// Builds a pattern from explicit tiers; candidates not listed are unrated.
    pub fn from_tiers(candidates: usize, tiers: &[Vec<CandidateId>]) -> Result<Self> {
        if tiers.len() >= u16::MAX as usize {
            return Err(Error::InvalidPattern("too many tiers".into()));
        }
        let unrated = tiers.len() as u16;
        let mut levels = vec![u16::MAX; candidates];
        for (t, tier) in tiers.iter().enumerate() {
            if tier.is_empty() {
                return Err(Error::InvalidPattern(format!("tier {} is empty", t + 1)));
            }
            for &c in tier {
                if c >= candidates {
                    return Err(Error::InvalidPattern(format!("candidate index {c} out of range")));
                }
                if levels[c] != u16::MAX {
                    return Err(Error::InvalidPattern(format!("candidate index {c} listed twice")));
                }
                levels[c] = t as u16;
            }
        }
        for l in levels.iter_mut() {
            if *l == u16::MAX {
                *l = unrated;
            }
        }
        Ok(Self {
            levels: levels.into_boxed_slice(),
            tier_count: unrated,
        })
    }

    /// A strict ranking of every candidate, best first.
    pub fn strict(order: &[CandidateId]) -> Result<Self> {
        let tiers: Vec<Vec<CandidateId>> = order.iter().map(|&c| vec![c]).collect();
        let p = Self::from_tiers(order.len(), &tiers)?;
        Ok(p)
    }

    /// Builds a pattern from per-candidate levels where every candidate is
    /// rated. Levels only need to be ordered; they are compacted here.
    pub fn from_levels(raw: &[u16]) -> Self {
        let mut distinct: Vec<u16> = raw.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let levels: Box<[u16]> = raw
            .iter()
            .map(|l| distinct.binary_search(l).unwrap() as u16)
            .collect();
        Self {
            levels,
            tier_count: distinct.len() as u16,
        }
    }

    pub(crate) fn from_dense_levels(levels: Box<[u16]>, tier_count: u16) -> Self {
        debug_assert!(levels.iter().all(|&l| l <= tier_count));
        Self { levels, tier_count }
    }

    pub fn candidate_count(&self) -> usize {
        self.levels.len()
    }

    pub fn tier_count(&self) -> usize {
        self.tier_count as usize
    }

    /// Tier index of `c`, or `tier_count()` when `c` is unrated.
    #[inline]
    pub fn level(&self, c: CandidateId) -> usize {
        self.levels[c] as usize
    }

    pub fn levels(&self) -> &[u16] {
        &self.levels
    }

    #[inline]
    pub fn is_rated(&self, c: CandidateId) -> bool {
        self.levels[c] < self.tier_count
    }

    /// True when the voter strictly prefers `x` to `y`.
    #[inline]
    pub fn prefers(&self, x: CandidateId, y: CandidateId) -> bool {
        self.levels[x] < self.levels[y]
    }

    pub fn tiers(&self) -> Vec<Vec<CandidateId>> {
        let mut tiers = vec![Vec::new(); self.tier_count as usize];
        for (c, &l) in self.levels.iter().enumerate() {
            if l < self.tier_count {
                tiers[l as usize].push(c);
            }
        }
        tiers
    }

    pub fn unrated(&self) -> Vec<CandidateId> {
        (0..self.levels.len()).filter(|&c| !self.is_rated(c)).collect()
    }

    /// Every tier is a singleton and at most one candidate is left unrated,
    /// so the ballot is a strict total order.
    pub fn is_strict(&self) -> bool {
        let mut counts = vec![0usize; self.tier_count as usize + 1];
        for &l in self.levels.iter() {
            counts[l as usize] += 1;
        }
        counts.iter().all(|&n| n <= 1)
    }

    /// The strict order (best first) if [`is_strict`](Self::is_strict) holds.
    pub fn strict_order(&self) -> Option<Vec<CandidateId>> {
        if !self.is_strict() {
            return None;
        }
        let mut order: Vec<CandidateId> = (0..self.levels.len()).collect();
        order.sort_by_key(|&c| self.levels[c]);
        Some(order)
    }

    /// Renders the pattern in ballot-file syntax, e.g. `A>B=C`.
    pub fn display<'a>(&'a self, names: &'a [Candidate]) -> impl fmt::Display + 'a {
        PatternDisplay {
            pattern: self,
            names,
        }
    }

    fn with_extra_unrated(&self, extra: usize) -> Self {
        let mut levels = self.levels.to_vec();
        levels.extend(std::iter::repeat_n(self.tier_count, extra));
        Self {
            levels: levels.into_boxed_slice(),
            tier_count: self.tier_count,
        }
    }
}

struct PatternDisplay<'a> {
    pattern: &'a RankingPattern,
    names: &'a [Candidate],
}

impl fmt::Display for PatternDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, tier) in self.pattern.tiers().iter().enumerate() {
            if t > 0 {
                f.write_str(">")?;
            }
            for (i, &c) in tier.iter().enumerate() {
                if i > 0 {
                    f.write_str("=")?;
                }
                f.write_str(&self.names[c].name)?;
            }
        }
        Ok(())
    }
}

/// Groups rated candidates into tiers by equal rating; smaller ratings rank
/// higher (a rating works like a position on the ballot). `None` is unrated.
pub fn normalize_ballot<T: Ord + Copy>(ratings: &[Option<T>]) -> RankingPattern {
    let mut distinct: Vec<T> = ratings.iter().flatten().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let tier_count = distinct.len() as u16;
    let levels: Box<[u16]> = ratings
        .iter()
        .map(|r| match r {
            Some(v) => distinct.binary_search(v).unwrap() as u16,
            None => tier_count,
        })
        .collect();
    RankingPattern::from_dense_levels(levels, tier_count)
}

/// Options for [`Profile::parse_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Names missing from the `candidates:` header become new candidates,
    /// unrated on every ballot that does not mention them.
    pub allow_write_ins: bool,
}

/// A multiset of ranking patterns over a fixed candidate list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: Vec<Candidate>,
    entries: Vec<(RankingPattern, u64)>,
    voters: u64,
}

impl Profile {
    /// Builds a profile, merging identical patterns in first-seen order.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        entries: impl IntoIterator<Item = (RankingPattern, u64)>,
    ) -> Result<Self> {
        let candidates = make_candidates(names)?;
        let c = candidates.len();
        let mut index: HashMap<RankingPattern, usize> = HashMap::new();
        let mut merged: Vec<(RankingPattern, u64)> = Vec::new();
        for (pattern, freq) in entries {
            if pattern.candidate_count() != c {
                return Err(Error::InvalidPattern(format!(
                    "pattern covers {} candidates, profile has {c}",
                    pattern.candidate_count()
                )));
            }
            if freq == 0 {
                return Err(Error::NonPositiveFrequency("0".into()));
            }
            match index.get(&pattern) {
                Some(&i) => merged[i].1 += freq,
                None => {
                    index.insert(pattern.clone(), merged.len());
                    merged.push((pattern, freq));
                }
            }
        }
        let voters = merged.iter().map(|e| e.1).sum();
        if voters == 0 {
            return Err(Error::EmptyProfile);
        }
        Ok(Self {
            candidates,
            entries: merged,
            voters,
        })
    }

    /// Parses the ballot-file grammar (see crate docs). Unknown names are
    /// rejected.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, ParseOptions::default())
    }

    pub fn parse_with(text: &str, options: ParseOptions) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, CandidateId> = HashMap::new();
        let mut header_seen = false;
        let mut raw: Vec<(Vec<Vec<CandidateId>>, u64)> = Vec::new();

        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            if !header_seen {
                let rest = line
                    .strip_prefix("candidates")
                    .and_then(|r| r.trim_start().strip_prefix(':'))
                    .ok_or_else(|| parse_err("expected `candidates: <name>,...`".into()))?;
                for name in rest.split(',') {
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(parse_err("empty candidate name".into()));
                    }
                    check_name(name).map_err(parse_err)?;
                    if lookup.insert(name.to_string(), names.len()).is_some() {
                        return Err(parse_err(format!("candidate `{name}` declared twice")));
                    }
                    names.push(name.to_string());
                }
                header_seen = true;
                continue;
            }
            let (freq, ranking) = line
                .split_once(':')
                .ok_or_else(|| parse_err("expected `<freq>: <ranking>`".into()))?;
            let freq_text = freq.trim();
            let freq: i64 = freq_text
                .parse()
                .map_err(|_| parse_err(format!("bad frequency `{freq_text}`")))?;
            if freq <= 0 {
                return Err(parse_err(
                    Error::NonPositiveFrequency(freq_text.to_string()).to_string(),
                ));
            }
            let ranking = ranking.trim();
            let mut tiers: Vec<Vec<CandidateId>> = Vec::new();
            let mut seen: Vec<CandidateId> = Vec::new();
            if !ranking.is_empty() {
                for tier_text in ranking.split('>') {
                    let mut tier = Vec::new();
                    for name in tier_text.split('=') {
                        let name = name.trim();
                        if name.is_empty() {
                            return Err(parse_err("empty name in ranking".into()));
                        }
                        let id = match lookup.get(name) {
                            Some(&id) => id,
                            None if options.allow_write_ins => {
                                check_name(name).map_err(parse_err)?;
                                let id = names.len();
                                lookup.insert(name.to_string(), id);
                                names.push(name.to_string());
                                id
                            }
                            None => {
                                return Err(parse_err(
                                    Error::UnknownCandidate(name.to_string()).to_string(),
                                ))
                            }
                        };
                        if seen.contains(&id) {
                            return Err(parse_err(
                                Error::DuplicateCandidate(name.to_string()).to_string(),
                            ));
                        }
                        seen.push(id);
                        tier.push(id);
                    }
                    tiers.push(tier);
                }
            }
            raw.push((tiers, freq as u64));
        }
        if !header_seen {
            return Err(Error::Parse {
                line: 0,
                message: "missing `candidates:` header".into(),
            });
        }
        if raw.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let c = names.len();
        let entries = raw
            .into_iter()
            .map(|(tiers, f)| RankingPattern::from_tiers(c, &tiers).map(|p| (p, f)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, entries)
    }

    /// Serializes in the ballot-file grammar; `parse` inverts it.
    pub fn to_text(&self) -> String {
        let mut out = String::from("candidates: ");
        let names: Vec<&str> = self.candidates.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for (p, f) in &self.entries {
            out.push_str(&format!("{f}: {}\n", p.display(&self.candidates)));
        }
        out
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.name.clone()).collect()
    }

    pub fn name(&self, id: CandidateId) -> &str {
        &self.candidates[id].name
    }

    pub fn find(&self, name: &str) -> Option<CandidateId> {
        self.candidates.iter().position(|c| c.name == name)
    }

    pub fn entries(&self) -> &[(RankingPattern, u64)] {
        &self.entries
    }

    /// Total number of voters, `v`.
    pub fn voters(&self) -> u64 {
        self.voters
    }

    /// Every ballot is a strict total order.
    pub fn is_full_ranking(&self) -> bool {
        self.entries.iter().all(|(p, _)| p.is_strict())
    }

    pub fn tally(&self) -> PairwiseTally {
        pairwise_tally(self)
    }

    /// Same ballots with `extra` more voters of `pattern`.
    pub fn with_added(&self, pattern: RankingPattern, extra: u64) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries.push((pattern, extra));
        Self::new(self.names(), entries)
    }

    /// Every frequency multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        Self::new(
            self.names(),
            self.entries.iter().map(|(p, f)| (p.clone(), f * k)),
        )
    }

    /// Union of two electorates. Candidates of `other` missing from `self`
    /// are appended and treated as unrated on `self`'s ballots.
    pub fn merged(&self, other: &Profile) -> Result<Self> {
        let mut names = self.names();
        let mut map = Vec::with_capacity(other.candidate_count());
        for cand in other.candidates() {
            match names.iter().position(|n| *n == cand.name) {
                Some(i) => map.push(i),
                None => {
                    map.push(names.len());
                    names.push(cand.name.clone());
                }
            }
        }
        let extra = names.len() - self.candidate_count();
        let mut entries: Vec<(RankingPattern, u64)> = self
            .entries
            .iter()
            .map(|(p, f)| (p.with_extra_unrated(extra), *f))
            .collect();
        for (p, f) in other.entries() {
            let tiers: Vec<Vec<CandidateId>> = p
                .tiers()
                .into_iter()
                .map(|t| t.into_iter().map(|c| map[c]).collect())
                .collect();
            entries.push((RankingPattern::from_tiers(names.len(), &tiers)?, *f));
        }
        Self::new(names, entries)
    }
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    if name.contains(['>', '=', ',', ':', '#']) {
        Err(format!("candidate name `{name}` contains a reserved character"))
    } else {
        Ok(())
    }
}

fn make_candidates<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Vec<Candidate>> {
    let mut out: Vec<Candidate> = Vec::new();
    for name in names {
        let name: String = name.into();
        if name.trim().is_empty() {
            return Err(Error::InvalidPattern("empty candidate name".into()));
        }
        if out.iter().any(|c| c.name == name) {
            return Err(Error::DuplicateCandidate(name));
        }
        out.push(Candidate {
            id: out.len(),
            name,
        });
    }
    if out.is_empty() {
        return Err(Error::InvalidPattern("no candidates".into()));
    }
    Ok(out)
}

/// Pairwise win counts: `wins(x, y)` voters strictly prefer `x` to `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairwiseTally {
    candidates: usize,
    voters: u64,
    wins: Vec<u64>,
}

impl PairwiseTally {
    /// `wins` is row-major `c × c`; the diagonal is ignored.
    pub fn from_wins(candidates: usize, voters: u64, wins: Vec<u64>) -> Result<Self> {
        if wins.len() != candidates * candidates {
            return Err(Error::InvalidPattern("win matrix has wrong size".into()));
        }
        for x in 0..candidates {
            for y in (x + 1)..candidates {
                if wins[x * candidates + y] + wins[y * candidates + x] > voters {
                    return Err(Error::InvalidPattern(format!(
                        "race {x}-{y} has more participants than voters"
                    )));
                }
            }
        }
        Ok(Self {
            candidates,
            voters,
            wins,
        })
    }

    pub(crate) fn from_wins_unchecked(candidates: usize, voters: u64, wins: Vec<u64>) -> Self {
        Self {
            candidates,
            voters,
            wins,
        }
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates
    }

    pub fn voters(&self) -> u64 {
        self.voters
    }

    /// `W_xy`: voters strictly preferring `x` to `y`.
    #[inline]
    pub fn wins(&self, x: CandidateId, y: CandidateId) -> u64 {
        self.wins[x * self.candidates + y]
    }

    #[inline]
    pub fn losses(&self, x: CandidateId, y: CandidateId) -> u64 {
        self.wins(y, x)
    }

    #[inline]
    pub fn ties(&self, x: CandidateId, y: CandidateId) -> u64 {
        self.voters - self.wins(x, y) - self.wins(y, x)
    }

    /// `W_xy − W_yx`; negative when `x` is defeated by `y`.
    #[inline]
    pub fn margin(&self, x: CandidateId, y: CandidateId) -> i64 {
        self.wins(x, y) as i64 - self.wins(y, x) as i64
    }

    #[inline]
    pub fn participants(&self, x: CandidateId, y: CandidateId) -> u64 {
        self.wins(x, y) + self.wins(y, x)
    }

    pub fn condorcet_winner(&self) -> CondorcetStatus {
        condorcet_winner(self)
    }

    /// Every candidate loses at least one race, so defeats form a cycle.
    /// Stricter than having no Condorcet winner: two undefeated candidates
    /// that tie each other leave no winner but no cycle either.
    pub fn is_cyclic(&self) -> bool {
        let c = self.candidate_count();
        (0..c).all(|x| (0..c).any(|y| self.margin(x, y) < 0))
    }
}

/// Counts every pairwise race. Unrated candidates sit below every rated one
/// and tie each other.
pub fn pairwise_tally(profile: &Profile) -> PairwiseTally {
    let c = profile.candidate_count();
    let mut wins = vec![0u64; c * c];
    for (pattern, f) in profile.entries() {
        let levels = pattern.levels();
        for x in 0..c {
            for y in 0..c {
                if levels[x] < levels[y] {
                    wins[x * c + y] += f;
                }
            }
        }
    }
    PairwiseTally::from_wins_unchecked(c, profile.voters(), wins)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CondorcetStatus {
    /// Wins every two-way race.
    Strong(CandidateId),
    /// Wins or ties every race, while every other candidate loses at least one.
    Weak(CandidateId),
    None,
}

impl CondorcetStatus {
    pub fn winner(self) -> Option<CandidateId> {
        match self {
            Self::Strong(c) | Self::Weak(c) => Some(c),
            Self::None => None,
        }
    }

    pub fn is_paradox(self) -> bool {
        matches!(self, Self::None)
    }
}

pub fn condorcet_winner(tally: &PairwiseTally) -> CondorcetStatus {
    let c = tally.candidate_count();
    let mut undefeated = Vec::new();
    for x in 0..c {
        let mut all_wins = true;
        let mut no_losses = true;
        for y in 0..c {
            if x == y {
                continue;
            }
            let m = tally.margin(x, y);
            if m <= 0 {
                all_wins = false;
            }
            if m < 0 {
                no_losses = false;
                break;
            }
        }
        if all_wins {
            return CondorcetStatus::Strong(x);
        }
        if no_losses {
            undefeated.push(x);
        }
    }
    // Two undefeated candidates would have to tie each other, so neither
    // qualifies: the other one never loses a race.
    match undefeated.as_slice() {
        [x] => CondorcetStatus::Weak(*x),
        _ => CondorcetStatus::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn table1_parses_to_605_voters() {
        let p = fixtures::table1();
        assert_eq!(p.voters(), 605);
        assert_eq!(p.entries().len(), 6);
        assert!(p.is_full_ranking());
    }

    #[test]
    fn smallest_profile() {
        let p = Profile::parse("candidates: A,B\n1: A>B\n").unwrap();
        assert_eq!(p.voters(), 1);
        let t = p.tally();
        assert_eq!((t.wins(0, 1), t.wins(1, 0), t.ties(0, 1)), (1, 0, 0));
        assert_eq!(t.condorcet_winner(), CondorcetStatus::Strong(0));
    }

    #[test]
    fn tie_and_omission_syntax() {
        let p = Profile::parse("candidates: A,B,C\n5: A=B\n").unwrap();
        let (pat, f) = &p.entries()[0];
        assert_eq!(*f, 5);
        assert_eq!(pat.tiers(), vec![vec![0, 1]]);
        assert_eq!(pat.unrated(), vec![2]);
    }

    #[test]
    fn identical_patterns_merge() {
        let p = Profile::parse("candidates: A,B,C\n2: A>B>C\n# again\n3: A > B > C\n1: B\n").unwrap();
        assert_eq!(p.entries().len(), 2);
        assert_eq!(p.entries()[0].1, 5);
        assert_eq!(p.voters(), 6);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Profile::parse("candidates: A,B\n1: A>C\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("unknown candidate `C`"));

        let err = Profile::parse("candidates: A,B\n1: A>B\n2: A>A\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(err.to_string().contains("more than once"));

        let err = Profile::parse("candidates: A,B\n0: A>B\n").unwrap_err();
        assert!(err.to_string().contains("positive"));
        let err = Profile::parse("candidates: A,B\n-3: A>B\n").unwrap_err();
        assert!(err.to_string().contains("positive"));

        assert_eq!(Profile::parse("candidates: A,B\n").unwrap_err(), Error::EmptyProfile);
        assert!(Profile::parse("1: A>B\n").is_err());
        assert!(Profile::parse("candidates: A,A\n1: A\n").is_err());
    }

    #[test]
    fn write_ins_become_candidates() {
        let text = "candidates: A,B\n3: A>B\n2: Zed>A\n";
        assert!(Profile::parse(text).is_err());
        let p = Profile::parse_with(text, ParseOptions { allow_write_ins: true }).unwrap();
        assert_eq!(p.names(), vec!["A", "B", "Zed"]);
        // Zed is unrated on the first ballot, B on the second.
        assert_eq!(p.entries()[0].0.unrated(), vec![2]);
        assert_eq!(p.entries()[1].0.unrated(), vec![1]);
        let t = p.tally();
        assert_eq!(t.wins(2, 0), 2);
        assert_eq!(t.wins(0, 2), 3);
        assert_eq!(t.ties(1, 2), 0);
    }

    #[test]
    fn normalize_examples() {
        let p = normalize_ballot(&[Some(1), Some(2), None, None]);
        assert_eq!(p.tiers(), vec![vec![0], vec![1]]);
        assert_eq!(p.unrated(), vec![2, 3]);

        let p = normalize_ballot(&[Some(3), Some(3), Some(1)]);
        assert_eq!(p.tiers(), vec![vec![2], vec![0, 1]]);
        assert!(p.unrated().is_empty());

        let p = normalize_ballot::<i32>(&[None, None, None]);
        assert!(p.tiers().is_empty());
        assert_eq!(p.unrated(), vec![0, 1, 2]);
        let prof = Profile::new(["A", "B", "C"], [(p, 4)]).unwrap();
        let t = prof.tally();
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert_eq!(t.ties(x, y), 4);
                }
            }
        }
    }

    #[test]
    fn table1_margins() {
        let t = fixtures::table1().tally();
        let (a, b, c, d) = (0, 1, 2, 3);
        assert_eq!(t.margin(c, a), 201);
        assert_eq!(t.margin(a, b), 201);
        assert_eq!(t.margin(b, c), 203);
        assert_eq!(t.margin(a, d), 1);
        assert_eq!(t.margin(b, d), 1);
        assert_eq!(t.margin(c, d), 1);
        assert_eq!(t.condorcet_winner(), CondorcetStatus::None);
    }

    #[test]
    fn three_voter_cycle() {
        let t = fixtures::cycle3().tally();
        assert_eq!((t.wins(0, 1), t.wins(1, 0)), (2, 1));
        assert_eq!((t.wins(1, 2), t.wins(2, 1)), (2, 1));
        assert_eq!((t.wins(2, 0), t.wins(0, 2)), (2, 1));
        assert_eq!(t.condorcet_winner(), CondorcetStatus::None);
    }

    #[test]
    fn weak_winner_after_one_more_dcab_voter() {
        let p = fixtures::table1();
        let dcab = RankingPattern::strict(&[3, 2, 0, 1]).unwrap();
        let p = p.with_added(dcab, 1).unwrap();
        assert_eq!(p.tally().condorcet_winner(), CondorcetStatus::Weak(3));
    }

    #[test]
    fn two_undefeated_candidates_is_not_a_winner() {
        // A and B tie each other and both beat C.
        let p = Profile::parse("candidates: A,B,C\n1: A>B>C\n1: B>A>C\n").unwrap();
        assert_eq!(p.tally().condorcet_winner(), CondorcetStatus::None);
        assert!(!p.tally().is_cyclic());
    }

    #[test]
    fn table1_is_cyclic() {
        assert!(fixtures::table1().tally().is_cyclic());
    }

    #[test]
    fn merged_profiles_add_frequencies() {
        let (first, second) = fixtures::table3_halves();
        let all = first.merged(&second).unwrap();
        assert_eq!(all.voters(), first.voters() + second.voters());
        assert_eq!(all, fixtures::table3());
    }

    #[test]
    fn round_trip_text() {
        let p = Profile::parse("candidates: A,B,C,D\n5: A=B>C\n2: D\n1:\n").unwrap();
        let again = Profile::parse(&p.to_text()).unwrap();
        assert_eq!(p, again);
    }
}
