//! Young and Dodgson scores: how far a candidate is from being the
//! Condorcet winner.
//!
//! Both are exact branch-and-bound searches meant for small electorates.
//! Searches stop with [`Error::CapExceeded`] once they visit more nodes than
//! allowed.

use serde::Serialize;

use crate::ballots::{CandidateId, Profile};
use crate::error::{Error, Result};
use crate::result::{arg_min, ElectionResult, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub max_voters: u64,
    pub max_patterns: usize,
    pub max_nodes: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            max_voters: 1000,
            max_patterns: 12,
            max_nodes: 20_000_000,
        }
    }
}

/// What the target has to become.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Goal {
    /// Win every race.
    #[default]
    Strong,
    /// Win or tie every race.
    Weak,
}

impl Goal {
    fn needed(self, margin: i64) -> i64 {
        let floor = match self {
            Goal::Strong => 1,
            Goal::Weak => 0,
        };
        (floor - margin).max(0)
    }
}

fn check_caps(profile: &Profile, caps: &SearchCaps, method: &'static str) -> Result<()> {
    if profile.voters() > caps.max_voters {
        return Err(Error::CapExceeded {
            method,
            what: "voters",
            actual: profile.voters(),
            cap: caps.max_voters,
        });
    }
    if profile.entries().len() > caps.max_patterns {
        return Err(Error::CapExceeded {
            method,
            what: "distinct patterns",
            actual: profile.entries().len() as u64,
            cap: caps.max_patterns as u64,
        });
    }
    Ok(())
}

fn node_limit(method: &'static str, caps: &SearchCaps) -> Error {
    Error::CapExceeded {
        method,
        what: "search nodes",
        actual: caps.max_nodes + 1,
        cap: caps.max_nodes,
    }
}

/// Fewest voters whose removal makes `target` a Condorcet winner.
pub fn young(profile: &Profile, target: CandidateId) -> Result<u64> {
    young_with(profile, target, Goal::Strong, &SearchCaps::default())
}

pub fn young_with(profile: &Profile, target: CandidateId, goal: Goal, caps: &SearchCaps) -> Result<u64> {
    check_caps(profile, caps, "Young")?;
    let c = profile.candidate_count();
    let tally = profile.tally();
    let opponents: Vec<CandidateId> = (0..c).filter(|&y| y != target).collect();
    let need: Vec<i64> = opponents.iter().map(|&y| goal.needed(tally.margin(target, y))).collect();

    // Removing a voter moves each margin by +1 (voter preferred the opponent),
    // -1 (voter preferred the target) or 0.
    let mut groups: Vec<(Vec<i64>, u64)> = profile
        .entries()
        .iter()
        .map(|(p, f)| {
            let effect = opponents
                .iter()
                .map(|&y| {
                    if p.prefers(y, target) {
                        1
                    } else if p.prefers(target, y) {
                        -1
                    } else {
                        0
                    }
                })
                .collect();
            (effect, *f)
        })
        .filter(|(e, _): &(Vec<i64>, u64)| e.iter().any(|&s| s > 0))
        .collect();
    groups.sort_by_key(|(e, _)| std::cmp::Reverse(e.iter().sum::<i64>()));

    // Capacity still available after group i, per opponent.
    let k = opponents.len();
    let mut suffix = vec![vec![0i64; k]; groups.len() + 1];
    for (i, (excess, n)) in groups.iter().enumerate().rev() {
        let (head, tail) = suffix.split_at_mut(i + 1);
        for (j, cap) in head[i].iter_mut().enumerate() {
            *cap = tail[0][j] + if excess[j] > 0 { *n as i64 } else { 0 };
        }
    }
    if (0..k).any(|j| suffix[0][j] < need[j]) {
        // Only reachable under the strong goal when removal cannot help;
        // deleting everyone leaves all races drawn.
        return Err(Error::Unreachable(target));
    }

    struct State<'a> {
        groups: &'a [(Vec<i64>, u64)],
        suffix: &'a [Vec<i64>],
        best: u64,
        nodes: u64,
        max_nodes: u64,
    }

    fn dfs(s: &mut State, i: usize, cost: u64, need: &mut [i64]) -> bool {
        s.nodes += 1;
        if s.nodes > s.max_nodes {
            return false;
        }
        let lb = need.iter().copied().max().unwrap_or(0).max(0) as u64;
        if cost + lb >= s.best {
            return true;
        }
        if lb == 0 {
            s.best = cost;
            return true;
        }
        if i == s.groups.len() || need.iter().zip(&s.suffix[i]).any(|(n, cap)| n > cap) {
            return true;
        }
        let (effect, f) = &s.groups[i];
        let most = (*f).min(s.best.saturating_sub(cost + 1));
        for d in (0..=most).rev() {
            for (n, e) in need.iter_mut().zip(effect) {
                *n -= e * d as i64;
            }
            let ok = dfs(s, i + 1, cost + d, need);
            for (n, e) in need.iter_mut().zip(effect) {
                *n += e * d as i64;
            }
            if !ok {
                return false;
            }
        }
        true
    }

    let mut state = State {
        groups: &groups,
        suffix: &suffix,
        best: profile.voters() + 1,
        nodes: 0,
        max_nodes: caps.max_nodes,
    };
    let mut need = need;
    if !dfs(&mut state, 0, 0, &mut need) {
        return Err(node_limit("Young", caps));
    }
    Ok(state.best)
}

/// Fewest adjacent swaps, summed over voters, that make `target` a strong
/// Condorcet winner. Every ballot must be a strict full ranking.
pub fn dodgson(profile: &Profile, target: CandidateId) -> Result<u64> {
    dodgson_with(profile, target, &SearchCaps::default())
}

pub fn dodgson_with(profile: &Profile, target: CandidateId, caps: &SearchCaps) -> Result<u64> {
    if !profile.is_full_ranking() {
        return Err(Error::NotFullRanking("Dodgson"));
    }
    check_caps(profile, caps, "Dodgson")?;
    let c = profile.candidate_count();
    let tally = profile.tally();
    // Flips needed over each candidate: each one moves the margin by 2.
    let need: Vec<i64> = (0..c)
        .map(|y| {
            if y == target {
                0
            } else {
                let m = tally.margin(target, y);
                if m > 0 {
                    0
                } else {
                    -m / 2 + 1
                }
            }
        })
        .collect();

    // For each pattern: the candidates above the target, nearest first.
    let mut rows: Vec<(Vec<CandidateId>, u64)> = profile
        .entries()
        .iter()
        .map(|(p, f)| {
            let order = p.strict_order().expect("checked strict");
            let pos = order.iter().position(|&x| x == target).expect("target ranked");
            let above: Vec<CandidateId> = order[..pos].iter().rev().copied().collect();
            (above, *f)
        })
        .filter(|(above, _)| !above.is_empty())
        .collect();
    rows.sort_by_key(|(above, f)| (above.len(), std::cmp::Reverse(*f)));

    // Upper bound: lift the target in voters one at a time, always choosing
    // the cheapest lift that still covers some need.
    let greedy = {
        let mut left = need.clone();
        let mut stock: Vec<u64> = rows.iter().map(|r| r.1).collect();
        let mut cost = 0u64;
        while left.iter().any(|&n| n > 0) {
            let mut pick = None;
            for (i, (above, _)) in rows.iter().enumerate() {
                if stock[i] == 0 {
                    continue;
                }
                if let Some(d) = above.iter().rposition(|&y| left[y] > 0) {
                    let gain = above[..=d].iter().filter(|&&y| left[y] > 0).count();
                    let better = match pick {
                        None => true,
                        Some((_, pd, pg)) => (gain as f64 / (d + 1) as f64) > (pg as f64 / (pd + 1) as f64),
                    };
                    if better {
                        pick = Some((i, d, gain));
                    }
                }
            }
            let Some((i, d, _)) = pick else {
                return Err(Error::Config(format!("candidate {target} cannot be lifted to a Condorcet win")));
            };
            stock[i] -= 1;
            cost += d as u64 + 1;
            for &y in &rows[i].0[..=d] {
                left[y] -= 1;
            }
        }
        cost
    };

    struct State<'a> {
        rows: &'a [(Vec<CandidateId>, u64)],
        best: u64,
        nodes: u64,
        max_nodes: u64,
    }

    fn remaining(need: &[i64]) -> u64 {
        need.iter().filter(|&&n| n > 0).map(|&n| n as u64).sum()
    }

    // y[i][j] voters of pattern i lifted at least j+1 places, non-increasing
    // in j. Chosen row by row, depth by depth.
    fn dfs(s: &mut State, i: usize, depth: usize, prev: u64, cost: u64, need: &mut [i64]) -> bool {
        s.nodes += 1;
        if s.nodes > s.max_nodes {
            return false;
        }
        let rem = remaining(need);
        if cost + rem >= s.best {
            return true;
        }
        if rem == 0 {
            s.best = cost;
            return true;
        }
        if i == s.rows.len() {
            return true;
        }
        let (above, f) = &s.rows[i];
        if depth == above.len() || prev == 0 {
            return dfs(s, i + 1, 0, u64::MAX, cost, need);
        }
        // Lifting past `depth` only pays if someone at or beyond it still
        // needs flips.
        let useful = above[depth..].iter().map(|&y| need[y].max(0) as u64).max().unwrap_or(0);
        let top = prev.min(*f).min(useful).min(s.best - cost - 1);
        let y = above[depth];
        for val in (0..=top).rev() {
            need[y] -= val as i64;
            let ok = dfs(s, i, depth + 1, val, cost + val, need);
            need[y] += val as i64;
            if !ok {
                return false;
            }
        }
        true
    }

    let mut state = State {
        rows: &rows,
        best: greedy + 1,
        nodes: 0,
        max_nodes: caps.max_nodes,
    };
    let mut need = need;
    if !dfs(&mut state, 0, 0, u64::MAX, 0, &mut need) {
        return Err(node_limit("Dodgson", caps));
    }
    Ok(state.best.min(greedy))
}

/// Scores every candidate; the smallest score wins.
pub fn young_election(profile: &Profile) -> Result<ElectionResult> {
    score_election(profile, "Young", |t| young(profile, t))
}

pub fn dodgson_election(profile: &Profile) -> Result<ElectionResult> {
    score_election(profile, "Dodgson", |t| dodgson(profile, t))
}

/// Candidates no deletion can make a winner are left out; if that is
/// everyone, all of them tie.
fn score_election(profile: &Profile, name: &str, f: impl Fn(CandidateId) -> Result<u64>) -> Result<ElectionResult> {
    let c = profile.candidate_count();
    let mut scores = Vec::with_capacity(c);
    for t in 0..c {
        match f(t) {
            Ok(s) => scores.push(Some(s)),
            Err(Error::Unreachable(_)) => scores.push(None),
            Err(e) => return Err(e),
        }
    }
    let pool: Vec<CandidateId> = (0..c).filter(|&x| scores[x].is_some()).collect();
    let winners = if pool.is_empty() {
        (0..c).collect()
    } else {
        arg_min(&pool, |x| scores[x])
    };
    let shown = scores.iter().map(|s| s.map_or(Score::None, |v| Score::Int(v as i64))).collect();
    let mut r = ElectionResult::new(name, winners, shown);
    if pool.len() < c {
        r.notes.push("some candidates cannot become a Condorcet winner by removing voters".into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn young_table1() {
        let p = fixtures::table1();
        assert_eq!(young(&p, 3).unwrap(), 2);
        for t in 0..3 {
            assert!(young(&p, t).unwrap() > 200);
        }
        assert_eq!(young(&p, 0).unwrap(), 202);
        assert_eq!(young_election(&p).unwrap().winners, vec![3]);
    }

    #[test]
    fn dodgson_table1() {
        let p = fixtures::table1();
        assert_eq!(dodgson(&p, 3).unwrap(), 3);
        for t in 0..3 {
            assert!(dodgson(&p, t).unwrap() >= 101);
        }
        assert_eq!(dodgson(&p, 0).unwrap(), 101);
    }

    #[test]
    fn zero_for_a_strong_winner() {
        let p = Profile::parse("candidates: A,B,C\n3: B>A>C\n2: C>B>A\n").unwrap();
        assert_eq!(young(&p, 1).unwrap(), 0);
        assert_eq!(dodgson(&p, 1).unwrap(), 0);
        assert_eq!(young(&p, 2).unwrap(), 2);
        assert_eq!(young(&p, 0), Err(Error::Unreachable(0)));
        let r = young_election(&p).unwrap();
        assert_eq!(r.winners, vec![1]);
        assert_eq!(r.scores[0], Score::None);
    }

    #[test]
    fn weak_goal_is_cheaper() {
        let p = fixtures::table1();
        assert_eq!(young_with(&p, 3, Goal::Weak, &SearchCaps::default()).unwrap(), 1);
    }

    #[test]
    fn dodgson_rejects_ties() {
        let p = Profile::parse("candidates: A,B,C\n1: A=B>C\n").unwrap();
        assert!(matches!(dodgson(&p, 0), Err(Error::NotFullRanking(_))));
    }

    #[test]
    fn caps_are_enforced() {
        let p = fixtures::table1();
        let tight = SearchCaps {
            max_voters: 100,
            ..SearchCaps::default()
        };
        assert!(matches!(young_with(&p, 3, Goal::Strong, &tight), Err(Error::CapExceeded { .. })));
    }
}
