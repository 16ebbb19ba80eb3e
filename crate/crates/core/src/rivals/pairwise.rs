//! Methods that only look at the pairwise tally.

use crate::ballots::{CandidateId, PairwiseTally};
use crate::error::{Error, Result};
use crate::result::{arg_max, arg_min, ElectionResult, Score};

/// Beatpath method with margins as link strengths.
pub fn schulze(tally: &PairwiseTally) -> ElectionResult {
    let c = tally.candidate_count();
    let mut p = vec![0i64; c * c];
    for x in 0..c {
        for y in 0..c {
            if x != y {
                p[x * c + y] = tally.margin(x, y).max(0);
            }
        }
    }
    // Widest paths, Floyd–Warshall style.
    for k in 0..c {
        for x in 0..c {
            if x == k {
                continue;
            }
            for y in 0..c {
                if y == x || y == k {
                    continue;
                }
                let via = p[x * c + k].min(p[k * c + y]);
                if via > p[x * c + y] {
                    p[x * c + y] = via;
                }
            }
        }
    }
    let winners = (0..c)
        .filter(|&x| (0..c).all(|y| y == x || p[x * c + y] >= p[y * c + x]))
        .collect();
    // Score: number of opponents the candidate beats on beatpaths.
    let scores = (0..c)
        .map(|x| Score::Int((0..c).filter(|&y| y != x && p[x * c + y] > p[y * c + x]).count() as i64))
        .collect();
    ElectionResult::new("Schulze", winners, scores)
}

/// Most races won; a drawn race is worth half.
pub fn copeland(tally: &PairwiseTally) -> ElectionResult {
    let c = tally.candidate_count();
    let halves: Vec<i64> = (0..c)
        .map(|x| {
            (0..c)
                .filter(|&y| y != x)
                .map(|y| match tally.margin(x, y) {
                    m if m > 0 => 2,
                    0 => 1,
                    _ => 0,
                })
                .sum()
        })
        .collect();
    let pool: Vec<CandidateId> = (0..c).collect();
    let winners = arg_max(&pool, |x| halves[x]);
    ElectionResult::new("Copeland", winners, halves.iter().map(|&h| Score::Halves(h)).collect())
}

/// Largest candidate count searched exhaustively by [`kemeny`] unless
/// overridden.
pub const KEMENY_DEFAULT_CAP: usize = 8;

/// Rank with the fewest pairwise disagreements; winners top some optimal
/// ranking. Scores are the best disagreement total with that candidate on
/// top.
pub fn kemeny(tally: &PairwiseTally) -> Result<ElectionResult> {
    kemeny_with_cap(tally, KEMENY_DEFAULT_CAP)
}

pub fn kemeny_with_cap(tally: &PairwiseTally, cap: usize) -> Result<ElectionResult> {
    let c = tally.candidate_count();
    if c > cap {
        return Err(Error::CapExceeded {
            method: "Kemeny",
            what: "candidates",
            actual: c as u64,
            cap: cap as u64,
        });
    }
    let mut best_per_top = vec![u64::MAX; c];
    let mut best_ranking = Vec::new();
    let mut best_total = u64::MAX;
    for top in 0..c {
        let mut order = vec![top];
        let mut used = vec![false; c];
        used[top] = true;
        let cost = placement_cost(tally, top, &used);
        let mut bound = u64::MAX;
        let mut found = Vec::new();
        search(tally, &mut order, &mut used, cost, &mut bound, &mut found);
        best_per_top[top] = bound;
        if bound < best_total {
            best_total = bound;
            best_ranking = found;
        }
    }
    let pool: Vec<CandidateId> = (0..c).collect();
    let winners = arg_min(&pool, |x| best_per_top[x]);
    let scores = best_per_top.iter().map(|&s| Score::Int(s as i64)).collect();
    let r = ElectionResult::new("Kemeny", winners, scores);
    let ranking: Vec<String> = best_ranking.iter().map(|x| x.to_string()).collect();
    Ok(r.with_note(format!("an optimal ranking: {}", ranking.join(" > "))))
}

/// Disagreements created by putting `x` above every still-unplaced
/// candidate.
fn placement_cost(tally: &PairwiseTally, x: CandidateId, used: &[bool]) -> u64 {
    (0..used.len())
        .filter(|&y| !used[y])
        .map(|y| tally.wins(y, x))
        .sum()
}

fn search(
    tally: &PairwiseTally,
    order: &mut Vec<CandidateId>,
    used: &mut [bool],
    cost: u64,
    bound: &mut u64,
    found: &mut Vec<CandidateId>,
) {
    if cost >= *bound {
        return;
    }
    if order.len() == used.len() {
        *bound = cost;
        *found = order.clone();
        return;
    }
    for x in 0..used.len() {
        if used[x] {
            continue;
        }
        used[x] = true;
        let add = placement_cost(tally, x, used);
        order.push(x);
        search(tally, order, used, cost + add, bound, found);
        order.pop();
        used[x] = false;
    }
}

/// Total disagreements of a complete ranking (best first).
pub fn kemeny_score(tally: &PairwiseTally, ranking: &[CandidateId]) -> u64 {
    let mut total = 0;
    for (i, &x) in ranking.iter().enumerate() {
        for &y in &ranking[i + 1..] {
            total += tally.wins(y, x);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballots::Profile;
    use crate::fixtures;

    #[test]
    fn schulze_examples() {
        assert_eq!(schulze(&fixtures::cycle3().tally()).winners, vec![0, 1, 2]);
        let r = schulze(&fixtures::table1().tally());
        assert!(!r.winners.contains(&3));
        assert_eq!(r.winners, vec![0, 1]);
    }

    #[test]
    fn copeland_examples() {
        let r = copeland(&fixtures::table1().tally());
        assert_eq!(r.winners, vec![0, 1, 2]);
        assert_eq!(r.scores[3], Score::Halves(0));
        assert_eq!(r.scores[0], Score::Halves(4));
        assert_eq!(copeland(&fixtures::cycle3().tally()).winners, vec![0, 1, 2]);
        let p = Profile::parse("candidates: A,B,C\n3: B>A>C\n2: C>B>A\n").unwrap();
        let r = copeland(&p.tally());
        assert_eq!((r.winners, r.scores[1].clone()), (vec![1], Score::Halves(4)));
    }

    #[test]
    fn kemeny_examples() {
        let t = fixtures::table1().tally();
        let r = kemeny(&t).unwrap();
        assert!(!r.winners.contains(&3));
        // Oracle: brute-force every ordering.
        let mut best = u64::MAX;
        let mut tops = Vec::new();
        let mut perm = vec![0, 1, 2, 3];
        permutations(&mut perm, 0, &mut |p| {
            let s = kemeny_score(&t, p);
            if s < best {
                best = s;
                tops = vec![p[0]];
            } else if s == best && !tops.contains(&p[0]) {
                tops.push(p[0]);
            }
        });
        tops.sort();
        assert_eq!(r.winners, tops);
        assert_eq!(kemeny(&fixtures::cycle3().tally()).unwrap().winners, vec![0, 1, 2]);
    }

    #[test]
    fn kemeny_cap() {
        let names: Vec<String> = (0..9).map(|i| format!("C{i}")).collect();
        let text = format!("candidates: {}\n1: C0\n", names.join(","));
        let p = Profile::parse(&text).unwrap();
        assert!(matches!(kemeny(&p.tally()), Err(Error::CapExceeded { .. })));
        assert!(kemeny_with_cap(&p.tally(), 9).is_ok());
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permutations(p, k + 1, f);
            p.swap(k, i);
        }
    }
}
