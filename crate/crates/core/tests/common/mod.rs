//! Random profiles shared by the integration tests.

#![allow(dead_code)]

use electlab::ballots::{CandidateId, Profile, RankingPattern};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn names(c: usize) -> Vec<String> {
    (0..c).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

/// A random weak order; with `partial`, each candidate is left unrated with
/// probability 1/4.
pub fn random_pattern<R: Rng>(rng: &mut R, c: usize, partial: bool) -> RankingPattern {
    let mut order: Vec<CandidateId> = (0..c).collect();
    order.shuffle(rng);
    let mut tiers: Vec<Vec<CandidateId>> = Vec::new();
    for x in order {
        if partial && rng.random_ratio(1, 4) {
            continue;
        }
        match tiers.last_mut() {
            Some(t) if rng.random_ratio(1, 4) => t.push(x),
            _ => tiers.push(vec![x]),
        }
    }
    RankingPattern::from_tiers(c, &tiers).expect("valid tiers")
}

pub fn random_profile<R: Rng>(rng: &mut R, c: usize, voters: u64, partial: bool) -> Profile {
    let ballots: Vec<(RankingPattern, u64)> = (0..voters).map(|_| (random_pattern(rng, c, partial), 1)).collect();
    Profile::new(names(c), ballots).expect("valid profile")
}

pub fn strict_profile(c: usize, ballots: &[Vec<CandidateId>]) -> Profile {
    let entries = ballots.iter().map(|b| (RankingPattern::strict(b).expect("permutation"), 1));
    Profile::new(names(c), entries).expect("valid profile")
}
