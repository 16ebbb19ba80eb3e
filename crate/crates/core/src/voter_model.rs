//! Synthetic electorates from a spatial model.
//!
//! Voters and candidates are points drawn independently from a standard
//! normal distribution in each dimension. A voter's favorability toward a
//! candidate is
//!
//! ```text
//! −distance(voter, candidate) + w · excellence(candidate) + ε
//! ```
//!
//! with `ε ~ N(0, σ²)` drawn independently for every voter–candidate pair.
//! Ballots rank candidates by favorability, best first.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rayon::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::ballots::{CandidateId, PairwiseTally, Profile, RankingPattern};
use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatingMode {
    /// Rank by raw favorability; full rankings.
    Continuous,
    /// Favorability mapped onto 1..=9 using the trial's minimum and maximum,
    /// then rounded; equal ratings share a tier.
    Rounded9,
    /// Favorability replaced by independent uniform integers 1..=10.
    UniformRandom,
    /// Favorability replaced by independent uniform reals in `[0, 1)`, so
    /// every ballot is a strict ranking drawn uniformly at random.
    RandomContinuous,
}

impl RatingMode {
    /// Ratings are drawn directly, with no spatial model behind them.
    pub fn is_random(self) -> bool {
        matches!(self, RatingMode::UniformRandom | RatingMode::RandomContinuous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Identity,
    /// Every coordinate `x` becomes `exp(x)` before distances are taken.
    Exponentiate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Distance,
    SquaredDistance,
}

macro_rules! keyword_enum {
    ($ty:ty, $what:literal, { $($name:literal $(| $alias:literal)* => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name $(| $alias)* => Ok($variant),)+
                    other => Err(Error::Config(format!(
                        concat!("unknown ", $what, " `{}`; expected one of: {}"),
                        other,
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = match self {
                    $(v if *v == $variant => $name,)+
                    _ => unreachable!(),
                };
                f.write_str(name)
            }
        }
    };
}

keyword_enum!(RatingMode, "rating mode", {
    "continuous" => RatingMode::Continuous,
    "rounded-9" | "rounded9" => RatingMode::Rounded9,
    "uniform-random" | "uniform" => RatingMode::UniformRandom,
    "random-continuous" | "random" => RatingMode::RandomContinuous,
});

keyword_enum!(Transform, "transform", {
    "identity" => Transform::Identity,
    "exponentiate" | "exp" => Transform::Exponentiate,
});

keyword_enum!(Metric, "metric", {
    "distance" => Metric::Distance,
    "squared-distance" | "squared" => Metric::SquaredDistance,
});

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelConfig {
    pub candidates: usize,
    pub voters: usize,
    pub dims: usize,
    pub error_sd: f64,
    pub excellence_weight: f64,
    pub rating_mode: RatingMode,
    pub transform: Transform,
    pub metric: Metric,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            candidates: 10,
            voters: 75,
            dims: 2,
            error_sd: 0.0,
            excellence_weight: 0.0,
            rating_mode: RatingMode::Continuous,
            transform: Transform::Identity,
            metric: Metric::Distance,
            seed: 1,
        }
    }
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: "expected `key = value`".into(),
        })?;
        out.push((k.trim().to_ascii_lowercase().replace('-', "_"), v.trim().to_string()));
    }
    Ok(out)
}

pub(crate) fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl ModelConfig {
    pub fn with_size(candidates: usize, voters: usize) -> Self {
        Self {
            candidates,
            voters,
            ..Self::default()
        }
    }

    /// Applies one setting. Returns `Ok(false)` for keys this type does not
    /// own.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<bool> {
        match key {
            "candidates" => self.candidates = parse_value(key, value)?,
            "voters" => self.voters = parse_value(key, value)?,
            "dims" => self.dims = parse_value(key, value)?,
            "error_sd" => self.error_sd = parse_value(key, value)?,
            "excellence_weight" => self.excellence_weight = parse_value(key, value)?,
            "rating_mode" => self.rating_mode = value.parse()?,
            "transform" => self.transform = value.parse()?,
            "metric" => self.metric = value.parse()?,
            "seed" => self.seed = parse_value(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in parse_kv(text)? {
            if !cfg.apply(&k, &v)? {
                return Err(Error::Config(format!("unknown key `{k}`")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.candidates == 0 || self.voters == 0 {
            return Err(Error::Config("need at least one candidate and one voter".into()));
        }
        if self.candidates > u16::MAX as usize {
            return Err(Error::Config("too many candidates".into()));
        }
        if self.dims == 0 && !self.rating_mode.is_random() {
            return Err(Error::Config("dims must be at least 1".into()));
        }
        for (name, v) in [("error_sd", self.error_sd), ("excellence_weight", self.excellence_weight)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("{name} must be finite and non-negative")));
            }
        }
        Ok(())
    }
}

/// One generated trial: geometry plus the favorability matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Electorate {
    candidates: usize,
    voters: usize,
    dims: usize,
    /// `voters × dims`, row-major.
    voter_points: Vec<f64>,
    /// `candidates × dims`.
    candidate_points: Vec<f64>,
    excellence: Vec<f64>,
    excellence_weight: f64,
    metric: Metric,
    /// Accumulated error terms, `voters × candidates`.
    noise: Vec<f64>,
    /// `voters × candidates`.
    favorability: Vec<f64>,
    spatial: bool,
}

fn normals(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

impl Electorate {
    /// Draws trial number `trial` of `config`. Random rating modes draw no
    /// geometry at all.
    pub fn generate(config: &ModelConfig, trial: u64) -> Self {
        let (c, v, d) = (config.candidates, config.voters, config.dims);
        if config.rating_mode.is_random() {
            let mut rng = stream(config.seed, Purpose::Ratings, trial);
            let favorability = if config.rating_mode == RatingMode::UniformRandom {
                (0..v * c).map(|_| rng.random_range(1..=10u32) as f64).collect()
            } else {
                (0..v * c).map(|_| rng.random::<f64>()).collect()
            };
            return Self {
                candidates: c,
                voters: v,
                dims: 0,
                voter_points: Vec::new(),
                candidate_points: Vec::new(),
                excellence: vec![0.0; c],
                excellence_weight: 0.0,
                metric: config.metric,
                noise: vec![0.0; v * c],
                favorability,
                spatial: false,
            };
        }
        let mut rng = stream(config.seed, Purpose::Geometry, trial);
        let voter_points = normals(&mut rng, v * d);
        let candidate_points = normals(&mut rng, c * d);
        let excellence = normals(&mut rng, c);
        let noise = if config.error_sd > 0.0 {
            let mut rng = stream(config.seed, Purpose::Noise, trial);
            normals(&mut rng, v * c).into_iter().map(|e| e * config.error_sd).collect()
        } else {
            vec![0.0; v * c]
        };
        let mut e = Self {
            candidates: c,
            voters: v,
            dims: d,
            voter_points,
            candidate_points,
            excellence,
            excellence_weight: config.excellence_weight,
            metric: config.metric,
            noise,
            favorability: Vec::new(),
            spatial: true,
        };
        if config.transform == Transform::Exponentiate {
            e.exp_coordinates();
        }
        e.recompute();
        e
    }

    fn exp_coordinates(&mut self) {
        for x in self.voter_points.iter_mut().chain(self.candidate_points.iter_mut()) {
            *x = x.exp();
        }
    }

    fn recompute(&mut self) {
        let (c, d) = (self.candidates, self.dims);
        let mut fav = Vec::with_capacity(self.voters * c);
        for i in 0..self.voters {
            let vp = &self.voter_points[i * d..(i + 1) * d];
            for j in 0..c {
                let cp = &self.candidate_points[j * d..(j + 1) * d];
                let sq: f64 = vp.iter().zip(cp).map(|(a, b)| (a - b) * (a - b)).sum();
                let spatial = match self.metric {
                    Metric::Distance => sq.sqrt(),
                    Metric::SquaredDistance => sq,
                };
                fav.push(-spatial + self.excellence_weight * self.excellence[j] + self.noise[i * c + j]);
            }
        }
        self.favorability = fav;
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates
    }

    pub fn voter_count(&self) -> usize {
        self.voters
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn voter_point(&self, i: usize) -> &[f64] {
        &self.voter_points[i * self.dims..(i + 1) * self.dims]
    }

    pub fn candidate_point(&self, j: CandidateId) -> &[f64] {
        &self.candidate_points[j * self.dims..(j + 1) * self.dims]
    }

    pub fn excellence(&self) -> &[f64] {
        &self.excellence
    }

    /// `favorability(i, j)` for voter `i` and candidate `j`.
    pub fn favorability(&self, i: usize, j: CandidateId) -> f64 {
        self.favorability[i * self.candidates + j]
    }

    pub fn favorability_matrix(&self) -> &[f64] {
        &self.favorability
    }

    /// A copy with fresh `N(0, σ²)` error added to every favorability entry.
    pub fn add_error(&self, sigma: f64, seed: u64, trial: u64) -> Self {
        let mut rng = stream(seed, Purpose::Perturbation, trial);
        let mut out = self.clone();
        for (n, f) in out.noise.iter_mut().zip(out.favorability.iter_mut()) {
            let e = rng.sample::<f64, _>(StandardNormal) * sigma;
            *n += e;
            *f += e;
        }
        out
    }

    /// `n` voters drawn without replacement, in draw order.
    pub fn subsample(&self, n: usize, seed: u64, trial: u64) -> Result<Self> {
        if n > self.voters {
            return Err(Error::Config(format!("cannot sample {n} of {} voters", self.voters)));
        }
        let mut rng = stream(seed, Purpose::Sample, trial);
        let picks = index::sample(&mut rng, self.voters, n).into_vec();
        let (c, d) = (self.candidates, self.dims);
        let mut out = self.clone();
        out.voters = n;
        out.voter_points = picks.iter().flat_map(|&i| self.voter_points[i * d..(i + 1) * d].iter().copied()).collect();
        out.noise = picks.iter().flat_map(|&i| self.noise[i * c..(i + 1) * c].iter().copied()).collect();
        out.favorability = picks
            .iter()
            .flat_map(|&i| self.favorability[i * c..(i + 1) * c].iter().copied())
            .collect();
        Ok(out)
    }

    /// Every coordinate replaced by its exponential; favorability is
    /// recomputed from the new distances with the same error terms.
    pub fn exponentiate(&self) -> Self {
        let mut out = self.clone();
        if out.spatial {
            out.exp_coordinates();
            out.recompute();
        }
        out
    }

    /// Mean voter position.
    pub fn voter_mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dims];
        for i in 0..self.voters {
            for (m, x) in mean.iter_mut().zip(self.voter_point(i)) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= self.voters as f64;
        }
        mean
    }

    /// The candidate nearest the mean voter position.
    pub fn most_centrist(&self) -> CandidateId {
        let mean = self.voter_mean();
        let dist = |j: CandidateId| -> f64 {
            self.candidate_point(j)
                .iter()
                .zip(&mean)
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        };
        (0..self.candidates)
            .min_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(a.cmp(&b)))
            .expect("at least one candidate")
    }

    /// The candidate with the highest mean favorability.
    pub fn most_favored(&self) -> CandidateId {
        let c = self.candidates;
        let mut sums = vec![0.0; c];
        for i in 0..self.voters {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self.favorability[i * c + j];
            }
        }
        (0..c)
            .max_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(b.cmp(&a)))
            .expect("at least one candidate")
    }

    /// Ballot scores under `mode` (higher is better).
    pub fn rankings(&self, mode: RatingMode) -> VoterRankings {
        let scores = match mode {
            RatingMode::Continuous | RatingMode::UniformRandom | RatingMode::RandomContinuous => {
                self.favorability.clone()
            }
            RatingMode::Rounded9 => {
                let lo = self.favorability.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = self.favorability.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let span = hi - lo;
                self.favorability
                    .iter()
                    .map(|&f| if span > 0.0 { (1.0 + 8.0 * (f - lo) / span).round() } else { 5.0 })
                    .collect()
            }
        };
        VoterRankings {
            candidates: self.candidates,
            voters: self.voters,
            scores,
        }
    }
}

/// Per-voter ballot scores; a higher score ranks higher and equal scores
/// share a tier. Every candidate is rated.
#[derive(Debug, Clone, PartialEq)]
pub struct VoterRankings {
    candidates: usize,
    voters: usize,
    scores: Vec<f64>,
}

impl VoterRankings {
    pub fn from_scores(candidates: usize, scores: Vec<f64>) -> Result<Self> {
        if candidates == 0 || scores.is_empty() || !scores.len().is_multiple_of(candidates) {
            return Err(Error::Config("score matrix does not match the candidate count".into()));
        }
        Ok(Self {
            candidates,
            voters: scores.len() / candidates,
            scores,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates
    }

    pub fn voter_count(&self) -> usize {
        self.voters
    }

    pub fn voter(&self, i: usize) -> &[f64] {
        &self.scores[i * self.candidates..(i + 1) * self.candidates]
    }

    pub fn tally(&self) -> PairwiseTally {
        let c = self.candidates;
        let mut wins = vec![0u64; c * c];
        for row in self.scores.chunks_exact(c) {
            for x in 0..c {
                let sx = row[x];
                for y in (x + 1)..c {
                    let sy = row[y];
                    if sx > sy {
                        wins[x * c + y] += 1;
                    } else if sy > sx {
                        wins[y * c + x] += 1;
                    }
                }
            }
        }
        PairwiseTally::from_wins_unchecked(c, self.voters as u64, wins)
    }

    /// Dense tier levels for voter `i` (0 = best).
    pub fn levels(&self, i: usize) -> Vec<u16> {
        let row = self.voter(i);
        let mut order: Vec<usize> = (0..self.candidates).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
        let mut levels = vec![0u16; self.candidates];
        let mut level = 0u16;
        for k in 0..order.len() {
            if k > 0 && row[order[k]] != row[order[k - 1]] {
                level += 1;
            }
            levels[order[k]] = level;
        }
        levels
    }

    pub fn pattern(&self, i: usize) -> RankingPattern {
        let levels = self.levels(i);
        let tiers = levels.iter().copied().max().map_or(0, |m| m + 1);
        RankingPattern::from_dense_levels(levels.into_boxed_slice(), tiers)
    }

    /// Voter `i` ranks `x` alone at the top.
    pub fn ranks_first(&self, i: usize, x: CandidateId) -> bool {
        let row = self.voter(i);
        (0..self.candidates).all(|y| y == x || row[x] > row[y])
    }

    /// Moves `x` strictly below everyone on voter `i`'s ballot.
    pub fn move_to_last(&mut self, i: usize, x: CandidateId) {
        let c = self.candidates;
        let row = &mut self.scores[i * c..(i + 1) * c];
        let low = row.iter().copied().fold(f64::INFINITY, f64::min);
        row[x] = low - 1.0;
    }

    /// Every ballot is a strict order.
    pub fn is_strict(&self) -> bool {
        (0..self.voters).all(|i| {
            let mut row = self.voter(i).to_vec();
            row.sort_by(f64::total_cmp);
            row.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn to_profile(&self) -> Profile {
        let entries = (0..self.voters).map(|i| (self.pattern(i), 1u64));
        Profile::new(candidate_names(self.candidates), entries).expect("generated ballots are valid")
    }

    /// Per-voter levels in voter order, for methods that care who cast which
    /// ballot.
    pub fn level_rows(&self) -> impl Iterator<Item = Vec<u16>> + '_ {
        (0..self.voters).map(|i| self.levels(i))
    }
}

/// `A`, `B`, …, `Z`, `AA`, `AB`, … in the spreadsheet style.
pub fn candidate_names(c: usize) -> Vec<String> {
    (0..c)
        .map(|mut i| {
            let mut s = Vec::new();
            loop {
                s.push(b'A' + (i % 26) as u8);
                if i < 26 {
                    break;
                }
                i = i / 26 - 1;
            }
            s.reverse();
            String::from_utf8(s).expect("ascii")
        })
        .collect()
}

/// Fewest and most participants over all races of a tally.
pub fn participant_range(tally: &PairwiseTally) -> (u64, u64) {
    let c = tally.candidate_count();
    let mut lo = u64::MAX;
    let mut hi = 0;
    for x in 0..c {
        for y in (x + 1)..c {
            let p = tally.participants(x, y);
            lo = lo.min(p);
            hi = hi.max(p);
        }
    }
    if lo == u64::MAX {
        (0, 0)
    } else {
        (lo, hi)
    }
}

/// Paradox count over trials `0..trials` of `config`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParadoxRate {
    pub trials: u64,
    pub paradoxes: u64,
    pub rate: f64,
}

/// Share of generated electorates in which every candidate loses a race.
pub fn paradox_rate(config: &ModelConfig, trials: u64) -> Result<ParadoxRate> {
    config.validate()?;
    let paradoxes = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            Electorate::generate(config, t)
                .rankings(config.rating_mode)
                .tally()
                .is_cyclic()
        })
        .count() as u64;
    Ok(ParadoxRate {
        trials,
        paradoxes,
        rate: if trials == 0 { 0.0 } else { paradoxes as f64 / trials as f64 },
    })
}

/// Mean over trials `0..trials` of the fewest and the most participants in
/// any race.
pub fn mean_participant_range(config: &ModelConfig, trials: u64) -> Result<(f64, f64)> {
    config.validate()?;
    if trials == 0 {
        return Ok((0.0, 0.0));
    }
    let (lo, hi) = (0..trials)
        .into_par_iter()
        .map(|t| participant_range(&Electorate::generate(config, t).rankings(config.rating_mode).tally()))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok((lo as f64 / trials as f64, hi as f64 / trials as f64))
}
