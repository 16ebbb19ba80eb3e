use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::ballots::CandidateId;

/// Exact signed fraction `num / den` with `den > 0`, compared by
/// cross-multiplication.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Proportion {
    pub num: i64,
    pub den: i64,
}

impl Proportion {
    /// A zero denominator (no participants) yields 0.
    pub fn new(num: i64, den: i64) -> Self {
        match den.cmp(&0) {
            Ordering::Equal => Self { num: 0, den: 1 },
            Ordering::Greater => Self { num, den },
            Ordering::Less => Self { num: -num, den: -den },
        }
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Proportion {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Proportion {}

impl PartialOrd for Proportion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Proportion {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The per-candidate quantity a method ranked candidates by.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Score {
    Int(i64),
    Ratio(Proportion),
    Real(f64),
    /// Half-point scores stored doubled (Copeland, fractional credits).
    Halves(i64),
    /// Not evaluated (e.g. a search skipped because it exceeded a cap).
    None,
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Int(v) => write!(f, "{v}"),
            Score::Ratio(p) => write!(f, "{p} ({:.6})", p.to_f64()),
            Score::Real(v) if v.fract() == 0.0 && v.abs() < 1e15 => write!(f, "{v}"),
            Score::Real(v) => write!(f, "{v:.4e}"),
            Score::Halves(v) if v % 2 == 0 => write!(f, "{}", v / 2),
            Score::Halves(v) => write!(f, "{}.5", v / 2),
            Score::None => f.write_str("-"),
        }
    }
}

/// One narrowing stage of a tie-break.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub stage: String,
    pub contenders: Vec<CandidateId>,
    pub survivors: Vec<CandidateId>,
}

/// Winner set of one method plus the numbers needed to check it by hand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectionResult {
    pub method: String,
    /// Sorted ascending; more than one entry is a tie.
    pub winners: Vec<CandidateId>,
    pub scores: Vec<Score>,
    pub trace: Vec<TraceStep>,
    pub notes: Vec<String>,
}

impl ElectionResult {
    pub fn new(method: impl Into<String>, mut winners: Vec<CandidateId>, scores: Vec<Score>) -> Self {
        winners.sort_unstable();
        winners.dedup();
        Self {
            method: method.into(),
            winners,
            scores,
            trace: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn is_tie(&self) -> bool {
        self.winners.len() > 1
    }

    pub fn unique_winner(&self) -> Option<CandidateId> {
        match self.winners.as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Candidates from `pool` whose key is maximal.
pub(crate) fn arg_max<K: Ord>(pool: &[CandidateId], key: impl Fn(CandidateId) -> K) -> Vec<CandidateId> {
    let keys: Vec<K> = pool.iter().map(|&c| key(c)).collect();
    match keys.iter().max() {
        Some(best) => pool
            .iter()
            .zip(&keys)
            .filter(|(_, k)| *k == best)
            .map(|(&c, _)| c)
            .collect(),
        None => Vec::new(),
    }
}

/// Candidates from `pool` whose key is minimal.
pub(crate) fn arg_min<K: Ord>(pool: &[CandidateId], key: impl Fn(CandidateId) -> K) -> Vec<CandidateId> {
    arg_max(pool, |c| std::cmp::Reverse(key(c)))
}
