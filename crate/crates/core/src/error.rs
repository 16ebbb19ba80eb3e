use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    #[error("candidate `{0}` appears more than once")]
    DuplicateCandidate(String),

    #[error("frequency must be a positive integer, got `{0}`")]
    NonPositiveFrequency(String),

    #[error("profile has no voters")]
    EmptyProfile,

    #[error("invalid ranking: {0}")]
    InvalidPattern(String),

    #[error("{method}: {what} = {actual} exceeds the configured cap of {cap}")]
    CapExceeded {
        method: &'static str,
        what: &'static str,
        actual: u64,
        cap: u64,
    },

    #[error("{0} requires strict full rankings")]
    NotFullRanking(&'static str),

    #[error("approval count {k} exceeds the number of candidates ({candidates})")]
    ApprovalCount { k: usize, candidates: usize },

    #[error("tie adjustment needs voters on both sides of the race (W = {wins}, L = {losses})")]
    DegenerateRace { wins: f64, losses: f64 },

    #[error("W + L must be positive")]
    NoParticipants,

    #[error("candidate {0} cannot become a Condorcet winner by removing voters")]
    Unreachable(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown system `{name}`; known systems: {known}")]
    UnknownSystem { name: String, known: String },
}
