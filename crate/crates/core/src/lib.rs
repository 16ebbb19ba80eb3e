//! Condorcet-consistent election counting and Monte Carlo comparison of
//! voting systems.
//!
//! Every pairwise method starts from a [`PairwiseTally`] built from a
//! [`Profile`] of ranked ballots. The minimax family lives in [`minimax`],
//! the likelihood-ratio method in [`cmo`], the comparison systems in
//! [`rivals`], and [`systems::System`] puts all of them behind one name.
//! [`voter_model`] generates spatial electorates and [`studies`] runs the
//! seeded comparison studies on them.
//!
//! # Ballot files
//!
//! ```text
//! # comments and blank lines are ignored
//! candidates: A, B, C, D
//! 101: A>B>C>D
//! 5: B=C>A        # B and C tied; D unrated
//! 2:              # abstention: every candidate unrated
//! ```
//!
//! The header names candidates in declaration order, which fixes their
//! ids. Each following line is `<count>: <ranking>`, with tiers separated by
//! `>` and tied candidates joined by `=`. Unlisted candidates rank below
//! every listed one and tie each other. Lines with the same normalized
//! ranking are merged.
//!
//! ```
//! use electlab::{Profile, System};
//!
//! let p = Profile::parse("candidates: A,B,C\n3: A>B>C\n2: B>C>A\n2: C>A>B\n").unwrap();
//! assert_eq!(p.tally().margin(0, 1), 3);
//! assert_eq!(System::MinimaxT2.run_profile(&p).unwrap().winners, vec![0]);
//! ```

pub mod ballots;
pub mod cmo;
pub mod error;
pub mod fixtures;
pub mod minimax;
pub mod result;
pub mod rivals;
pub mod rng;
pub mod studies;
pub mod systems;
pub mod voter_model;

pub use ballots::{CandidateId, CondorcetStatus, PairwiseTally, Profile, RankingPattern};
pub use error::{Error, Result};
pub use result::{ElectionResult, Score};
pub use studies::{StudyConfig, StudyKind, StudyReport};
pub use systems::{Election, System};
pub use voter_model::{ModelConfig, RatingMode, Transform};
