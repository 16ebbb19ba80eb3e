//! Systems used for comparison with the minimax family.

mod deletion;
mod elimination;
mod pairwise;
mod positional;

pub use deletion::{dodgson, dodgson_election, dodgson_with, young, young_election, young_with, Goal, SearchCaps};
pub use elimination::{coombs, coombs_with_trace, hare, hare_with_trace, EliminationRound, EliminationTrace};
pub use pairwise::{copeland, kemeny, kemeny_score, kemeny_with_cap, schulze, KEMENY_DEFAULT_CAP};
pub use positional::{approval, approval_by_voter, black, borda, borda_scores, plurality, plurality_runoff, ApprovalScheme};

