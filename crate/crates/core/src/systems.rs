//! Every implemented method behind one name-addressable enum.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ballots::{PairwiseTally, Profile};
use crate::cmo;
use crate::error::{Error, Result};
use crate::minimax::{self, TieBreak};
use crate::result::ElectionResult;
use crate::rivals::{self, ApprovalScheme};
use crate::voter_model::VoterRankings;

/// Ballots prepared for counting: the profile, its tally and, for generated
/// electorates, the individual ballots in voter order.
#[derive(Debug, Clone)]
pub struct Election {
    profile: Profile,
    tally: PairwiseTally,
    voters: Option<VoterRankings>,
}

impl Election {
    pub fn from_profile(profile: Profile) -> Self {
        let tally = profile.tally();
        Self {
            profile,
            tally,
            voters: None,
        }
    }

    pub fn from_rankings(rankings: VoterRankings) -> Self {
        Self {
            profile: rankings.to_profile(),
            tally: rankings.tally(),
            voters: Some(rankings),
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn tally(&self) -> &PairwiseTally {
        &self.tally
    }

    pub fn rankings(&self) -> Option<&VoterRankings> {
        self.voters.as_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum System {
    Minimax,
    MinimaxP,
    MinimaxZ,
    MinimaxZs,
    MinimaxL,
    MinimaxT1,
    MinimaxT2,
    MinimaxT3,
    MinimaxH,
    Ssmd,
    Sssmd,
    Schulze,
    Copeland,
    Borda,
    Black,
    Kemeny,
    Hare,
    Coombs,
    Plurality,
    PluralityRunoff,
    Approval,
    Cmo,
    CmoSingleStep,
    Young,
    Dodgson,
}

impl System {
    pub const ALL: [System; 25] = [
        System::Minimax,
        System::MinimaxP,
        System::MinimaxZ,
        System::MinimaxZs,
        System::MinimaxL,
        System::MinimaxT1,
        System::MinimaxT2,
        System::MinimaxT3,
        System::MinimaxH,
        System::Ssmd,
        System::Sssmd,
        System::Schulze,
        System::Copeland,
        System::Borda,
        System::Black,
        System::Kemeny,
        System::Hare,
        System::Coombs,
        System::Plurality,
        System::PluralityRunoff,
        System::Approval,
        System::Cmo,
        System::CmoSingleStep,
        System::Young,
        System::Dodgson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            System::Minimax => "minimax",
            System::MinimaxP => "minimax-p",
            System::MinimaxZ => "minimax-z",
            System::MinimaxZs => "minimax-zs",
            System::MinimaxL => "minimax-l",
            System::MinimaxT1 => "minimax-t1",
            System::MinimaxT2 => "minimax-t2",
            System::MinimaxT3 => "minimax-t3",
            System::MinimaxH => "minimax-h",
            System::Ssmd => "ssmd",
            System::Sssmd => "sssmd",
            System::Schulze => "schulze",
            System::Copeland => "copeland",
            System::Borda => "borda",
            System::Black => "black",
            System::Kemeny => "kemeny",
            System::Hare => "hare",
            System::Coombs => "coombs",
            System::Plurality => "plurality",
            System::PluralityRunoff => "plurality-runoff",
            System::Approval => "approval",
            System::Cmo => "cmo",
            System::CmoSingleStep => "cmo-single-step",
            System::Young => "young",
            System::Dodgson => "dodgson",
        }
    }

    /// Picks every Condorcet winner.
    pub fn is_condorcet_consistent(self) -> bool {
        !matches!(
            self,
            System::Borda | System::Hare | System::Coombs | System::Plurality | System::PluralityRunoff | System::Approval
        )
    }

    /// Exhaustive or branch-and-bound searches with size caps.
    pub fn is_capped(self) -> bool {
        matches!(self, System::Kemeny | System::Young | System::Dodgson)
    }

    pub fn known_names() -> String {
        Self::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
    }

    /// Parses a comma-separated list; `all` expands to every system.
    pub fn parse_list(text: &str) -> Result<Vec<System>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                out.extend(Self::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.dedup();
        Ok(out)
    }

    pub fn run(self, election: &Election) -> Result<ElectionResult> {
        let t = election.tally();
        let p = election.profile();
        let mut r = match self {
            System::Minimax => minimax::minimax_classic(t),
            System::MinimaxP => minimax::minimax_p(t),
            System::MinimaxZ => minimax::minimax_z(t),
            System::MinimaxZs => minimax::minimax_zs(t),
            System::MinimaxL => minimax::minimax_l(t),
            System::MinimaxT1 => minimax::minimax_t(t, TieBreak::T1),
            System::MinimaxT2 => minimax::minimax_t(t, TieBreak::T2),
            System::MinimaxT3 => minimax::minimax_t(t, TieBreak::T3),
            System::MinimaxH => minimax::minimax_t(t, TieBreak::H),
            System::Ssmd => minimax::ssmd(t),
            System::Sssmd => minimax::sssmd(t),
            System::Schulze => rivals::schulze(t),
            System::Copeland => rivals::copeland(t),
            System::Borda => rivals::borda(p),
            System::Black => rivals::black(p),
            System::Kemeny => rivals::kemeny(t)?,
            System::Hare => rivals::hare(p),
            System::Coombs => rivals::coombs(p),
            System::Plurality => rivals::plurality(p),
            System::PluralityRunoff => rivals::plurality_runoff(p),
            System::Approval => match election.rankings() {
                Some(voters) => rivals::approval_by_voter(voters, &ApprovalScheme::study_default_for(p.candidate_count()))?,
                None => rivals::approval(p, &ApprovalScheme::study_default_for(p.candidate_count()))?,
            },
            System::Cmo => cmo::cmo_by_step(p).result,
            System::CmoSingleStep => cmo::cmo_single_step(p).result,
            System::Young => rivals::young_election(p)?,
            System::Dodgson => rivals::dodgson_election(p)?,
        };
        r.method = self.name().to_string();
        Ok(r)
    }

    pub fn run_profile(self, profile: &Profile) -> Result<ElectionResult> {
        self.run(&Election::from_profile(profile.clone()))
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = match key.as_str() {
            "classic" | "minimax-classic" => "minimax",
            "runoff" => "plurality-runoff",
            "cmo-1" | "single-step-cmo" => "cmo-single-step",
            "irv" => "hare",
            other => other,
        };
        Self::ALL
            .iter()
            .copied()
            .find(|sys| sys.name() == key)
            .ok_or_else(|| Error::UnknownSystem {
                name: s.trim().to_string(),
                known: Self::known_names(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn names_round_trip() {
        for s in System::ALL {
            assert_eq!(s.name().parse::<System>().unwrap(), s);
        }
        assert_eq!("Classic".parse::<System>().unwrap(), System::Minimax);
        let err = "nope".parse::<System>().unwrap_err();
        assert!(err.to_string().contains("minimax-t2"));
        assert_eq!(System::parse_list("all").unwrap().len(), 25);
    }

    #[test]
    fn table1_through_the_registry() {
        let e = Election::from_profile(fixtures::table1());
        let winners = |s: System| s.run(&e).unwrap().winners;
        assert_eq!(winners(System::Minimax), vec![3]);
        assert_eq!(winners(System::Copeland), vec![0, 1, 2]);
        assert_eq!(winners(System::Borda), vec![1]);
        assert_eq!(winners(System::PluralityRunoff), vec![0]);
        assert_eq!(winners(System::Cmo), vec![3]);
        assert_eq!(winners(System::Young), vec![3]);
        assert_eq!(winners(System::Dodgson), vec![3]);
    }

    #[test]
    fn two_candidates_all_agree() {
        let p = Profile::parse("candidates: A,B\n4: B>A\n3: A>B\n").unwrap();
        let e = Election::from_profile(p);
        for s in System::ALL {
            assert_eq!(s.run(&e).unwrap().winners, vec![1], "{s}");
        }
    }
}
