//! Reference electorates used in tests, examples and the `examples` command.

use crate::ballots::Profile;

/// Park-location election: D loses every race by one vote while A, B and C
/// form a large cycle.
pub const TABLE1: &str = "\
# Park-location election (605 voters)
candidates: A,B,C,D
101: A>B>C>D
101: D>A>B>C
101: B>C>A>D
101: D>B>C>A
101: C>A>B>D
100: D>C>A>B
";

/// Participation example, 16 voters.
pub const TABLE2: &str = "\
# Participation example (16 voters)
candidates: A,B,C,D
2: A>B>D>C
6: B>D>C>A
5: C>A>B>D
1: D>A>B>C
2: D>C>A>B
";

/// First district of the consistency example.
pub const TABLE3_FIRST: &str = "\
# Consistency example, first district
candidates: A,B,C,D
1: A>B>C>D
6: A>D>B>C
5: B>C>D>A
6: C>D>B>A
";

/// Second district of the consistency example.
pub const TABLE3_SECOND: &str = "\
# Consistency example, second district
candidates: A,B,C,D
8: A>B>D>C
2: A>D>C>B
9: C>B>D>A
6: D>C>B>A
";

/// The smallest Condorcet paradox.
pub const CYCLE3: &str = "\
# Three-voter cycle
candidates: A,B,C
1: A>B>C
1: B>C>A
1: C>A>B
";

pub fn table1() -> Profile {
    Profile::parse(TABLE1).expect("fixture parses")
}

pub fn table2() -> Profile {
    Profile::parse(TABLE2).expect("fixture parses")
}

pub fn table3_halves() -> (Profile, Profile) {
    (
        Profile::parse(TABLE3_FIRST).expect("fixture parses"),
        Profile::parse(TABLE3_SECOND).expect("fixture parses"),
    )
}

pub fn table3() -> Profile {
    let (a, b) = table3_halves();
    a.merged(&b).expect("same candidates")
}

pub fn cycle3() -> Profile {
    Profile::parse(CYCLE3).expect("fixture parses")
}

/// Ballot files written by the `examples` command: (file name, contents).
pub fn ballot_files() -> Vec<(&'static str, String)> {
    vec![
        ("table1.txt", TABLE1.to_string()),
        ("table2.txt", TABLE2.to_string()),
        ("table3.txt", {
            let mut text = String::from("# Consistency example, both districts\n");
            text.push_str(&table3().to_text());
            text
        }),
        ("table3_first.txt", TABLE3_FIRST.to_string()),
        ("table3_second.txt", TABLE3_SECOND.to_string()),
        ("cycle3.txt", CYCLE3.to_string()),
    ]
}
