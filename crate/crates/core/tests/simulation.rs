use electlab::ballots::Profile;
use electlab::studies::{regenerate, run_study, Outcome, StudyConfig, StudyKind};
use electlab::systems::{Election, System};
use electlab::voter_model::{paradox_rate, ModelConfig, Transform};

fn small(kind: StudyKind, trials: u64) -> StudyConfig {
    let mut cfg = StudyConfig::new(kind);
    cfg.model.candidates = 5;
    cfg.trials = trials;
    cfg.systems = cfg.default_systems();
    cfg
}

#[test]
fn cross_tables_sum_to_the_trial_count() {
    let rep = run_study(&small(StudyKind::Error, 300)).unwrap();
    assert_eq!(rep.qualifying, 300);
    for p in &rep.pairs {
        assert_eq!(p.total(), rep.qualifying);
        // Hit/fail collapse: merge the miss and tie rows and columns.
        let c = p.cross;
        let hit_fail = c[0][1] + c[0][2];
        let fail_hit = c[1][0] + c[2][0];
        assert_eq!(p.hf_trials, hit_fail + fail_hit);
        assert_eq!(p.reference_wins, hit_fail);
    }
    for t in &rep.systems {
        assert_eq!(t.hits + t.failures(), rep.qualifying);
    }
}

#[test]
fn recorded_outcomes_survive_a_text_round_trip() {
    let cfg = small(StudyKind::Sampling, 60);
    let rep = run_study(&cfg).unwrap();
    let systems: Vec<System> = rep.systems.iter().map(|t| t.system.parse().unwrap()).collect();
    for rec in &rep.records {
        let trial = regenerate(&cfg, rec.trial).unwrap().expect("recorded trial qualifies");
        assert_eq!(trial.true_winner, rec.true_winner);
        let text = trial.election().profile().to_text();
        let reparsed = Election::from_profile(Profile::parse(&text).unwrap());
        for (s, want) in systems.iter().zip(&rec.outcomes) {
            // Approval assigns counts by voter position, which the grouped
            // text form does not keep; rerun it on the regenerated ballots.
            let election = if *s == System::Approval { trial.election() } else { reparsed.clone() };
            let got = Outcome::of(&s.run(&election).unwrap(), rec.true_winner);
            assert_eq!(got, *want, "trial {} system {s}", rec.trial);
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = small(StudyKind::Centrism, 150);
    let a = run_study(&cfg).unwrap();
    let b = run_study(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let mut other = cfg.clone();
    other.model.seed += 1;
    assert_ne!(run_study(&other).unwrap().records, a.records);
}

#[test]
fn spatial_paradoxes_thin_out_as_the_electorate_grows() {
    let rates: Vec<f64> = [35, 75, 200]
        .iter()
        .map(|&v| paradox_rate(&ModelConfig::with_size(5, v), 40_000).unwrap().rate)
        .collect();
    assert!(rates[0] > rates[1] && rates[1] > rates[2], "{rates:?}");
}

#[test]
fn asymmetry_raises_the_paradox_rate() {
    let sym = ModelConfig::with_size(10, 75);
    let mut asym = sym.clone();
    asym.transform = Transform::Exponentiate;
    let a = paradox_rate(&sym, 20_000).unwrap().rate;
    let b = paradox_rate(&asym, 20_000).unwrap().rate;
    assert!(b > a, "symmetric {a}, exponentiated {b}");
}

#[test]
fn error_creates_paradoxes() {
    let rep = run_study(&small(StudyKind::Error, 20)).unwrap();
    assert_eq!(rep.qualifying, 20);
    assert!(rep.records.iter().all(|r| r.paradox));
}
