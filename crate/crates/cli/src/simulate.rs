//! `electlab simulate`: comparison studies and the paradox-trial counts.

use std::fmt::Write as _;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use electlab::studies::{
    compare_agreement, run_cmo_study, run_study, run_tie_rate_study, run_tiebreak_h_study, AgreementReport,
    CmoStudyReport, TieRateReport, TiebreakHReport, TiebreakTally,
};
use electlab::cmo;
use electlab::voter_model::{mean_participant_range, paradox_rate, ParadoxRate};
use electlab::{ModelConfig, StudyKind, StudyReport, System};

use crate::args::{Format, RunConfig, SimulateArgs, Study};
use crate::output::{record_csv, write_file, Outcome};

pub fn run(args: &SimulateArgs) -> Result<Outcome> {
    let rc = args.resolve()?;
    if let Some(n) = rc.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match rc.study {
        Study::Comparison(kind) => comparison(&rc, kind),
        _ => rate_study(&rc),
    }
}

/// Notes that mean a study did not finish as configured.
fn is_anomaly(note: &str) -> bool {
    note.ends_with(cmo::CAP_BLOCKED) || note.starts_with("attempt budget exhausted")
}

fn model_line(m: &ModelConfig) -> String {
    format!(
        "{} candidates, {} voters, {} ratings, seed {}",
        m.candidates, m.voters, m.rating_mode, m.seed
    )
}

fn stem(rep: &StudyReport) -> String {
    format!("{}-{}-{}c", rep.study, rep.trial_type.to_ascii_lowercase(), rep.model.candidates)
}

fn pct(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.1}"))
}

pub fn study_text(rep: &StudyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} study, {} trials: {}", rep.study, rep.trial_type, model_line(&rep.model));
    let _ = writeln!(
        s,
        "{} of {} qualifying trials in {} attempts; reference {}",
        rep.qualifying, rep.requested_trials, rep.attempts, rep.reference
    );
    let _ = writeln!(
        s,
        "{:<18} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "system", "hits", "misses", "ties", "rel%", "HF", "%wins", "%ties"
    );
    for t in &rep.systems {
        let pair = rep.pairs.iter().find(|p| p.opponent == t.system);
        let _ = writeln!(
            s,
            "{:<18} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
            t.system,
            t.hits,
            t.misses,
            t.ties,
            pct(t.relative_hits),
            pair.map_or("-".into(), |p| p.hf_trials.to_string()),
            pct(pair.and_then(|p| p.reference_pct_wins)),
            pct(pair.map(|p| p.opponent_pct_ties)),
        );
    }
    for n in &rep.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

fn comparison(rc: &RunConfig, kind: StudyKind) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut anomalies = Vec::new();
    for cfg in rc.study_configs(kind)? {
        let rep = run_study(&cfg)?;
        anomalies.extend(rep.notes.iter().filter(|n| is_anomaly(n)).map(|n| format!("{}: {n}", stem(&rep))));
        reports.push(rep);
    }
    let render = |rep: &StudyReport, header: bool| -> Result<String> {
        Ok(match rc.format {
            Format::Json => rep.to_json() + "\n",
            Format::Text => study_text(rep),
            Format::Csv => {
                let mut buf = Vec::new();
                rep.write_csv(&mut buf, header)?;
                String::from_utf8(buf)?
            }
        })
    };
    match &rc.output_dir {
        Some(dir) => {
            for rep in &reports {
                let name = format!("{}.{}", stem(rep), rc.format.extension());
                let path = write_file(dir, &name, render(rep, true)?.as_bytes())?;
                eprintln!("wrote {}", path.display());
                if rc.trial_records {
                    let mut buf = Vec::new();
                    rep.write_trials_csv(&mut buf)?;
                    let path = write_file(dir, &format!("{}-trials.csv", stem(rep)), &buf)?;
                    eprintln!("wrote {}", path.display());
                }
                print!("{}", study_text(rep));
            }
        }
        None => {
            let text = match rc.format {
                Format::Json if reports.len() > 1 => serde_json::to_string_pretty(&reports)? + "\n",
                Format::Text => reports.iter().map(study_text).collect::<Vec<_>>().join("\n"),
                _ => reports
                    .iter()
                    .enumerate()
                    .map(|(i, r)| render(r, i == 0))
                    .collect::<Result<Vec<_>>>()?
                    .concat(),
            };
            print!("{text}");
        }
    }
    Ok(Outcome { anomalies })
}

#[derive(Serialize)]
struct ParadoxRateReport {
    model: ModelConfig,
    #[serde(flatten)]
    rate: ParadoxRate,
}

#[derive(Serialize)]
struct ParticipantsReport {
    model: ModelConfig,
    trials: u64,
    mean_fewest: f64,
    mean_most: f64,
}

fn tie_rate_text(r: &TieRateReport) -> String {
    format!(
        "{} ties on {} of {} paradox trials ({:.4}%) in {} attempts\n{}\n",
        r.method,
        r.ties,
        r.paradox_trials,
        100.0 * r.tie_rate,
        r.attempts,
        model_line(&r.model)
    )
}

fn agreement_text(r: &AgreementReport) -> String {
    let mut s = format!(
        "{} tie-free paradox trials ({} more skipped for ties) in {} attempts\n{}\n",
        r.trials,
        r.tied_trials,
        r.attempts,
        model_line(&r.model)
    );
    for i in 0..r.methods.len() {
        for j in i + 1..r.methods.len() {
            let _ = writeln!(
                s,
                "{} vs {}: {} agree ({:.4}%)",
                r.methods[i],
                r.methods[j],
                r.agree[i][j],
                100.0 * r.agreement_rate(i, j)
            );
        }
    }
    if r.methods.len() >= 3 {
        for (m, n) in r.methods.iter().zip(&r.odd_one_out) {
            let _ = writeln!(s, "{m} alone differed: {n}");
        }
    }
    let _ = writeln!(s, "disagreeing trials: {}", r.disagreements.len());
    s
}

fn cmo_text(r: &CmoStudyReport) -> String {
    format!(
        "{}\n{} paradox trials in {} attempts\n\
         one step confirmed the winner: {} ({:.4}% of paradox trials, {:.4}% of all trials)\n\
         single-step and full CMO both confirmed a winner: {}, agreeing: {}\n\
         full CMO unconfirmed: {}; step cap reached: {}, of which it blocked confirmation: {}\n",
        model_line(&r.model),
        r.paradox_trials,
        r.attempts,
        r.step1_confirmed,
        100.0 * r.step1_rate_paradox,
        100.0 * r.step1_rate_all,
        r.both_defined,
        r.single_step_agrees,
        r.unconfirmed,
        r.cap_reached,
        r.cap_blocked,
    )
}

fn tiebreak_text(r: &TiebreakHReport) -> String {
    let row = |name: &str, t: &TiebreakTally| format!("{name:<14} {:>7} {:>7} {:>7}\n", t.hits, t.misses, t.ties);
    format!(
        "{}\n{} tied paradox trials in {} attempts; a hit picks the candidate nearer the mean voter\n\
         {:<14} {:>7} {:>7} {:>7}\n{}{}",
        model_line(&r.model),
        r.trials,
        r.attempts,
        "tie-breaker",
        "hits",
        "misses",
        "ties",
        row("T1", &r.t1),
        row("head-to-head", &r.h),
    )
}

/// Runs one of the count studies: JSON value, text summary, anomalies.
fn rate_study(rc: &RunConfig) -> Result<Outcome> {
    let m = &rc.model;
    let short = |got: u64| (got < rc.trials).then(|| format!("only {got} of {} trials found", rc.trials));
    let (value, text, shortfall): (Value, String, Option<String>) = match rc.study {
        Study::TieRate => {
            let r = run_tie_rate_study(m, rc.method, rc.trials)?;
            (serde_json::to_value(&r)?, tie_rate_text(&r), short(r.paradox_trials))
        }
        Study::ParadoxRate => {
            let rate = paradox_rate(m, rc.trials)?;
            let text = format!(
                "{} of {} trials have a cycle ({:.4}%)\n{}\n",
                rate.paradoxes,
                rate.trials,
                100.0 * rate.rate,
                model_line(m)
            );
            let rep = ParadoxRateReport { model: m.clone(), rate };
            (serde_json::to_value(&rep)?, text, None)
        }
        Study::Agreement => {
            let methods = rc.systems.clone().unwrap_or_else(|| vec![System::Minimax]);
            let r = compare_agreement(m, &methods, rc.trials)?;
            (serde_json::to_value(&r)?, agreement_text(&r), short(r.trials))
        }
        Study::Cmo => {
            let r = run_cmo_study(m, rc.trials)?;
            let text = cmo_text(&r);
            let mut anomaly = short(r.paradox_trials);
            if r.cap_blocked > 0 {
                anomaly = Some(format!("step cap left full CMO unconfirmed on {} trials", r.cap_blocked));
            }
            (serde_json::to_value(&r)?, text, anomaly)
        }
        Study::TiebreakH => {
            let r = run_tiebreak_h_study(m, rc.trials)?;
            (serde_json::to_value(&r)?, tiebreak_text(&r), short(r.trials))
        }
        Study::Participants => {
            let (lo, hi) = mean_participant_range(m, rc.trials)?;
            let rep = ParticipantsReport {
                model: m.clone(),
                trials: rc.trials,
                mean_fewest: lo,
                mean_most: hi,
            };
            let text = format!(
                "mean participants per trial: fewest {lo:.3}, most {hi:.3} over {} trials\n{}\n",
                rc.trials,
                model_line(m)
            );
            (serde_json::to_value(&rep)?, text, None)
        }
        Study::Comparison(_) => unreachable!("handled by comparison"),
    };
    let render = |format: Format| -> Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&value)? + "\n",
            Format::Text => text.clone(),
            Format::Csv => {
                // Disagreement ballots stay in the JSON report.
                let mut v = value.clone();
                if let Value::Object(map) = &mut v {
                    map.shift_remove("disagreements");
                }
                record_csv(&v)?
            }
        })
    };
    match &rc.output_dir {
        Some(dir) => {
            let name = format!("{}.{}", rc.study, rc.format.extension());
            let path = write_file(dir, &name, render(rc.format)?.as_bytes())?;
            eprintln!("wrote {}", path.display());
            print!("{text}");
        }
        None => print!("{}", render(rc.format)?),
    }
    Ok(Outcome {
        anomalies: shortfall.into_iter().map(|a| format!("{}: {a}", rc.study)).collect(),
    })
}
