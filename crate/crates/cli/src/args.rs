//! Command-line flags and their resolution into a validated run.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use electlab::studies::standard_plan;
use electlab::voter_model::parse_kv;
use electlab::{ModelConfig, RatingMode, StudyConfig, StudyKind, System};

#[derive(Parser, Debug)]
#[command(name = "electlab", version, about = "Tally ranked ballots and compare voting systems by simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tally ballot files: pairwise totals, Condorcet status and winners.
    Tally(TallyArgs),
    /// Run a seeded simulation study.
    Simulate(Box<SimulateArgs>),
    /// Write the example ballot files.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| anyhow!("unknown format `{s}`; expected json, csv or text"))
    }
}

#[derive(Args, Debug)]
pub struct TallyArgs {
    /// Ballot files; `-` reads standard input.
    #[arg(short, long = "input", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Comma-separated system names, or `all`.
    #[arg(short, long, default_value = "all")]
    pub systems: String,
    #[arg(short, long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Names missing from the header become write-in candidates.
    #[arg(long)]
    pub write_ins: bool,
}

#[derive(Args, Debug)]
pub struct ExamplesArgs {
    #[arg(short, long, default_value = ".")]
    pub output_dir: PathBuf,
}

/// Every value is optional so that a `--config` file can supply it; flags
/// win over the file.
#[derive(Args, Debug, Default)]
pub struct SimulateArgs {
    /// error, sampling, centrism, asymmetry, opinion-change, attractiveness,
    /// tie-rate, paradox-rate, agreement, cmo, tiebreak-h or participants.
    #[arg(long)]
    pub study: Option<String>,
    /// Qualifying trials (generated trials for paradox-rate and participants).
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub voters: Option<String>,
    #[arg(long)]
    pub candidates: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Standard deviation of the model's own rating error.
    #[arg(long)]
    pub error_sd: Option<String>,
    #[arg(long)]
    pub excellence_weight: Option<String>,
    /// continuous, rounded-9, uniform-random or random-continuous.
    #[arg(long)]
    pub rating_mode: Option<String>,
    /// identity or exponentiate.
    #[arg(long)]
    pub transform: Option<String>,
    #[arg(long)]
    pub dims: Option<String>,
    /// distance or squared-distance.
    #[arg(long)]
    pub metric: Option<String>,
    /// Error added to the ballots in the error study.
    #[arg(long)]
    pub perturbation_sd: Option<String>,
    /// Population size the sampling study draws from.
    #[arg(long)]
    pub population: Option<String>,
    /// Count every attempt rather than paradox trials only.
    #[arg(long)]
    pub all_trials: bool,
    /// Run the standard sub-studies (Kemeny at 4 candidates, all-trial
    /// centrism) instead of a single study.
    #[arg(long)]
    pub plan: bool,
    /// Method for tie-rate.
    #[arg(long)]
    pub method: Option<String>,
    /// Systems to compare; defaults depend on the study.
    #[arg(long)]
    pub systems: Option<String>,
    /// System every other one is compared against.
    #[arg(long)]
    pub reference: Option<String>,
    /// json, csv or text.
    #[arg(long)]
    pub format: Option<String>,
    /// Write report files here instead of printing the report.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// File of `key = value` lines using the flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write one CSV row per trial and system.
    #[arg(long)]
    pub trial_records: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    Comparison(StudyKind),
    TieRate,
    ParadoxRate,
    Agreement,
    Cmo,
    TiebreakH,
    Participants,
}

impl Study {
    const RATES: [(&'static str, Study); 6] = [
        ("tie-rate", Study::TieRate),
        ("paradox-rate", Study::ParadoxRate),
        ("agreement", Study::Agreement),
        ("cmo", Study::Cmo),
        ("tiebreak-h", Study::TiebreakH),
        ("participants", Study::Participants),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Study::Comparison(k) => k.name(),
            other => Self::RATES.iter().find(|(_, s)| *s == other).map(|(n, _)| *n).expect("listed"),
        }
    }
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Study {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some((_, st)) = Self::RATES.iter().find(|(n, _)| *n == key) {
            return Ok(*st);
        }
        key.parse::<StudyKind>().map(Study::Comparison).map_err(|_| {
            let mut known: Vec<&str> = StudyKind::ALL.iter().map(|k| k.name()).collect();
            known.extend(Self::RATES.iter().map(|(n, _)| *n));
            anyhow!("unknown study `{}`; known: {}", s.trim(), known.join(", "))
        })
    }
}

/// A fully resolved `simulate` invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub study: Study,
    pub trials: u64,
    pub model: ModelConfig,
    pub perturbation_sd: f64,
    pub population: usize,
    pub all_trials: bool,
    pub plan: bool,
    pub method: System,
    pub systems: Option<Vec<System>>,
    pub reference: System,
    pub format: Format,
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub trial_records: bool,
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| anyhow!("bad value `{v}` for `{key}`"))
}

impl RunConfig {
    /// Defaults for `study`, before any file or flag.
    fn defaults(study: Study) -> Self {
        let base = StudyConfig::new(match study {
            Study::Comparison(k) => k,
            _ => StudyKind::Error,
        });
        let mut model = ModelConfig::default();
        let mut trials = base.trials;
        let mut method = System::Minimax;
        let mut systems = None;
        match study {
            Study::Comparison(_) => model = base.model.clone(),
            Study::TieRate => {
                model.candidates = 4;
                trials = 1000;
            }
            Study::ParadoxRate => {
                model.candidates = 5;
                model.rating_mode = RatingMode::RandomContinuous;
                trials = 10_000;
            }
            Study::Agreement => {
                model.rating_mode = RatingMode::UniformRandom;
                trials = 10_000;
                systems = Some(vec![System::Minimax, System::MinimaxZ, System::MinimaxL]);
            }
            Study::Cmo => model.candidates = 4,
            Study::TiebreakH => {
                model.candidates = 5;
                model.rating_mode = RatingMode::Rounded9;
                trials = 10_000;
                method = System::MinimaxH;
            }
            Study::Participants => {
                model.rating_mode = RatingMode::UniformRandom;
                trials = 10_000;
            }
        }
        Self {
            study,
            trials,
            model,
            perturbation_sd: base.perturbation_sd,
            population: base.population,
            all_trials: base.all_trials,
            plan: false,
            method,
            systems,
            reference: base.reference,
            format: Format::Text,
            output_dir: None,
            threads: None,
            trial_records: false,
        }
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        if self.model.apply(key, v)? {
            return Ok(());
        }
        match key {
            "trials" => self.trials = value(key, v)?,
            "perturbation_sd" => self.perturbation_sd = value(key, v)?,
            "population" => self.population = value(key, v)?,
            "all_trials" => self.all_trials = value(key, v)?,
            "plan" => self.plan = value(key, v)?,
            "method" => self.method = v.parse()?,
            "systems" => self.systems = Some(System::parse_list(v)?),
            "reference" => self.reference = v.parse()?,
            "format" => self.format = v.parse()?,
            "output_dir" => self.output_dir = Some(PathBuf::from(v)),
            "threads" => self.threads = Some(value(key, v)?),
            "trial_records" => self.trial_records = value(key, v)?,
            _ => bail!("unknown setting `{key}`"),
        }
        Ok(())
    }

    /// Study configurations for a comparison study, validated.
    pub fn study_configs(&self, kind: StudyKind) -> Result<Vec<StudyConfig>> {
        let mut cfg = StudyConfig::new(kind);
        cfg.model = self.model.clone();
        cfg.trials = self.trials;
        cfg.perturbation_sd = self.perturbation_sd;
        cfg.population = self.population;
        cfg.all_trials = self.all_trials;
        cfg.reference = self.reference;
        cfg.systems = match &self.systems {
            Some(s) => s.clone(),
            None => cfg.default_systems(),
        };
        let configs = if self.plan { standard_plan(&cfg) } else { vec![cfg] };
        for c in &configs {
            c.validate()?;
        }
        Ok(configs)
    }

    fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.threads == Some(0) {
            bail!("threads must be at least 1");
        }
        if self.trial_records && self.output_dir.is_none() {
            bail!("trial records need an output directory");
        }
        match self.study {
            Study::Comparison(kind) => {
                self.study_configs(kind)?;
            }
            Study::Agreement if self.systems.as_ref().is_some_and(|s| s.is_empty()) => bail!("no systems to compare"),
            Study::TiebreakH if self.model.rating_mode.is_random() => bail!("tiebreak-h needs the spatial model"),
            _ => {}
        }
        Ok(())
    }
}

impl SimulateArgs {
    /// Flag values as settings, in the same spelling as config-file keys.
    fn settings(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut push = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        };
        push("study", &self.study);
        push("trials", &self.trials);
        push("voters", &self.voters);
        push("candidates", &self.candidates);
        push("seed", &self.seed);
        push("error_sd", &self.error_sd);
        push("excellence_weight", &self.excellence_weight);
        push("rating_mode", &self.rating_mode);
        push("transform", &self.transform);
        push("dims", &self.dims);
        push("metric", &self.metric);
        push("perturbation_sd", &self.perturbation_sd);
        push("population", &self.population);
        push("method", &self.method);
        push("systems", &self.systems);
        push("reference", &self.reference);
        push("format", &self.format);
        push("output_dir", &self.output_dir.as_ref().map(|p| p.display().to_string()));
        push("threads", &self.threads.map(|t| t.to_string()));
        for (k, on) in [("all_trials", self.all_trials), ("plan", self.plan), ("trial_records", self.trial_records)] {
            if on {
                out.push((k.to_string(), "true".to_string()));
            }
        }
        out
    }

    /// Config file first, flags over it; everything is checked before any
    /// trial runs.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut settings = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_kv(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => Vec::new(),
        };
        settings.extend(self.settings());
        let study: Study = settings
            .iter()
            .rev()
            .find(|(k, _)| k == "study")
            .map(|(_, v)| v.parse())
            .transpose()?
            .ok_or_else(|| anyhow!("no study given; use --study"))?;
        let mut rc = RunConfig::defaults(study);
        let mut format_set = false;
        for (k, v) in settings.iter().filter(|(k, _)| k != "study") {
            format_set |= k == "format";
            rc.apply(k, v)?;
        }
        if !format_set && rc.output_dir.is_some() {
            rc.format = Format::Json;
        }
        rc.validate()?;
        Ok(rc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(study: &str) -> SimulateArgs {
        SimulateArgs {
            study: Some(study.into()),
            ..Default::default()
        }
    }

    #[test]
    fn study_names_round_trip() {
        for name in ["error", "opinion-change", "tie-rate", "tiebreak-h", "participants"] {
            assert_eq!(name.parse::<Study>().unwrap().name(), name);
        }
        let err = "bogus".parse::<Study>().unwrap_err().to_string();
        assert!(err.contains("paradox-rate") && err.contains("attractiveness"), "{err}");
    }

    #[test]
    fn flags_override_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "study = tie-rate\ncandidates = 5\ntrials = 50 # short\nmethod = copeland\n").unwrap();
        let mut a = SimulateArgs {
            config: Some(path),
            ..Default::default()
        };
        a.candidates = Some("3".into());
        let rc = a.resolve().unwrap();
        assert_eq!(rc.study, Study::TieRate);
        assert_eq!((rc.model.candidates, rc.trials, rc.method), (3, 50, System::Copeland));
    }

    #[test]
    fn bad_values_fail_before_running() {
        let mut a = args("error");
        a.systems = Some("minimax,nope".into());
        assert!(a.resolve().unwrap_err().to_string().contains("known systems"));
        let mut a = args("error");
        a.systems = Some("kemeny".into());
        assert!(a.resolve().unwrap_err().to_string().contains("kemeny"));
        let mut a = args("opinion-change");
        a.rating_mode = Some("rounded-9".into());
        assert!(a.resolve().is_err());
        let mut a = args("cmo");
        a.trials = Some("many".into());
        assert!(a.resolve().unwrap_err().to_string().contains("trials"));
        assert!(SimulateArgs::default().resolve().is_err());
    }

    #[test]
    fn per_study_defaults() {
        let rc = args("attractiveness").resolve().unwrap();
        assert_eq!(rc.model.excellence_weight, 1.0);
        assert!(rc.all_trials);
        let rc = args("paradox-rate").resolve().unwrap();
        assert_eq!(rc.model.rating_mode, RatingMode::RandomContinuous);
        let mut a = args("error");
        a.output_dir = Some("out".into());
        assert_eq!(a.resolve().unwrap().format, Format::Json);
    }
}
