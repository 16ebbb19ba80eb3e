//! Python bindings: profiles, tallies, every counting system, CMO and the
//! simulation studies. Reports cross the boundary as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use electlab::ballots::{self, ParseOptions};
use electlab::studies::{self, run_plan, run_study};
use electlab::{cmo, fixtures, voter_model};
use electlab::{CondorcetStatus, ModelConfig, StudyConfig, StudyKind, System};

fn err(e: electlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// serde value to Python objects. Non-finite floats arrive as `None`.
fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any().unbind(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any().unbind(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn serialize<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn system(name: &str) -> PyResult<System> {
    name.parse().map_err(err)
}

/// A multiset of ranked ballots.
#[pyclass(name = "Profile", module = "electlab", frozen)]
pub struct Profile {
    inner: ballots::Profile,
}

#[pymethods]
impl Profile {
    /// Parses the ballot-file grammar.
    #[staticmethod]
    #[pyo3(signature = (text, write_ins = false))]
    fn parse(text: &str, write_ins: bool) -> PyResult<Self> {
        let options = ParseOptions {
            allow_write_ins: write_ins,
        };
        let inner = ballots::Profile::parse_with(text, options).map_err(err)?;
        Ok(Self { inner })
    }

    /// Builds a profile from `(count, ranking)` pairs, where a ranking is a
    /// list of tiers of candidate names (best first).
    #[staticmethod]
    fn from_ballots(candidates: Vec<String>, ballots: Vec<(u64, Vec<Vec<String>>)>) -> PyResult<Self> {
        let find = |n: &str| {
            candidates
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| err(electlab::Error::UnknownCandidate(n.to_string())))
        };
        let mut entries = Vec::with_capacity(ballots.len());
        for (count, tiers) in ballots {
            let ids = tiers
                .iter()
                .map(|t| t.iter().map(|n| find(n)).collect::<PyResult<Vec<_>>>())
                .collect::<PyResult<Vec<_>>>()?;
            let pattern = ballots::RankingPattern::from_tiers(candidates.len(), &ids).map_err(err)?;
            entries.push((pattern, count));
        }
        let inner = ballots::Profile::new(candidates, entries).map_err(err)?;
        Ok(Self { inner })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn candidates(&self) -> Vec<String> {
        self.inner.names()
    }

    #[getter]
    fn voters(&self) -> u64 {
        self.inner.voters()
    }

    fn tally(&self) -> Tally {
        Tally {
            inner: self.inner.tally(),
            names: self.inner.names(),
        }
    }

    /// Winners of one system as a dict: method, winners (names), scores,
    /// trace and notes.
    fn run(&self, py: Python<'_>, system_name: &str) -> PyResult<Py<PyAny>> {
        let r = system(system_name)?.run_profile(&self.inner).map_err(err)?;
        let value = serde_json::json!({
            "method": r.method,
            "winners": r.winners.iter().map(|&w| self.inner.name(w)).collect::<Vec<_>>(),
            "scores": r.scores.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "trace": r.trace.iter().map(|t| serde_json::json!({
                "stage": t.stage,
                "contenders": t.contenders.iter().map(|&c| self.inner.name(c)).collect::<Vec<_>>(),
                "survivors": t.survivors.iter().map(|&c| self.inner.name(c)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "notes": r.notes,
        });
        to_py(py, &value)
    }

    /// Stepwise CMO: per-candidate LR, log-LR, validation and steps.
    #[pyo3(signature = (single_step = false))]
    fn cmo(&self, py: Python<'_>, single_step: bool) -> PyResult<Py<PyAny>> {
        let r = if single_step {
            cmo::cmo_single_step(&self.inner)
        } else {
            cmo::cmo_by_step(&self.inner)
        };
        let value = serde_json::json!({
            "winners": r.result.winners.iter().map(|&w| self.inner.name(w)).collect::<Vec<_>>(),
            "confirmed": r.confirmed,
            "candidates": r.outcomes.iter().map(|o| serde_json::json!({
                "candidate": self.inner.name(o.target),
                "lr": o.lr,
                "log_lr": o.log_lr,
                "validated": o.validated,
                "steps": o.steps.len(),
                "cap_reached": o.cap_reached,
            })).collect::<Vec<_>>(),
        });
        to_py(py, &value)
    }

    fn __len__(&self) -> usize {
        self.inner.entries().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(candidates={:?}, voters={}, rankings={})",
            self.inner.names(),
            self.inner.voters(),
            self.inner.entries().len()
        )
    }
}

/// Pairwise counts; candidates are addressed by index or by name.
#[pyclass(name = "Tally", module = "electlab", frozen)]
pub struct Tally {
    inner: ballots::PairwiseTally,
    names: Vec<String>,
}

impl Tally {
    fn index(&self, c: &Bound<'_, PyAny>) -> PyResult<usize> {
        if let Ok(i) = c.extract::<usize>() {
            if i < self.names.len() {
                return Ok(i);
            }
            return Err(PyValueError::new_err(format!("candidate index {i} out of range")));
        }
        let name: String = c.extract()?;
        self.names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| err(electlab::Error::UnknownCandidate(name)))
    }
}

#[pymethods]
impl Tally {
    /// Voters preferring `x` to `y`.
    fn wins(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<u64> {
        Ok(self.inner.wins(self.index(x)?, self.index(y)?))
    }

    fn ties(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<u64> {
        Ok(self.inner.ties(self.index(x)?, self.index(y)?))
    }

    fn margin(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<i64> {
        Ok(self.inner.margin(self.index(x)?, self.index(y)?))
    }

    /// `matrix()[x][y]` is the number of voters preferring x to y.
    fn matrix(&self) -> Vec<Vec<u64>> {
        let c = self.names.len();
        (0..c).map(|x| (0..c).map(|y| self.inner.wins(x, y)).collect()).collect()
    }

    /// `("strong" | "weak" | "none", winner name or None)`.
    fn condorcet(&self) -> (&'static str, Option<String>) {
        match self.inner.condorcet_winner() {
            CondorcetStatus::Strong(w) => ("strong", Some(self.names[w].clone())),
            CondorcetStatus::Weak(w) => ("weak", Some(self.names[w].clone())),
            CondorcetStatus::None => ("none", None),
        }
    }

    /// Every candidate loses at least one race.
    fn is_cyclic(&self) -> bool {
        self.inner.is_cyclic()
    }
}

#[pyfunction]
fn systems() -> Vec<&'static str> {
    System::ALL.iter().map(|s| s.name()).collect()
}

/// The bundled example ballot files as `{file name: text}`.
#[pyfunction]
fn example_files() -> Vec<(&'static str, String)> {
    fixtures::ballot_files()
}

fn model_from(settings: Option<&Bound<'_, PyDict>>, mut model: ModelConfig) -> PyResult<(ModelConfig, Vec<(String, String)>)> {
    let mut rest = Vec::new();
    if let Some(d) = settings {
        for (k, v) in d.iter() {
            let key = k.extract::<String>()?.replace('-', "_");
            let value = v.str()?.to_string();
            if !model.apply(&key, &value).map_err(err)? {
                rest.push((key, value));
            }
        }
    }
    model.validate().map_err(err)?;
    Ok((model, rest))
}

fn no_extra(rest: &[(String, String)]) -> PyResult<()> {
    match rest.first() {
        Some((k, _)) => Err(PyValueError::new_err(format!("unknown setting `{k}`"))),
        None => Ok(()),
    }
}

/// Runs a comparison study. Keyword settings use the model and study field
/// names (`candidates`, `voters`, `seed`, `rating_mode`, `perturbation_sd`,
/// `systems`, `all_trials`, ...). With `plan=True` the standard sub-studies
/// run and a list comes back.
#[pyfunction]
#[pyo3(signature = (study, trials = 1000, plan = false, **settings))]
fn run_comparison(
    py: Python<'_>,
    study: &str,
    trials: u64,
    plan: bool,
    settings: Option<&Bound<'_, PyDict>>,
) -> PyResult<Py<PyAny>> {
    let kind: StudyKind = study.parse().map_err(err)?;
    let mut cfg = StudyConfig::new(kind);
    let (model, rest) = model_from(settings, cfg.model.clone())?;
    cfg.model = model;
    cfg.trials = trials;
    let mut systems = None;
    let bad = |k: &str, v: &str| PyValueError::new_err(format!("bad value `{v}` for `{k}`"));
    for (k, v) in &rest {
        match k.as_str() {
            "perturbation_sd" => cfg.perturbation_sd = v.parse().map_err(|_| bad(k, v))?,
            "population" => cfg.population = v.parse().map_err(|_| bad(k, v))?,
            "all_trials" => cfg.all_trials = v.eq_ignore_ascii_case("true"),
            "reference" => cfg.reference = system(v)?,
            "systems" => systems = Some(System::parse_list(v).map_err(err)?),
            _ => no_extra(&[(k.clone(), v.clone())])?,
        }
    }
    cfg.systems = systems.unwrap_or_else(|| cfg.default_systems());
    let reports = py.detach(|| if plan { run_plan(&cfg) } else { run_study(&cfg).map(|r| vec![r]) }).map_err(err)?;
    if plan {
        serialize(py, &reports)
    } else {
        serialize(py, &reports[0])
    }
}

/// Share of generated electorates whose pairwise defeats form a cycle.
#[pyfunction]
#[pyo3(signature = (trials = 10_000, **settings))]
fn paradox_rate(py: Python<'_>, trials: u64, settings: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let (model, rest) = model_from(settings, ModelConfig::default())?;
    no_extra(&rest)?;
    let r = py.detach(|| voter_model::paradox_rate(&model, trials)).map_err(err)?;
    serialize(py, &r)
}

/// How often `method` still ties on paradox trials.
#[pyfunction]
#[pyo3(signature = (method, trials = 1000, **settings))]
fn tie_rate(py: Python<'_>, method: &str, trials: u64, settings: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let m = system(method)?;
    let (model, rest) = model_from(settings, ModelConfig::default())?;
    no_extra(&rest)?;
    let r = py.detach(|| studies::run_tie_rate_study(&model, m, trials)).map_err(err)?;
    serialize(py, &r)
}

/// Single-step against full CMO on paradox trials.
#[pyfunction]
#[pyo3(signature = (trials = 1000, **settings))]
fn cmo_study(py: Python<'_>, trials: u64, settings: Option<&Bound<'_, PyDict>>) -> PyResult<Py<PyAny>> {
    let (model, rest) = model_from(settings, ModelConfig::default())?;
    no_extra(&rest)?;
    let r = py.detach(|| studies::run_cmo_study(&model, trials)).map_err(err)?;
    serialize(py, &r)
}

#[pymodule]
#[pyo3(name = "electlab")]
fn electlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Profile>()?;
    m.add_class::<Tally>()?;
    m.add_function(wrap_pyfunction!(systems, m)?)?;
    m.add_function(wrap_pyfunction!(example_files, m)?)?;
    m.add_function(wrap_pyfunction!(run_comparison, m)?)?;
    m.add_function(wrap_pyfunction!(paradox_rate, m)?)?;
    m.add_function(wrap_pyfunction!(tie_rate, m)?)?;
    m.add_function(wrap_pyfunction!(cmo_study, m)?)?;
    Ok(())
}
