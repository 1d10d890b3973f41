//! Scenario files.
//!
//! A scenario is plain text, one declaration per line. `#` starts a comment.
//!
//! ```text
//! # two machines sharing 10 units of divisible work
//! mode = divisible
//! regime = identical_speed
//! total_work = 10
//! machine id=m1 mu=10 gamma=0 upsilon=1
//! machine id=m2 mu=10 gamma=9
//! ```
//!
//! Header lines are `key = value` with keys `mode` (`divisible` or
//! `nondivisible`), `regime` (`identical_speed` or `different_speed`) and
//! `total_work`. Record lines start with `machine` (fields `id`, `mu`,
//! `gamma`, optional `upsilon` defaulting to 1) or `job` (fields `id`, `psi`).
//! Numbers are decimal with optional exponent. When `mode` is omitted it is
//! `nondivisible` if jobs are listed and `divisible` otherwise.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use emsched::{Job, Machine, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Divisible,
    Nondivisible,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Divisible => "divisible",
            Mode::Nondivisible => "nondivisible",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "divisible" => Ok(Mode::Divisible),
            "nondivisible" => Ok(Mode::Nondivisible),
            other => Err(format!(
                "unknown mode `{other}` (expected divisible or nondivisible)"
            )),
        }
    }
}

pub fn parse_regime(s: &str) -> Result<Regime, String> {
    match s {
        "identical_speed" | "identical" => Ok(Regime::IdenticalSpeed),
        "different_speed" | "different" => Ok(Regime::DifferentSpeed),
        other => Err(format!(
            "unknown regime `{other}` (expected identical_speed or different_speed)"
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub mode: Option<Mode>,
    pub regime: Option<Regime>,
    pub total_work: Option<f64>,
    pub machines: Vec<Machine>,
    pub jobs: Vec<Job>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "line {}, field `{field}`: {}", self.line, self.message),
            None => write!(f, "line {}: {}", self.line, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

fn error(line: usize, field: Option<&str>, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field: field.map(str::to_string),
        message: message.into(),
    }
}

fn number(line: usize, field: &str, raw: &str) -> Result<f64, ParseError> {
    raw.parse::<f64>().map_err(|_| {
        error(
            line,
            Some(field),
            format!("expected a number, found `{raw}`"),
        )
    })
}

/// `key=value` fields of a record line, checked against the allowed keys.
fn fields<'a>(
    line: usize,
    tokens: impl Iterator<Item = &'a str>,
    allowed: &[&str],
) -> Result<Vec<(&'a str, &'a str)>, ParseError> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| error(line, None, format!("expected key=value, found `{token}`")))?;
        if !allowed.contains(&key) {
            return Err(error(line, Some(key), "unknown field"));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(error(line, Some(key), "given twice"));
        }
        if value.is_empty() {
            return Err(error(line, Some(key), "missing value"));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn lookup<'a>(fields: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    fields.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn required<'a>(line: usize, fields: &[(&str, &'a str)], key: &str) -> Result<&'a str, ParseError> {
    lookup(fields, key).ok_or_else(|| error(line, Some(key), "required field missing"))
}

pub fn parse(text: &str) -> Result<Scenario, ParseError> {
    let mut scenario = Scenario::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        match head {
            "machine" => {
                let f = fields(line, tokens, &["id", "mu", "gamma", "upsilon"])?;
                let id = required(line, &f, "id")?;
                let mu = number(line, "mu", required(line, &f, "mu")?)?;
                let gamma = number(line, "gamma", required(line, &f, "gamma")?)?;
                let upsilon = match lookup(&f, "upsilon") {
                    Some(raw) => number(line, "upsilon", raw)?,
                    None => 1.0,
                };
                scenario.machines.push(Machine::new(id, mu, gamma, upsilon));
            }
            "job" => {
                let f = fields(line, tokens, &["id", "psi"])?;
                let id = required(line, &f, "id")?;
                let psi = number(line, "psi", required(line, &f, "psi")?)?;
                scenario.jobs.push(Job::new(id, psi));
            }
            _ => {
                let (key, value) = content.split_once('=').ok_or_else(|| {
                    error(
                        line,
                        None,
                        format!("expected `key = value`, `machine` or `job`, found `{head}`"),
                    )
                })?;
                let (key, value) = (key.trim(), value.trim());
                if key.contains(char::is_whitespace) {
                    return Err(error(line, None, format!("unknown record type `{head}`")));
                }
                if value.is_empty() {
                    return Err(error(line, Some(key), "missing value"));
                }
                match key {
                    "mode" => {
                        if scenario.mode.is_some() {
                            return Err(error(line, Some(key), "given twice"));
                        }
                        scenario.mode = Some(value.parse().map_err(|e| error(line, Some(key), e))?);
                    }
                    "regime" => {
                        if scenario.regime.is_some() {
                            return Err(error(line, Some(key), "given twice"));
                        }
                        scenario.regime =
                            Some(parse_regime(value).map_err(|e| error(line, Some(key), e))?);
                    }
                    "total_work" => {
                        if scenario.total_work.is_some() {
                            return Err(error(line, Some(key), "given twice"));
                        }
                        scenario.total_work = Some(number(line, key, value)?);
                    }
                    other => return Err(error(line, Some(other), "unknown setting")),
                }
            }
        }
    }
    Ok(scenario)
}

impl Scenario {
    /// Mode given in the file, or inferred from whether jobs are listed.
    pub fn effective_mode(&self) -> Mode {
        self.mode.unwrap_or(if self.jobs.is_empty() {
            Mode::Divisible
        } else {
            Mode::Nondivisible
        })
    }

    /// Serializes in the format [`parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(mode) = self.mode {
            let _ = writeln!(out, "mode = {}", mode.as_str());
        }
        if let Some(regime) = self.regime {
            let _ = writeln!(out, "regime = {}", regime.as_str());
        }
        if let Some(w) = self.total_work {
            let _ = writeln!(out, "total_work = {w}");
        }
        for m in &self.machines {
            let _ = writeln!(
                out,
                "machine id={} mu={} gamma={} upsilon={}",
                m.id, m.mu, m.gamma, m.upsilon
            );
        }
        for j in &self.jobs {
            let _ = writeln!(out, "job id={} psi={}", j.id, j.psi);
        }
        out
    }
}
