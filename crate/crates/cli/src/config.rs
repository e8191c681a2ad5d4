//! Flat `key = value` configuration with dotted keys.

use crate::CliError;
use hoc2d::solver::{InnerSolver, SolverConfig};
use hoc2d::Execution;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

pub const SOLVER_KEYS: &[&str] = &[
    "solver.tolerance",
    "solver.max_outer",
    "solver.inner",
    "solver.relaxation",
    "solver.restart",
    "solver.sweeps",
    "solver.parallel",
];

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cfg.set_pair(line)
                .map_err(|e| CliError::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Apply one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got `{pair}`")))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("empty key in `{pair}`")));
        }
        self.values.insert(key.to_owned(), v.trim().to_owned());
        Ok(())
    }

    /// Reject keys the subcommand does not understand.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        let allowed: BTreeSet<&str> = allowed.iter().chain(SOLVER_KEYS).copied().collect();
        let unknown: Vec<&str> = self
            .values
            .keys()
            .map(String::as_str)
            .filter(|k| !allowed.contains(k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "unknown key(s): {}",
                unknown.join(", ")
            )))
        }
    }

    pub fn get_str<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map_or(default, String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| CliError::Config(format!("cannot parse {key} = `{raw}`"))),
        }
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, CliError> {
        match self.values.get(key) {
            None => Ok(default.to_vec()),
            Some(raw) => raw
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::Config(format!("cannot parse entry `{s}` of {key}")))
                })
                .collect(),
        }
    }

    pub fn solver(&self, default: SolverConfig) -> Result<SolverConfig, CliError> {
        let inner: InnerSolver = self
            .get_str("solver.inner", &default.inner.to_string())
            .parse()
            .map_err(|e: hoc2d::Error| CliError::Config(e.to_string()))?;
        let parallel = self.get("solver.parallel", default.exec.is_parallel())?;
        let cfg = SolverConfig {
            tolerance: self.get("solver.tolerance", default.tolerance)?,
            max_outer: self.get("solver.max_outer", default.max_outer)?,
            relaxation: self.get("solver.relaxation", default.relaxation)?,
            inner,
            restart: self.get("solver.restart", default.restart)?,
            sweeps: self.get("solver.sweeps", default.sweeps)?,
            exec: if parallel {
                Execution::Parallel
            } else {
                Execution::Sequential
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
