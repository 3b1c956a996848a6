//! JSON analysis configuration.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::comparison::Criterion;
use crate::error::{Error, Result};
use crate::sampler::DEFAULT_DRAWS;

fn default_draws() -> usize {
    DEFAULT_DRAWS
}

fn default_alphas() -> Vec<f64> {
    vec![0.1, 0.9]
}

fn default_step() -> f64 {
    0.01
}

fn default_criteria() -> Vec<Criterion> {
    Criterion::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub groups: Vec<GroupSpec>,
    #[serde(default = "default_draws", alias = "M")]
    pub draws: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_step")]
    pub gld_grid_step: f64,
    #[serde(default)]
    pub comparisons: Vec<ComparisonSpec>,
}

/// One dataset. Exactly one of `counts`, `counts_file` or `microdata_file`
/// must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub microdata_file: Option<PathBuf>,
    /// Value of the microdata `group` column to select.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub microdata_group: Option<String>,
    /// Category count for microdata; inferred from the file when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<usize>,
    /// Dirichlet prior for count data; uniform when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSpec {
    pub x: String,
    pub y: String,
    #[serde(default = "default_criteria")]
    pub criteria: Vec<Criterion>,
}

impl AnalysisConfig {
    /// Config with defaults and the given groups, no comparisons.
    pub fn with_groups(groups: Vec<GroupSpec>) -> Self {
        Self {
            groups,
            draws: DEFAULT_DRAWS,
            seed: 0,
            alphas: default_alphas(),
            gld_grid_step: default_step(),
            comparisons: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid config JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file. Relative data paths are resolved
    /// against the file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text).map_err(|e| e.context(path.display().to_string()))?;
        let base = path.parent();
        for g in &mut cfg.groups {
            for p in [&mut g.counts_file, &mut g.microdata_file]
                .into_iter()
                .flatten()
            {
                *p = crate::io::resolve(base, p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.groups.is_empty() {
            return Err(Error::Config("no groups configured".to_string()));
        }
        let mut names = HashSet::new();
        for g in &self.groups {
            if g.name.is_empty() {
                return Err(Error::Config("group name is empty".to_string()));
            }
            if !names.insert(g.name.as_str()) {
                return Err(Error::Config(format!("duplicate group name {:?}", g.name)));
            }
            g.validate()?;
        }
        if self.draws < 2 {
            return Err(Error::Config(format!(
                "draws must be at least 2, got {}",
                self.draws
            )));
        }
        if !(self.gld_grid_step > 0.0 && self.gld_grid_step <= 0.5) {
            return Err(Error::Config(format!(
                "gld_grid_step must lie in (0, 0.5], got {}",
                self.gld_grid_step
            )));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(0.0..1.0).contains(*a)) {
            return Err(Error::Config(format!(
                "CF alpha must lie in [0, 1), got {a}"
            )));
        }
        for c in &self.comparisons {
            for n in [&c.x, &c.y] {
                if !names.contains(n.as_str()) {
                    return Err(Error::Config(format!(
                        "comparison references unknown group {n:?}"
                    )));
                }
            }
            if c.criteria.is_empty() {
                return Err(Error::Config(format!(
                    "comparison {} vs {} lists no criteria",
                    c.x, c.y
                )));
            }
        }
        Ok(())
    }
}

impl GroupSpec {
    pub fn from_counts(name: impl Into<String>, counts: Vec<u64>) -> Self {
        Self {
            name: name.into(),
            label: None,
            counts: Some(counts),
            counts_file: None,
            microdata_file: None,
            microdata_group: None,
            categories: None,
            prior: None,
        }
    }

    pub fn from_counts_file(name: impl Into<String>, path: impl Into<PathBuf>) -> Self {
        Self {
            counts: None,
            counts_file: Some(path.into()),
            ..Self::from_counts(name, Vec::new())
        }
    }

    fn validate(&self) -> Result<()> {
        let sources = [
            self.counts.is_some(),
            self.counts_file.is_some(),
            self.microdata_file.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if sources != 1 {
            return Err(Error::Config(format!(
                "group {:?} needs exactly one of counts, counts_file, microdata_file",
                self.name
            )));
        }
        if self.microdata_file.is_none()
            && (self.microdata_group.is_some() || self.categories.is_some())
        {
            return Err(Error::Config(format!(
                "group {:?}: microdata_group and categories apply only to microdata",
                self.name
            )));
        }
        if let Some(prior) = &self.prior {
            if self.microdata_file.is_some() {
                return Err(Error::Config(format!(
                    "group {:?}: prior applies only to count data",
                    self.name
                )));
            }
            if prior.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
                return Err(Error::Config(format!(
                    "group {:?}: prior parameters must be positive",
                    self.name
                )));
            }
        }
        Ok(())
    }
}
