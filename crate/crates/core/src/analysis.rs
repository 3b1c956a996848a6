//! End-to-end pipeline: load groups, draw posteriors, summarize, compare.

use rayon::prelude::*;
use serde::Serialize;

use crate::comparison::{
    dominance_probabilities, index_posterior, kde, probability_curve_fsd, probability_curve_gld,
    summarize, summarize_values, Criterion, DensityEstimate, Direction, DominanceReport, IndexKind,
    ProbabilityCurve, Summary, KDE_MIN_SAMPLES,
};
use crate::config::{AnalysisConfig, GroupSpec};
use crate::error::{Error, Result};
use crate::io::{load_counts, load_microdata_with_k};
use crate::measures::{gl_curve, GlCurve, UGrid};
use crate::sampler::{
    conjugate_draws, derive_seed, uniform_prior, weighted_bootstrap_draws, CountData,
    PosteriorDraws, WeightedMicrodata,
};

pub const TIE_CONVENTION: &str = "scalar reports require strict dominance at one or more points \
(identical draws count as none); probability curves use weak prefix inequalities";

#[derive(Debug, Clone)]
pub enum GroupData {
    Counts {
        data: CountData,
        labels: Option<Vec<String>>,
    },
    Microdata(WeightedMicrodata),
}

impl GroupData {
    pub fn k(&self) -> usize {
        match self {
            Self::Counts { data, .. } => data.k(),
            Self::Microdata(d) => d.k(),
        }
    }
}

/// Reads the data source named by a group spec.
pub fn load_group(spec: &GroupSpec) -> Result<GroupData> {
    if let Some(counts) = &spec.counts {
        return Ok(GroupData::Counts {
            data: CountData::new(counts.clone())?,
            labels: None,
        });
    }
    if let Some(path) = &spec.counts_file {
        let loaded = load_counts(path)?;
        return Ok(GroupData::Counts {
            data: loaded.data,
            labels: Some(loaded.labels),
        });
    }
    if let Some(path) = &spec.microdata_file {
        let loaded = load_microdata_with_k(path, spec.categories)?;
        let data = match &spec.microdata_group {
            Some(g) => loaded.get(g).cloned().ok_or_else(|| {
                Error::Config(format!(
                    "microdata file {} has no group {g:?}",
                    path.display()
                ))
            })?,
            None if loaded.datasets.len() == 1 => loaded.datasets[0].1.clone(),
            None => {
                return Err(Error::Config(format!(
                    "microdata file {} has several groups; set microdata_group",
                    path.display()
                )))
            }
        };
        return Ok(GroupData::Microdata(data));
    }
    Err(Error::Config(format!(
        "group {:?} has no data source",
        spec.name
    )))
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Counts,
    Microdata,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IndexReport {
    pub index: IndexKind,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct GroupReport {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub source: SourceKind,
    /// Count total `N`, or record count for microdata.
    pub sample_size: u64,
    pub categories: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub category_labels: Option<Vec<String>>,
    pub seed: u64,
    /// Posterior summaries of `p(1), ..., p(K)`.
    pub proportions: Vec<Summary>,
    pub posterior_mean: Vec<f64>,
    pub indices: Vec<IndexReport>,
    /// GL curve at the posterior mean.
    pub gl_curve: GlCurve,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComparisonReport {
    pub x: String,
    pub y: String,
    pub reports: Vec<DominanceReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub draws: usize,
    pub alphas: Vec<f64>,
    pub gld_grid_step: f64,
    pub tie_convention: String,
    /// Unix time the report was written. The only nondeterministic field.
    pub generated_at: Option<u64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnalysisReport {
    pub metadata: Metadata,
    pub groups: Vec<GroupReport>,
    pub comparisons: Vec<ComparisonReport>,
    /// Files written next to the report, relative to the output directory.
    pub artifacts: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct NamedCurve {
    pub x: String,
    pub y: String,
    pub criterion: Criterion,
    pub curve: ProbabilityCurve,
}

#[derive(Debug, Clone)]
pub struct NamedDensity {
    pub group: String,
    pub index: IndexKind,
    pub density: DensityEstimate,
}

/// Everything computed by [`run_analysis`]: the serializable report plus
/// draws and plot data.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub draws: Vec<(String, PosteriorDraws)>,
    pub curves: Vec<NamedCurve>,
    pub densities: Vec<NamedDensity>,
    pub grid: UGrid,
}

impl AnalysisConfig {
    pub fn index_kinds(&self) -> Vec<IndexKind> {
        let mut kinds = vec![IndexKind::Headcount, IndexKind::Jenkins];
        kinds.extend(self.alphas.iter().map(|&a| IndexKind::CowellFlachaire(a)));
        kinds
    }
}

struct GroupResult {
    report: GroupReport,
    draws: PosteriorDraws,
    densities: Vec<NamedDensity>,
}

fn analyze_group(cfg: &AnalysisConfig, index: usize, spec: &GroupSpec) -> Result<GroupResult> {
    let data = load_group(spec)?;
    let seed = derive_seed(cfg.seed, index as u64);
    let (draws, source, sample_size, category_labels) = match &data {
        GroupData::Counts { data, labels } => {
            let prior = spec
                .prior
                .clone()
                .unwrap_or_else(|| uniform_prior(data.k()));
            let draws = conjugate_draws(data, &prior, cfg.draws, seed)?;
            (draws, SourceKind::Counts, data.total(), labels.clone())
        }
        GroupData::Microdata(d) => (
            weighted_bootstrap_draws(d, cfg.draws, seed)?,
            SourceKind::Microdata,
            d.len() as u64,
            None,
        ),
    };

    let k = draws.k();
    let proportions = (0..k)
        .map(|j| {
            let col: Vec<f64> = draws.rows().iter().map(|p| p.probs()[j]).collect();
            summarize_values(&col)
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = draws.mean();

    let mut indices = Vec::new();
    let mut densities = Vec::new();
    for kind in cfg.index_kinds() {
        let ip = index_posterior(&draws, kind)?;
        indices.push(IndexReport {
            index: kind,
            summary: summarize(&ip)?,
        });
        // constant posteriors (e.g. H with K = 2) have no density
        if ip.values.len() >= KDE_MIN_SAMPLES {
            match kde(&ip, None) {
                Ok(density) => densities.push(NamedDensity {
                    group: spec.name.clone(),
                    index: kind,
                    density,
                }),
                Err(Error::DegenerateSample(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    Ok(GroupResult {
        report: GroupReport {
            name: spec.name.clone(),
            label: spec.label.clone(),
            source,
            sample_size,
            categories: k,
            category_labels,
            seed,
            proportions,
            posterior_mean: mean.probs().to_vec(),
            indices,
            gl_curve: gl_curve(&mean),
        },
        draws,
        densities,
    })
}

/// Runs every configured group and comparison. Deterministic given the
/// config; group `i` samples with a seed derived from `(seed, i)`.
pub fn run_analysis(cfg: &AnalysisConfig) -> Result<Analysis> {
    cfg.validate()?;
    let grid = UGrid::with_step(cfg.gld_grid_step)?;

    let results = cfg
        .groups
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            analyze_group(cfg, i, spec).map_err(|e| e.context(format!("group {:?}", spec.name)))
        })
        .collect::<Result<Vec<_>>>()?;

    let draws_of = |name: &str| {
        results
            .iter()
            .find(|r| r.report.name == name)
            .map(|r| &r.draws)
            .expect("validated group reference")
    };

    let mut comparisons = Vec::new();
    let mut curves = Vec::new();
    for c in &cfg.comparisons {
        let ctx = |e: Error| e.context(format!("comparison {} vs {}", c.x, c.y));
        let (dx, dy) = (draws_of(&c.x), draws_of(&c.y));
        let reports = c
            .criteria
            .iter()
            .map(|&crit| dominance_probabilities(dx, dy, crit, &grid))
            .collect::<Result<Vec<_>>>()
            .map_err(ctx)?;
        for &crit in &c.criteria {
            for direction in [Direction::XOverY, Direction::YOverX] {
                let curve = match crit {
                    Criterion::Fsd => probability_curve_fsd(dx, dy, direction),
                    Criterion::Gld => probability_curve_gld(dx, dy, &grid, direction),
                    Criterion::RestrictedFsd => continue,
                }
                .map_err(ctx)?;
                curves.push(NamedCurve {
                    x: c.x.clone(),
                    y: c.y.clone(),
                    criterion: crit,
                    curve,
                });
            }
        }
        comparisons.push(ComparisonReport {
            x: c.x.clone(),
            y: c.y.clone(),
            reports,
        });
    }

    let mut groups = Vec::new();
    let mut draws = Vec::new();
    let mut densities = Vec::new();
    for r in results {
        draws.push((r.report.name.clone(), r.draws));
        densities.extend(r.densities);
        groups.push(r.report);
    }

    Ok(Analysis {
        report: AnalysisReport {
            metadata: Metadata {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed: cfg.seed,
                draws: cfg.draws,
                alphas: cfg.alphas.clone(),
                gld_grid_step: cfg.gld_grid_step,
                tie_convention: TIE_CONVENTION.to_string(),
                generated_at: None,
            },
            groups,
            comparisons,
            artifacts: Vec::new(),
        },
        draws,
        curves,
        densities,
        grid,
    })
}
