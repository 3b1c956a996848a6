//! Posterior summaries of indices and dominance probabilities.
//!
//! Dominance probabilities pair draw `m` of X with draw `m` of Y and count
//! the draws that satisfy each criterion. Scalar reports keep the
//! strict-somewhere requirement, so identical inputs land in "none".
//! Probability curves use weak prefix inequalities; ties only occur for
//! contrived discrete inputs.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::{
    cf_index, fsd_outcome, gl_curve, gld_outcome, headcount, j_index, restricted_fsd_compare,
    DominanceOutcome, ProbabilityVector, UGrid,
};
use crate::sampler::PosteriorDraws;

/// Which index an [`IndexPosterior`] holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexKind {
    Headcount,
    Jenkins,
    CowellFlachaire(f64),
}

impl IndexKind {
    /// Builds a kind from a name (`H`, `J`, `CF`) and an alpha that must be
    /// present exactly when the name is `CF`.
    pub fn from_parts(name: &str, alpha: Option<f64>) -> Result<Self> {
        match (name.to_ascii_uppercase().as_str(), alpha) {
            ("H", None) => Ok(Self::Headcount),
            ("J", None) => Ok(Self::Jenkins),
            ("CF", Some(a)) => {
                if !(0.0..1.0).contains(&a) {
                    return Err(Error::Config(format!(
                        "CF alpha must lie in [0, 1), got {a}"
                    )));
                }
                Ok(Self::CowellFlachaire(a))
            }
            ("CF", None) => Err(Error::Config("CF index requires alpha".to_string())),
            ("H" | "J", Some(_)) => Err(Error::Config(format!("index {name} does not take alpha"))),
            _ => Err(Error::Config(format!("unknown index {name:?}"))),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Self::CowellFlachaire(a) => Some(*a),
            _ => None,
        }
    }

    pub fn evaluate(&self, p: &ProbabilityVector) -> Result<f64> {
        match *self {
            Self::Headcount => headcount(p),
            Self::Jenkins => Ok(j_index(p)),
            Self::CowellFlachaire(a) => cf_index(p, a),
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Headcount => f.write_str("H"),
            Self::Jenkins => f.write_str("J"),
            Self::CowellFlachaire(a) => write!(f, "CF({a})"),
        }
    }
}

impl Serialize for IndexKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One index value per posterior draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexPosterior {
    pub kind: IndexKind,
    pub values: Vec<f64>,
}

pub fn index_posterior(draws: &PosteriorDraws, kind: IndexKind) -> Result<IndexPosterior> {
    let values = draws
        .rows()
        .par_iter()
        .map(|p| kind.evaluate(p))
        .collect::<Result<Vec<f64>>>()?;
    Ok(IndexPosterior { kind, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
}

impl Summary {
    /// `"mean (sd)"` at four decimals.
    pub fn cell(&self) -> String {
        format!("{:.4} ({:.4})", self.mean, self.sd)
    }
}

pub fn summarize(ip: &IndexPosterior) -> Result<Summary> {
    summarize_values(&ip.values)
}

/// Sample mean, sd (divisor `n - 1`) and 2.5/50/97.5% quantiles.
pub fn summarize_values(values: &[f64]) -> Result<Summary> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientDraws { needed: 2, got: n });
    }
    // Welford: constant input gives its value and a zero sd exactly
    let (mut mean, mut m2) = (0.0, 0.0);
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let var = m2 / (n - 1) as f64;
    let sorted = sorted(values);
    Ok(Summary {
        mean,
        sd: var.sqrt(),
        q025: quantile_sorted(&sorted, 0.025),
        median: quantile_sorted(&sorted, 0.5),
        q975: quantile_sorted(&sorted, 0.975),
    })
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Linear interpolation between order statistics at position `(n - 1) q`.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "fsd")]
    Fsd,
    #[serde(rename = "restricted-fsd")]
    RestrictedFsd,
    #[serde(rename = "gld")]
    Gld,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Fsd, Criterion::RestrictedFsd, Criterion::Gld];

    pub fn label(&self) -> &'static str {
        match self {
            Self::Fsd => "FSD",
            Self::RestrictedFsd => "rest FSD",
            Self::Gld => "GLD",
        }
    }
}

/// Posterior probabilities that X dominates, Y dominates, or neither.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub criterion: Criterion,
    pub draws: usize,
    pub count_x: usize,
    pub count_y: usize,
    pub count_none: usize,
    pub prob_x: f64,
    pub prob_y: f64,
    pub prob_none: f64,
}

impl DominanceReport {
    fn from_counts(criterion: Criterion, counts: [usize; 3]) -> Self {
        let draws: usize = counts.iter().sum();
        let m = draws as f64;
        let prob_x = counts[0] as f64 / m;
        let mut prob_y = counts[1] as f64 / m;
        // the remainder absorbs rounding (at most one ulp) so the sum is exactly 1
        let prob_none = if counts[2] == 0 {
            if prob_x + prob_y != 1.0 {
                prob_y = 1.0 - prob_x;
            }
            0.0
        } else {
            1.0 - (prob_x + prob_y)
        };
        Self {
            criterion,
            draws,
            count_x: counts[0],
            count_y: counts[1],
            count_none: counts[2],
            prob_x,
            prob_y,
            prob_none,
        }
    }
}

fn check_pair(x: &PosteriorDraws, y: &PosteriorDraws) -> Result<()> {
    if x.m() != y.m() {
        return Err(Error::DimensionMismatch {
            what: "draw counts",
            left: x.m(),
            right: y.m(),
        });
    }
    if x.k() != y.k() {
        return Err(Error::DimensionMismatch {
            what: "category counts",
            left: x.k(),
            right: y.k(),
        });
    }
    Ok(())
}

fn tally<F>(x: &PosteriorDraws, y: &PosteriorDraws, classify: F) -> Result<[usize; 3]>
where
    F: Fn(&ProbabilityVector, &ProbabilityVector) -> Result<DominanceOutcome> + Sync,
{
    check_pair(x, y)?;
    x.rows()
        .par_iter()
        .zip(y.rows().par_iter())
        .map(|(a, b)| {
            classify(a, b).map(|o| match o {
                DominanceOutcome::XDominates => [1, 0, 0],
                DominanceOutcome::YDominates => [0, 1, 0],
                DominanceOutcome::Neither => [0, 0, 1],
            })
        })
        .try_reduce(
            || [0; 3],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]),
        )
}

pub fn fsd_probabilities(x: &PosteriorDraws, y: &PosteriorDraws) -> Result<DominanceReport> {
    let counts = tally(x, y, |a, b| Ok(fsd_outcome(&a.cdf(), &b.cdf())))?;
    Ok(DominanceReport::from_counts(Criterion::Fsd, counts))
}

pub fn restricted_fsd_probabilities(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
) -> Result<DominanceReport> {
    let counts = tally(x, y, restricted_fsd_compare)?;
    Ok(DominanceReport::from_counts(
        Criterion::RestrictedFsd,
        counts,
    ))
}

pub fn gld_probabilities(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
    grid: &UGrid,
) -> Result<DominanceReport> {
    let counts = tally(x, y, |a, b| {
        Ok(gld_outcome(
            &gl_curve(a).eval_grid(grid),
            &gl_curve(b).eval_grid(grid),
        ))
    })?;
    Ok(DominanceReport::from_counts(Criterion::Gld, counts))
}

pub fn dominance_probabilities(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
    criterion: Criterion,
    grid: &UGrid,
) -> Result<DominanceReport> {
    match criterion {
        Criterion::Fsd => fsd_probabilities(x, y),
        Criterion::RestrictedFsd => restricted_fsd_probabilities(x, y),
        Criterion::Gld => gld_probabilities(x, y, grid),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    XOverY,
    YOverX,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveAxis {
    /// Categories `1..=K-1`.
    Categories(Vec<usize>),
    Grid(Vec<f64>),
}

impl CurveAxis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Categories(k) => k.iter().map(|&k| k as f64).collect(),
            Self::Grid(u) => u.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Categories(k) => k.len(),
            Self::Grid(u) => u.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Probability that dominance holds over every axis point up to each point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityCurve {
    pub axis: CurveAxis,
    pub probs: Vec<f64>,
    pub direction: Direction,
}

impl ProbabilityCurve {
    pub fn min(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `probs[i]` = share of draws whose first failing axis point lies after
/// point `i`. `first_failure` returns the failing index or `len`.
fn prefix_curve<F>(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
    len: usize,
    direction: Direction,
    first_failure: F,
) -> Result<Vec<f64>>
where
    F: Fn(&ProbabilityVector, &ProbabilityVector) -> usize + Sync,
{
    check_pair(x, y)?;
    let (a, b) = match direction {
        Direction::XOverY => (x, y),
        Direction::YOverX => (y, x),
    };
    let hist = a
        .rows()
        .par_iter()
        .zip(b.rows().par_iter())
        .fold(
            || vec![0usize; len + 1],
            |mut h, (p, q)| {
                h[first_failure(p, q)] += 1;
                h
            },
        )
        .reduce(
            || vec![0usize; len + 1],
            |mut h, g| {
                h.iter_mut().zip(g).for_each(|(a, b)| *a += b);
                h
            },
        );
    let m = x.m() as f64;
    // draws surviving point i are those failing at i + 1 or later
    let mut surviving = x.m();
    Ok(hist[..len]
        .iter()
        .map(|&failed_here| {
            surviving -= failed_here;
            surviving as f64 / m
        })
        .collect())
}

/// FSD probability curve over categories `1..=K-1`.
pub fn probability_curve_fsd(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
    direction: Direction,
) -> Result<ProbabilityCurve> {
    let len = x.k().saturating_sub(1);
    let probs = prefix_curve(x, y, len, direction, |p, q| {
        let (fp, fq) = (p.cdf(), q.cdf());
        fp.values()[..len]
            .iter()
            .zip(&fq.values()[..len])
            .position(|(a, b)| a > b)
            .unwrap_or(len)
    })?;
    Ok(ProbabilityCurve {
        axis: CurveAxis::Categories((1..=len).collect()),
        probs,
        direction,
    })
}

/// GLD probability curve over the grid.
pub fn probability_curve_gld(
    x: &PosteriorDraws,
    y: &PosteriorDraws,
    grid: &UGrid,
    direction: Direction,
) -> Result<ProbabilityCurve> {
    let probs = prefix_curve(x, y, grid.len(), direction, |p, q| {
        let gp = gl_curve(p).eval_grid(grid);
        let gq = gl_curve(q).eval_grid(grid);
        gp.iter()
            .zip(&gq)
            .position(|(a, b)| a < b)
            .unwrap_or(grid.len())
    })?;
    Ok(ProbabilityCurve {
        axis: CurveAxis::Grid(grid.points().to_vec()),
        probs,
        direction,
    })
}

/// Number of abscissae in a [`DensityEstimate`].
pub const KDE_GRID_POINTS: usize = 512;
/// Smallest sample accepted by [`kde`].
pub const KDE_MIN_SAMPLES: usize = 10;

/// Gaussian kernel density estimate on an evenly spaced grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityEstimate {
    /// Trapezoid-rule integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(u, d)| 0.5 * (u[1] - u[0]) * (d[0] + d[1]))
            .sum()
    }
}

/// Silverman's rule of thumb `0.9 min(sd, IQR / 1.34) n^(-1/5)`.
///
/// Falls back to the sd when the IQR is zero.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    let s = summarize_values(values)?;
    if s.sd.is_nan() || s.sd <= 0.0 {
        return Err(Error::DegenerateSample(
            "sample has zero variance".to_string(),
        ));
    }
    let sorted = sorted(values);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 {
        s.sd.min(iqr / 1.34)
    } else {
        s.sd
    };
    Ok(0.9 * spread * (values.len() as f64).powf(-0.2))
}

pub fn kde(ip: &IndexPosterior, bandwidth: Option<f64>) -> Result<DensityEstimate> {
    kde_values(&ip.values, bandwidth)
}

pub fn kde_values(values: &[f64], bandwidth: Option<f64>) -> Result<DensityEstimate> {
    let n = values.len();
    if n < KDE_MIN_SAMPLES {
        return Err(Error::InsufficientDraws {
            needed: KDE_MIN_SAMPLES,
            got: n,
        });
    }
    let auto = silverman_bandwidth(values)?;
    let h = match bandwidth {
        Some(h) if h.is_finite() && h > 0.0 => h,
        Some(h) => {
            return Err(Error::Domain(format!(
                "bandwidth must be positive, got {h}"
            )))
        }
        None => auto,
    };
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let step = (hi - lo) / (KDE_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..KDE_GRID_POINTS).map(|i| lo + i as f64 * step).collect();
    let norm = 1.0 / (n as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let density = grid
        .par_iter()
        .map(|&g| {
            values
                .iter()
                .map(|&v| {
                    let z = (g - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    Ok(DensityEstimate {
        grid,
        density,
        bandwidth: h,
    })
}
