//! Level and inequality measures for a single ordinal distribution, and the
//! deterministic dominance predicates between two of them.
//!
//! Category labels never enter any computation: a distribution is just the
//! ordered vector of category proportions, so relabelling categories with any
//! increasing sequence leaves every result unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest deviation of an input sum from 1 that is silently renormalized.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Proportions of a population across `K >= 2` ordered categories.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Builds a vector from proportions that already sum to one.
    ///
    /// Sums within [`RENORMALIZE_TOLERANCE`] of one are renormalized; anything
    /// further off is rejected as a data error.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum = check_entries(&probs)?;
        if (sum - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!(
                "proportions sum to {sum}, expected 1"
            )));
        }
        Ok(Self::normalized(probs, sum))
    }

    /// Builds a vector by normalizing nonnegative weights (counts, rounded
    /// published proportions, ...) by their total.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum = check_entries(&weights)?;
        if sum <= 0.0 {
            return Err(Error::InvalidProbabilities(
                "weights sum to zero".to_string(),
            ));
        }
        Ok(Self::normalized(weights, sum))
    }

    /// All mass in `category` (0-based) out of `k` categories.
    pub fn degenerate(category: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {k}"
            )));
        }
        if category >= k {
            return Err(Error::Domain(format!(
                "category {category} out of range for {k} categories"
            )));
        }
        let mut probs = vec![0.0; k];
        probs[category] = 1.0;
        Ok(Self { probs })
    }

    /// Wraps a vector produced by a sampler. The caller guarantees entries
    /// are nonnegative with a positive sum.
    pub(crate) fn from_normalized_unchecked(probs: Vec<f64>) -> Self {
        debug_assert!(probs.len() >= 2);
        let sum: f64 = probs.iter().sum();
        Self::normalized(probs, sum)
    }

    fn normalized(mut probs: Vec<f64>, sum: f64) -> Self {
        if sum != 1.0 {
            for p in &mut probs {
                *p /= sum;
            }
        }
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of categories.
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn cdf(&self) -> CdfVector {
        cdf(self)
    }

    /// True when all mass sits in a single category (perfect equality).
    pub fn is_degenerate(&self) -> bool {
        self.probs.iter().filter(|&&p| p > 0.0).count() == 1
    }
}

impl<'de> Deserialize<'de> for ProbabilityVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let probs = Vec::<f64>::deserialize(d)?;
        ProbabilityVector::new(probs).map_err(serde::de::Error::custom)
    }
}

fn check_entries(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidDimension(format!(
            "need at least 2 categories, got {}",
            values.len()
        )));
    }
    if let Some((k, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(Error::InvalidProbabilities(format!(
            "entry {} is {v}; entries must be finite and nonnegative",
            k + 1
        )));
    }
    Ok(values.iter().sum())
}

/// Cumulative proportions `F(1), ..., F(K)` with `F(K) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CdfVector {
    cum: Vec<f64>,
}

impl CdfVector {
    pub fn values(&self) -> &[f64] {
        &self.cum
    }

    /// `F(k)` for 1-based `k`, with `F(0) = 0`.
    pub fn at(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }
}

pub fn cdf(p: &ProbabilityVector) -> CdfVector {
    let mut acc = 0.0;
    let mut cum: Vec<f64> = p
        .probs
        .iter()
        .map(|&x| {
            acc += x;
            acc.min(1.0)
        })
        .collect();
    // absorb rounding left over from normalization
    if let Some(last) = cum.last_mut() {
        *last = 1.0;
    }
    CdfVector { cum }
}

/// Share of the population in the two lowest categories, `F(2)`.
///
/// Exactly 1 when `K = 2`.
pub fn headcount(p: &ProbabilityVector) -> Result<f64> {
    match p.k() {
        0 | 1 => Err(Error::InvalidDimension(format!(
            "headcount needs at least 2 categories, got {}",
            p.k()
        ))),
        2 => Ok(1.0),
        _ => Ok(p.probs[0] + p.probs[1]),
    }
}

/// Downward-looking Cowell–Flachaire inequality index `CF(alpha)`,
/// `0 <= alpha < 1`.
///
/// Empty categories contribute nothing, including those with `F(k) = 0`.
pub fn cf_index(p: &ProbabilityVector, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!(
            "CF alpha must lie in [0, 1), got {alpha}"
        )));
    }
    let cdf = p.cdf();
    let terms = p.probs.iter().zip(cdf.values()).filter(|(&pk, _)| pk > 0.0);
    let value = if alpha == 0.0 {
        -terms.map(|(&pk, &f)| pk * f.ln()).sum::<f64>()
    } else {
        // sum p (F^a - 1) equals sum p F^a - 1 because the p sum to one;
        // expm1 keeps precision as alpha approaches zero
        let s: f64 = terms.map(|(&pk, &f)| pk * (alpha * f.ln()).exp_m1()).sum();
        s / (alpha * (alpha - 1.0))
    };
    Ok(value.max(0.0))
}

/// Piecewise-linear generalized Lorenz curve.
///
/// Breakpoints sit at `(F(k), GL(F(k)))` for `k = 0..=K`; the segment ending
/// at `F(k)` has slope `F(k)`. Empty categories produce coincident
/// breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlCurve {
    breakpoints: Vec<(f64, f64)>,
}

impl GlCurve {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// `GL(1) = sum_k p(k) F(k)`.
    pub fn endpoint(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |b| b.1)
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!(
                "population share must lie in [0, 1], got {u}"
            )));
        }
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        let bp = &self.breakpoints;
        // first breakpoint at or beyond u (index >= 1 whenever u > 0)
        let i = bp.partition_point(|b| b.0 < u).clamp(1, bp.len() - 1);
        let (u0, v0) = bp[i - 1];
        let (u1, v1) = bp[i];
        if u1 <= u0 {
            return v1;
        }
        let t = ((u - u0) / (u1 - u0)).clamp(0.0, 1.0);
        v0 + t * (v1 - v0)
    }

    /// Values at each point of a grid.
    pub fn eval_grid(&self, grid: &UGrid) -> Vec<f64> {
        grid.points()
            .iter()
            .map(|&u| self.eval_unchecked(u))
            .collect()
    }
}

pub fn gl_curve(p: &ProbabilityVector) -> GlCurve {
    let cdf = p.cdf();
    let mut breakpoints = Vec::with_capacity(p.k() + 1);
    breakpoints.push((0.0, 0.0));
    let mut gl = 0.0;
    for (&pk, &f) in p.probs.iter().zip(cdf.values()) {
        gl += pk * f;
        breakpoints.push((f, gl.min(f)));
    }
    GlCurve { breakpoints }
}

pub fn gl_eval(curve: &GlCurve, u: f64) -> Result<f64> {
    curve.eval(u)
}

/// Jenkins index: twice the area between the diagonal and the GL curve.
pub fn j_index(p: &ProbabilityVector) -> f64 {
    let curve = gl_curve(p);
    let bp = curve.breakpoints();
    let area2: f64 = p
        .probs
        .iter()
        .enumerate()
        .map(|(k, &pk)| pk * (bp[k].1 + bp[k + 1].1))
        .sum();
    (1.0 - area2).max(0.0)
}

/// Interior population shares at which GL curves are compared.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UGrid {
    points: Vec<f64>,
}

impl UGrid {
    pub const DEFAULT_STEP: f64 = 0.01;

    /// Sorted points strictly inside `(0, 1)`.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("comparison grid is empty".to_string()));
        }
        if points.iter().any(|&u| !(u > 0.0 && u < 1.0)) {
            return Err(Error::Domain(
                "grid points must lie strictly inside (0, 1)".to_string(),
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "grid points must be strictly increasing".to_string(),
            ));
        }
        Ok(Self { points })
    }

    /// `step, 2*step, ...` up to but excluding 1.
    pub fn with_step(step: f64) -> Result<Self> {
        if !(step > 0.0 && step <= 0.5) {
            return Err(Error::Domain(format!(
                "grid step must lie in (0, 0.5], got {step}"
            )));
        }
        let points = (1..)
            // snap to 12 decimals so step 0.01 reproduces the default grid
            .map(|i| (i as f64 * step * 1e12).round() / 1e12)
            .take_while(|&u| u < 1.0 - 1e-9)
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for UGrid {
    /// 0.01, 0.02, ..., 0.99.
    fn default() -> Self {
        Self {
            points: (1..100).map(|i| i as f64 / 100.0).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceOutcome {
    XDominates,
    YDominates,
    #[serde(rename = "none")]
    Neither,
}

impl DominanceOutcome {
    pub fn swapped(self) -> Self {
        match self {
            Self::XDominates => Self::YDominates,
            Self::YDominates => Self::XDominates,
            Self::Neither => Self::Neither,
        }
    }
}

/// Classifies paired values where "X dominates" means `x <= y` everywhere
/// and `x < y` somewhere.
pub(crate) fn classify_below<I>(pairs: I) -> DominanceOutcome
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let (mut x_weak, mut x_strict, mut y_weak, mut y_strict) = (true, false, true, false);
    for (x, y) in pairs {
        if x > y {
            x_weak = false;
            y_strict = true;
        } else if x < y {
            y_weak = false;
            x_strict = true;
        }
        if !x_weak && !y_weak {
            return DominanceOutcome::Neither;
        }
    }
    if x_weak && x_strict {
        DominanceOutcome::XDominates
    } else if y_weak && y_strict {
        DominanceOutcome::YDominates
    } else {
        DominanceOutcome::Neither
    }
}

fn check_same_k(x: &ProbabilityVector, y: &ProbabilityVector) -> Result<()> {
    if x.k() != y.k() {
        return Err(Error::DimensionMismatch {
            what: "category counts",
            left: x.k(),
            right: y.k(),
        });
    }
    Ok(())
}

/// First-order stochastic dominance over `k = 1..K-1`.
pub fn fsd_compare(x: &ProbabilityVector, y: &ProbabilityVector) -> Result<DominanceOutcome> {
    check_same_k(x, y)?;
    Ok(fsd_outcome(&x.cdf(), &y.cdf()))
}

pub(crate) fn fsd_outcome(fx: &CdfVector, fy: &CdfVector) -> DominanceOutcome {
    let k = fx.cum.len();
    classify_below(
        fx.cum[..k - 1]
            .iter()
            .copied()
            .zip(fy.cum[..k - 1].iter().copied()),
    )
}

/// Restricted dominance over the two lowest categories: strictly smaller
/// headcount and strictly smaller bottom-category share.
///
/// With `K = 2` the headcount is identically one, so the result is always
/// [`DominanceOutcome::Neither`].
pub fn restricted_fsd_compare(
    x: &ProbabilityVector,
    y: &ProbabilityVector,
) -> Result<DominanceOutcome> {
    check_same_k(x, y)?;
    let (hx, hy) = (headcount(x)?, headcount(y)?);
    let (px, py) = (x.probs[0], y.probs[0]);
    Ok(if hx < hy && px < py {
        DominanceOutcome::XDominates
    } else if hy < hx && py < px {
        DominanceOutcome::YDominates
    } else {
        DominanceOutcome::Neither
    })
}

/// Generalized Lorenz dominance checked at the grid points.
pub fn gld_compare(
    x: &ProbabilityVector,
    y: &ProbabilityVector,
    grid: &UGrid,
) -> Result<DominanceOutcome> {
    check_same_k(x, y)?;
    let gx = gl_curve(x).eval_grid(grid);
    let gy = gl_curve(y).eval_grid(grid);
    Ok(gld_outcome(&gx, &gy))
}

pub(crate) fn gld_outcome(gx: &[f64], gy: &[f64]) -> DominanceOutcome {
    // higher curve dominates, so compare with roles of x and y flipped
    classify_below(gy.iter().copied().zip(gx.iter().copied()))
}
