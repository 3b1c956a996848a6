//! Posterior draws of category proportions.
//!
//! Count data use the conjugate Dirichlet posterior. Weighted microdata use
//! a Bayesian bootstrap: each draw puts Dirichlet(1, ..., 1) masses on the
//! records, scales them by the sampling weights, and aggregates by category.
//!
//! Draw `m` always comes from its own ChaCha8 stream selected by `(seed, m)`,
//! so output is identical whatever the rayon thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, Open01};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::ProbabilityVector;

/// Number of posterior draws used when none is configured.
pub const DEFAULT_DRAWS: usize = 10_000;

/// Category counts `n(1), ..., n(K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountData {
    counts: Vec<u64>,
}

impl CountData {
    /// All-zero counts are accepted; their posterior is the prior.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {}",
                counts.len()
            )));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Sample size `N`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedRecord {
    /// 1-based category.
    pub category: usize,
    pub weight: f64,
}

/// Individual records with sampling weights over `K` categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMicrodata {
    records: Vec<WeightedRecord>,
    k: usize,
}

impl WeightedMicrodata {
    pub fn new(records: Vec<WeightedRecord>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDimension(format!(
                "need at least 2 categories, got {k}"
            )));
        }
        if records.is_empty() {
            return Err(Error::Domain("microdata has no records".to_string()));
        }
        for (i, r) in records.iter().enumerate() {
            if !(r.weight.is_finite() && r.weight > 0.0) {
                return Err(Error::Domain(format!(
                    "record {} has weight {}; weights must be positive",
                    i + 1,
                    r.weight
                )));
            }
            if r.category == 0 || r.category > k {
                return Err(Error::Domain(format!(
                    "record {} has category {} outside 1..={k}",
                    i + 1,
                    r.category
                )));
            }
        }
        Ok(Self { records, k })
    }

    pub fn records(&self) -> &[WeightedRecord] {
        &self.records
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Record count `N`.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Weighted category shares of the sample.
    pub fn weighted_proportions(&self) -> ProbabilityVector {
        let mut mass = vec![0.0; self.k];
        for r in &self.records {
            mass[r.category - 1] += r.weight;
        }
        ProbabilityVector::from_normalized_unchecked(mass)
    }
}

/// `M` posterior draws of a `K`-category probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorDraws {
    draws: Vec<ProbabilityVector>,
    seed: u64,
}

impl PosteriorDraws {
    /// Wraps existing rows, which must be nonempty and share one `K`.
    pub fn from_rows(draws: Vec<ProbabilityVector>, seed: u64) -> Result<Self> {
        let first = draws
            .first()
            .ok_or_else(|| Error::Domain("no draws supplied".to_string()))?;
        let k = first.k();
        if let Some(bad) = draws.iter().find(|d| d.k() != k) {
            return Err(Error::DimensionMismatch {
                what: "draw lengths",
                left: k,
                right: bad.k(),
            });
        }
        Ok(Self { draws, seed })
    }

    pub fn rows(&self) -> &[ProbabilityVector] {
        &self.draws
    }

    /// Number of draws `M`.
    pub fn m(&self) -> usize {
        self.draws.len()
    }

    pub fn k(&self) -> usize {
        self.draws[0].k()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Posterior mean of the proportions.
    pub fn mean(&self) -> ProbabilityVector {
        let mut acc = vec![0.0; self.k()];
        for d in &self.draws {
            for (a, p) in acc.iter_mut().zip(d.probs()) {
                *a += p;
            }
        }
        ProbabilityVector::from_normalized_unchecked(acc)
    }
}

/// Random stream for draw `index` under `seed`.
pub fn draw_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// SplitMix64 finalizer; derives well-separated child seeds.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Dirichlet distribution sampled through normalized gamma variates.
///
/// Concentrations below one use `G(a) = G(a + 1) U^(1/a)` in log space, so
/// tiny parameters yield tiny (possibly zero) proportions instead of a 0/0.
#[derive(Debug, Clone)]
pub struct Dirichlet {
    parts: Vec<(Gamma<f64>, Option<f64>)>,
}

impl Dirichlet {
    pub fn new(concentration: &[f64]) -> Result<Self> {
        if concentration.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "Dirichlet needs at least 2 parameters, got {}",
                concentration.len()
            )));
        }
        let parts = concentration
            .iter()
            .map(|&a| {
                if !(a.is_finite() && a > 0.0) {
                    return Err(Error::Domain(format!(
                        "Dirichlet concentration must be positive, got {a}"
                    )));
                }
                let (shape, boost) = if a < 1.0 {
                    (a + 1.0, Some(1.0 / a))
                } else {
                    (a, None)
                };
                let gamma = Gamma::new(shape, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
                Ok((gamma, boost))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { parts })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ProbabilityVector {
        let logs: Vec<f64> = self
            .parts
            .iter()
            .map(|(gamma, boost)| {
                let g: f64 = gamma.sample(rng);
                match boost {
                    Some(inv_a) => {
                        let u: f64 = Open01.sample(rng);
                        g.ln() + u.ln() * inv_a
                    }
                    None => g.ln(),
                }
            })
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let vals = logs.iter().map(|l| (l - max).exp()).collect();
        ProbabilityVector::from_normalized_unchecked(vals)
    }
}

pub fn dirichlet_sample<R: Rng + ?Sized>(
    concentration: &[f64],
    rng: &mut R,
) -> Result<ProbabilityVector> {
    Ok(Dirichlet::new(concentration)?.sample(rng))
}

fn check_draw_count(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::Domain("draw count must be at least 1".to_string()));
    }
    Ok(())
}

/// Uniform Dirichlet(1, ..., 1) prior.
pub fn uniform_prior(k: usize) -> Vec<f64> {
    vec![1.0; k]
}

/// `m` draws from the Dirichlet(counts + prior) posterior.
pub fn conjugate_draws(
    data: &CountData,
    prior: &[f64],
    m: usize,
    seed: u64,
) -> Result<PosteriorDraws> {
    check_draw_count(m)?;
    if prior.len() != data.k() {
        return Err(Error::DimensionMismatch {
            what: "prior length vs categories",
            left: prior.len(),
            right: data.k(),
        });
    }
    if prior.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::Domain(
            "prior parameters must be positive".to_string(),
        ));
    }
    let concentration: Vec<f64> = data
        .counts
        .iter()
        .zip(prior)
        .map(|(&n, &a)| n as f64 + a)
        .collect();
    let dist = Dirichlet::new(&concentration)?;
    let draws = (0..m)
        .into_par_iter()
        .map(|i| dist.sample(&mut draw_stream(seed, i as u64)))
        .collect();
    Ok(PosteriorDraws { draws, seed })
}

/// `m` weighted Bayesian bootstrap draws.
pub fn weighted_bootstrap_draws(
    data: &WeightedMicrodata,
    m: usize,
    seed: u64,
) -> Result<PosteriorDraws> {
    check_draw_count(m)?;
    if data.is_empty() {
        return Err(Error::Domain("microdata has no records".to_string()));
    }
    let k = data.k;
    let draws = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = draw_stream(seed, i as u64);
            // unnormalized Dirichlet(1, ..., 1) masses are iid Exp(1)
            let mut mass = vec![0.0; k];
            for r in &data.records {
                let g: f64 = Exp1.sample(&mut rng);
                mass[r.category - 1] += g * r.weight;
            }
            ProbabilityVector::from_normalized_unchecked(mass)
        })
        .collect();
    Ok(PosteriorDraws { draws, seed })
}
