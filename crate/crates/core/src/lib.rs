//! Bayesian inference for ordinal categorical distributions.
//!
//! Posterior draws of category proportions (conjugate Dirichlet for counts,
//! weighted Bayesian bootstrap for survey microdata) feed level and
//! inequality indices (headcount `H`, Cowell–Flachaire `CF(alpha)`, Jenkins
//! `J`), generalized Lorenz curves, and posterior probabilities of
//! first-order stochastic dominance and generalized Lorenz dominance.

pub mod analysis;
pub mod comparison;
pub mod config;
pub mod error;
pub mod io;
pub mod measures;
pub mod plot;
pub mod sampler;
pub mod tables;

pub use comparison::{
    fsd_probabilities, gld_probabilities, index_posterior, kde, probability_curve_fsd,
    probability_curve_gld, restricted_fsd_probabilities, summarize, Criterion, DensityEstimate,
    Direction, DominanceReport, IndexKind, IndexPosterior, ProbabilityCurve, Summary,
};
pub use error::{Error, Result};
pub use measures::{
    cdf, cf_index, fsd_compare, gl_curve, gl_eval, gld_compare, headcount, j_index,
    restricted_fsd_compare, CdfVector, DominanceOutcome, GlCurve, ProbabilityVector, UGrid,
};
pub use sampler::{
    conjugate_draws, dirichlet_sample, weighted_bootstrap_draws, CountData, PosteriorDraws,
    WeightedMicrodata, WeightedRecord,
};
