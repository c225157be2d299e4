//! Linear ranking selection.
//!
//! Ranks are scaled to `[0, 1]` with the best individual at 0. The ranking
//! density is `α(x) = η(1−2x) + 2x` and its integral `β(x) = x(η(1−x) + x)`
//! is the probability of selecting an individual ranked in `[0, x]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

fn check_eta(eta: f64) -> Result<()> {
    if eta > 1.0 && eta <= 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("η must satisfy 1 < η ≤ 2 (got {eta})")))
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1] (got {x})")))
    }
}

#[inline]
pub(crate) fn alpha_unchecked(x: f64, eta: f64) -> f64 {
    eta * (1.0 - 2.0 * x) + 2.0 * x
}

#[inline]
pub(crate) fn beta_unchecked(x: f64, eta: f64) -> f64 {
    x * (eta * (1.0 - x) + x)
}

/// Rationalized root of `(η−1)γ² − ηγ + u = 0`; no cancellation near `η = 1`.
#[inline]
pub(crate) fn beta_inverse_unchecked(u: f64, eta: f64) -> f64 {
    let disc = (eta * eta - 4.0 * (eta - 1.0) * u).max(0.0);
    (2.0 * u / (eta + disc.sqrt())).clamp(0.0, 1.0)
}

/// Ranking density `α(x)`.
pub fn alpha(x: f64, eta: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_eta(eta)?;
    Ok(alpha_unchecked(x, eta))
}

/// Cumulative selection probability `β(x) = β(0, x)`.
pub fn beta(x: f64, eta: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_eta(eta)?;
    Ok(beta_unchecked(x, eta))
}

/// Probability of selecting a rank in `[x, y]`, i.e. `β(y) − β(x)`.
pub fn beta_between(x: f64, y: f64, eta: f64) -> Result<f64> {
    if x > y {
        return Err(Error::domain(format!("need x <= y (got {x} > {y})")));
    }
    Ok(beta(y, eta)? - beta(x, eta)?)
}

/// The `γ` in `[0, 1]` with `β(γ) = u`.
pub fn beta_inverse(u: f64, eta: f64) -> Result<f64> {
    check_unit("u", u)?;
    check_eta(eta)?;
    Ok(beta_inverse_unchecked(u, eta))
}

/// `β(γ/x)/β(γ) >= 1/x` up to a `1e-12` floating slack.
pub fn check_beta_ratio(gamma: f64, x: f64, eta: f64) -> Result<bool> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("γ must lie in (0, 1) (got {gamma})")));
    }
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be >= 1 (got {x})")));
    }
    check_eta(eta)?;
    let ratio = beta_unchecked(gamma / x, eta) / beta_unchecked(gamma, eta);
    Ok(ratio >= 1.0 / x - 1e-12)
}

/// Per-rank selection probabilities for a population of `λ`, with
/// `P(r <= i) = β(i/λ)` at every rank boundary.
#[derive(Debug, Clone, Serialize)]
pub struct RankDistribution {
    lambda: usize,
    eta: f64,
    per_rank_probability: Vec<f64>,
}

impl RankDistribution {
    pub fn new(lambda: usize, eta: f64) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::domain("λ must be at least 1"));
        }
        check_eta(eta)?;
        let l = lambda as f64;
        let per_rank_probability = (1..=lambda)
            .map(|i| {
                beta_unchecked(i as f64 / l, eta) - beta_unchecked((i - 1) as f64 / l, eta)
            })
            .collect();
        Ok(RankDistribution {
            lambda,
            eta,
            per_rank_probability,
        })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `p_1, ..., p_λ`.
    pub fn probabilities(&self) -> &[f64] {
        &self.per_rank_probability
    }

    /// Exact `P(r <= i) = β(i/λ)`.
    pub fn cdf(&self, i: usize) -> f64 {
        beta_unchecked(i.min(self.lambda) as f64 / self.lambda as f64, self.eta)
    }

    /// Samples a 1-based rank: `u ~ U[0,1)`, `γ = β⁻¹(u)`, rank `⌈γλ⌉` clamped to `[1, λ]`.
    #[inline]
    pub fn sample(&self, rng: &mut RandomSource) -> usize {
        let gamma = beta_inverse_unchecked(rng.uniform(), self.eta);
        ((gamma * self.lambda as f64).ceil() as usize).clamp(1, self.lambda)
    }
}

pub fn build_rank_distribution(lambda: usize, eta: f64) -> Result<RankDistribution> {
    RankDistribution::new(lambda, eta)
}

pub fn sample_rank(dist: &RankDistribution, rng: &mut RandomSource) -> usize {
    dist.sample(rng)
}
