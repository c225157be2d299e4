//! Validated parameter bundles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// Linear ranking selection pressure `η`, `1 < η <= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankingParams {
    eta: f64,
}

impl RankingParams {
    pub fn new(eta: f64) -> Result<Self> {
        check_eta(eta).map_err(|m| Error::config("eta", m))?;
        Ok(RankingParams { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

fn check_eta(eta: f64) -> std::result::Result<(), String> {
    if eta > 1.0 && eta <= 2.0 {
        Ok(())
    } else {
        Err(format!("η must satisfy 1 < η ≤ 2 (got {eta})"))
    }
}

/// Mutation parameter `χ`; each bit flips with probability `χ/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutationParams {
    chi: f64,
}

impl MutationParams {
    pub fn new(chi: f64) -> Result<Self> {
        if chi > 0.0 && chi.is_finite() {
            Ok(MutationParams { chi })
        } else {
            Err(Error::config("chi", format!("χ must be positive (got {chi})")))
        }
    }

    /// Like [`MutationParams::new`] but also enforces `χ/n <= 1`.
    pub fn for_length(chi: f64, n: usize) -> Result<Self> {
        let p = Self::new(chi)?;
        if chi / n as f64 > 1.0 {
            return Err(Error::config("chi", "χ/n must not exceed 1"));
        }
        Ok(p)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn flip_probability(&self, n: usize) -> f64 {
        self.chi / n as f64
    }
}

/// Parameters `(σ, δ, k)` of the SelPres objective: `0 < δ < σ < 1 − 3δ`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelPresParams {
    pub sigma: f64,
    pub delta: f64,
    pub k: usize,
}

impl SelPresParams {
    pub fn new(sigma: f64, delta: f64, k: usize) -> Result<Self> {
        let p = SelPresParams { sigma, delta, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        let (s, d) = (self.sigma, self.delta);
        if !(0.0 < d && d < s && s < 1.0 - 3.0 * d) {
            v.push(Violation {
                field: "sigma/delta",
                message: format!("need 0 < δ < σ < 1 − 3δ (got σ={s}, δ={d})"),
            });
        }
        if self.k < 1 {
            v.push(Violation {
                field: "k",
                message: "k must be at least 1".into(),
            });
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }
}

/// Configuration of one EA run. Fields are raw so that every violation can
/// be reported at once by [`validate_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EaConfig {
    pub n: usize,
    pub lambda: usize,
    pub eta: f64,
    pub chi: f64,
    pub budget_evaluations: u64,
    pub seed: u64,
}

impl EaConfig {
    pub fn ranking(&self) -> Result<RankingParams> {
        RankingParams::new(self.eta)
    }

    pub fn mutation(&self) -> Result<MutationParams> {
        MutationParams::for_length(self.chi, self.n.max(1))
    }
}

/// Returns the config unchanged when all invariants hold, otherwise every
/// violated constraint.
pub fn validate_config(config: EaConfig) -> Result<EaConfig> {
    let mut v = Vec::new();
    let mut push = |field: &'static str, message: String| v.push(Violation { field, message });
    if config.n < 1 {
        push("n", "n must be at least 1".into());
    }
    if config.lambda < 1 {
        push("lambda", "λ must be at least 1".into());
    }
    if let Err(m) = check_eta(config.eta) {
        push("eta", m);
    }
    if !(config.chi > 0.0 && config.chi.is_finite()) {
        push("chi", format!("χ must be positive (got {})", config.chi));
    } else if config.n >= 1 && config.chi / config.n as f64 > 1.0 {
        push("chi", "χ/n must not exceed 1".into());
    }
    if config.budget_evaluations < config.lambda as u64 {
        push(
            "budget_evaluations",
            format!(
                "budget_evaluations must be at least λ ({} < {})",
                config.budget_evaluations, config.lambda
            ),
        );
    }
    if v.is_empty() {
        Ok(config)
    } else {
        Err(Error::Config(v))
    }
}
