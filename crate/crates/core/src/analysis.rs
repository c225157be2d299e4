//! Closed-form predictors: equilibrium level of the γ-ranked individual,
//! the (η, χ) regime map for SelPres, and comparison against recorded runs.

use serde::{Deserialize, Serialize};

use crate::ea::RunRecord;
use crate::error::{Error, Result};
use crate::params::{MutationParams, RankingParams, SelPresParams};
use crate::ranking::beta_unchecked;

/// Default half-width, in η, of the balanced band used to label grid points.
pub const DEFAULT_BALANCED_BAND: f64 = 0.02;

/// `ξ* = ln(β(γ)/γ)/χ`.
pub fn equilibrium_position(gamma: f64, eta: f64, chi: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("γ must lie in (0, 1) (got {gamma})")));
    }
    let eta = RankingParams::new(eta)?.eta();
    let chi = MutationParams::new(chi)?.chi();
    Ok((beta_unchecked(gamma, eta) / gamma).ln() / chi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeKind {
    ExpLowPressure,
    PolyBalanced,
    ExpHighPressure,
    Unclassified,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::ExpLowPressure => "ExpLowPressure",
            RegimeKind::PolyBalanced => "PolyBalanced",
            RegimeKind::ExpHighPressure => "ExpHighPressure",
            RegimeKind::Unclassified => "Unclassified",
        }
    }
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RegimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            RegimeKind::ExpLowPressure,
            RegimeKind::PolyBalanced,
            RegimeKind::ExpHighPressure,
            RegimeKind::Unclassified,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::domain(format!("unknown regime {s:?}")))
    }
}

/// The three curves of the regime map evaluated at one `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// `exp(χ(σ−δ)) − ε`
    pub low: f64,
    /// `exp(χσ)`
    pub balanced: f64,
    /// `(2·exp(χ(σ+3δ)) − 1)/(1 − δ)`
    pub high: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub kind: RegimeKind,
    pub thresholds: RegimeThresholds,
}

pub fn regime_thresholds(chi: f64, p: &SelPresParams, epsilon: f64) -> Result<RegimeThresholds> {
    let chi = MutationParams::new(chi)?.chi();
    p.validate()?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain(format!("ε must be positive (got {epsilon})")));
    }
    Ok(threshold_curves(chi, p, epsilon))
}

fn threshold_curves(chi: f64, p: &SelPresParams, epsilon: f64) -> RegimeThresholds {
    let (s, d) = (p.sigma, p.delta);
    RegimeThresholds {
        low: (chi * (s - d)).exp() - epsilon,
        balanced: (chi * s).exp(),
        high: (2.0 * (chi * (s + 3.0 * d)).exp() - 1.0) / (1.0 - d),
    }
}

/// Verdict with the balanced regime taken as the exact curve (within 1e−12).
pub fn classify_regime(eta: f64, chi: f64, p: &SelPresParams, epsilon: f64) -> Result<RegimeVerdict> {
    classify_regime_banded(eta, chi, p, epsilon, 1e-12)
}

/// Like [`classify_regime`], but points within `band` of `η = exp(χσ)` count
/// as balanced. Checks run in the order low, balanced, high.
pub fn classify_regime_banded(
    eta: f64,
    chi: f64,
    p: &SelPresParams,
    epsilon: f64,
    band: f64,
) -> Result<RegimeVerdict> {
    let eta = RankingParams::new(eta)?.eta();
    if !(band >= 0.0 && band.is_finite()) {
        return Err(Error::domain(format!("band must be non-negative (got {band})")));
    }
    let thresholds = regime_thresholds(chi, p, epsilon)?;
    let kind = if eta < thresholds.low {
        RegimeKind::ExpLowPressure
    } else if (eta - thresholds.balanced).abs() <= band {
        RegimeKind::PolyBalanced
    } else if eta > thresholds.high {
        RegimeKind::ExpHighPressure
    } else {
        RegimeKind::Unclassified
    };
    Ok(RegimeVerdict { kind, thresholds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub gamma: f64,
    pub predicted_xi_star: f64,
    /// Mean of `L_t/n` over the trailing window of snapshots.
    pub empirical_mean: f64,
    pub deviation: f64,
    /// Extremes of `L_t/n` over the whole trace.
    pub excursion_min: f64,
    pub excursion_max: f64,
    /// `L/n` at the first snapshot of the window.
    pub xi_0: f64,
}

/// Compares the recorded `L_t/n` of the `γ`-ranked individual with `ξ*`.
/// The window is the last `⌈window_fraction · #snapshots⌉` snapshots.
pub fn equilibrium_report(record: &RunRecord, gamma: f64, window_fraction: f64) -> Result<EquilibriumReport> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::domain(format!(
            "window fraction must lie in (0, 1] (got {window_fraction})"
        )));
    }
    if record.snapshots.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let n = record.config.n as f64;
    let levels = record
        .snapshots
        .iter()
        .map(|s| s.leading_ones_at(gamma).map(|l| l as f64 / n))
        .collect::<Option<Vec<f64>>>()
        .ok_or(Error::UntrackedGamma(gamma))?;
    let predicted = equilibrium_position(gamma, record.config.eta, record.config.chi)?;
    let len = levels.len();
    let take = ((window_fraction * len as f64 - 1e-9).ceil() as usize).clamp(1, len);
    let window = &levels[len - take..];
    let empirical_mean = window.iter().sum::<f64>() / take as f64;
    Ok(EquilibriumReport {
        gamma,
        predicted_xi_star: predicted,
        empirical_mean,
        deviation: (empirical_mean - predicted).abs(),
        excursion_min: levels.iter().copied().fold(f64::INFINITY, f64::min),
        excursion_max: levels.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        xi_0: window[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::Bitstring;
    use crate::ea::{GammaLevel, GenerationSnapshot, Outcome};
    use crate::fitness::Objective;
    use crate::params::EaConfig;
    use crate::rng::derive_stream;
    use std::f64::consts::LN_2;

    fn sp(sigma: f64, delta: f64) -> SelPresParams {
        SelPresParams { sigma, delta, k: 1 }
    }

    #[test]
    fn equilibrium_examples() {
        assert!(equilibrium_position(1.0 - 1e-12, 1.5, 1.0).unwrap().abs() < 1e-9);
        assert!((equilibrium_position(0.5, 1.5, 1.0).unwrap() - 1.25f64.ln()).abs() < 1e-14);
        assert!((equilibrium_position(0.5, 2.0, LN_2).unwrap() - 0.584_962_500_721_156_2).abs() < 1e-12);
        for eta in [1.1, 1.5, 2.0] {
            for chi in [0.5, 1.0, 3.0] {
                let x = equilibrium_position(1e-9, eta, chi).unwrap();
                assert!((x - eta.ln() / chi).abs() < 1e-6);
            }
        }
        assert!(equilibrium_position(0.0, 1.5, 1.0).is_err());
        assert!(equilibrium_position(1.0, 1.5, 1.0).is_err());
        assert!(equilibrium_position(0.5, 2.5, 1.0).is_err());
        assert!(equilibrium_position(0.5, 1.5, -1.0).is_err());
    }

    #[test]
    fn equilibrium_monotone_in_eta_and_chi() {
        for g in [0.05, 0.25, 0.5, 0.75, 0.95] {
            for i in 1..40 {
                let eta = 1.0 + i as f64 / 40.0;
                for chi in [0.2, 1.0, 2.5] {
                    let x = equilibrium_position(g, eta, chi).unwrap();
                    assert!(equilibrium_position(g, eta + 0.01, chi).unwrap() > x);
                    assert!(equilibrium_position(g, eta, chi + 0.01).unwrap() < x);
                }
            }
        }
    }

    #[test]
    fn regime_examples() {
        let v = classify_regime(2.0, 2.0 * LN_2, &sp(0.5, 0.05), 0.1).unwrap();
        assert_eq!(v.kind, RegimeKind::PolyBalanced);
        let v = classify_regime(1.2, 4f64.ln(), &sp(0.5, 0.05), 0.1).unwrap();
        assert_eq!(v.kind, RegimeKind::ExpLowPressure);
        assert!((v.thresholds.low - (4f64.ln() * 0.45).exp() + 0.1).abs() < 1e-12);
        let v = classify_regime(1.5, 0.1, &sp(0.5, 0.05), 0.1).unwrap();
        assert_eq!(v.kind, RegimeKind::ExpHighPressure);
        assert!((v.thresholds.high - 1.194).abs() < 1e-3);
        assert!(classify_regime(1.5, 1.0, &sp(0.5, 0.05), 0.0).is_err());
        let v = classify_regime(1.3, 0.5, &sp(0.5, 0.05), 0.1).unwrap();
        assert_eq!(v.kind, RegimeKind::Unclassified);
    }

    #[test]
    fn banded_classification_widens_only_balanced() {
        let chi = 2.0 * LN_2;
        let p = sp(0.5, 0.05);
        assert_eq!(classify_regime(1.99, chi, &p, 0.1).unwrap().kind, RegimeKind::Unclassified);
        let v = classify_regime_banded(1.99, chi, &p, 0.1, DEFAULT_BALANCED_BAND).unwrap();
        assert_eq!(v.kind, RegimeKind::PolyBalanced);
        assert_eq!(
            classify_regime_banded(1.1, chi, &p, 0.1, DEFAULT_BALANCED_BAND).unwrap().kind,
            RegimeKind::ExpLowPressure
        );
    }

    #[test]
    fn regimes_exclusive_on_random_grid() {
        let mut rng = derive_stream(2024, 0);
        for _ in 0..10_000 {
            let eta = 1.0 + 1e-9 + rng.uniform() * (1.0 - 1e-9);
            let chi = 1e-3 + 5.0 * rng.uniform();
            let sigma = 0.05 + 0.9 * rng.uniform();
            let delta = 1e-3 + rng.uniform() * (1.0 - sigma).min(sigma) * 0.3;
            let eps = 1e-3 + rng.uniform();
            let p = sp(sigma, delta);
            if p.validate().is_err() {
                continue;
            }
            let v = classify_regime(eta, chi, &p, eps).unwrap();
            let t = v.thresholds;
            assert!(t.low < t.balanced && t.balanced < t.high);
            let hits = [
                eta < t.low,
                (eta - t.balanced).abs() <= 1e-12,
                eta > t.high,
            ];
            assert!(hits.iter().filter(|h| **h).count() <= 1);
            let expected = match hits {
                [true, _, _] => RegimeKind::ExpLowPressure,
                [_, true, _] => RegimeKind::PolyBalanced,
                [_, _, true] => RegimeKind::ExpHighPressure,
                _ => RegimeKind::Unclassified,
            };
            assert_eq!(v.kind, expected);
        }
    }

    #[test]
    fn regime_names_roundtrip() {
        for k in [
            RegimeKind::ExpLowPressure,
            RegimeKind::PolyBalanced,
            RegimeKind::ExpHighPressure,
            RegimeKind::Unclassified,
        ] {
            assert_eq!(k.to_string().parse::<RegimeKind>().unwrap(), k);
        }
        assert!("nope".parse::<RegimeKind>().is_err());
    }

    fn synthetic(levels: &[usize], n: usize, gamma: f64) -> RunRecord {
        let snapshots = levels
            .iter()
            .enumerate()
            .map(|(t, &l)| GenerationSnapshot {
                generation: t as u64,
                gamma_ranked_leading_ones: vec![GammaLevel { gamma, leading_ones: l }],
                partition_gamma: gamma,
                lambda_plus: 0,
                lambda_zero: 1,
                lambda_minus: 0,
                potential_h: 0,
                fraction_1k3: None,
                best_fitness: l,
            })
            .collect();
        RunRecord {
            config: EaConfig {
                n,
                lambda: 10,
                eta: 1.5,
                chi: 1.0,
                budget_evaluations: 10 * levels.len() as u64,
                seed: 0,
            },
            objective: Objective::LeadingOnes,
            tracked_gammas: vec![gamma],
            record_stride: 1,
            outcome: Outcome::BudgetExhausted,
            generations: levels.len() as u64,
            evaluations: 10 * levels.len() as u64,
            snapshots,
            final_best: Bitstring::zeros(n),
        }
    }

    #[test]
    fn report_on_synthetic_traces() {
        let r = equilibrium_report(&synthetic(&[20; 30], 100, 0.5), 0.5, 1.0 / 3.0).unwrap();
        assert!((r.empirical_mean - 0.2).abs() < 1e-15);
        assert!((r.deviation - (1.25f64.ln() - 0.2)).abs() < 1e-12);
        assert!((r.deviation - 0.02314).abs() < 1e-5);

        let r = equilibrium_report(&synthetic(&[10, 30], 100, 0.5), 0.5, 1.0).unwrap();
        assert!((r.empirical_mean - 0.2).abs() < 1e-15);
        assert_eq!((r.excursion_min, r.excursion_max, r.xi_0), (0.1, 0.3, 0.1));

        // ⌈0.5·3⌉ = 2 trailing snapshots
        let r = equilibrium_report(&synthetic(&[0, 10, 30], 100, 0.5), 0.5, 0.5).unwrap();
        assert!((r.empirical_mean - 0.2).abs() < 1e-15);
        // a tiny fraction still keeps one snapshot
        let r = equilibrium_report(&synthetic(&[0, 10, 30], 100, 0.5), 0.5, 1e-6).unwrap();
        assert!((r.empirical_mean - 0.3).abs() < 1e-15);
    }

    #[test]
    fn report_errors() {
        let rec = synthetic(&[1, 2], 10, 0.5);
        assert!(matches!(equilibrium_report(&rec, 0.25, 1.0), Err(Error::UntrackedGamma(_))));
        assert!(equilibrium_report(&rec, 0.5, 0.0).is_err());
        assert!(equilibrium_report(&rec, 0.5, 1.5).is_err());
        assert!(matches!(
            equilibrium_report(&synthetic(&[], 10, 0.5), 0.5, 1.0),
            Err(Error::EmptyTrace)
        ));
    }
}
