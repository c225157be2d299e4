//! Single- and multi-type Galton–Watson simulators and the closed-form
//! single-type bounds.
//!
//! Offspring totals are drawn in aggregate: the sum of `m` i.i.d. offspring
//! counts is sampled directly (Poisson, binomial, or a multinomial split for
//! tabulated laws), which has exactly the distribution of the per-individual
//! sum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_stream, RandomSource};
use crate::spectral::MeanMatrix;

/// Any generation larger than this aborts the simulation.
pub const EXPLOSION_LIMIT: u64 = 100_000_000;

/// Offspring distribution `ξ` on the non-negative integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OffspringLaw {
    Poisson { mean: f64 },
    /// 1 offspring with probability `p`, else 0.
    Bernoulli { p: f64 },
    /// `probabilities[v]` is `P(ξ = v)`.
    Table { probabilities: Vec<f64> },
}

impl OffspringLaw {
    pub fn poisson(mean: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::domain(format!("Poisson mean must be >= 0 (got {mean})")));
        }
        Ok(OffspringLaw::Poisson { mean })
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("Bernoulli p must lie in [0, 1] (got {p})")));
        }
        Ok(OffspringLaw::Bernoulli { p })
    }

    pub fn table(probabilities: Vec<f64>) -> Result<Self> {
        let total: f64 = probabilities.iter().sum();
        if probabilities.is_empty()
            || probabilities.iter().any(|p| !(*p >= 0.0))
            || (total - 1.0).abs() > 1e-9
        {
            return Err(Error::domain("offspring table must be a probability vector"));
        }
        Ok(OffspringLaw::Table { probabilities })
    }

    /// Every individual has exactly `k` offspring.
    pub fn constant(k: usize) -> Self {
        let mut probabilities = vec![0.0; k + 1];
        probabilities[k] = 1.0;
        OffspringLaw::Table { probabilities }
    }

    /// `ρ = E[ξ]`.
    pub fn mean(&self) -> f64 {
        match self {
            OffspringLaw::Poisson { mean } => *mean,
            OffspringLaw::Bernoulli { p } => *p,
            OffspringLaw::Table { probabilities } => probabilities
                .iter()
                .enumerate()
                .map(|(v, p)| v as f64 * p)
                .sum(),
        }
    }

    /// Offspring variance `s²`.
    pub fn variance(&self) -> f64 {
        match self {
            OffspringLaw::Poisson { mean } => *mean,
            OffspringLaw::Bernoulli { p } => p * (1.0 - p),
            OffspringLaw::Table { probabilities } => {
                let m = self.mean();
                let second: f64 = probabilities
                    .iter()
                    .enumerate()
                    .map(|(v, p)| (v * v) as f64 * p)
                    .sum();
                (second - m * m).max(0.0)
            }
        }
    }

    /// Exact `Var(Z_t)` from `Z_0 = 1`: `s²ρ^(t−1)(ρ^t − 1)/(ρ − 1)`, or `t·s²` at `ρ = 1`.
    pub fn size_variance(&self, t: u64) -> f64 {
        if t == 0 {
            return 0.0;
        }
        let (rho, s2) = (self.mean(), self.variance());
        if (rho - 1.0).abs() < 1e-12 {
            return t as f64 * s2;
        }
        s2 * rho.powi(t as i32 - 1) * (rho.powi(t as i32) - 1.0) / (rho - 1.0)
    }

    /// Total offspring of `parents` independent individuals.
    pub fn sample_total(&self, parents: u64, rng: &mut RandomSource) -> u64 {
        if parents == 0 {
            return 0;
        }
        match self {
            OffspringLaw::Poisson { mean } => rng.poisson(mean * parents as f64),
            OffspringLaw::Bernoulli { p } => rng.binomial(parents, *p),
            OffspringLaw::Table { probabilities } => {
                // multinomial split by sequential conditional binomials
                let mut remaining = parents;
                let mut mass = 1.0;
                let mut total = 0u64;
                for (v, &p) in probabilities.iter().enumerate() {
                    if remaining == 0 {
                        break;
                    }
                    let c = if mass <= p || v + 1 == probabilities.len() {
                        remaining
                    } else {
                        rng.binomial(remaining, (p / mass).min(1.0))
                    };
                    total += c * v as u64;
                    remaining -= c;
                    mass -= p;
                }
                total
            }
        }
    }
}

/// One single-type trajectory started from `Z_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingTrajectory {
    /// `Z_0, ..., Z_last`, where `last = min(T, max_t)`.
    pub sizes: Vec<u64>,
    /// `T = min{t : Z_t = 0}`, or `None` if still alive at `max_t`.
    pub extinction_time: Option<u64>,
    /// `Z_1 + ... + Z_last`, the over-count of distinct lineages.
    pub lineage_count: u64,
}

impl BranchingTrajectory {
    pub fn max_width(&self) -> u64 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn total_born(&self) -> u64 {
        self.lineage_count
    }

    /// `Z_t`, zero after extinction or beyond the simulated horizon.
    pub fn size_at(&self, t: usize) -> u64 {
        self.sizes.get(t).copied().unwrap_or(0)
    }
}

pub fn simulate_single(law: &OffspringLaw, max_t: u64, rng: &mut RandomSource) -> Result<BranchingTrajectory> {
    if max_t < 1 {
        return Err(Error::domain("max_t must be at least 1"));
    }
    let mut sizes = vec![1u64];
    let mut z = 1u64;
    let mut born = 0u64;
    let mut extinction_time = None;
    for t in 1..=max_t {
        z = law.sample_total(z, rng);
        if z > EXPLOSION_LIMIT {
            return Err(Error::Explosion { generation: t, size: z });
        }
        sizes.push(z);
        born += z;
        if z == 0 {
            extinction_time = Some(t);
            break;
        }
    }
    Ok(BranchingTrajectory {
        sizes,
        extinction_time,
        lineage_count: born,
    })
}

/// The four closed-form single-type bounds for given `ρ`, `t`, `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Bounds {
    /// `P(Z_t >= k) <= ρ^t / k`.
    pub p_zt_ge_k: f64,
    /// Survival bound `ρ^t` (the `k = 1` case of the first bound).
    pub p_t_ge_t: f64,
    /// `E[X_t] <= ρ/(1−ρ)`, only for `ρ < 1`.
    pub e_xt: Option<f64>,
    /// `P(X_t >= k) <= ρ/(k(1−ρ))`, only for `ρ < 1`.
    pub p_xt_ge_k: Option<f64>,
}

pub fn lemma2_bounds(rho: f64, t: u64, k: u64) -> Result<Lemma2Bounds> {
    if !(rho >= 0.0 && rho.is_finite()) || t < 1 || k < 1 {
        return Err(Error::domain(format!("need ρ >= 0, t >= 1, k >= 1 (got {rho}, {t}, {k})")));
    }
    let rt = rho.powi(t as i32);
    let sub = rho < 1.0;
    Ok(Lemma2Bounds {
        p_zt_ge_k: rt / k as f64,
        p_t_ge_t: rt,
        e_xt: sub.then(|| rho / (1.0 - rho)),
        p_xt_ge_k: sub.then(|| rho / (k as f64 * (1.0 - rho))),
    })
}

/// Type counts of a multi-type process in one generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiTypeState {
    pub counts: Vec<u64>,
}

impl MultiTypeState {
    pub fn basis(d: usize, h: usize) -> Self {
        let mut counts = vec![0; d];
        counts[h - 1] = 1;
        MultiTypeState { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_extinct(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }
}

/// Offspring of a type-`j` parent: independent Poisson counts of each type
/// `k` with means `m_{jk}`. Summed over parents, type `k` in the next
/// generation is Poisson with mean `Σ_j Z_{t,j}·m_{jk}`.
fn step_multitype(m: &MeanMatrix, z: &[u64], rng: &mut RandomSource, out: &mut [u64]) {
    let d = m.dim();
    for (k, o) in out.iter_mut().enumerate() {
        let mut mean = 0.0;
        for (j, &zj) in z.iter().enumerate().take(d) {
            if zj != 0 {
                mean += zj as f64 * m.get(j + 1, k + 1);
            }
        }
        *o = rng.poisson(mean);
    }
}

/// Simulates from `Z_0 = e_h` (1-based `h`) until extinction or `max_t`.
/// The returned sequence ends with the zero vector when extinct.
pub fn simulate_multitype(
    m: &MeanMatrix,
    h: usize,
    max_t: u64,
    rng: &mut RandomSource,
) -> Result<Vec<MultiTypeState>> {
    let d = m.dim();
    if h < 1 || h > d {
        return Err(Error::domain(format!("start type {h} outside 1..={d}")));
    }
    let mut states = vec![MultiTypeState::basis(d, h)];
    let mut next = vec![0u64; d];
    for t in 1..=max_t {
        step_multitype(m, &states.last().unwrap().counts, rng, &mut next);
        let total: u64 = next.iter().sum();
        if total > EXPLOSION_LIMIT {
            return Err(Error::Explosion { generation: t, size: total });
        }
        states.push(MultiTypeState { counts: next.clone() });
        if total == 0 {
            break;
        }
    }
    Ok(states)
}

/// Integer tallies over a batch of single-type trajectories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleTypeTally {
    pub trials: u64,
    pub ks: Vec<u64>,
    /// `size_ge[t][i]` counts trajectories with `Z_t >= ks[i]`, `t` in `0..=max_t`.
    pub size_ge: Vec<Vec<u64>>,
    /// `lineage_ge[t][i]` counts trajectories with `X_t >= ks[i]`.
    pub lineage_ge: Vec<Vec<u64>>,
    pub size_sum: Vec<u128>,
    pub size_sq_sum: Vec<u128>,
}

impl SingleTypeTally {
    fn new(max_t: usize, ks: &[u64]) -> Self {
        SingleTypeTally {
            trials: 0,
            ks: ks.to_vec(),
            size_ge: vec![vec![0; ks.len()]; max_t + 1],
            lineage_ge: vec![vec![0; ks.len()]; max_t + 1],
            size_sum: vec![0; max_t + 1],
            size_sq_sum: vec![0; max_t + 1],
        }
    }

    fn add(&mut self, tr: &BranchingTrajectory) {
        self.trials += 1;
        let mut lineages = 0u64;
        for t in 0..self.size_sum.len() {
            let z = tr.size_at(t);
            if t > 0 {
                lineages += z;
            }
            self.size_sum[t] += z as u128;
            self.size_sq_sum[t] += (z as u128) * (z as u128);
            for (i, &k) in self.ks.iter().enumerate() {
                self.size_ge[t][i] += (z >= k) as u64;
                self.lineage_ge[t][i] += (lineages >= k) as u64;
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        for t in 0..self.size_sum.len() {
            self.size_sum[t] += other.size_sum[t];
            self.size_sq_sum[t] += other.size_sq_sum[t];
            for i in 0..self.ks.len() {
                self.size_ge[t][i] += other.size_ge[t][i];
                self.lineage_ge[t][i] += other.lineage_ge[t][i];
            }
        }
        self
    }

    pub fn mean_size(&self, t: usize) -> f64 {
        self.size_sum[t] as f64 / self.trials as f64
    }

    /// Standard error of the sample mean of `Z_t`.
    pub fn mean_size_std_error(&self, t: usize) -> f64 {
        let n = self.trials as f64;
        let mean = self.mean_size(t);
        let var = (self.size_sq_sum[t] as f64 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        (var / n).sqrt()
    }
}

/// Runs `trials` trajectories, trajectory `i` on stream `(seed, i)`.
pub fn single_type_batch(
    law: &OffspringLaw,
    max_t: u64,
    trials: u64,
    ks: &[u64],
    seed: u64,
) -> Result<SingleTypeTally> {
    let empty = SingleTypeTally::new(max_t as usize, ks);
    (0..trials)
        .into_par_iter()
        .map(|i| simulate_single(law, max_t, &mut derive_stream(seed, i)))
        .try_fold(
            || empty.clone(),
            |mut acc, tr| {
                acc.add(&tr?);
                Ok(acc)
            },
        )
        .try_reduce(|| empty.clone(), |a, b| Ok(a.merge(b)))
}

/// Integer tallies over a batch of multi-type trajectories from one start type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTypeTally {
    pub start_type: usize,
    pub trials: u64,
    pub ks: Vec<u64>,
    /// `total_ge[t][i]` counts runs with `Σ_j Z_{t,j} >= ks[i]`.
    pub total_ge: Vec<Vec<u64>>,
    /// Per-generation, per-type sums and sums of squares.
    pub count_sum: Vec<Vec<u128>>,
    pub count_sq_sum: Vec<Vec<u128>>,
}

impl MultiTypeTally {
    fn new(start_type: usize, d: usize, max_t: usize, ks: &[u64]) -> Self {
        MultiTypeTally {
            start_type,
            trials: 0,
            ks: ks.to_vec(),
            total_ge: vec![vec![0; ks.len()]; max_t + 1],
            count_sum: vec![vec![0; d]; max_t + 1],
            count_sq_sum: vec![vec![0; d]; max_t + 1],
        }
    }

    fn add(&mut self, states: &[MultiTypeState]) {
        self.trials += 1;
        for t in 0..self.total_ge.len() {
            let Some(s) = states.get(t) else { break };
            let total = s.total();
            for (i, &k) in self.ks.iter().enumerate() {
                self.total_ge[t][i] += (total >= k) as u64;
            }
            for (j, &c) in s.counts.iter().enumerate() {
                self.count_sum[t][j] += c as u128;
                self.count_sq_sum[t][j] += (c as u128) * (c as u128);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        for t in 0..self.total_ge.len() {
            for i in 0..self.ks.len() {
                self.total_ge[t][i] += other.total_ge[t][i];
            }
            for j in 0..self.count_sum[t].len() {
                self.count_sum[t][j] += other.count_sum[t][j];
                self.count_sq_sum[t][j] += other.count_sq_sum[t][j];
            }
        }
        self
    }

    pub fn frequency(&self, t: usize, k_index: usize) -> f64 {
        self.total_ge[t][k_index] as f64 / self.trials as f64
    }

    pub fn mean_count(&self, t: usize, j: usize) -> f64 {
        self.count_sum[t][j] as f64 / self.trials as f64
    }

    pub fn mean_count_std_error(&self, t: usize, j: usize) -> f64 {
        let n = self.trials as f64;
        let mean = self.mean_count(t, j);
        let var = (self.count_sq_sum[t][j] as f64 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        (var / n).sqrt()
    }
}

pub fn multi_type_batch(
    m: &MeanMatrix,
    h: usize,
    max_t: u64,
    trials: u64,
    ks: &[u64],
    seed: u64,
) -> Result<MultiTypeTally> {
    let empty = MultiTypeTally::new(h, m.dim(), max_t as usize, ks);
    (0..trials)
        .into_par_iter()
        .map(|i| simulate_multitype(m, h, max_t, &mut derive_stream(seed, i)))
        .try_fold(
            || empty.clone(),
            |mut acc, s| {
                acc.add(&s?);
                Ok(acc)
            },
        )
        .try_reduce(|| empty.clone(), |a, b| Ok(a.merge(b)))
}

/// Binomial standard error of an empirical frequency.
pub fn frequency_std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// One row of the per-trajectory batch CSV.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub trial: u64,
    /// Empty when censored at the horizon.
    pub extinction_time: Option<u64>,
    pub max_width: u64,
    pub total_born: u64,
}

impl TrajectoryRow {
    pub fn new(trial: u64, tr: &BranchingTrajectory) -> Self {
        TrajectoryRow {
            trial,
            extinction_time: tr.extinction_time,
            max_width: tr.max_width(),
            total_born: tr.total_born(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::MeanMatrix;

    #[test]
    fn constant_zero_dies_at_one() {
        let tr = simulate_single(&OffspringLaw::constant(0), 10, &mut derive_stream(0, 0)).unwrap();
        assert_eq!(tr.sizes, vec![1, 0]);
        assert_eq!(tr.extinction_time, Some(1));
        assert_eq!(tr.lineage_count, 0);
    }

    #[test]
    fn constant_one_is_censored() {
        let tr = simulate_single(&OffspringLaw::constant(1), 25, &mut derive_stream(0, 0)).unwrap();
        assert_eq!(tr.sizes, vec![1; 26]);
        assert_eq!(tr.extinction_time, None);
        assert_eq!(tr.lineage_count, 25);
    }

    #[test]
    fn supercritical_law_explodes() {
        let r = simulate_single(&OffspringLaw::constant(10), 20, &mut derive_stream(0, 0));
        assert!(matches!(r, Err(Error::Explosion { generation: 9, .. })));
    }

    #[test]
    fn extinct_trajectories_stay_extinct() {
        let law = OffspringLaw::poisson(0.9).unwrap();
        for i in 0..2000 {
            let tr = simulate_single(&law, 30, &mut derive_stream(4, i)).unwrap();
            assert_eq!(tr.sizes[0], 1);
            if let Some(t) = tr.extinction_time {
                assert_eq!(tr.sizes.len() as u64, t + 1);
                assert!(tr.sizes[..t as usize].iter().all(|&z| z > 0));
            }
            assert_eq!(tr.lineage_count, tr.sizes[1..].iter().sum::<u64>());
        }
    }

    #[test]
    fn law_means() {
        assert_eq!(OffspringLaw::poisson(0.3).unwrap().mean(), 0.3);
        assert_eq!(OffspringLaw::bernoulli(0.4).unwrap().mean(), 0.4);
        assert!((OffspringLaw::table(vec![0.5, 0.25, 0.25]).unwrap().mean() - 0.75).abs() < 1e-15);
        assert!(OffspringLaw::table(vec![0.5, 0.2]).is_err());
        assert!(OffspringLaw::bernoulli(1.5).is_err());
    }

    #[test]
    fn table_totals_have_right_mean() {
        let law = OffspringLaw::table(vec![0.5, 0.25, 0.25]).unwrap();
        let mut rng = derive_stream(7, 0);
        let reps = 20_000;
        let total: u64 = (0..reps).map(|_| law.sample_total(10, &mut rng)).sum();
        let mean = total as f64 / reps as f64;
        // sd of one draw ≈ sqrt(10 · 0.6875) ≈ 2.62, se ≈ 0.0185
        assert!((mean - 7.5).abs() < 0.08, "mean = {mean}");
    }

    #[test]
    fn closed_form_bound_examples() {
        let b = lemma2_bounds(0.5, 10, 1).unwrap();
        assert_eq!(b.p_t_ge_t, 9.765625e-4);
        assert_eq!(lemma2_bounds(0.5, 1, 1).unwrap().e_xt, Some(1.0));
        let b = lemma2_bounds(1.0, 5, 10).unwrap();
        assert!((b.p_zt_ge_k - 0.1).abs() < 1e-15);
        assert_eq!(b.e_xt, None);
        assert_eq!(b.p_xt_ge_k, None);
        assert_eq!(lemma2_bounds(0.0, 1, 1).unwrap().p_zt_ge_k, 0.0);
        assert!(lemma2_bounds(-0.1, 1, 1).is_err());
        assert!(lemma2_bounds(0.5, 0, 1).is_err());
    }

    #[test]
    fn size_variance_matches_recursion() {
        // Var Z_{t+1} = ρ² Var Z_t + s² E Z_t
        for law in [
            OffspringLaw::poisson(0.7).unwrap(),
            OffspringLaw::bernoulli(0.4).unwrap(),
            OffspringLaw::table(vec![0.2, 0.5, 0.3]).unwrap(),
            OffspringLaw::poisson(1.0).unwrap(),
        ] {
            let (rho, s2) = (law.mean(), law.variance());
            let mut var = 0.0;
            for t in 1..=12u64 {
                var = rho * rho * var + s2 * rho.powi(t as i32 - 1);
                assert!((law.size_variance(t) - var).abs() <= 1e-12 * var.max(1.0));
            }
        }
        assert!((OffspringLaw::table(vec![0.2, 0.5, 0.3]).unwrap().variance() - 0.49).abs() < 1e-15);
        assert_eq!(OffspringLaw::constant(3).variance(), 0.0);
    }

    #[test]
    fn survival_is_monotone() {
        let tally = single_type_batch(&OffspringLaw::poisson(0.9).unwrap(), 15, 20_000, &[1], 3).unwrap();
        let surv: Vec<u64> = tally.size_ge.iter().map(|v| v[0]).collect();
        assert!(surv.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(surv[0], 20_000);
    }

    #[test]
    fn single_type_mean_recursion() {
        for rho in [0.3, 0.5, 0.9] {
            let tally = single_type_batch(&OffspringLaw::poisson(rho).unwrap(), 10, 100_000, &[1], 21).unwrap();
            for t in 0..=10 {
                let diff = (tally.mean_size(t) - rho.powi(t as i32)).abs();
                let law = OffspringLaw::poisson(rho).unwrap();
                let se = (law.size_variance(t as u64) / 100_000.0).sqrt();
                assert!(diff <= 3.0 * se + 1e-12, "ρ={rho} t={t} diff={diff} se={se}");
            }
        }
    }

    #[test]
    fn multitype_degenerate_cases() {
        let m = MeanMatrix::explicit(vec![vec![0.0]]).unwrap();
        let s = simulate_multitype(&m, 1, 10, &mut derive_stream(0, 0)).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[1].is_extinct());

        let m = MeanMatrix::explicit(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let s = simulate_multitype(&m, 1, 10, &mut derive_stream(0, 0)).unwrap();
        assert_eq!(s, vec![MultiTypeState { counts: vec![1, 0] }, MultiTypeState { counts: vec![0, 0] }]);
        assert!(simulate_multitype(&m, 3, 10, &mut derive_stream(0, 0)).is_err());
    }

    /// `E[Z_t]ᵀ = e_hᵀ Mᵗ` by repeated multiplication.
    fn mean_row(m: &[Vec<f64>], h: usize, t: usize) -> Vec<f64> {
        let d = m.len();
        let mut row = vec![0.0; d];
        row[h - 1] = 1.0;
        for _ in 0..t {
            row = (0..d).map(|k| (0..d).map(|j| row[j] * m[j][k]).sum()).collect();
        }
        row
    }

    #[test]
    fn multitype_mean_recursion() {
        let rows = vec![
            vec![0.2, 0.5, 0.1],
            vec![0.3, 0.1, 0.4],
            vec![0.05, 0.6, 0.3],
        ];
        let m = MeanMatrix::explicit(rows.clone()).unwrap();
        for h in 1..=3 {
            let tally = multi_type_batch(&m, h, 5, 100_000, &[1], 40 + h as u64).unwrap();
            for t in 0..=5 {
                let expect = mean_row(&rows, h, t);
                for (j, e) in expect.iter().enumerate() {
                    let diff = (tally.mean_count(t, j) - e).abs();
                    let se = tally.mean_count_std_error(t, j);
                    assert!(diff <= 3.0 * se + 1e-12, "h={h} t={t} j={j} diff={diff} se={se}");
                }
            }
        }
    }

    #[test]
    fn batch_is_deterministic() {
        let law = OffspringLaw::poisson(0.7).unwrap();
        let a = single_type_batch(&law, 8, 5000, &[1, 2], 9).unwrap();
        let b = single_type_batch(&law, 8, 5000, &[1, 2], 9).unwrap();
        assert_eq!(a, b);
    }
}
