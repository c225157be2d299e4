//! The non-elitist Linear Ranking EA with per-generation instrumentation.
//!
//! Each generation the population is stably sorted by decreasing fitness and
//! the next population is filled by `λ` independent select-then-mutate steps.
//! The optimum is detected at evaluation time, so the recorded evaluation
//! count `T` is exact and satisfies `λ(τ−1) <= T <= λτ`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::fitness::{Evaluator, Objective};
use crate::params::{validate_config, EaConfig};
use crate::ranking::RankDistribution;
use crate::rng::RandomSource;

/// Trace format tag written in the JSON-lines header.
pub const TRACE_FORMAT: &str = "mutsel-lab v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub genome: Bitstring,
    pub fitness: usize,
}

/// Per-bit mutation with flip probability `p`, sampled by geometric skips.
#[derive(Debug, Clone, Copy)]
pub struct Mutator {
    p: f64,
    ln_keep: f64,
}

impl Mutator {
    pub fn new(flip_probability: f64) -> Self {
        let p = flip_probability.clamp(0.0, 1.0);
        Mutator {
            p,
            ln_keep: (-p).ln_1p(),
        }
    }

    pub fn flip_probability(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn apply(&self, x: &mut Bitstring, rng: &mut RandomSource) {
        if self.p <= 0.0 {
            return;
        }
        if self.p >= 1.0 {
            x.invert();
            return;
        }
        let n = x.len();
        let mut pos = 0usize;
        loop {
            // number of kept bits before the next flip
            let u = 1.0 - rng.uniform();
            let skip = (u.ln() / self.ln_keep).floor();
            if skip >= (n - pos) as f64 {
                break;
            }
            pos += skip as usize;
            x.flip_offset(pos);
            pos += 1;
            if pos >= n {
                break;
            }
        }
    }
}

/// Returns a copy of `x` with each bit flipped independently with
/// probability `flip_probability`.
pub fn mutate(x: &Bitstring, flip_probability: f64, rng: &mut RandomSource) -> Bitstring {
    let mut y = x.clone();
    Mutator::new(flip_probability).apply(&mut y, rng);
    y
}

/// 1-based rank of the `γ`-ranked individual: `⌈γλ⌉` clamped to `[1, λ]`.
pub fn gamma_rank(gamma: f64, lambda: usize) -> usize {
    ((gamma * lambda as f64 - 1e-9).ceil().max(1.0) as usize).min(lambda)
}

/// Potential `h = h_y + λ·h_x` of a sorted population, where
/// `h_y = ⌈γλ⌉ − λ⁺` and `h_x = n − LeadingOnes(x_(γ))`.
pub fn compute_potential(population: &[Individual], gamma: f64, n: usize, lambda: usize) -> i64 {
    let r = gamma_rank(gamma, lambda);
    let pivot = &population[r - 1];
    let above = population.iter().filter(|i| i.fitness > pivot.fitness).count();
    let h_y = r as i64 - above as i64;
    let h_x = n as i64 - pivot.genome.leading_ones() as i64;
    h_y + lambda as i64 * h_x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLevel {
    pub gamma: f64,
    pub leading_ones: usize,
}

/// Instrumentation of one sorted population `P_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSnapshot {
    pub generation: u64,
    /// `L_t` for every tracked `γ`, ascending in `γ`.
    pub gamma_ranked_leading_ones: Vec<GammaLevel>,
    /// The `γ` used for the `λ⁺/λ⁰/λ⁻` partition and the potential.
    pub partition_gamma: f64,
    pub lambda_plus: usize,
    pub lambda_zero: usize,
    pub lambda_minus: usize,
    pub potential_h: i64,
    /// Fraction of individuals starting with `k+3` ones (SelPres only).
    pub fraction_1k3: Option<f64>,
    pub best_fitness: usize,
}

impl GenerationSnapshot {
    pub fn leading_ones_at(&self, gamma: f64) -> Option<usize> {
        self.gamma_ranked_leading_ones
            .iter()
            .find(|g| (g.gamma - gamma).abs() < 1e-12)
            .map(|g| g.leading_ones)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    OptimumFound,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: EaConfig,
    pub objective: Objective,
    pub tracked_gammas: Vec<f64>,
    pub record_stride: u64,
    pub outcome: Outcome,
    /// `τ`: populations evaluated, counting a partially evaluated last one.
    pub generations: u64,
    /// `T`: fitness evaluations up to and including the first optimal one.
    pub evaluations: u64,
    pub snapshots: Vec<GenerationSnapshot>,
    pub final_best: Bitstring,
}

impl RunRecord {
    pub fn accounting_holds(&self) -> bool {
        let l = self.config.lambda as u64;
        l * self.generations.saturating_sub(1) <= self.evaluations
            && self.evaluations <= l * self.generations
    }
}

#[derive(Debug, Clone)]
pub struct RunSettings {
    pub tracked_gammas: Vec<f64>,
    pub record_stride: u64,
    /// Replaces the uniform initial population (test hook).
    pub initial_population: Option<Vec<Bitstring>>,
}

impl RunSettings {
    pub fn new(tracked_gammas: Vec<f64>, record_stride: u64) -> Self {
        RunSettings {
            tracked_gammas,
            record_stride,
            initial_population: None,
        }
    }

    /// Stride 1 up to `n = 500`, 10 beyond.
    pub fn default_stride(n: usize) -> u64 {
        if n <= 500 {
            1
        } else {
            10
        }
    }
}

struct Instruments {
    gammas: Vec<(f64, usize)>,
    partition: (f64, usize),
    k: Option<usize>,
    n: usize,
    lambda: usize,
}

impl Instruments {
    fn snapshot(&self, t: u64, pop: &[Individual]) -> GenerationSnapshot {
        let gamma_ranked_leading_ones = self
            .gammas
            .iter()
            .map(|&(gamma, r)| GammaLevel {
                gamma,
                leading_ones: pop[r - 1].genome.leading_ones(),
            })
            .collect();
        let (pg, pr) = self.partition;
        let f0 = pop[pr - 1].fitness;
        let lambda_plus = pop.iter().take_while(|i| i.fitness > f0).count();
        let lambda_zero = pop[lambda_plus..].iter().take_while(|i| i.fitness == f0).count();
        let fraction_1k3 = self.k.map(|k| {
            let ones = pop
                .iter()
                .filter(|i| i.genome.count_ones_in(1, k + 3) == k + 3)
                .count();
            ones as f64 / self.lambda as f64
        });
        GenerationSnapshot {
            generation: t,
            gamma_ranked_leading_ones,
            partition_gamma: pg,
            lambda_plus,
            lambda_zero,
            lambda_minus: self.lambda - lambda_plus - lambda_zero,
            potential_h: compute_potential(pop, pg, self.n, self.lambda),
            fraction_1k3,
            best_fitness: pop[0].fitness,
        }
    }
}

fn sort_population(pop: &mut [Individual]) {
    // stable: ties keep creation order
    pop.sort_by_key(|i| std::cmp::Reverse(i.fitness));
    debug_assert!(pop.windows(2).all(|w| w[0].fitness >= w[1].fitness));
}

/// Runs the Linear Ranking EA until an optimal string is evaluated or no
/// further full generation fits in the evaluation budget.
pub fn run(
    config: &EaConfig,
    objective: &Objective,
    settings: &RunSettings,
    rng: &mut RandomSource,
) -> Result<RunRecord> {
    let config = validate_config(config.clone())?;
    let (n, lambda) = (config.n, config.lambda);
    let evaluator = Evaluator::new(objective, n)?;
    let ranks = RankDistribution::new(lambda, config.eta)?;
    let mutator = Mutator::new(config.mutation()?.flip_probability(n));

    let mut tracked = settings.tracked_gammas.clone();
    if tracked.is_empty() {
        return Err(Error::config("tracked_gammas", "at least one γ must be tracked"));
    }
    if let Some(g) = tracked.iter().find(|g| !(**g > 0.0 && **g <= 1.0)) {
        return Err(Error::config("tracked_gammas", format!("γ = {g} outside (0, 1]")));
    }
    tracked.sort_by(f64::total_cmp);
    tracked.dedup();
    let stride = settings.record_stride.max(1);
    let largest = *tracked.last().unwrap();
    let instruments = Instruments {
        gammas: tracked.iter().map(|&g| (g, gamma_rank(g, lambda))).collect(),
        partition: (largest, gamma_rank(largest, lambda)),
        k: evaluator.selpres_k(),
        n,
        lambda,
    };

    let initial: Vec<Bitstring> = match &settings.initial_population {
        Some(p) => {
            if p.len() != lambda || p.iter().any(|x| x.len() != n) {
                return Err(Error::config(
                    "initial_population",
                    format!("expected {lambda} strings of length {n}"),
                ));
            }
            p.clone()
        }
        None => (0..lambda).map(|_| Bitstring::random(n, rng)).collect(),
    };

    let mut evaluations = 0u64;
    let mut pop = Vec::with_capacity(lambda);
    let mut found: Option<Bitstring> = None;
    for genome in initial {
        let (fitness, optimal) = evaluator.evaluate(&genome);
        evaluations += 1;
        if optimal {
            found = Some(genome);
            break;
        }
        pop.push(Individual { genome, fitness });
    }

    let mut snapshots = Vec::new();
    let mut generations = 1u64;
    if found.is_none() {
        let mut next: Vec<Individual> = pop.clone();
        let mut t = 0u64;
        loop {
            sort_population(&mut pop);
            if t.is_multiple_of(stride) {
                snapshots.push(instruments.snapshot(t, &pop));
            }
            if evaluations + lambda as u64 > config.budget_evaluations {
                break;
            }
            generations += 1;
            for slot in next.iter_mut() {
                let parent = &pop[ranks.sample(rng) - 1];
                slot.genome.clone_from(&parent.genome);
                mutator.apply(&mut slot.genome, rng);
                let (fitness, optimal) = evaluator.evaluate(&slot.genome);
                slot.fitness = fitness;
                evaluations += 1;
                if optimal {
                    found = Some(slot.genome.clone());
                    break;
                }
            }
            if found.is_some() {
                break;
            }
            std::mem::swap(&mut pop, &mut next);
            t += 1;
        }
    }

    let (outcome, final_best) = match found {
        Some(x) => (Outcome::OptimumFound, x),
        None => (Outcome::BudgetExhausted, pop[0].genome.clone()),
    };
    let record = RunRecord {
        config,
        objective: *objective,
        tracked_gammas: tracked,
        record_stride: stride,
        outcome,
        generations,
        evaluations,
        snapshots,
        final_best,
    };
    debug_assert!(record.accounting_holds());
    Ok(record)
}

/// One line of a JSON-lines trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceLine {
    Header {
        format: String,
        config: EaConfig,
        objective: Objective,
        tracked_gammas: Vec<f64>,
        record_stride: u64,
    },
    Snapshot(GenerationSnapshot),
    Summary {
        outcome: Outcome,
        generations: u64,
        evaluations: u64,
        final_best: Bitstring,
    },
}

/// Writes a header line, one line per snapshot, and a closing summary line.
pub fn write_trace<W: Write>(record: &RunRecord, mut out: W) -> Result<()> {
    let header = TraceLine::Header {
        format: TRACE_FORMAT.to_string(),
        config: record.config.clone(),
        objective: record.objective,
        tracked_gammas: record.tracked_gammas.clone(),
        record_stride: record.record_stride,
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for s in &record.snapshots {
        serde_json::to_writer(&mut out, &TraceLine::Snapshot(s.clone()))?;
        out.write_all(b"\n")?;
    }
    let summary = TraceLine::Summary {
        outcome: record.outcome,
        generations: record.generations,
        evaluations: record.evaluations,
        final_best: record.final_best.clone(),
    };
    serde_json::to_writer(&mut out, &summary)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_trace<R: BufRead>(input: R) -> Result<RunRecord> {
    let mut header = None;
    let mut summary = None;
    let mut snapshots = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<TraceLine>(&line)? {
            h @ TraceLine::Header { .. } => header = Some(h),
            TraceLine::Snapshot(s) => snapshots.push(s),
            s @ TraceLine::Summary { .. } => summary = Some(s),
        }
    }
    match (header, summary) {
        (
            Some(TraceLine::Header {
                config,
                objective,
                tracked_gammas,
                record_stride,
                ..
            }),
            Some(TraceLine::Summary {
                outcome,
                generations,
                evaluations,
                final_best,
            }),
        ) => Ok(RunRecord {
            config,
            objective,
            tracked_gammas,
            record_stride,
            outcome,
            generations,
            evaluations,
            snapshots,
            final_best,
        }),
        _ => Err(Error::EmptyTrace),
    }
}
