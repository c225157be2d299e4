//! Sweep orchestration, equilibrium and branching experiments, and the CSV
//! formats they emit. Every CSV starts with the line [`CSV_VERSION_LINE`].

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    classify_regime_banded, equilibrium_report, regime_thresholds, EquilibriumReport, RegimeKind,
    DEFAULT_BALANCED_BAND,
};
use crate::branching::{
    frequency_std_error, lemma2_bounds, multi_type_batch, single_type_batch, OffspringLaw,
};
use crate::ea::{run, Outcome, RunSettings};
use crate::error::{Error, Result};
use crate::fitness::Objective;
use crate::params::{validate_config, EaConfig, SelPresParams};
use crate::rng::{derive_stream, stream_index};
use crate::spectral::{
    build_mean_matrix_with_base, choose_phi, perron, tail_bound, LogBase, MeanMatrix,
    DEFAULT_MAX_ITERS, DEFAULT_TOL,
};

pub const CSV_VERSION_LINE: &str = "# mutsel-lab v1";

/// Margin `ε` of the low-pressure threshold when none is configured.
pub const DEFAULT_EPSILON: f64 = 0.1;

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_band() -> f64 {
    DEFAULT_BALANCED_BAND
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input)
}

fn write_rows_to<T: Serialize, W: Write>(rows: &[T], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_rows<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    write_rows_to(rows, BufWriter::new(File::create(path)?))
}

// ---------------------------------------------------------------- sweeps

/// A grid of `(χ, η)` points, each run `trials_per_point` times on SelPres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub chi_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub selpres: SelPresParams,
    pub n: usize,
    pub lambda: usize,
    pub budget_evaluations: u64,
    pub trials_per_point: u32,
    pub base_seed: u64,
    /// Low-pressure margin used for the verdict column.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Half-width of the balanced band used for the verdict column.
    #[serde(default = "default_band")]
    pub band: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.chi_grid.is_empty() || self.eta_grid.is_empty() {
            return Err(Error::config("chi_grid/eta_grid", "grids must be non-empty"));
        }
        if self.trials_per_point < 1 {
            return Err(Error::config("trials_per_point", "need at least one trial per point"));
        }
        if !(self.epsilon > 0.0) || !(self.band >= 0.0) {
            return Err(Error::config("epsilon/band", "need ε > 0 and band >= 0"));
        }
        self.selpres.validate()
    }

    /// Grid points in row-major order, `χ` outer and `η` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.chi_grid
            .iter()
            .flat_map(|&c| self.eta_grid.iter().map(move |&e| (c, e)))
            .collect()
    }

    fn config(&self, chi: f64, eta: f64) -> EaConfig {
        EaConfig {
            n: self.n,
            lambda: self.lambda,
            eta,
            chi,
            budget_evaluations: self.budget_evaluations,
            seed: self.base_seed,
        }
    }
}

/// Result of one `(χ, η)` grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub point_index: usize,
    pub chi: f64,
    pub eta: f64,
    pub successes: u32,
    pub trials: u32,
    /// Lower median of `T` over trials, failed trials counting as infinite;
    /// `None` when that median is censored.
    pub median_t: Option<u64>,
    pub verdict: RegimeKind,
    /// Set when the point could not be run; such cells report zero trials.
    pub error: Option<String>,
}

impl SweepCell {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Accounting of one seeded run inside a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point_index: u32,
    pub trial_index: u32,
    pub outcome: Outcome,
    pub generations: u64,
    pub evaluations: u64,
    pub lambda: u64,
}

impl TrialRecord {
    pub fn accounting_holds(&self) -> bool {
        self.lambda * self.generations.saturating_sub(1) <= self.evaluations
            && self.evaluations <= self.lambda * self.generations
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    /// Successful runs ordered by `(point_index, trial_index)`.
    pub trials: Vec<TrialRecord>,
}

fn lower_median(mut values: Vec<u64>) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let m = values[(values.len() - 1) / 2];
    (m != u64::MAX).then_some(m)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    Ok(run_sweep_with_trials(spec)?.cells)
}

/// Runs every `(point, trial)` pair in parallel; trial `j` of point `i`
/// draws from stream `(base_seed, i, j)`.
pub fn run_sweep_with_trials(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec.points();
    let objective = Objective::SelPres(spec.selpres);
    let settings = RunSettings::new(vec![0.5], u64::MAX);
    let jobs: Vec<(usize, u32)> = (0..points.len())
        .flat_map(|p| (0..spec.trials_per_point).map(move |t| (p, t)))
        .collect();
    let runs: Vec<Result<TrialRecord>> = jobs
        .par_iter()
        .map(|&(p, t)| {
            let (chi, eta) = points[p];
            let mut rng = derive_stream(spec.base_seed, stream_index(p as u32, t));
            let rec = run(&spec.config(chi, eta), &objective, &settings, &mut rng)?;
            Ok(TrialRecord {
                point_index: p as u32,
                trial_index: t,
                outcome: rec.outcome,
                generations: rec.generations,
                evaluations: rec.evaluations,
                lambda: spec.lambda as u64,
            })
        })
        .collect();

    let per_point = spec.trials_per_point as usize;
    let mut cells = Vec::with_capacity(points.len());
    let mut trials = Vec::with_capacity(runs.len());
    for (p, (&(chi, eta), chunk)) in points.iter().zip(runs.chunks(per_point)).enumerate() {
        let verdict = classify_regime_banded(eta, chi, &spec.selpres, spec.epsilon, spec.band)
            .map(|v| v.kind)
            .unwrap_or(RegimeKind::Unclassified);
        let mut cell = SweepCell {
            point_index: p,
            chi,
            eta,
            successes: 0,
            trials: 0,
            median_t: None,
            verdict,
            error: None,
        };
        if let Some(Err(e)) = chunk.iter().find(|r| r.is_err()) {
            cell.error = Some(e.to_string());
        } else {
            let recs: Vec<TrialRecord> = chunk.iter().map(|r| *r.as_ref().unwrap()).collect();
            cell.trials = recs.len() as u32;
            cell.successes = recs.iter().filter(|r| r.outcome == Outcome::OptimumFound).count() as u32;
            cell.median_t = lower_median(
                recs.iter()
                    .map(|r| match r.outcome {
                        Outcome::OptimumFound => r.evaluations,
                        Outcome::BudgetExhausted => u64::MAX,
                    })
                    .collect(),
            );
            trials.extend(recs);
        }
        cells.push(cell);
    }
    Ok(SweepResult { cells, trials })
}

const CENSORED: &str = "censored";

#[derive(Serialize, Deserialize)]
struct SweepRow {
    point_index: usize,
    chi: f64,
    eta: f64,
    successes: u32,
    trials: u32,
    #[serde(rename = "median_T")]
    median_t: String,
    verdict: String,
    error: String,
}

pub fn write_sweep_csv(cells: &[SweepCell], path: &Path) -> Result<()> {
    write_sweep_csv_to(cells, BufWriter::new(File::create(path)?))
}

pub fn write_sweep_csv_to<W: Write>(cells: &[SweepCell], out: W) -> Result<()> {
    let rows: Vec<SweepRow> = cells
        .iter()
        .map(|c| SweepRow {
            point_index: c.point_index,
            chi: c.chi,
            eta: c.eta,
            successes: c.successes,
            trials: c.trials,
            median_t: c.median_t.map_or_else(|| CENSORED.to_string(), |t| t.to_string()),
            verdict: c.verdict.to_string(),
            error: c.error.clone().unwrap_or_default(),
        })
        .collect();
    write_rows_to(&rows, out)
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for row in csv_reader(input).deserialize() {
        let r: SweepRow = row?;
        let median_t = if r.median_t == CENSORED {
            None
        } else {
            Some(r.median_t.parse().map_err(|_| Error::domain(format!("bad median_T {:?}", r.median_t)))?)
        };
        cells.push(SweepCell {
            point_index: r.point_index,
            chi: r.chi,
            eta: r.eta,
            successes: r.successes,
            trials: r.trials,
            median_t,
            verdict: r.verdict.parse()?,
            error: (!r.error.is_empty()).then_some(r.error),
        });
    }
    Ok(cells)
}

/// Number of `χ` samples per boundary curve.
pub const BOUNDARY_SAMPLES: usize = 200;

#[derive(Serialize)]
struct PhaseRow {
    chi: f64,
    eta: f64,
    success_rate: f64,
    verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub curve: String,
    pub chi: f64,
    pub eta: f64,
}

/// Path of the boundary file written next to `path`.
pub fn boundaries_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("phase");
    path.with_file_name(format!("{stem}_boundaries.csv"))
}

/// The three regime curves at [`BOUNDARY_SAMPLES`] evenly spaced `χ` in
/// `(0, chi_max]`.
pub fn boundary_curves(chi_max: f64, p: &SelPresParams, epsilon: f64) -> Result<Vec<BoundaryRow>> {
    let mut low = Vec::new();
    let mut mid = Vec::new();
    let mut high = Vec::new();
    for i in 1..=BOUNDARY_SAMPLES {
        let chi = chi_max * i as f64 / BOUNDARY_SAMPLES as f64;
        let t = regime_thresholds(chi, p, epsilon)?;
        low.push(BoundaryRow { curve: "low".into(), chi, eta: t.low });
        mid.push(BoundaryRow { curve: "balanced".into(), chi, eta: t.balanced });
        high.push(BoundaryRow { curve: "high".into(), chi, eta: t.high });
    }
    low.extend(mid);
    low.extend(high);
    Ok(low)
}

/// Writes the heatmap CSV `(chi, eta, success_rate, verdict)` to `path` and
/// the boundary curves to [`boundaries_path`]`(path)`. Returns the latter.
pub fn emit_phase_plot_data(
    cells: &[SweepCell],
    selpres: &SelPresParams,
    epsilon: f64,
    path: &Path,
) -> Result<PathBuf> {
    if cells.is_empty() {
        return Err(Error::domain("no sweep cells to plot"));
    }
    let rows: Vec<PhaseRow> = cells
        .iter()
        .map(|c| PhaseRow {
            chi: c.chi,
            eta: c.eta,
            success_rate: c.success_rate(),
            verdict: c.verdict.to_string(),
        })
        .collect();
    write_rows(&rows, path)?;
    let chi_max = cells.iter().map(|c| c.chi).fold(f64::NEG_INFINITY, f64::max);
    let out = boundaries_path(path);
    write_rows(&boundary_curves(chi_max, selpres, epsilon)?, &out)?;
    Ok(out)
}

// ----------------------------------------------------------- equilibrium

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRow {
    pub seed_index: u64,
    pub gamma: f64,
    pub predicted_xi_star: f64,
    pub empirical_mean: f64,
    pub deviation: f64,
    pub excursion_min: f64,
    pub excursion_max: f64,
    pub xi_0: f64,
    pub generations: u64,
    pub evaluations: u64,
    pub accounting_holds: bool,
}

impl EquilibriumRow {
    fn new(seed_index: u64, r: &EquilibriumReport, generations: u64, evaluations: u64, ok: bool) -> Self {
        EquilibriumRow {
            seed_index,
            gamma: r.gamma,
            predicted_xi_star: r.predicted_xi_star,
            empirical_mean: r.empirical_mean,
            deviation: r.deviation,
            excursion_min: r.excursion_min,
            excursion_max: r.excursion_max,
            xi_0: r.xi_0,
            generations,
            evaluations,
            accounting_holds: ok,
        }
    }

    pub fn report(&self) -> EquilibriumReport {
        EquilibriumReport {
            gamma: self.gamma,
            predicted_xi_star: self.predicted_xi_star,
            empirical_mean: self.empirical_mean,
            deviation: self.deviation,
            excursion_min: self.excursion_min,
            excursion_max: self.excursion_max,
            xi_0: self.xi_0,
        }
    }
}

/// Runs `seeds` LeadingOnes runs of `generations` populations each (the
/// initial one included, so the budget is `λ·generations`) and reports
/// every tracked `γ` per run. Seed `i` uses stream `(config.seed, i)`.
/// Rows are ordered by seed, then `γ` ascending.
pub fn run_equilibrium_experiment(
    config: &EaConfig,
    gammas: &[f64],
    generations: u64,
    seeds: u64,
    window_fraction: f64,
) -> Result<Vec<EquilibriumRow>> {
    if generations == 0 {
        return Err(Error::EmptyTrace);
    }
    if seeds == 0 {
        return Err(Error::config("seeds", "need at least one seed"));
    }
    if gammas.iter().any(|g| !(*g > 0.0 && *g < 1.0)) {
        return Err(Error::config("gammas", "every γ must lie in (0, 1)"));
    }
    let mut config = config.clone();
    config.budget_evaluations = (config.lambda as u64).saturating_mul(generations);
    let config = validate_config(config)?;
    let settings = RunSettings::new(gammas.to_vec(), 1);
    let per_seed: Vec<Result<Vec<EquilibriumRow>>> = (0..seeds)
        .into_par_iter()
        .map(|i| {
            let rec = run(&config, &Objective::LeadingOnes, &settings, &mut derive_stream(config.seed, i))?;
            let ok = rec.accounting_holds();
            rec.tracked_gammas
                .iter()
                .map(|&g| {
                    let r = equilibrium_report(&rec, g, window_fraction)?;
                    Ok(EquilibriumRow::new(i, &r, rec.generations, rec.evaluations, ok))
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Median of `empirical_mean` over the rows for `gamma` (mean of the two
/// middle values for an even count).
pub fn median_empirical(rows: &[EquilibriumRow], gamma: f64) -> Option<f64> {
    median(rows.iter().filter(|r| (r.gamma - gamma).abs() < 1e-12).map(|r| r.empirical_mean))
}

pub fn median_deviation(rows: &[EquilibriumRow], gamma: f64) -> Option<f64> {
    median(rows.iter().filter(|r| (r.gamma - gamma).abs() < 1e-12).map(|r| r.deviation))
}

fn median(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

pub fn write_equilibrium_csv(rows: &[EquilibriumRow], path: &Path) -> Result<()> {
    write_rows(rows, path)
}

pub fn write_equilibrium_csv_to<W: Write>(rows: &[EquilibriumRow], out: W) -> Result<()> {
    write_rows_to(rows, out)
}

pub fn read_equilibrium_csv<R: Read>(input: R) -> Result<Vec<EquilibriumRow>> {
    Ok(csv_reader(input).deserialize().collect::<std::result::Result<_, _>>()?)
}

// ------------------------------------------------------------- branching

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSpec {
    Explicit {
        rows: Vec<Vec<f64>>,
    },
    /// The prefix-sum mean matrix; `phi` defaults to the chosen admissible value.
    SelPres {
        n: usize,
        eta: f64,
        chi: f64,
        kappa: f64,
        #[serde(default)]
        phi: Option<f64>,
        #[serde(default)]
        log_base: LogBase,
    },
}

impl MatrixSpec {
    pub fn build(&self) -> Result<MeanMatrix> {
        match self {
            MatrixSpec::Explicit { rows } => MeanMatrix::explicit(rows.clone()),
            &MatrixSpec::SelPres { n, eta, chi, kappa, phi, log_base } => {
                let phi = match phi {
                    Some(p) => p,
                    None => choose_phi(eta, chi, kappa)?,
                };
                build_mean_matrix_with_base(n, eta, chi, kappa, phi, log_base)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum BranchingValidationSpec {
    SingleType {
        law: OffspringLaw,
        max_t: u64,
        ks: Vec<u64>,
        trials: u64,
        seed: u64,
    },
    MultiType {
        matrix: MatrixSpec,
        /// 1-based start types; all types when absent.
        #[serde(default)]
        start_types: Option<Vec<usize>>,
        max_t: u64,
        ks: Vec<u64>,
        trials: u64,
        seed: u64,
    },
}

impl BranchingValidationSpec {
    pub fn seed_mut(&mut self) -> &mut u64 {
        match self {
            BranchingValidationSpec::SingleType { seed, .. } => seed,
            BranchingValidationSpec::MultiType { seed, .. } => seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `P(Z_t >= k)` against `ρ^t/k`.
    SizeGeK,
    /// `P(X_t >= k)` against `ρ/(k(1−ρ))`.
    LineageGeK,
    /// `E[Z_t]` against its exact value `ρ^t`; violated beyond 3 SE either way.
    /// The SE comes from the exact variance of `Z_t`.
    MeanSize,
    /// `P(Σ_j Z_{t,j} >= k | Z_0 = e_h)` against the Perron tail bound.
    TotalGeK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub quantity: Quantity,
    pub start_type: usize,
    pub t: u64,
    pub k: Option<u64>,
    pub trials: u64,
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
    pub violated: bool,
}

impl ValidationRow {
    fn tail(quantity: Quantity, start_type: usize, t: u64, k: u64, trials: u64, hits: u64, bound: f64) -> Self {
        let p = hits as f64 / trials as f64;
        let se = frequency_std_error(p, trials);
        ValidationRow {
            quantity,
            start_type,
            t,
            k: Some(k),
            trials,
            empirical: p,
            std_error: se,
            bound,
            violated: p > bound + 3.0 * se,
        }
    }
}

/// Monte Carlo frequencies joined with their closed-form bounds. Rows are
/// ordered by start type, `t`, quantity, then `k`.
pub fn run_branching_validation(spec: &BranchingValidationSpec) -> Result<Vec<ValidationRow>> {
    match spec {
        BranchingValidationSpec::SingleType { law, max_t, ks, trials, seed } => {
            validate_tail_grid(*max_t, ks, *trials)?;
            let rho = law.mean();
            let tally = single_type_batch(law, *max_t, *trials, ks, *seed)?;
            let mut rows = Vec::new();
            for t in 1..=*max_t {
                let ti = t as usize;
                for (i, &k) in ks.iter().enumerate() {
                    let b = lemma2_bounds(rho, t, k)?;
                    rows.push(ValidationRow::tail(Quantity::SizeGeK, 1, t, k, *trials, tally.size_ge[ti][i], b.p_zt_ge_k));
                }
                if rho < 1.0 {
                    for (i, &k) in ks.iter().enumerate() {
                        let b = lemma2_bounds(rho, t, k)?.p_xt_ge_k.unwrap_or(1.0);
                        rows.push(ValidationRow::tail(Quantity::LineageGeK, 1, t, k, *trials, tally.lineage_ge[ti][i], b));
                    }
                }
                let mean = tally.mean_size(ti);
                // exact rather than sample SE: rare survivors make the latter 0
                let se = (law.size_variance(t) / *trials as f64).sqrt();
                let exact = rho.powi(t as i32);
                rows.push(ValidationRow {
                    quantity: Quantity::MeanSize,
                    start_type: 1,
                    t,
                    k: None,
                    trials: *trials,
                    empirical: mean,
                    std_error: se,
                    bound: exact,
                    violated: (mean - exact).abs() > 3.0 * se + 1e-12,
                });
            }
            Ok(rows)
        }
        BranchingValidationSpec::MultiType { matrix, start_types, max_t, ks, trials, seed } => {
            validate_tail_grid(*max_t, ks, *trials)?;
            let m = matrix.build()?;
            let p = perron(&m, DEFAULT_TOL, DEFAULT_MAX_ITERS)?;
            let starts = start_types.clone().unwrap_or_else(|| (1..=m.dim()).collect());
            if let Some(h) = starts.iter().find(|&&h| h < 1 || h > m.dim()) {
                return Err(Error::config("start_types", format!("type {h} outside 1..={}", m.dim())));
            }
            let mut rows = Vec::new();
            for &h in &starts {
                let batch_seed = derive_stream(*seed, stream_index(u32::MAX, h as u32)).next_u64();
                let tally = multi_type_batch(&m, h, *max_t, *trials, ks, batch_seed)?;
                for t in 1..=*max_t {
                    for (i, &k) in ks.iter().enumerate() {
                        let bound = tail_bound(&p, h, t as u32, k)?;
                        rows.push(ValidationRow::tail(
                            Quantity::TotalGeK,
                            h,
                            t,
                            k,
                            *trials,
                            tally.total_ge[t as usize][i],
                            bound,
                        ));
                    }
                }
            }
            Ok(rows)
        }
    }
}

fn validate_tail_grid(max_t: u64, ks: &[u64], trials: u64) -> Result<()> {
    if max_t < 1 || trials < 1 || ks.is_empty() || ks.contains(&0) {
        return Err(Error::config("max_t/ks/trials", "need max_t >= 1, trials >= 1 and non-empty ks >= 1"));
    }
    Ok(())
}

pub fn write_validation_csv(rows: &[ValidationRow], path: &Path) -> Result<()> {
    write_rows(rows, path)
}

pub fn write_validation_csv_to<W: Write>(rows: &[ValidationRow], out: W) -> Result<()> {
    write_rows_to(rows, out)
}

pub fn read_validation_csv<R: Read>(input: R) -> Result<Vec<ValidationRow>> {
    Ok(csv_reader(input).deserialize().collect::<std::result::Result<_, _>>()?)
}

// ------------------------------------------------------ subcommand specs

/// Input of the `run` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub config: EaConfig,
    pub objective: Objective,
    #[serde(default = "default_gammas")]
    pub tracked_gammas: Vec<f64>,
    /// Defaults to 1 for `n <= 500`, 10 otherwise.
    #[serde(default)]
    pub record_stride: Option<u64>,
}

fn default_gammas() -> Vec<f64> {
    vec![0.5]
}

impl RunSpec {
    pub fn settings(&self) -> RunSettings {
        let stride = self.record_stride.unwrap_or_else(|| RunSettings::default_stride(self.config.n));
        RunSettings::new(self.tracked_gammas.clone(), stride)
    }
}

fn default_window() -> f64 {
    1.0 / 3.0
}

/// Input of the `equilibrium` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumSpec {
    pub n: usize,
    pub lambda: usize,
    pub eta: f64,
    pub chi: f64,
    pub seed: u64,
    pub gammas: Vec<f64>,
    pub generations: u64,
    pub seeds: u64,
    #[serde(default = "default_window")]
    pub window_fraction: f64,
}

impl EquilibriumSpec {
    pub fn run(&self) -> Result<Vec<EquilibriumRow>> {
        let config = EaConfig {
            n: self.n,
            lambda: self.lambda,
            eta: self.eta,
            chi: self.chi,
            budget_evaluations: 0,
            seed: self.seed,
        };
        run_equilibrium_experiment(&config, &self.gammas, self.generations, self.seeds, self.window_fraction)
    }
}

/// Input of the `spectral` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSpec {
    pub n: usize,
    pub eta: f64,
    pub chi: f64,
    pub kappa: f64,
    #[serde(default)]
    pub phi: Option<f64>,
}
